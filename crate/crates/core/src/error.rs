//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Problem or spectrum description violates a precondition.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Operation not available for this Hessian representation.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A step-size denominator collapsed below the underflow floor, or the
    /// defining gradient vanished. The driver treats this as a terminal
    /// signal, not a bug.
    #[error("degenerate step: {0}")]
    DegenerateStep(String),

    /// Diagnostic formula evaluated outside the regime it is defined in
    /// (e.g. eta * lambda <= 1).
    #[error("out of regime: {0}")]
    OutOfRegime(String),

    /// A quantity is mathematically undefined for the given input
    /// (zero head gradient, undefined r window, ...).
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("missing column: {0}")]
    MissingColumn(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
