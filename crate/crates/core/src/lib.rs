//! Spectral gradient step-size rules on strictly convex quadratics.
//!
//! The crate has five layers:
//!
//! * [`quadprob`] — quadratic test problems (spectral or dense SPD Hessians)
//!   and spectrum generators;
//! * [`steps`] — the step-size rules (SD, BB1, BB2, regularized BB, delayed
//!   spectral rules) and the regularization-parameter schedules;
//! * [`solver`] — the iteration driver with trace recording and recursive
//!   gradient propagation;
//! * [`analysis`] — head/tail gradient diagnostics (`r`, `xi`, `eta`, `h`,
//!   ...) with closed-form counterparts, oscillation and monotonicity
//!   reports;
//! * [`recurrence`] — characteristic polynomials of the delay rules, their
//!   roots, log-domain recurrence simulation and the 2-D closed form.
//!
//! Problems, policies and traces are immutable value types; every operation
//! is a pure function of its inputs, so runs and analyses can be executed
//! concurrently without coordination.

pub mod analysis;
pub mod error;
mod linalg;
pub mod quadprob;
pub mod recurrence;
pub mod solver;
pub mod steps;
pub mod trace_io;

pub use error::{Error, Result};
pub use quadprob::{build_problem, generate_spectrum, QuadraticProblem, SpectrumSpec};
pub use solver::{run, stop_check, AlphaInit, GradientMode, IterationTrace, RunConfig, RunStatus};
pub use steps::{StepPolicy, TauSchedule};
