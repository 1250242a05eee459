//! Trace CSV and run-summary JSON.
//!
//! The CSV schema is fixed: `k,f,grad_norm,alpha,tau,r,xi,eta,eta_bar,h`,
//! with diagnostic columns left empty when not computed. Floats are written
//! with the shortest round-trip representation, so parsing a written trace
//! and re-serializing it reproduces the bytes exactly.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadprob::QuadraticProblem;
use crate::solver::{IterationTrace, RunStatus};
use crate::steps::StepPolicy;

pub const TRACE_CSV_HEADER: &str = "k,f,grad_norm,alpha,tau,r,xi,eta,eta_bar,h";

fn push_opt(out: &mut String, v: Option<f64>) {
    if let Some(x) = v {
        write!(out, "{x}").unwrap();
    }
}

/// Render a trace (with whatever diagnostics are attached) to CSV.
pub fn trace_to_csv_string(trace: &IterationTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.rows.len() + 1));
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for (i, row) in trace.rows.iter().enumerate() {
        let diag = trace.diagnostics.as_ref().map(|d| &d[i]);
        write!(out, "{},{},{},", row.k, row.f, row.grad_norm).unwrap();
        push_opt(&mut out, row.alpha);
        out.push(',');
        push_opt(&mut out, row.tau);
        out.push(',');
        push_opt(&mut out, diag.and_then(|d| d.r));
        out.push(',');
        push_opt(&mut out, diag.and_then(|d| d.xi));
        out.push(',');
        push_opt(&mut out, diag.and_then(|d| d.eta));
        out.push(',');
        push_opt(&mut out, diag.and_then(|d| d.eta_bar));
        out.push(',');
        push_opt(&mut out, diag.and_then(|d| d.h));
        out.push('\n');
    }
    out
}

/// One parsed CSV row; the diagnostic fields mirror the written columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTraceRow {
    pub k: usize,
    pub f: f64,
    pub grad_norm: f64,
    pub alpha: Option<f64>,
    pub tau: Option<f64>,
    pub r: Option<f64>,
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub eta_bar: Option<f64>,
    pub h: Option<f64>,
}

fn parse_opt(field: &str, name: &str, line: usize) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|e| Error::Parse(format!("line {line}, column {name}: {e}")))
}

/// Parse a trace CSV, validating the exact header. A missing column is
/// reported by name.
pub fn parse_trace_csv(s: &str) -> Result<Vec<CsvTraceRow>> {
    let mut lines = s.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty trace file".into()))?;
    if header != TRACE_CSV_HEADER {
        let found: Vec<&str> = header.split(',').collect();
        for expected in TRACE_CSV_HEADER.split(',') {
            if !found.contains(&expected) {
                return Err(Error::MissingColumn(expected.to_string()));
            }
        }
        return Err(Error::Parse(format!(
            "unexpected trace header '{header}' (want '{TRACE_CSV_HEADER}')"
        )));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::Parse(format!(
                "line {}: expected 10 fields, got {}",
                idx + 2,
                fields.len()
            )));
        }
        let lineno = idx + 2;
        rows.push(CsvTraceRow {
            k: fields[0]
                .parse()
                .map_err(|e| Error::Parse(format!("line {lineno}, column k: {e}")))?,
            f: fields[1]
                .parse()
                .map_err(|e| Error::Parse(format!("line {lineno}, column f: {e}")))?,
            grad_norm: fields[2]
                .parse()
                .map_err(|e| Error::Parse(format!("line {lineno}, column grad_norm: {e}")))?,
            alpha: parse_opt(fields[3], "alpha", lineno)?,
            tau: parse_opt(fields[4], "tau", lineno)?,
            r: parse_opt(fields[5], "r", lineno)?,
            xi: parse_opt(fields[6], "xi", lineno)?,
            eta: parse_opt(fields[7], "eta", lineno)?,
            eta_bar: parse_opt(fields[8], "eta_bar", lineno)?,
            h: parse_opt(fields[9], "h", lineno)?,
        });
    }
    Ok(rows)
}

/// Re-serialize parsed rows; inverse of [`parse_trace_csv`].
pub fn csv_rows_to_string(rows: &[CsvTraceRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        write!(out, "{},{},{},", row.k, row.f, row.grad_norm).unwrap();
        push_opt(&mut out, row.alpha);
        out.push(',');
        push_opt(&mut out, row.tau);
        out.push(',');
        push_opt(&mut out, row.r);
        out.push(',');
        push_opt(&mut out, row.xi);
        out.push(',');
        push_opt(&mut out, row.eta);
        out.push(',');
        push_opt(&mut out, row.eta_bar);
        out.push(',');
        push_opt(&mut out, row.h);
        out.push('\n');
    }
    out
}

/// `{status, iterations, final_grad_norm, problem_digest, policy}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub status: RunStatus,
    pub iterations: usize,
    pub final_grad_norm: f64,
    pub problem_digest: String,
    pub policy: serde_json::Value,
}

pub fn run_summary(
    trace: &IterationTrace,
    problem: &QuadraticProblem,
    policy: &StepPolicy,
) -> Result<RunSummary> {
    Ok(RunSummary {
        status: trace.status,
        iterations: trace.iterations,
        final_grad_norm: trace.final_grad_norm(),
        problem_digest: problem.digest(),
        policy: serde_json::from_str(&policy.to_json_string()?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::attach_diagnostics;
    use crate::quadprob::build_problem;
    use crate::solver::{run, RunConfig};

    #[test]
    fn csv_round_trips_byte_identically() {
        let p = build_problem(&[25.0, 4.0, 1.0], &[1.0, 1.0, 1.0]).unwrap();
        let cfg = RunConfig::new(vec![0.0; 3]).with_rel_tol(1e-10);
        let mut trace = run(&p, &crate::steps::StepPolicy::Bb1, &cfg).unwrap();
        attach_diagnostics(&p, &mut trace).unwrap();
        let s = trace_to_csv_string(&trace);
        let rows = parse_trace_csv(&s).unwrap();
        assert_eq!(csv_rows_to_string(&rows), s);
    }

    #[test]
    fn parse_reports_missing_column() {
        let bad = "k,f,grad_norm,alpha,tau,r,xi,eta,h\n1,0.5,1.0,,,,,,\n";
        match parse_trace_csv(bad) {
            Err(Error::MissingColumn(name)) => assert_eq!(name, "eta_bar"),
            other => panic!("expected MissingColumn, got {other:?}"),
        }
    }

    #[test]
    fn summary_serializes_policy_json() {
        let p = build_problem(&[4.0, 1.0], &[1.0, 1.0]).unwrap();
        let cfg = RunConfig::new(vec![0.0, 0.0]).with_rel_tol(1e-8);
        let trace = run(&p, &crate::steps::StepPolicy::Bb1, &cfg).unwrap();
        let summary = run_summary(&trace, &p, &crate::steps::StepPolicy::Bb1).unwrap();
        let json = serde_json::to_string(&summary).unwrap();
        assert!(json.contains("\"status\":\"converged\""));
        assert!(json.contains("\"rule\":\"bb1\""));
    }
}
