//! Command-line harness: problem generation, single runs, method sweeps,
//! characteristic-root analysis and trace diagnostics.
//!
//! Exit codes for `run`: 0 converged, 2 max-iterations, 3 degenerate step;
//! unreadable or unparsable input files exit 1. The `GRADLAB_OUT`
//! environment variable overrides `--out` everywhere.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use gradlab_core::analysis::{
    attach_diagnostics, find_descent_n, oscillation_report, verify_recursion_series,
    OscillationReport, VerifyRecursionReport,
};
use gradlab_core::quadprob::{generate_spectrum, QuadraticProblem, SpectrumSpec};
use gradlab_core::recurrence::{char_roots, rbb_char_roots};
use gradlab_core::solver::{run, AlphaInit, GradientMode, IterationTrace, RunConfig, RunStatus};
use gradlab_core::steps::{StepPolicy, TauSchedule};
use gradlab_core::trace_io::{parse_trace_csv, run_summary, trace_to_csv_string, CsvTraceRow};

#[derive(Parser)]
#[command(name = "gradlab", about = "Spectral gradient methods on convex quadratics", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a quadratic problem description (JSON)
    Gen(GenArgs),
    /// Run one method on a problem file; writes trace.csv and summary.json
    Run(RunArgs),
    /// Run a grid of problems x policies from a sweep config file
    Sweep(SweepArgs),
    /// Roots of a delay-d characteristic polynomial (or the two-point pair)
    Roots(RootsArgs),
    /// Oscillation/recursion/descent reports from a trace CSV
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Spectrum family: deasmundis | explicit | random
    #[arg(long)]
    family: String,
    /// Dimension (deasmundis, random)
    #[arg(long)]
    n: Option<usize>,
    /// Decimal log of the condition number (deasmundis)
    #[arg(long)]
    ncond: Option<f64>,
    /// Condition number (random)
    #[arg(long)]
    kappa: Option<f64>,
    /// Comma-separated eigenvalues (explicit)
    #[arg(long)]
    eigs: Option<String>,
    /// RNG seed (random)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optimal point, comma separated (default: all ones)
    #[arg(long)]
    x_star: Option<String>,
    /// Output file (default: problem.json)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Problem JSON file
    #[arg(long)]
    problem: PathBuf,
    /// Step rule: sd | bb1 | bb2 | rbb | rbb_like | delayed
    #[arg(long)]
    method: String,
    /// Regularization schedule: constant:<v> | ratio_mu1 | ratio_alpha
    #[arg(long)]
    tau: Option<String>,
    /// Matrix power for rbb_like
    #[arg(long)]
    m: Option<u32>,
    /// Delay steps for the delayed rule
    #[arg(long)]
    delay: Option<usize>,
    /// Matrix power for the delayed rule
    #[arg(long)]
    power: Option<f64>,
    /// Relative gradient-norm tolerance
    #[arg(long, default_value_t = 1e-20)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    /// Start point, comma separated (default: all zeros)
    #[arg(long)]
    x0: Option<String>,
    /// Gradient propagation: fromx | recursive
    #[arg(long, default_value = "fromx")]
    gradient_mode: String,
    /// First inverse step: sd (exact line search at x0) | fixed:<v>
    #[arg(long, default_value = "sd")]
    alpha_init: String,
    /// Output directory (default: current directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config JSON file
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: current directory)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RootsArgs {
    /// Delay order of q^d - q^{d-1} + 2
    #[arg(long)]
    d: Option<usize>,
    /// Roots of the two-point characteristic pair q^2 - q/sqrt(2) + 1
    #[arg(long, default_value_t = false)]
    rbb: bool,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Trace CSV produced by `run`
    #[arg(long)]
    trace: PathBuf,
    /// Problem JSON; enables the recursion-verification report
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn effective_out(cli_out: Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os("GRADLAB_OUT")
        .map(PathBuf::from)
        .or(cli_out)
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}")))
        .collect()
}

fn parse_tau(s: &str) -> Result<TauSchedule, String> {
    if let Some(v) = s.strip_prefix("constant:") {
        let v: f64 = v.parse().map_err(|e| format!("bad tau value '{v}': {e}"))?;
        if !(v >= 0.0) {
            return Err(format!("tau must be >= 0, got {v}"));
        }
        return Ok(TauSchedule::constant(v));
    }
    match s {
        "ratio_mu1" => Ok(TauSchedule::ratio_mu1()),
        "ratio_alpha" => Ok(TauSchedule::ratio_alpha_scaled()),
        other => Err(format!(
            "unknown tau schedule '{other}' (want constant:<v> | ratio_mu1 | ratio_alpha)"
        )),
    }
}

fn parse_alpha_init(s: &str) -> Result<AlphaInit, String> {
    if s == "sd" {
        return Ok(AlphaInit::SdAtX0);
    }
    if let Some(v) = s.strip_prefix("fixed:") {
        let v: f64 = v.parse().map_err(|e| format!("bad alpha value '{v}': {e}"))?;
        return Ok(AlphaInit::Fixed(v));
    }
    Err(format!("unknown alpha init '{s}' (want sd | fixed:<v>)"))
}

fn parse_gradient_mode(s: &str) -> Result<GradientMode, String> {
    match s {
        "fromx" => Ok(GradientMode::FromX),
        "recursive" => Ok(GradientMode::Recursive),
        other => Err(format!("unknown gradient mode '{other}' (want fromx | recursive)")),
    }
}

fn read_problem(path: &Path) -> Result<QuadraticProblem, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    QuadraticProblem::from_json_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Roots(args) => cmd_roots(args),
        Command::Analyze(args) => cmd_analyze(args),
    };
    match code {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let spec = match args.family.as_str() {
        "deasmundis" => SpectrumSpec::DeAsmundis {
            n: args.n.ok_or("--n is required for deasmundis")?,
            ncond: args.ncond.ok_or("--ncond is required for deasmundis")?,
        },
        "explicit" => SpectrumSpec::Explicit {
            eigenvalues: parse_f64_list(&args.eigs.ok_or("--eigs is required for explicit")?)?,
        },
        "random" => SpectrumSpec::RandomLogUniform {
            n: args.n.ok_or("--n is required for random")?,
            kappa: args.kappa.ok_or("--kappa is required for random")?,
            seed: args.seed,
        },
        other => return Err(format!("unknown family '{other}'")),
    };
    let eigs = generate_spectrum(&spec).map_err(|e| e.to_string())?;
    let x_star = match args.x_star {
        Some(s) => parse_f64_list(&s)?,
        None => vec![1.0; eigs.len()],
    };
    let problem =
        QuadraticProblem::from_spectrum(eigs, x_star).map_err(|e| e.to_string())?;
    let json = problem.to_json_pretty().map_err(|e| e.to_string())?;
    let out = effective_out(args.out).unwrap_or_else(|| PathBuf::from("problem.json"));
    fs::write(&out, json + "\n").map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn build_policy(
    method: &str,
    tau: Option<&str>,
    m: Option<u32>,
    delay: Option<usize>,
    power: Option<f64>,
) -> Result<StepPolicy, String> {
    let schedule = tau.map(parse_tau).transpose()?;
    StepPolicy::from_parts(method, schedule, m, delay, power).map_err(|e| e.to_string())
}

fn execute(
    problem: &QuadraticProblem,
    policy: &StepPolicy,
    x0: Vec<f64>,
    tol: f64,
    max_iters: usize,
    mode: GradientMode,
    alpha_init: AlphaInit,
) -> Result<IterationTrace, String> {
    let cfg = RunConfig::new(x0)
        .with_rel_tol(tol)
        .with_max_iters(max_iters)
        .with_gradient_mode(mode)
        .with_alpha_init(alpha_init);
    let mut trace = run(problem, policy, &cfg).map_err(|e| e.to_string())?;
    // diagnostic columns are best-effort: traces of problems whose smallest
    // eigenvalue is not simple stay without them
    if attach_diagnostics(problem, &mut trace).is_err() {
        trace.diagnostics = None;
    }
    Ok(trace)
}

fn status_code(status: RunStatus) -> u8 {
    match status {
        RunStatus::Converged => 0,
        RunStatus::MaxIters => 2,
        RunStatus::Degenerate => 3,
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, String> {
    let problem = read_problem(&args.problem)?;
    let policy = build_policy(
        &args.method,
        args.tau.as_deref(),
        args.m,
        args.delay,
        args.power,
    )?;
    let x0 = match args.x0 {
        Some(s) => parse_f64_list(&s)?,
        None => vec![0.0; problem.dim()],
    };
    let mode = parse_gradient_mode(&args.gradient_mode)?;
    let alpha_init = parse_alpha_init(&args.alpha_init)?;
    let trace = execute(&problem, &policy, x0, args.tol, args.max_iters, mode, alpha_init)?;

    let out_dir = effective_out(args.out).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    let trace_path = out_dir.join("trace.csv");
    fs::write(&trace_path, trace_to_csv_string(&trace))
        .map_err(|e| format!("cannot write {}: {e}", trace_path.display()))?;
    let summary = run_summary(&trace, &problem, &policy).map_err(|e| e.to_string())?;
    let summary_path = out_dir.join("summary.json");
    fs::write(
        &summary_path,
        serde_json::to_string_pretty(&summary).map_err(|e| e.to_string())? + "\n",
    )
    .map_err(|e| format!("cannot write {}: {e}", summary_path.display()))?;

    println!(
        "{}: {:?} after {} iterations, final |g| = {:e}",
        policy.label(),
        trace.status,
        trace.iterations,
        trace.final_grad_norm()
    );
    println!("wrote {} and {}", trace_path.display(), summary_path.display());
    Ok(ExitCode::from(status_code(trace.status)))
}

/// One problem of a sweep: a spectrum recipe plus optional start/optimum
/// (defaults: x* = 1, x0 = 0).
#[derive(Serialize, Deserialize)]
struct SweepProblem {
    spectrum: SpectrumSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_star: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x0: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct SweepConfig {
    problems: Vec<SweepProblem>,
    policies: Vec<serde_json::Value>,
    #[serde(default = "default_rel_tol")]
    rel_tol: f64,
    #[serde(default = "default_max_iters")]
    max_iters: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_mode")]
    gradient_mode: String,
}

fn default_rel_tol() -> f64 {
    1e-20
}
fn default_max_iters() -> usize {
    100_000
}
fn default_mode() -> String {
    "fromx".into()
}

struct SweepRow {
    problem_idx: usize,
    policy_idx: usize,
    digest: String,
    policy: String,
    outcome: Result<(RunStatus, usize, f64, String), String>,
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, String> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let config: SweepConfig =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse sweep config: {e}"))?;
    if config.problems.is_empty() || config.policies.is_empty() {
        return Err("sweep config needs at least one problem and one policy".into());
    }
    let mode = parse_gradient_mode(&config.gradient_mode)?;

    let mut problems = Vec::new();
    for (i, sp) in config.problems.iter().enumerate() {
        // give seedless random spectra distinct deterministic seeds
        let spectrum = match &sp.spectrum {
            SpectrumSpec::RandomLogUniform { n, kappa, seed } if *seed == 0 => {
                SpectrumSpec::RandomLogUniform {
                    n: *n,
                    kappa: *kappa,
                    seed: config.seed.wrapping_add(i as u64),
                }
            }
            other => other.clone(),
        };
        let eigs = generate_spectrum(&spectrum)
            .map_err(|e| format!("problem {i}: {e}"))?;
        let x_star = sp.x_star.clone().unwrap_or_else(|| vec![1.0; eigs.len()]);
        let x0 = sp.x0.clone().unwrap_or_else(|| vec![0.0; eigs.len()]);
        let problem = QuadraticProblem::from_spectrum(eigs, x_star)
            .map_err(|e| format!("problem {i}: {e}"))?;
        problems.push((problem, x0));
    }
    let mut policies = Vec::new();
    for (j, value) in config.policies.iter().enumerate() {
        policies.push(
            StepPolicy::from_json_str(&value.to_string())
                .map_err(|e| format!("policy {j}: {e}"))?,
        );
    }

    let out_dir = effective_out(args.out).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;

    let jobs: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|i| (0..policies.len()).map(move |j| (i, j)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (problem, x0) = &problems[i];
            let policy = &policies[j];
            let outcome = execute(
                problem,
                policy,
                x0.clone(),
                config.rel_tol,
                config.max_iters,
                mode,
                AlphaInit::SdAtX0,
            )
            .map(|trace| {
                (
                    trace.status,
                    trace.iterations,
                    trace.final_grad_norm(),
                    trace_to_csv_string(&trace),
                )
            });
            SweepRow {
                problem_idx: i,
                policy_idx: j,
                digest: problem.digest(),
                policy: policy.label(),
                outcome,
            }
        })
        .collect();

    let mut csv = String::from("problem,policy,iterations,final_grad_norm,status\n");
    for row in &rows {
        match &row.outcome {
            Ok((status, iterations, final_norm, trace_csv)) => {
                let status_str = match status {
                    RunStatus::Converged => "converged",
                    RunStatus::MaxIters => "max_iters",
                    RunStatus::Degenerate => "degenerate",
                };
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.digest, row.policy, iterations, final_norm, status_str
                ));
                let trace_path =
                    out_dir.join(format!("trace_{}_{}.csv", row.problem_idx, row.policy_idx));
                fs::write(&trace_path, trace_csv)
                    .map_err(|e| format!("cannot write {}: {e}", trace_path.display()))?;
            }
            Err(msg) => {
                csv.push_str(&format!(
                    "{},{},,,error: {}\n",
                    row.digest,
                    row.policy,
                    msg.replace(',', ";")
                ));
            }
        }
    }
    let results_path = out_dir.join("results.csv");
    fs::write(&results_path, csv)
        .map_err(|e| format!("cannot write {}: {e}", results_path.display()))?;
    println!("wrote {} ({} rows)", results_path.display(), rows.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_roots(args: RootsArgs) -> Result<ExitCode, String> {
    let json = if args.rbb {
        let set = rbb_char_roots();
        let mut value = set.to_json_value();
        value["theta"] = serde_json::json!(set.principal_argument());
        value
    } else {
        let d = args.d.ok_or("either --d or --rbb is required")?;
        char_roots(d).map_err(|e| e.to_string())?.to_json_value()
    };
    let text = serde_json::to_string_pretty(&json).map_err(|e| e.to_string())? + "\n";
    match effective_out(args.out) {
        Some(path) => {
            fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_contract() {
        assert_eq!(status_code(RunStatus::Converged), 0);
        assert_eq!(status_code(RunStatus::MaxIters), 2);
        assert_eq!(status_code(RunStatus::Degenerate), 3);
    }

    #[test]
    fn tau_and_alpha_init_parsers() {
        assert_eq!(parse_tau("constant:0.5").unwrap(), TauSchedule::constant(0.5));
        assert_eq!(parse_tau("ratio_mu1").unwrap(), TauSchedule::ratio_mu1());
        assert!(parse_tau("constant:-1").is_err());
        assert!(parse_tau("bogus").is_err());
        assert_eq!(parse_alpha_init("fixed:2.5").unwrap(), AlphaInit::Fixed(2.5));
        assert!(parse_alpha_init("bogus").is_err());
    }
}

#[derive(Serialize)]
struct DescentEntry {
    k: usize,
    n: Option<usize>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    oscillation: Option<OscillationReport>,
    recursion: Option<VerifyRecursionReport>,
    descent: Vec<DescentEntry>,
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, String> {
    let text = fs::read_to_string(&args.trace)
        .map_err(|e| format!("cannot read {}: {e}", args.trace.display()))?;
    let rows: Vec<CsvTraceRow> = parse_trace_csv(&text).map_err(|e| e.to_string())?;
    let r: Vec<Option<f64>> = rows.iter().map(|row| row.r).collect();

    let oscillation = oscillation_report(&r).ok();

    let recursion = match &args.problem {
        Some(path) => {
            let problem = read_problem(path)?;
            let eta: Vec<Option<f64>> = rows.iter().map(|row| row.eta).collect();
            let eta_bar: Vec<Option<f64>> = rows.iter().map(|row| row.eta_bar).collect();
            let tau: Vec<Option<f64>> = rows
                .iter()
                .map(|row| row.tau.map(|t| t * problem.eig_min()))
                .collect();
            Some(verify_recursion_series(
                problem.condition_number(),
                &r,
                &eta,
                &eta_bar,
                &tau,
            ))
        }
        None => None,
    };

    let descent = rows
        .iter()
        .enumerate()
        .filter(|(_, row)| row.r.is_some())
        .map(|(i, row)| DescentEntry { k: row.k, n: find_descent_n(&r, i) })
        .collect();

    let report = AnalyzeReport { oscillation, recursion, descent };
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n";
    match effective_out(args.out) {
        Some(path) => {
            fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}
