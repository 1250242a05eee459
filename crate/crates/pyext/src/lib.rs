//! Python bindings: quadratic problems, step rules, the run driver with
//! trace diagnostics, and the difference-equation toolbox.
//!
//! Usage from Python:
//!
//!     import gradlab
//!     p = gradlab.QuadraticProblem.deasmundis(5, 3.0)
//!     t = gradlab.run(p, "bb1")
//!     print(t.status, t.iterations)

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use gradlab_core::analysis;
use gradlab_core::quadprob;
use gradlab_core::recurrence;
use gradlab_core::solver::{self, AlphaInit, GradientMode, RunConfig, RunStatus};
use gradlab_core::steps;
use gradlab_core::trace_io;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_tau(s: &str) -> PyResult<steps::TauSchedule> {
    if let Some(v) = s.strip_prefix("constant:") {
        let v: f64 = v.parse().map_err(err)?;
        return Ok(steps::TauSchedule::constant(v));
    }
    match s {
        "ratio_mu1" => Ok(steps::TauSchedule::ratio_mu1()),
        "ratio_alpha" => Ok(steps::TauSchedule::ratio_alpha_scaled()),
        other => Err(PyValueError::new_err(format!(
            "unknown tau schedule '{other}' (want constant:<v> | ratio_mu1 | ratio_alpha)"
        ))),
    }
}

/// A strictly convex quadratic `1/2 (x-x*)'A(x-x*)`.
#[pyclass(frozen)]
struct QuadraticProblem {
    inner: quadprob::QuadraticProblem,
}

#[pymethods]
impl QuadraticProblem {
    /// Spectral problem from eigenvalues (sorted descending on input) and
    /// the optimal point.
    #[staticmethod]
    fn from_spectrum(eigenvalues: Vec<f64>, x_star: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: quadprob::QuadraticProblem::from_spectrum(eigenvalues, x_star).map_err(err)? })
    }

    /// Dense SPD problem.
    #[staticmethod]
    fn dense(matrix: Vec<Vec<f64>>, x_star: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: quadprob::QuadraticProblem::from_dense(matrix, x_star).map_err(err)? })
    }

    /// Log-spaced spectrum with condition number `10^ncond`; `x*` defaults
    /// to all ones.
    #[staticmethod]
    #[pyo3(signature = (n, ncond, x_star=None))]
    fn deasmundis(n: usize, ncond: f64, x_star: Option<Vec<f64>>) -> PyResult<Self> {
        let eigs = quadprob::generate_spectrum(&quadprob::SpectrumSpec::DeAsmundis { n, ncond })
            .map_err(err)?;
        let x_star = x_star.unwrap_or_else(|| vec![1.0; eigs.len()]);
        Ok(Self { inner: quadprob::QuadraticProblem::from_spectrum(eigs, x_star).map_err(err)? })
    }

    /// Random log-uniform spectrum with pinned endpoints.
    #[staticmethod]
    #[pyo3(signature = (n, kappa, seed=0, x_star=None))]
    fn random(n: usize, kappa: f64, seed: u64, x_star: Option<Vec<f64>>) -> PyResult<Self> {
        let eigs = quadprob::generate_spectrum(&quadprob::SpectrumSpec::RandomLogUniform {
            n,
            kappa,
            seed,
        })
        .map_err(err)?;
        let x_star = x_star.unwrap_or_else(|| vec![1.0; eigs.len()]);
        Ok(Self { inner: quadprob::QuadraticProblem::from_spectrum(eigs, x_star).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: quadprob::QuadraticProblem::from_json_str(text).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eigenvalues(&self) -> Option<Vec<f64>> {
        self.inner.eigenvalues().map(|e| e.to_vec())
    }

    fn condition_number(&self) -> f64 {
        self.inner.condition_number()
    }

    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.gradient(&x).map_err(err)
    }

    fn objective(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.objective(&x).map_err(err)
    }

    /// `A^m v`; real `m >= 0` on spectral problems, integer on dense.
    fn matvec_power(&self, v: Vec<f64>, m: f64) -> PyResult<Vec<f64>> {
        self.inner.matvec_power(&v, m).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json_string().map_err(err)
    }

    fn digest(&self) -> String {
        self.inner.digest()
    }

    fn __repr__(&self) -> String {
        format!(
            "QuadraticProblem(n={}, kappa={:.6e})",
            self.inner.dim(),
            self.inner.condition_number()
        )
    }
}

/// Result of one run: per-iterate scalars plus the diagnostic columns
/// (`None` entries where a quantity is undefined).
#[pyclass(frozen)]
struct Trace {
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    final_grad_norm: f64,
    #[pyo3(get)]
    grad_norms: Vec<f64>,
    #[pyo3(get)]
    alphas: Vec<f64>,
    #[pyo3(get)]
    taus: Vec<Option<f64>>,
    #[pyo3(get)]
    r: Vec<Option<f64>>,
    #[pyo3(get)]
    xi: Vec<Option<f64>>,
    #[pyo3(get)]
    eta: Vec<Option<f64>>,
    #[pyo3(get)]
    eta_bar: Vec<Option<f64>>,
    #[pyo3(get)]
    h: Vec<Option<f64>>,
    csv: String,
}

#[pymethods]
impl Trace {
    /// The trace in the `k,f,grad_norm,alpha,tau,r,xi,eta,eta_bar,h` CSV
    /// schema.
    fn to_csv(&self) -> String {
        self.csv.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trace(status={}, iterations={}, final_grad_norm={:e})",
            self.status, self.iterations, self.final_grad_norm
        )
    }
}

/// Drive a method on a problem.
///
/// Args:
///     problem: the quadratic to minimize
///     method: "sd" | "bb1" | "bb2" | "rbb" | "rbb_like" | "delayed"
///     tau: regularization schedule, "constant:<v>" | "ratio_mu1" | "ratio_alpha"
///     m: matrix power for rbb_like, delay/power: the delayed rule's j and rho
///     x0: start point (default all zeros)
///     rel_tol: relative gradient-norm stop (default 1e-20)
///     gradient_mode: "fromx" (conventional) | "recursive" (high precision)
#[pyfunction]
#[pyo3(signature = (problem, method, tau=None, m=None, delay=None, power=None, x0=None,
                    rel_tol=1e-20, max_iters=100_000, gradient_mode="fromx", fixed_alpha_init=None))]
#[allow(clippy::too_many_arguments)]
fn run(
    problem: &QuadraticProblem,
    method: &str,
    tau: Option<&str>,
    m: Option<u32>,
    delay: Option<usize>,
    power: Option<f64>,
    x0: Option<Vec<f64>>,
    rel_tol: f64,
    max_iters: usize,
    gradient_mode: &str,
    fixed_alpha_init: Option<f64>,
) -> PyResult<Trace> {
    let schedule = tau.map(parse_tau).transpose()?;
    let policy = steps::StepPolicy::from_parts(method, schedule, m, delay, power).map_err(err)?;
    let mode = match gradient_mode {
        "fromx" => GradientMode::FromX,
        "recursive" => GradientMode::Recursive,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown gradient mode '{other}' (want fromx | recursive)"
            )))
        }
    };
    let mut cfg = RunConfig::new(x0.unwrap_or_else(|| vec![0.0; problem.inner.dim()]))
        .with_rel_tol(rel_tol)
        .with_max_iters(max_iters)
        .with_gradient_mode(mode);
    if let Some(v) = fixed_alpha_init {
        cfg = cfg.with_alpha_init(AlphaInit::Fixed(v));
    }
    let mut trace = solver::run(&problem.inner, &policy, &cfg).map_err(err)?;
    if analysis::attach_diagnostics(&problem.inner, &mut trace).is_err() {
        trace.diagnostics = None;
    }

    let status = match trace.status {
        RunStatus::Converged => "converged",
        RunStatus::MaxIters => "max_iters",
        RunStatus::Degenerate => "degenerate",
    };
    let pull = |f: fn(&analysis::DiagnosticRow) -> Option<f64>| -> Vec<Option<f64>> {
        match &trace.diagnostics {
            Some(d) => d.iter().map(f).collect(),
            None => vec![None; trace.rows.len()],
        }
    };
    Ok(Trace {
        status: status.to_string(),
        iterations: trace.iterations,
        final_grad_norm: trace.final_grad_norm(),
        grad_norms: trace.grad_norms(),
        alphas: trace.alphas(),
        taus: trace.rows.iter().map(|r| r.tau).collect(),
        r: pull(|d| d.r),
        xi: pull(|d| d.xi),
        eta: pull(|d| d.eta),
        eta_bar: pull(|d| d.eta_bar),
        h: pull(|d| d.h),
        csv: trace_io::trace_to_csv_string(&trace),
    })
}

#[pyfunction]
fn sd_alpha(problem: &QuadraticProblem, g: Vec<f64>) -> PyResult<f64> {
    steps::sd_alpha(&g, &problem.inner).map_err(err)
}

#[pyfunction]
fn bb1_alpha(s: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    steps::bb1_alpha(&s, &y).map_err(err)
}

#[pyfunction]
fn bb2_alpha(s: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    steps::bb2_alpha(&s, &y).map_err(err)
}

#[pyfunction]
fn rbb_alpha(s: Vec<f64>, y: Vec<f64>, tau: f64) -> PyResult<f64> {
    steps::rbb_alpha(&s, &y, tau).map_err(err)
}

#[pyfunction]
fn rbb_like_alpha(
    s: Vec<f64>,
    y: Vec<f64>,
    tau: f64,
    m: u32,
    problem: &QuadraticProblem,
) -> PyResult<f64> {
    steps::rbb_like_alpha(&s, &y, tau, m, &problem.inner).map_err(err)
}

/// Tail contraction predicted from `(r, eta, eta_bar)` one step back; all
/// quantities in the unit-smallest-eigenvalue normalization.
#[pyfunction]
fn xi_formula(r: f64, eta: f64, eta_bar: f64, lam: f64, tau: f64) -> PyResult<f64> {
    analysis::xi_formula(r, eta, eta_bar, lam, tau).map_err(err)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn h_formula(
    r_prev: f64,
    eta_prev: f64,
    eta_bar_prev: f64,
    eta: f64,
    eta_bar: f64,
    lam: f64,
    tau: f64,
) -> PyResult<f64> {
    analysis::h_formula(r_prev, eta_prev, eta_bar_prev, eta, eta_bar, lam, tau).map_err(err)
}

#[pyfunction]
fn delta_formula(r_prev: f64, eta_prev: f64, eta_bar_prev: f64, lam: f64, tau: f64) -> PyResult<f64> {
    analysis::delta_formula(r_prev, eta_prev, eta_bar_prev, lam, tau).map_err(err)
}

/// Roots of `q^d - q^{d-1} + 2` as `(re, im, modulus, residual)` tuples.
#[pyfunction]
fn char_roots(d: usize) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let set = recurrence::char_roots(d).map_err(err)?;
    Ok(set
        .roots
        .iter()
        .zip(&set.moduli)
        .zip(&set.residuals)
        .map(|((q, m), res)| (q.re, q.im, *m, *res))
        .collect())
}

/// Roots of `q^2 - q/sqrt(2) + 1` plus the rotation angle theta.
#[pyfunction]
fn rbb_char_roots() -> (Vec<(f64, f64, f64, f64)>, f64) {
    let set = recurrence::rbb_char_roots();
    let roots = set
        .roots
        .iter()
        .zip(&set.moduli)
        .zip(&set.residuals)
        .map(|((q, m), res)| (q.re, q.im, *m, *res))
        .collect();
    (roots, set.principal_argument().unwrap_or(f64::NAN))
}

#[pyfunction]
fn theta() -> f64 {
    recurrence::theta()
}

/// Forward simulation of `y_{k+2} = y_{k+1} - 2 y_k` (log-domain two-point
/// recurrence), returning `steps` values starting with `y0, y1`.
#[pyfunction]
fn simulate_bb1_log(y0: f64, y1: f64, steps: usize) -> PyResult<Vec<f64>> {
    let series = recurrence::simulate_recurrence(&recurrence::RecurrenceModel::Bb1Log { y0, y1 }, steps)
        .map_err(err)?;
    Ok(series.y)
}

#[pyfunction]
fn bb1_closed_form(y0: f64, y1: f64, k: usize) -> f64 {
    recurrence::bb1_closed_form(y0, y1, k)
}

#[pymodule]
fn gradlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<QuadraticProblem>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(sd_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(bb1_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(bb2_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(rbb_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(rbb_like_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(xi_formula, m)?)?;
    m.add_function(wrap_pyfunction!(h_formula, m)?)?;
    m.add_function(wrap_pyfunction!(delta_formula, m)?)?;
    m.add_function(wrap_pyfunction!(char_roots, m)?)?;
    m.add_function(wrap_pyfunction!(rbb_char_roots, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_bb1_log, m)?)?;
    m.add_function(wrap_pyfunction!(bb1_closed_form, m)?)?;
    Ok(())
}
