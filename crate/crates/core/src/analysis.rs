//! Spectral diagnostics for iteration traces.
//!
//! Everything here works in the Hessian eigenbasis. The gradient splits into
//! a head (components on all eigenvalues but the smallest) and a tail (the
//! component on the smallest), and the run is summarized by
//!
//! * `r_k   = ||head_k||^2 / tail_k^2`, the oscillating ratio,
//! * `xi_k  = |tail_{k+1} / tail_k|`, the tail contraction per step,
//! * `eta_k, eta_bar_k`, normalized Rayleigh quotients of the head against
//!   `A_1` and `A_1^2`,
//! * `h_k   = r_{k-1}^2 r_{k+1} / r_k`, the forcing term of the second-order
//!   difference equation that `r` satisfies,
//! * `beta_k = ||head_{k+1}||^2 / ||head_k||^2` and the scaling factor
//!   `delta_k`.
//!
//! Closed-form counterparts of `xi`, `h`, `beta`, `delta` are provided so
//! traces can be checked against the theory. All formulas are written for a
//! smallest eigenvalue normalized to 1; the trace entry points normalize by
//! passing `lambda = eig_max / eig_min`, scale-invariant `eta`s, and the
//! regularization parameter rescaled to `tau * eig_min` (rescaling `A` by
//! `c` turns `RBB(tau)` into `RBB(tau * c)` of the normalized system), so
//! problems with an arbitrary smallest eigenvalue are handled transparently.
//!
//! Dense problems are diagonalized once (symmetric eigendecomposition,
//! eigenvalues sorted descending) and their gradients rotated into the
//! eigenbasis before any of this runs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadprob::{Hessian, QuadraticProblem};
use crate::solver::IterationTrace;

/// Below this magnitude the tail component is treated as underflowed and
/// `r` is reported undefined rather than infinite.
pub const TAIL_FLOOR: f64 = 1e-290;

/// Head/tail decomposition of one gradient.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    /// Components on the eigenvalues `a_1 ..= a_{n-1}` (eigenbasis order).
    pub head: Vec<f64>,
    /// Component on the smallest eigenvalue.
    pub tail: f64,
    /// `||head||^2 / tail^2`; `None` when the tail has underflowed.
    pub r: Option<f64>,
}

/// Normalized Rayleigh quotients of a head gradient, both in
/// `[gamma/lambda, 1]` with `eta_bar >= eta`.
#[derive(Debug, Clone, Copy)]
pub struct EtaPair {
    pub eta: f64,
    pub eta_bar: f64,
}

/// Diagnostic columns for one trace row. Empirical quantities are `None`
/// where their window is incomplete or a tail underflowed.
#[derive(Debug, Clone, Default, Serialize)]
pub struct DiagnosticRow {
    pub r: Option<f64>,
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub eta_bar: Option<f64>,
    pub h: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
}

/// Eigenbasis view of a problem: identity for spectral Hessians, the sorted
/// symmetric eigendecomposition for dense ones.
pub struct SpectralView {
    eigenvalues: Vec<f64>,
    basis: Option<Vec<Vec<f64>>>,
}

impl SpectralView {
    pub fn of(problem: &QuadraticProblem) -> Result<Self> {
        let (eigenvalues, basis) = match problem.hessian() {
            Hessian::Spectral { eigenvalues } => (eigenvalues.clone(), None),
            Hessian::Dense { matrix } => {
                let (vals, basis) = linalg::sym_eigen_desc(matrix);
                (vals, Some(basis))
            }
        };
        let n = eigenvalues.len();
        let gap = eigenvalues[n - 2] - eigenvalues[n - 1];
        if gap <= 1e-12 * eigenvalues[n - 2] {
            return Err(Error::InvalidSpec(
                "smallest eigenvalue is not simple; the head/tail split is ill-defined".into(),
            ));
        }
        Ok(Self { eigenvalues, basis })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Ratio of the extreme eigenvalues; the `lambda` of every formula here.
    pub fn lambda(&self) -> f64 {
        self.eigenvalues[0] / self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Gradient in eigenbasis coordinates.
    pub fn transform(&self, g: &[f64]) -> Vec<f64> {
        match &self.basis {
            None => g.to_vec(),
            Some(basis) => basis.iter().map(|v| linalg::dot(v, g)).collect(),
        }
    }

    pub fn split(&self, g: &[f64]) -> SpectralSplit {
        let coords = self.transform(g);
        let n = coords.len();
        let head = coords[..n - 1].to_vec();
        let tail = coords[n - 1];
        let r = if tail.abs() < TAIL_FLOOR {
            None
        } else {
            // the quotient itself can leave f64 range while both parts are
            // healthy; an infinite r is as undefined as a zero tail
            Some(linalg::dot(&head, &head) / (tail * tail)).filter(|v| v.is_finite())
        };
        SpectralSplit { head, tail, r }
    }

    fn eta_pair(&self, head: &[f64]) -> Result<EtaPair> {
        eta_with_eigs(&self.eigenvalues, head)
    }
}

/// Head/tail split of a gradient. The problem must be in spectral form;
/// diagonalize dense problems through [`SpectralView`] first.
pub fn split_gradient(problem: &QuadraticProblem, g: &[f64]) -> Result<SpectralSplit> {
    if g.len() != problem.dim() {
        return Err(Error::DimensionMismatch { expected: problem.dim(), got: g.len() });
    }
    Ok(SpectralView::of(problem)?.split(g))
}

/// `eta` and `eta_bar` of a head gradient:
/// `eta = head'A_1 head / (lambda ||head||^2)` and
/// `eta_bar = head'A_1^2 head / (eta lambda^2 ||head||^2)`.
pub fn eta_pair(problem: &QuadraticProblem, head: &[f64]) -> Result<EtaPair> {
    SpectralView::of(problem)?.eta_pair(head)
}

fn eta_with_eigs(eigs: &[f64], head: &[f64]) -> Result<EtaPair> {
    let n = eigs.len();
    if head.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, got: head.len() });
    }
    let lambda_raw = eigs[0];
    let norm_sq = linalg::dot(head, head);
    if norm_sq == 0.0 {
        return Err(Error::Undefined("eta is undefined for a zero head".into()));
    }
    let quad1: f64 = eigs[..n - 1]
        .iter()
        .zip(head)
        .map(|(a, h)| a * h * h)
        .sum();
    let quad2: f64 = eigs[..n - 1]
        .iter()
        .zip(head)
        .map(|(a, h)| a * a * h * h)
        .sum();
    let eta = quad1 / (lambda_raw * norm_sq);
    let eta_bar = quad2 / (eta * lambda_raw * lambda_raw * norm_sq);
    Ok(EtaPair { eta, eta_bar })
}

fn check_regime(r: f64, eta: f64, eta_bar: f64, lambda: f64, tau: f64) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::OutOfRegime(format!("r must be > 0, got {r}")));
    }
    if !(tau >= 0.0) {
        return Err(Error::OutOfRegime(format!("tau must be >= 0, got {tau}")));
    }
    if !(lambda > 1.0) {
        return Err(Error::OutOfRegime(format!("lambda must be > 1, got {lambda}")));
    }
    if !(eta * lambda > 1.0) {
        return Err(Error::OutOfRegime(format!(
            "eta*lambda must exceed 1 (eta={eta}, lambda={lambda})"
        )));
    }
    if !(eta_bar * lambda > 1.0) {
        return Err(Error::OutOfRegime(format!(
            "eta_bar*lambda must exceed 1 (eta_bar={eta_bar}, lambda={lambda})"
        )));
    }
    Ok(())
}

/// Tail contraction factor predicted from the state one step back:
/// `[r(eta l - 1) + tau r eta l (ebar l - 1)] / [1 + r eta l + tau(1 + r ebar eta l^2)]`.
pub fn xi_formula(r: f64, eta: f64, eta_bar: f64, lambda: f64, tau: f64) -> Result<f64> {
    check_regime(r, eta, eta_bar, lambda, tau)?;
    let el = eta * lambda;
    let num = r * (el - 1.0) + tau * r * el * (eta_bar * lambda - 1.0);
    let den = 1.0 + r * el + tau * (1.0 + r * eta_bar * el * lambda);
    Ok(num / den)
}

/// Limit of [`xi_formula`] as `tau -> inf`.
pub fn xi_formula_limit(r: f64, eta: f64, eta_bar: f64, lambda: f64) -> Result<f64> {
    check_regime(r, eta, eta_bar, lambda, 0.0)?;
    let el = eta * lambda;
    Ok(r * el * (eta_bar * lambda - 1.0) / (1.0 + r * eta_bar * el * lambda))
}

struct HParts {
    p: f64,
    c: f64,
    q: f64,
    e: f64,
    f: f64,
}

fn h_parts(r_prev: f64, eta_prev: f64, eta_bar_prev: f64, eta: f64, eta_bar: f64, lambda: f64) -> HParts {
    HParts {
        p: 1.0 - eta * lambda + r_prev * lambda * (eta_prev - eta),
        c: 1.0 - eta * lambda + r_prev * eta_prev * lambda * lambda * (eta_bar_prev - eta),
        q: 1.0 + r_prev,
        e: r_prev * eta_prev * lambda + 1.0,
        f: eta * (eta_bar - eta) * lambda * lambda,
    }
}

/// Forcing term of the `r` recurrence,
/// `h = [(P + tau C)^2 + (Q + tau E)^2 F] / [(eta' l - 1) + tau eta' l (ebar' l - 1)]^2`
/// where primes denote the previous iterate's quantities.
pub fn h_formula(
    r_prev: f64,
    eta_prev: f64,
    eta_bar_prev: f64,
    eta: f64,
    eta_bar: f64,
    lambda: f64,
    tau: f64,
) -> Result<f64> {
    check_regime(r_prev, eta_prev, eta_bar_prev, lambda, tau)?;
    let parts = h_parts(r_prev, eta_prev, eta_bar_prev, eta, eta_bar, lambda);
    let num = (parts.p + tau * parts.c).powi(2) + (parts.q + tau * parts.e).powi(2) * parts.f;
    let den = (eta_prev * lambda - 1.0) + tau * eta_prev * lambda * (eta_bar_prev * lambda - 1.0);
    Ok(num / (den * den))
}

/// Head contraction `beta = ||head_{k+1}||^2 / ||head_k||^2` predicted from
/// the same parts as [`h_formula`] but normalized by the alpha numerator.
pub fn beta_formula(
    r_prev: f64,
    eta_prev: f64,
    eta_bar_prev: f64,
    eta: f64,
    eta_bar: f64,
    lambda: f64,
    tau: f64,
) -> Result<f64> {
    check_regime(r_prev, eta_prev, eta_bar_prev, lambda, tau)?;
    let parts = h_parts(r_prev, eta_prev, eta_bar_prev, eta, eta_bar, lambda);
    let num = (parts.p + tau * parts.c).powi(2) + (parts.q + tau * parts.e).powi(2) * parts.f;
    let el = eta_prev * lambda;
    let den = 1.0 + r_prev * el + tau * (1.0 + r_prev * eta_bar_prev * el * lambda);
    Ok(num / (den * den))
}

/// Scaling factor relating `h` to the step,
/// `delta = [1 + r + tau(r eta l + 1)] / [(eta l - 1) + tau eta l (ebar l - 1)]`.
pub fn delta_formula(
    r_prev: f64,
    eta_prev: f64,
    eta_bar_prev: f64,
    lambda: f64,
    tau: f64,
) -> Result<f64> {
    check_regime(r_prev, eta_prev, eta_bar_prev, lambda, tau)?;
    let el = eta_prev * lambda;
    let num = 1.0 + r_prev + tau * (r_prev * el + 1.0);
    let den = (el - 1.0) + tau * el * (eta_bar_prev * lambda - 1.0);
    Ok(num / den)
}

/// Compute the diagnostic columns for every row of a trace.
pub fn trace_diagnostics(
    problem: &QuadraticProblem,
    trace: &IterationTrace,
) -> Result<Vec<DiagnosticRow>> {
    let view = SpectralView::of(problem)?;
    let lambda = view.lambda();
    let tau_scale = view.eigenvalues[view.eigenvalues.len() - 1];
    let m = trace.gradients.len();

    let splits: Vec<SpectralSplit> =
        trace.gradients.iter().map(|g| view.split(g)).collect();
    let etas: Vec<Option<EtaPair>> = splits
        .iter()
        .map(|s| view.eta_pair(&s.head).ok())
        .collect();

    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = DiagnosticRow {
            r: splits[i].r,
            eta: etas[i].map(|e| e.eta),
            eta_bar: etas[i].map(|e| e.eta_bar),
            ..Default::default()
        };
        if i + 1 < m && splits[i].tail.abs() >= TAIL_FLOOR {
            row.xi = Some((splits[i + 1].tail / splits[i].tail).abs());
            let head_sq = linalg::dot(&splits[i].head, &splits[i].head);
            if head_sq > 0.0 {
                let next_sq = linalg::dot(&splits[i + 1].head, &splits[i + 1].head);
                row.beta = Some(next_sq / head_sq);
            }
        }
        if i >= 1 && i + 1 < m {
            if let (Some(r_prev), Some(r_cur), Some(r_next)) =
                (splits[i - 1].r, splits[i].r, splits[i + 1].r)
            {
                if r_cur > 0.0 {
                    row.h = Some(r_prev * r_prev * r_next / r_cur);
                }
            }
        }
        if i >= 1 {
            if let (Some(r_prev), Some(ep)) = (splits[i - 1].r, etas[i - 1]) {
                let tau = trace.rows[i].tau.unwrap_or(0.0) * tau_scale;
                row.delta = delta_formula(r_prev, ep.eta, ep.eta_bar, lambda, tau).ok();
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Fill `trace.diagnostics` in place.
pub fn attach_diagnostics(problem: &QuadraticProblem, trace: &mut IterationTrace) -> Result<()> {
    trace.diagnostics = Some(trace_diagnostics(problem, trace)?);
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRecursionReport {
    pub max_rel_error: Option<f64>,
    pub windows_checked: usize,
    pub windows_skipped: usize,
}

/// Check the empirical `r_{k-1}^2 r_{k+1} / r_k` against [`h_formula`] on
/// every complete window of a diagnosed trace.
pub fn verify_recursion(
    problem: &QuadraticProblem,
    trace: &IterationTrace,
) -> Result<VerifyRecursionReport> {
    let diags = trace
        .diagnostics
        .as_ref()
        .ok_or_else(|| Error::Undefined("trace has no diagnostics attached".into()))?;
    let r: Vec<Option<f64>> = diags.iter().map(|d| d.r).collect();
    let eta: Vec<Option<f64>> = diags.iter().map(|d| d.eta).collect();
    let eta_bar: Vec<Option<f64>> = diags.iter().map(|d| d.eta_bar).collect();
    let tau: Vec<Option<f64>> = trace
        .rows
        .iter()
        .map(|row| row.tau.map(|t| t * problem.eig_min()))
        .collect();
    Ok(verify_recursion_series(problem.condition_number(), &r, &eta, &eta_bar, &tau))
}

/// Series form of [`verify_recursion`]: row `i` holds the state at iterate
/// `i+1`, and `tau[i]` the regularization used for the step leaving it,
/// already rescaled to the unit-smallest-eigenvalue normalization.
pub fn verify_recursion_series(
    lambda: f64,
    r: &[Option<f64>],
    eta: &[Option<f64>],
    eta_bar: &[Option<f64>],
    tau: &[Option<f64>],
) -> VerifyRecursionReport {
    let mut max_rel_error: Option<f64> = None;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for i in 1..r.len().saturating_sub(1) {
        let window = (
            r[i - 1],
            r[i],
            r[i + 1],
            eta[i - 1],
            eta_bar[i - 1],
            eta.get(i).copied().flatten(),
            eta_bar.get(i).copied().flatten(),
        );
        let (Some(rp), Some(rc), Some(rn), Some(ep), Some(ebp), Some(ec), Some(ebc)) = window
        else {
            skipped += 1;
            continue;
        };
        let t = tau.get(i).copied().flatten().unwrap_or(0.0);
        let Ok(h_pred) = h_formula(rp, ep, ebp, ec, ebc, lambda, t) else {
            skipped += 1;
            continue;
        };
        if !h_pred.is_finite() || h_pred == 0.0 {
            skipped += 1;
            continue;
        }
        let h_emp = rp * rp * rn / rc;
        let err = (h_emp - h_pred).abs() / h_pred;
        checked += 1;
        max_rel_error = Some(max_rel_error.map_or(err, |m: f64| m.max(err)));
    }
    VerifyRecursionReport { max_rel_error, windows_checked: checked, windows_skipped: skipped }
}

/// Smallest `N >= 1` with `r_{k+N} <= r_k` inside the available window.
pub fn find_descent_n(r: &[Option<f64>], k_idx: usize) -> Option<usize> {
    let base = r.get(k_idx).copied().flatten()?;
    for (n, value) in r[k_idx + 1..].iter().enumerate() {
        if let Some(v) = value {
            if *v <= base {
                return Some(n + 1);
            }
        }
    }
    None
}

/// Window length for the oscillation amplitude summary.
const AMPLITUDE_WINDOW: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct OscillationReport {
    pub sign_changes: usize,
    /// Mean length of the sign runs lying between two sign changes. The
    /// leading and trailing runs are not bounded on both sides and are
    /// excluded; 0 when there are fewer than two sign changes.
    pub mean_run_length: f64,
    pub local_minima_indices: Vec<usize>,
    pub local_maxima_indices: Vec<usize>,
    /// Max `|ln r|` over consecutive windows of ten defined values.
    pub amplitude_by_window: Vec<f64>,
    /// Every consecutive pair of defined `ln r` values flips sign.
    pub alternating: bool,
}

/// Summarize how `r` oscillates around 1: sign changes of `ln r`, run
/// lengths between them, strict local extrema (plateau ties break toward
/// the earliest index) and a windowed amplitude proxy.
pub fn oscillation_report(r: &[Option<f64>]) -> Result<OscillationReport> {
    let defined: Vec<(usize, f64)> = r
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|x| (i, x.ln())))
        .collect();
    if defined.len() < 10 {
        return Err(Error::Undefined(format!(
            "oscillation report needs >= 10 defined r values, got {}",
            defined.len()
        )));
    }

    let mut runs: Vec<usize> = Vec::new();
    let mut last_sign = 0i8;
    for &(_, y) in &defined {
        let s: i8 = if y > 0.0 {
            1
        } else if y < 0.0 {
            -1
        } else {
            0
        };
        if s == 0 {
            continue;
        }
        if s == last_sign {
            *runs.last_mut().expect("run started") += 1;
        } else {
            runs.push(1);
            last_sign = s;
        }
    }
    let sign_changes = runs.len().saturating_sub(1);
    let mean_run_length = if runs.len() >= 3 {
        let interior = &runs[1..runs.len() - 1];
        interior.iter().sum::<usize>() as f64 / interior.len() as f64
    } else {
        0.0
    };

    let alternating = defined.len() >= 2
        && defined.windows(2).all(|w| w[0].1 * w[1].1 < 0.0);

    let (local_minima_indices, local_maxima_indices) = local_extrema(&defined);

    let amplitude_by_window = defined
        .chunks(AMPLITUDE_WINDOW)
        .map(|chunk| chunk.iter().map(|(_, y)| y.abs()).fold(0.0, f64::max))
        .collect();

    Ok(OscillationReport {
        sign_changes,
        mean_run_length,
        local_minima_indices,
        local_maxima_indices,
        amplitude_by_window,
        alternating,
    })
}

fn local_extrema(series: &[(usize, f64)]) -> (Vec<usize>, Vec<usize>) {
    let mut minima = Vec::new();
    let mut maxima = Vec::new();
    let m = series.len();
    let mut j = 1;
    while j + 1 < m {
        let prev = series[j - 1].1;
        let here = series[j].1;
        // extend over a plateau; ties break toward the earliest index
        let mut end = j;
        while end + 1 < m && series[end + 1].1 == here {
            end += 1;
        }
        if end + 1 < m {
            let next = series[end + 1].1;
            if prev > here && next > here {
                minima.push(series[j].0);
            } else if prev < here && next < here {
                maxima.push(series[j].0);
            }
        }
        j = end.max(j) + 1;
    }
    (minima, maxima)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeQuantity {
    Xi,
    H,
    Delta,
}

/// One admissible diagnostic state: the previous iterate's `(r, eta,
/// eta_bar)` plus the current `(eta, eta_bar)` and the spectrum ratio.
#[derive(Debug, Clone, Copy)]
pub struct ProbeState {
    pub r: f64,
    pub eta_prev: f64,
    pub eta_bar_prev: f64,
    pub eta: f64,
    pub eta_bar: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub monotone: bool,
    /// For the `h` probe: whether `eta_bar_{k-1} <= eta_k` held. The
    /// monotonicity theorem is silent outside that hypothesis, so the probe
    /// reports rather than asserts there.
    pub hypothesis_held: bool,
}

/// Evaluate one formula over a tau grid and report whether the claimed
/// monotone direction (xi increasing, h and delta decreasing) holds
/// pointwise.
pub fn monotonicity_probe(
    quantity: ProbeQuantity,
    state: &ProbeState,
    grid: &[f64],
) -> Result<ProbeReport> {
    if grid.len() < 2 {
        return Err(Error::InvalidSpec("tau grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec("tau grid must be strictly increasing".into()));
    }
    let values: Vec<f64> = grid
        .iter()
        .map(|&tau| match quantity {
            ProbeQuantity::Xi => {
                xi_formula(state.r, state.eta_prev, state.eta_bar_prev, state.lambda, tau)
            }
            ProbeQuantity::H => h_formula(
                state.r,
                state.eta_prev,
                state.eta_bar_prev,
                state.eta,
                state.eta_bar,
                state.lambda,
                tau,
            ),
            ProbeQuantity::Delta => {
                delta_formula(state.r, state.eta_prev, state.eta_bar_prev, state.lambda, tau)
            }
        })
        .collect::<Result<_>>()?;
    let slack = 1e-12;
    let monotone = match quantity {
        ProbeQuantity::Xi => values
            .windows(2)
            .all(|w| w[1] >= w[0] - slack * w[0].abs()),
        ProbeQuantity::H | ProbeQuantity::Delta => values
            .windows(2)
            .all(|w| w[1] <= w[0] + slack * w[0].abs()),
    };
    let hypothesis_held = match quantity {
        ProbeQuantity::H => state.eta_bar_prev <= state.eta,
        _ => true,
    };
    Ok(ProbeReport { grid: grid.to_vec(), values, monotone, hypothesis_held })
}
