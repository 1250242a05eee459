//! The difference-equation lab.
//!
//! In log space (`y_k = ln r_k`) the oscillating ratio of a two-point method
//! obeys `y_{k+2} - y_{k+1} + 2 y_k = m_k` with `m_k = ln h_k`; a delay-j
//! rule raises the order to `d = j + 1` and its characteristic polynomial is
//! `q^d - q^{d-1} + 2`. This module solves those polynomials (companion
//! matrix eigenvalues polished by damped Newton steps), simulates the
//! recurrences forward, carries the 2-D closed form and the
//! variation-of-constants particular solution, and compares solver traces
//! against the pure recurrences.

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};

/// `theta = arccos(1/sqrt(8))`, the rotation angle of the scaled recurrence
/// `u_{k+2} - u_{k+1}/sqrt(2) + u_k = mhat_k`.
pub fn theta() -> f64 {
    (1.0 / 8f64.sqrt()).acos()
}

/// Roots of a delay characteristic polynomial with their residuals.
#[derive(Debug, Clone)]
pub struct CharacteristicRootSet {
    pub d: usize,
    pub roots: Vec<Complex<f64>>,
    /// `|p(root)|` for each root.
    pub residuals: Vec<f64>,
    pub moduli: Vec<f64>,
}

#[derive(Serialize)]
struct RootJson {
    re: f64,
    im: f64,
    modulus: f64,
    residual: f64,
}

#[derive(Serialize)]
struct RootSetJson {
    d: usize,
    roots: Vec<RootJson>,
}

impl CharacteristicRootSet {
    /// Largest root modulus (the growth rate of the log recurrence).
    pub fn max_modulus(&self) -> f64 {
        self.moduli.iter().copied().fold(0.0, f64::max)
    }

    /// Argument of the first root in the upper half plane.
    pub fn principal_argument(&self) -> Option<f64> {
        self.roots.iter().find(|q| q.im > 0.0).map(|q| q.arg())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = RootSetJson {
            d: self.d,
            roots: self
                .roots
                .iter()
                .zip(&self.moduli)
                .zip(&self.residuals)
                .map(|((q, m), res)| RootJson { re: q.re, im: q.im, modulus: *m, residual: *res })
                .collect(),
        };
        serde_json::to_value(doc).expect("root set serialization")
    }
}

/// `p(q) = q^d - q^{d-1} + 2` evaluated by Horner.
fn char_poly(d: usize, q: Complex<f64>) -> Complex<f64> {
    // coefficients descending: 1, -1, 0, ..., 0, 2
    let mut acc = Complex::new(1.0, 0.0);
    acc = acc * q - Complex::new(1.0, 0.0);
    for _ in 0..d - 1 {
        acc *= q;
    }
    acc + Complex::new(2.0, 0.0)
}

/// `p'(q) = d q^{d-1} - (d-1) q^{d-2}`.
fn char_poly_deriv(d: usize, q: Complex<f64>) -> Complex<f64> {
    let mut acc = Complex::new(d as f64, 0.0);
    acc = acc * q - Complex::new((d - 1) as f64, 0.0);
    for _ in 0..d.saturating_sub(2) {
        acc *= q;
    }
    acc
}

/// All roots of `q^d - q^{d-1} + 2 = 0` for `2 <= d <= 64`: companion-matrix
/// eigenvalues polished by a few damped Newton steps. For odd `d` one root
/// is -1; every non-real root has modulus greater than 1.
pub fn char_roots(d: usize) -> Result<CharacteristicRootSet> {
    if !(2..=64).contains(&d) {
        return Err(Error::InvalidSpec(format!("delay order must be in 2..=64, got {d}")));
    }
    // companion matrix of the monic polynomial: subdiagonal ones, last
    // column -(a_0, ..., a_{d-1}) with a_0 = 2, a_{d-1} = -1
    let mut companion = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        companion[(i, i - 1)] = 1.0;
    }
    companion[(0, d - 1)] = -2.0;
    companion[(d - 1, d - 1)] = 1.0;

    let mut roots: Vec<Complex<f64>> = companion.complex_eigenvalues().iter().copied().collect();
    for q in roots.iter_mut() {
        *q = polish_root(d, *q);
    }
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());

    let residuals: Vec<f64> = roots.iter().map(|&q| char_poly(d, q).norm()).collect();
    let moduli: Vec<f64> = roots.iter().map(|q| q.norm()).collect();

    let worst = roots
        .iter()
        .zip(&residuals)
        .map(|(q, res)| res / q.norm().powi(d as i32).max(1.0))
        .fold(0.0, f64::max);
    if worst > 1e-10 {
        return Err(Error::NumericalFailure(format!(
            "root polishing left a relative residual of {worst:e} for d={d}"
        )));
    }
    Ok(CharacteristicRootSet { d, roots, residuals, moduli })
}

fn polish_root(d: usize, mut q: Complex<f64>) -> Complex<f64> {
    for _ in 0..50 {
        let f = char_poly(d, q);
        if f.norm() == 0.0 {
            break;
        }
        let df = char_poly_deriv(d, q);
        if df.norm() < 1e-300 {
            break;
        }
        let full = f / df;
        let mut accepted = false;
        let mut scale = 1.0;
        for _ in 0..8 {
            let candidate = q - full * Complex::new(scale, 0.0);
            if char_poly(d, candidate).norm() < f.norm() {
                q = candidate;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    q
}

/// Roots of the scaled two-point recurrence, `q^2 - q/sqrt(2) + 1 = 0`:
/// `e^{+-i theta}` with `theta = arccos(1/sqrt(8))`, both on the unit circle.
pub fn rbb_char_roots() -> CharacteristicRootSet {
    let cos_t = 1.0 / 8f64.sqrt();
    let sin_t = (7.0 / 8.0f64).sqrt();
    let roots = vec![Complex::new(cos_t, -sin_t), Complex::new(cos_t, sin_t)];
    let p = |q: Complex<f64>| q * q - q / Complex::new(2f64.sqrt(), 0.0) + Complex::new(1.0, 0.0);
    let residuals = roots.iter().map(|&q| p(q).norm()).collect();
    let moduli = roots.iter().map(|q| q.norm()).collect();
    CharacteristicRootSet { d: 2, roots, residuals, moduli }
}

/// A log-domain recurrence with its initial values.
#[derive(Debug, Clone)]
pub enum RecurrenceModel {
    /// `y_{k+2} = y_{k+1} - 2 y_k` (two-point rule, homogeneous).
    Bb1Log { y0: f64, y1: f64 },
    /// Order-d delayed rule: `y_t = y_{t-1} - 2 y_{t-d}`. `d = 1` is the
    /// exact-line-search reciprocal `y_t = -y_{t-1}`.
    DelayedLog { d: usize, init: Vec<f64> },
    /// `y_{k+2} = y_{k+1} - 2 y_k + m_k` with an explicit forcing series.
    ForcedLog { y0: f64, y1: f64, forcing: Vec<f64> },
}

impl RecurrenceModel {
    pub fn order(&self) -> usize {
        match self {
            RecurrenceModel::Bb1Log { .. } | RecurrenceModel::ForcedLog { .. } => 2,
            RecurrenceModel::DelayedLog { d, .. } => *d,
        }
    }
}

/// `ln(f64::MAX)`; beyond this `r = exp(y)` overflows.
const EXP_OVERFLOW: f64 = 709.782712893384;

#[derive(Debug, Clone)]
pub struct RecurrenceSeries {
    pub y: Vec<f64>,
    /// `exp(y_k)`, `None` past the overflow point.
    pub r: Vec<Option<f64>>,
    /// First index whose `r` overflowed, if any.
    pub overflow_at: Option<usize>,
}

/// Run a recurrence forward to `steps` total values (initial conditions
/// included). The recursion itself stays in log space; amplitudes grow like
/// `(sqrt 2)^k`, so `r` is expected to overflow eventually and is marked
/// rather than propagated as infinity.
pub fn simulate_recurrence(model: &RecurrenceModel, steps: usize) -> Result<RecurrenceSeries> {
    let order = model.order();
    if order == 0 {
        return Err(Error::InvalidSpec("recurrence order must be >= 1".into()));
    }
    if steps < order {
        return Err(Error::InvalidSpec(format!(
            "steps ({steps}) must cover the {order} initial values"
        )));
    }
    let mut y: Vec<f64> = match model {
        RecurrenceModel::Bb1Log { y0, y1 } => vec![*y0, *y1],
        RecurrenceModel::DelayedLog { d, init } => {
            if init.len() != *d {
                return Err(Error::InvalidSpec(format!(
                    "order-{d} recurrence needs exactly {d} initial values, got {}",
                    init.len()
                )));
            }
            init.clone()
        }
        RecurrenceModel::ForcedLog { y0, y1, forcing } => {
            if forcing.len() + 2 < steps {
                return Err(Error::InvalidSpec(format!(
                    "forcing series of length {} cannot drive {steps} values",
                    forcing.len()
                )));
            }
            vec![*y0, *y1]
        }
    };
    while y.len() < steps {
        let t = y.len();
        let next = match model {
            RecurrenceModel::Bb1Log { .. } => y[t - 1] - 2.0 * y[t - 2],
            RecurrenceModel::DelayedLog { d, .. } => y[t - 1] - 2.0 * y[t - d],
            RecurrenceModel::ForcedLog { forcing, .. } => {
                y[t - 1] - 2.0 * y[t - 2] + forcing[t - 2]
            }
        };
        y.push(next);
    }
    let mut overflow_at = None;
    let r = y
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v > EXP_OVERFLOW {
                if overflow_at.is_none() {
                    overflow_at = Some(i);
                }
                None
            } else {
                Some(v.exp())
            }
        })
        .collect();
    Ok(RecurrenceSeries { y, r, overflow_at })
}

/// Closed form of the homogeneous two-point log recurrence:
/// `y_k = (sqrt 2)^k (A cos k theta + B sin k theta)` with `(A, B)` solved
/// from `y_0, y_1`.
pub fn bb1_closed_form(y0: f64, y1: f64, k: usize) -> f64 {
    let t = theta();
    let a = y0;
    let b = (y1 / 2f64.sqrt() - y0 * t.cos()) / t.sin();
    let kt = k as f64 * t;
    2f64.sqrt().powi(k as i32) * (a * kt.cos() + b * kt.sin())
}

/// Variation-of-constants particular solution of
/// `u_{k+2} - u_{k+1}/sqrt(2) + u_k = mhat_k`:
/// `u_k = (1/sin theta) * sum_{j<k} mhat_j sin((k-j-1) theta)`.
/// The Casoratian of the `cos/sin` fundamental pair is `sin theta`, hence
/// the normalization; with it the recurrence is satisfied exactly.
pub fn particular_solution(forcing: &[f64], k: usize) -> Result<f64> {
    if forcing.len() < k {
        return Err(Error::InvalidSpec(format!(
            "forcing series of length {} is shorter than k = {k}",
            forcing.len()
        )));
    }
    let t = theta();
    let sum: f64 = forcing[..k]
        .iter()
        .enumerate()
        .map(|(j, m)| m * ((k as f64 - j as f64 - 1.0) * t).sin())
        .sum();
    Ok(sum / t.sin())
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceComparisonReport {
    /// `max |u_sim - u_trace| / max |u_trace|` on the compared window, where
    /// `u_i = y_i / rho^i` and `rho` is the dominant root modulus.
    pub max_scaled_error: f64,
    /// Number of compared values.
    pub window: usize,
    /// Index into the r series where seeding started (shifted past any
    /// undefined leading values).
    pub seed_offset: usize,
}

/// Compare the `ln r` sequence of a 2-D run against the pure order-d log
/// recurrence seeded with the trace's first `d` defined values. `d = 2` is
/// the two-point rule, `d = j + 1` a delay-j rule, `d = 1` exact line
/// search.
pub fn trace_vs_recurrence(
    r: &[Option<f64>],
    d: usize,
    window: usize,
) -> Result<TraceComparisonReport> {
    if d == 0 {
        return Err(Error::InvalidSpec("recurrence order must be >= 1".into()));
    }
    // first run of d consecutive defined values
    let mut seed_offset = None;
    'search: for s in 0..r.len().saturating_sub(d) {
        for item in &r[s..s + d] {
            if item.is_none() {
                continue 'search;
            }
        }
        seed_offset = Some(s);
        break;
    }
    let s = seed_offset
        .ok_or_else(|| Error::Undefined("no seed window with defined r values".into()))?;

    let mut y_trace = Vec::new();
    for item in &r[s..] {
        match item {
            Some(v) if *v > 0.0 => y_trace.push(v.ln()),
            _ => break,
        }
        if y_trace.len() == window {
            break;
        }
    }
    if y_trace.len() <= d {
        return Err(Error::Undefined("trace window too short to compare".into()));
    }

    let model = RecurrenceModel::DelayedLog { d, init: y_trace[..d].to_vec() };
    let sim = simulate_recurrence(&model, y_trace.len())?;

    let rho = if d == 1 { 1.0 } else { char_roots(d)?.max_modulus() };
    let mut max_abs = 0f64;
    let mut max_err = 0f64;
    for (i, (yt, ys)) in y_trace.iter().zip(&sim.y).enumerate() {
        let scale = rho.powi(i as i32);
        let ut = yt / scale;
        let us = ys / scale;
        max_abs = max_abs.max(ut.abs());
        max_err = max_err.max((ut - us).abs());
    }
    if max_abs == 0.0 {
        return Err(Error::Undefined("trace r sequence is identically 1".into()));
    }
    Ok(TraceComparisonReport {
        max_scaled_error: max_err / max_abs,
        window: y_trace.len(),
        seed_offset: s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {a} ~ {b} (tol {tol})");
    }

    #[test]
    fn theta_value() {
        assert_close(theta().cos(), 1.0 / 8f64.sqrt(), 1e-15);
        assert_close(theta(), 1.2094292028881888, 1e-12);
    }

    #[test]
    fn char_roots_d2_matches_quadratic_formula() {
        // q^2 - q + 2 = 0 -> (1 +- i sqrt 7) / 2
        let set = char_roots(2).unwrap();
        let expected_im = 7f64.sqrt() / 2.0;
        for q in &set.roots {
            assert_close(q.re, 0.5, 1e-12);
            assert_close(q.im.abs(), expected_im, 1e-12);
            assert_close(q.norm(), 2f64.sqrt(), 1e-12);
        }
    }

    #[test]
    fn char_roots_d3_matches_factorization() {
        // (q + 1)(q^2 - 2q + 2): roots -1 and 1 +- i
        let set = char_roots(3).unwrap();
        let mut found_minus_one = false;
        for q in &set.roots {
            if (q.re + 1.0).abs() < 1e-10 && q.im.abs() < 1e-10 {
                found_minus_one = true;
            } else {
                assert_close(q.re, 1.0, 1e-10);
                assert_close(q.im.abs(), 1.0, 1e-10);
                assert_close(q.norm(), 2f64.sqrt(), 1e-10);
            }
        }
        assert!(found_minus_one);
    }

    #[test]
    fn char_roots_d5_contains_minus_one() {
        let set = char_roots(5).unwrap();
        let near_minus_one = set
            .roots
            .iter()
            .filter(|q| (q.re + 1.0).abs() < 1e-10 && q.im.abs() < 1e-10)
            .count();
        assert_eq!(near_minus_one, 1);
        for q in &set.roots {
            if q.im != 0.0 {
                assert!(q.norm() > 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn char_roots_rejects_out_of_range() {
        assert!(char_roots(1).is_err());
        assert!(char_roots(65).is_err());
    }

    #[test]
    fn rbb_roots_on_unit_circle() {
        let set = rbb_char_roots();
        for (q, m) in set.roots.iter().zip(&set.moduli) {
            assert_close(*m, 1.0, 1e-12);
            assert!(set.residuals.iter().all(|r| *r < 1e-14));
            let _ = q;
        }
        assert_close(set.principal_argument().unwrap(), theta(), 1e-12);
        // Vieta: product = constant term 1, sum = 1/sqrt(2)
        let prod = set.roots[0] * set.roots[1];
        let sum = set.roots[0] + set.roots[1];
        assert_close(prod.re, 1.0, 1e-15);
        assert_close(prod.im, 0.0, 1e-15);
        assert_close(sum.re, 1.0 / 2f64.sqrt(), 1e-15);
    }

    #[test]
    fn simulate_bb1_hand_recursion() {
        let ln2 = 2f64.ln();
        let series = simulate_recurrence(&RecurrenceModel::Bb1Log { y0: ln2, y1: 0.0 }, 6).unwrap();
        let expected = [ln2, 0.0, -2.0 * ln2, -2.0 * ln2, 2.0 * ln2, 6.0 * ln2];
        for (y, e) in series.y.iter().zip(expected) {
            assert_close(*y, e, 1e-14);
        }
        let r: Vec<f64> = series.r.iter().map(|v| v.unwrap()).collect();
        let r_expected = [2.0, 1.0, 0.25, 0.25, 4.0, 64.0];
        for (a, e) in r.iter().zip(r_expected) {
            assert_close(*a, e, 1e-12);
        }
        // r_{k-1}^2 r_{k+1} = r_k at each interior step
        for k in 1..r.len() - 1 {
            assert_close(r[k - 1] * r[k - 1] * r[k + 1], r[k], 1e-10 * r[k]);
        }
    }

    #[test]
    fn simulate_zero_everything_is_zero() {
        let series = simulate_recurrence(
            &RecurrenceModel::ForcedLog { y0: 0.0, y1: 0.0, forcing: vec![0.0; 30] },
            30,
        )
        .unwrap();
        assert!(series.y.iter().all(|&y| y == 0.0));
        assert!(series.overflow_at.is_none());
    }

    #[test]
    fn simulate_marks_overflow() {
        let series =
            simulate_recurrence(&RecurrenceModel::Bb1Log { y0: 5.0, y1: 3.0 }, 80).unwrap();
        let at = series.overflow_at.expect("amplitude grows past exp range");
        assert!(series.r[at].is_none());
        assert!(series.r[..at].iter().all(|v| v.is_some()));
    }

    #[test]
    fn delayed_log_d1_is_reciprocal() {
        let series =
            simulate_recurrence(&RecurrenceModel::DelayedLog { d: 1, init: vec![0.7] }, 6).unwrap();
        for (i, y) in series.y.iter().enumerate() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert_close(*y, sign * 0.7, 1e-14);
        }
    }

    #[test]
    fn closed_form_solves_initial_conditions() {
        // y0 = 1, y1 = 0: A = 1, B = -cos(theta)/sin(theta)
        assert_close(bb1_closed_form(1.0, 0.0, 0), 1.0, 1e-14);
        assert_close(bb1_closed_form(1.0, 0.0, 1), 0.0, 1e-14);
        assert_close(bb1_closed_form(0.0, 0.0, 17), 0.0, 1e-14);
    }

    #[test]
    fn closed_form_matches_simulation() {
        let (y0, y1) = (0.35, -1.2);
        let series = simulate_recurrence(&RecurrenceModel::Bb1Log { y0, y1 }, 41).unwrap();
        for k in 0..=40 {
            let cf = bb1_closed_form(y0, y1, k);
            let scale = 2f64.sqrt().powi(k as i32);
            assert_close(cf / scale, series.y[k] / scale, 1e-9);
        }
    }

    #[test]
    fn particular_solution_zero_forcing() {
        let forcing = vec![0.0; 20];
        for k in 0..20 {
            assert_eq!(particular_solution(&forcing, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn particular_solution_unit_impulse() {
        let mut forcing = vec![0.0; 30];
        forcing[0] = 1.0;
        let t = theta();
        assert_close(particular_solution(&forcing, 1).unwrap(), 0.0, 1e-15);
        for k in 2..30 {
            let u = particular_solution(&forcing, k).unwrap();
            assert_close(u, ((k as f64 - 1.0) * t).sin() / t.sin(), 1e-12);
        }
    }

    #[test]
    fn particular_solution_satisfies_recurrence() {
        // decaying forcing: residual of the scaled recurrence stays tiny
        let forcing: Vec<f64> = (0..40).map(|j| 0.5f64.powi(j)).collect();
        let u: Vec<f64> = (0..40)
            .map(|k| particular_solution(&forcing, k).unwrap())
            .collect();
        for k in 0..30 {
            let lhs = u[k + 2] - u[k + 1] / 2f64.sqrt() + u[k];
            assert_close(lhs, forcing[k], 1e-10);
        }
    }

    #[test]
    fn homogeneous_plus_particular_satisfies_recurrence() {
        let forcing: Vec<f64> = (0..40).map(|j| 0.3f64.powi(j) * (j as f64 * 0.9).cos()).collect();
        let t = theta();
        let (c1, c2) = (0.8, -0.4);
        let u: Vec<f64> = (0..40)
            .map(|k| {
                let kt = k as f64 * t;
                c1 * kt.cos() + c2 * kt.sin() + particular_solution(&forcing, k).unwrap()
            })
            .collect();
        for k in 0..30 {
            let lhs = u[k + 2] - u[k + 1] / 2f64.sqrt() + u[k];
            assert_close(lhs, forcing[k], 1e-10);
        }
    }

    fn trace_r(
        policy: &crate::steps::StepPolicy,
        lambda: f64,
        x0: (f64, f64),
        max_iters: usize,
        rel_tol: f64,
    ) -> Vec<Option<f64>> {
        use crate::analysis::attach_diagnostics;
        use crate::quadprob::build_problem;
        use crate::solver::{run, GradientMode, RunConfig};
        let p = build_problem(&[lambda, 1.0], &[0.0, 0.0]).unwrap();
        let cfg = RunConfig::new(vec![x0.0, x0.1])
            .with_rel_tol(rel_tol)
            .with_max_iters(max_iters)
            .with_gradient_mode(GradientMode::Recursive);
        let mut t = run(&p, policy, &cfg).unwrap();
        attach_diagnostics(&p, &mut t).unwrap();
        t.diagnostics.unwrap().into_iter().map(|d| d.r).collect()
    }

    #[test]
    fn bb1_2d_trace_follows_order2_recurrence() {
        // start near r = 1 so the log amplitude stays inside f64 range for
        // a long window
        let r = trace_r(&crate::steps::StepPolicy::Bb1, 5.0, (0.202, 1.0), 600, 1e-40);
        let report = trace_vs_recurrence(&r, 2, 25).unwrap();
        assert!(report.window >= 25);
        assert!(
            report.max_scaled_error <= 1e-6,
            "scaled error {}",
            report.max_scaled_error
        );
    }

    #[test]
    fn sd_2d_trace_is_reciprocal() {
        let r = trace_r(&crate::steps::StepPolicy::Sd, 7.0, (1.0, 2.0), 40, 1e-12);
        let vals: Vec<f64> = r.iter().flatten().copied().collect();
        for w in vals.windows(2) {
            assert!((w[0] * w[1] - 1.0).abs() <= 1e-12);
        }
        let report = trace_vs_recurrence(&r, 1, 30).unwrap();
        assert!(report.max_scaled_error <= 1e-10);
    }

    #[test]
    fn delayed_2d_trace_follows_order3_recurrence() {
        let policy = crate::steps::StepPolicy::Delayed { delay: 2, power: 1.0 };
        let r = trace_r(&policy, 5.0, (0.202, 1.0), 600, 1e-40);
        let report = trace_vs_recurrence(&r, 3, 25).unwrap();
        assert!(report.window >= 25);
        assert!(
            report.max_scaled_error <= 1e-6,
            "scaled error {}",
            report.max_scaled_error
        );
    }

    #[test]
    fn vieta_and_modulus_equation_for_all_orders() {
        for d in 2..=12 {
            let set = char_roots(d).unwrap();
            assert_eq!(set.roots.len(), d);
            // product of roots = (-1)^d * 2, sum of roots = 1
            let prod = set
                .roots
                .iter()
                .fold(Complex::new(1.0, 0.0), |acc, q| acc * q);
            let sum: Complex<f64> = set.roots.iter().sum();
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            assert_close(prod.re, sign * 2.0, 2e-10);
            assert_close(prod.im, 0.0, 2e-10);
            assert_close(sum.re, 1.0, 2e-10);
            assert_close(sum.im, 0.0, 2e-10);
            for q in &set.roots {
                // |q|^{d-1} |q - 1| = 2
                let lhs = q.norm().powi(d as i32 - 1) * (q - Complex::new(1.0, 0.0)).norm();
                assert!((lhs - 2.0).abs() <= 1e-9 * 2.0);
            }
        }
    }
}
