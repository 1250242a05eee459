//! Step-size rules and regularization-parameter schedules.
//!
//! Every rule produces the scalar `alpha_k`, the *inverse* step size of the
//! iteration `x_{k+1} = x_k - alpha_k^{-1} g_k`:
//!
//! * SD: `g'Ag / g'g` (exact line search at the current iterate)
//! * BB1: `s'y / s's`, BB2: `y'y / s'y` (two-point rules)
//! * RBB: `(s'y + tau y'y) / (s's + tau s'y)`, a rational blend that equals
//!   BB1 at `tau = 0` and tends to BB2 as `tau -> inf`
//! * RBB-like: RBB with `y'A^m s` / `s'A^m s` regularization terms
//! * Delayed: Rayleigh quotient of a retarded gradient with a matrix power
//!
//! All operations are pure functions of their inputs.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::quadprob::QuadraticProblem;

/// Denominators below this floor signal a degenerate step.
pub const DENOM_FLOOR: f64 = 1e-300;

/// Rule producing `tau_k` from the recent alpha history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauKind {
    Constant(f64),
    /// `tau_k = alpha_{k-1} / alpha_{k-2}`
    RatioMu1,
    /// `tau_k = alpha_{k-1}^2 / alpha_{k-2}`
    RatioAlphaScaled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauSchedule {
    pub kind: TauKind,
    /// Value used while the alpha history is too short (default 0, the
    /// tau-free BB1 case).
    pub fallback: f64,
}

impl TauSchedule {
    pub fn constant(tau: f64) -> Self {
        Self { kind: TauKind::Constant(tau), fallback: 0.0 }
    }

    pub fn ratio_mu1() -> Self {
        Self { kind: TauKind::RatioMu1, fallback: 0.0 }
    }

    pub fn ratio_alpha_scaled() -> Self {
        Self { kind: TauKind::RatioAlphaScaled, fallback: 0.0 }
    }
}

/// Which step rule drives a run.
#[derive(Debug, Clone, PartialEq)]
pub enum StepPolicy {
    Sd,
    Bb1,
    Bb2,
    Rbb { schedule: TauSchedule },
    RbbLike { m: u32, schedule: TauSchedule },
    Delayed { delay: usize, power: f64 },
}

impl StepPolicy {
    /// Does alpha_k depend on a regularization parameter?
    pub fn has_tau(&self) -> bool {
        matches!(self, StepPolicy::Rbb { .. } | StepPolicy::RbbLike { .. })
    }

    pub fn tau_schedule(&self) -> Option<&TauSchedule> {
        match self {
            StepPolicy::Rbb { schedule } | StepPolicy::RbbLike { schedule, .. } => Some(schedule),
            _ => None,
        }
    }

    /// Index of the gradient that parameterizes `alpha_k`: the current one
    /// for SD, the previous one for the two-point rules, `max(k-j, 1)` for a
    /// delay-j rule.
    pub fn defining_index(&self, k: usize) -> usize {
        match self {
            StepPolicy::Sd => k,
            StepPolicy::Bb1 | StepPolicy::Bb2 | StepPolicy::Rbb { .. } | StepPolicy::RbbLike { .. } => {
                k.saturating_sub(1).max(1)
            }
            StepPolicy::Delayed { delay, .. } => k.saturating_sub(*delay).max(1),
        }
    }

    /// How many past gradients the rule may reach back for.
    pub fn history_depth(&self) -> usize {
        match self {
            StepPolicy::Delayed { delay, .. } => delay + 1,
            _ => 2,
        }
    }

    pub fn label(&self) -> String {
        fn tau_label(s: &TauSchedule) -> String {
            match s.kind {
                TauKind::Constant(v) => format!("constant:{v}"),
                TauKind::RatioMu1 => "ratio_mu1".into(),
                TauKind::RatioAlphaScaled => "ratio_alpha".into(),
            }
        }
        match self {
            StepPolicy::Sd => "sd".into(),
            StepPolicy::Bb1 => "bb1".into(),
            StepPolicy::Bb2 => "bb2".into(),
            StepPolicy::Rbb { schedule } => format!("rbb({})", tau_label(schedule)),
            StepPolicy::RbbLike { m, schedule } => {
                format!("rbb_like(m={m},{})", tau_label(schedule))
            }
            StepPolicy::Delayed { delay, power } => format!("delayed(j={delay},rho={power})"),
        }
    }
}

/// Last two evaluated alphas, `prev = alpha_{k-1}`, `prev2 = alpha_{k-2}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlphaHistory {
    pub prev: Option<f64>,
    pub prev2: Option<f64>,
}

impl AlphaHistory {
    pub fn push(&mut self, alpha: f64) {
        self.prev2 = self.prev;
        self.prev = Some(alpha);
    }
}

/// Ring buffer of recent gradients indexed by iteration number (1-based).
#[derive(Debug, Clone)]
pub struct GradientHistory {
    start: usize,
    grads: VecDeque<Vec<f64>>,
    capacity: usize,
}

impl GradientHistory {
    pub fn new(capacity: usize) -> Self {
        Self { start: 1, grads: VecDeque::new(), capacity: capacity.max(1) }
    }

    /// Append `g_k`; pushes must come in iteration order starting at k = 1.
    pub fn push(&mut self, g: Vec<f64>) {
        if self.grads.len() == self.capacity {
            self.grads.pop_front();
            self.start += 1;
        }
        self.grads.push_back(g);
    }

    pub fn get(&self, k: usize) -> Option<&[f64]> {
        if k < self.start {
            return None;
        }
        self.grads.get(k - self.start).map(|v| v.as_slice())
    }

    /// Oldest retained gradient and its iteration index.
    pub fn oldest(&self) -> Option<(usize, &[f64])> {
        self.grads.front().map(|g| (self.start, g.as_slice()))
    }
}

/// Everything a rule may consult when producing `alpha_k`.
pub struct StepInputs<'a> {
    /// `x_k - x_{k-1}`; absent on the first iteration.
    pub s: Option<&'a [f64]>,
    /// `g_k - g_{k-1}`; absent on the first iteration.
    pub y: Option<&'a [f64]>,
    pub g_current: &'a [f64],
    pub g_history: &'a GradientHistory,
    pub alpha_history: AlphaHistory,
    pub problem: &'a QuadraticProblem,
    /// Iteration number, 1-based.
    pub k: usize,
}

/// Exact line-search inverse step `g'Ag / g'g`.
pub fn sd_alpha(g: &[f64], problem: &QuadraticProblem) -> Result<f64> {
    let gg = dot(g, g);
    if gg < DENOM_FLOOR {
        // zero gradient: the iterate is already optimal
        return Err(Error::DegenerateStep("zero gradient in sd_alpha".into()));
    }
    Ok(dot(&problem.matvec(g), g) / gg)
}

/// `s'y / s's`.
pub fn bb1_alpha(s: &[f64], y: &[f64]) -> Result<f64> {
    let ss = dot(s, s);
    if ss < DENOM_FLOOR {
        return Err(Error::DegenerateStep("s's underflow in bb1_alpha".into()));
    }
    Ok(dot(s, y) / ss)
}

/// `y'y / s'y`.
pub fn bb2_alpha(s: &[f64], y: &[f64]) -> Result<f64> {
    let sy = dot(s, y);
    if sy < DENOM_FLOOR {
        return Err(Error::DegenerateStep("s'y underflow in bb2_alpha".into()));
    }
    Ok(dot(y, y) / sy)
}

/// Regularized rule `(s'y + tau y'y) / (s's + tau s'y)`, `tau >= 0`.
pub fn rbb_alpha(s: &[f64], y: &[f64], tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidSpec(format!("tau must be >= 0, got {tau}")));
    }
    let sy = dot(s, y);
    let den = dot(s, s) + tau * sy;
    if den < DENOM_FLOOR {
        return Err(Error::DegenerateStep("denominator underflow in rbb_alpha".into()));
    }
    Ok((sy + tau * dot(y, y)) / den)
}

/// Generalized rule `(s'y + tau y'A^m s) / (s's + tau s'A^m s)`, `m >= 1`.
pub fn rbb_like_alpha(
    s: &[f64],
    y: &[f64],
    tau: f64,
    m: u32,
    problem: &QuadraticProblem,
) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidSpec("m must be >= 1".into()));
    }
    if !(tau >= 0.0) {
        return Err(Error::InvalidSpec(format!("tau must be >= 0, got {tau}")));
    }
    let ams = problem.matvec_power(s, m as f64)?;
    let den = dot(s, s) + tau * dot(s, &ams);
    if den < DENOM_FLOOR {
        return Err(Error::DegenerateStep("denominator underflow in rbb_like_alpha".into()));
    }
    Ok((dot(s, y) + tau * dot(y, &ams)) / den)
}

/// Delayed spectral rule `g_v' A^rho g_v / g_v' A^{rho-1} g_v` with
/// `v(k) = max(k - j, 1)`. When the buffer no longer holds `g_v`, the most
/// delayed available gradient is used instead.
pub fn delayed_alpha(
    history: &GradientHistory,
    k: usize,
    delay: usize,
    power: f64,
    problem: &QuadraticProblem,
) -> Result<f64> {
    if !(power >= 1.0) {
        return Err(Error::InvalidSpec(format!("power must be >= 1, got {power}")));
    }
    let v = k.saturating_sub(delay).max(1);
    let g_v = match history.get(v) {
        Some(g) => g,
        None => {
            history
                .oldest()
                .ok_or_else(|| Error::DegenerateStep("empty gradient history".into()))?
                .1
        }
    };
    rayleigh_power(g_v, power, problem)
}

/// `g'A^rho g / g'A^{rho-1} g`.
pub fn rayleigh_power(g: &[f64], power: f64, problem: &QuadraticProblem) -> Result<f64> {
    let num_vec = problem.matvec_power(g, power)?;
    let den_vec = problem.matvec_power(g, power - 1.0)?;
    let den = dot(&den_vec, g);
    if den < DENOM_FLOOR {
        return Err(Error::DegenerateStep("zero gradient in delayed rule".into()));
    }
    Ok(dot(&num_vec, g) / den)
}

/// Produce `tau_k` from a schedule. Returns the value together with a flag
/// that is set when an `alpha_{k-2}` underflow forced the fallback.
pub fn next_tau(schedule: &TauSchedule, history: AlphaHistory) -> (f64, bool) {
    match schedule.kind {
        TauKind::Constant(v) => (v, false),
        TauKind::RatioMu1 => match (history.prev, history.prev2) {
            (Some(a1), Some(a2)) => {
                if a2 < DENOM_FLOOR {
                    (schedule.fallback, true)
                } else {
                    (a1 / a2, false)
                }
            }
            _ => (schedule.fallback, false),
        },
        TauKind::RatioAlphaScaled => match (history.prev, history.prev2) {
            (Some(a1), Some(a2)) => {
                if a2 < DENOM_FLOOR {
                    (schedule.fallback, true)
                } else {
                    (a1 * (a1 / a2), false)
                }
            }
            _ => (schedule.fallback, false),
        },
    }
}

/// Evaluate a policy through the generic `(s, y)` route. This is the path
/// used for dense Hessians and x-based gradients; spectral recursive runs
/// use the factored form in [`crate::solver`].
///
/// Returns `(alpha, tau, tau_fallback_flagged)`.
pub fn evaluate_alpha(
    policy: &StepPolicy,
    inputs: &StepInputs<'_>,
) -> Result<(f64, Option<f64>, bool)> {
    let two_point = |name: &str| -> Result<(&[f64], &[f64])> {
        match (inputs.s, inputs.y) {
            (Some(s), Some(y)) => Ok((s, y)),
            _ => Err(Error::DegenerateStep(format!("{name} needs a previous step"))),
        }
    };
    match policy {
        StepPolicy::Sd => Ok((sd_alpha(inputs.g_current, inputs.problem)?, None, false)),
        StepPolicy::Bb1 => {
            let (s, y) = two_point("bb1")?;
            Ok((bb1_alpha(s, y)?, None, false))
        }
        StepPolicy::Bb2 => {
            let (s, y) = two_point("bb2")?;
            Ok((bb2_alpha(s, y)?, None, false))
        }
        StepPolicy::Rbb { schedule } => {
            let (s, y) = two_point("rbb")?;
            let (tau, flagged) = next_tau(schedule, inputs.alpha_history);
            Ok((rbb_alpha(s, y, tau)?, Some(tau), flagged))
        }
        StepPolicy::RbbLike { m, schedule } => {
            let (s, y) = two_point("rbb_like")?;
            let (tau, flagged) = next_tau(schedule, inputs.alpha_history);
            Ok((rbb_like_alpha(s, y, tau, *m, inputs.problem)?, Some(tau), flagged))
        }
        StepPolicy::Delayed { delay, power } => Ok((
            delayed_alpha(inputs.g_history, inputs.k, *delay, *power, inputs.problem)?,
            None,
            false,
        )),
    }
}

// --- wire format ------------------------------------------------------------

/// `{"rule":"bb1"|"bb2"|"sd"|"rbb"|"rbb_like"|"delayed",
///   "tau":{"kind":"constant"|"ratio_mu1"|"ratio_alpha","value":f?},
///   "m":u?, "delay":u?, "power":f?}`
#[derive(Serialize, Deserialize)]
struct PolicyJson {
    rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<TauJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delay: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    power: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TauJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
}

impl From<&TauSchedule> for TauJson {
    fn from(s: &TauSchedule) -> Self {
        match s.kind {
            TauKind::Constant(v) => TauJson { kind: "constant".into(), value: Some(v) },
            TauKind::RatioMu1 => TauJson { kind: "ratio_mu1".into(), value: None },
            TauKind::RatioAlphaScaled => TauJson { kind: "ratio_alpha".into(), value: None },
        }
    }
}

impl TryFrom<&TauJson> for TauSchedule {
    type Error = Error;

    fn try_from(t: &TauJson) -> Result<Self> {
        match t.kind.as_str() {
            "constant" => {
                let v = t
                    .value
                    .ok_or_else(|| Error::Parse("constant tau needs a value".into()))?;
                if !(v >= 0.0) {
                    return Err(Error::InvalidSpec(format!("tau must be >= 0, got {v}")));
                }
                Ok(TauSchedule::constant(v))
            }
            "ratio_mu1" => Ok(TauSchedule::ratio_mu1()),
            "ratio_alpha" => Ok(TauSchedule::ratio_alpha_scaled()),
            other => Err(Error::Parse(format!("unknown tau kind '{other}'"))),
        }
    }
}

impl StepPolicy {
    pub fn to_json_string(&self) -> Result<String> {
        let doc = match self {
            StepPolicy::Sd => PolicyJson { rule: "sd".into(), tau: None, m: None, delay: None, power: None },
            StepPolicy::Bb1 => PolicyJson { rule: "bb1".into(), tau: None, m: None, delay: None, power: None },
            StepPolicy::Bb2 => PolicyJson { rule: "bb2".into(), tau: None, m: None, delay: None, power: None },
            StepPolicy::Rbb { schedule } => PolicyJson {
                rule: "rbb".into(),
                tau: Some(schedule.into()),
                m: None,
                delay: None,
                power: None,
            },
            StepPolicy::RbbLike { m, schedule } => PolicyJson {
                rule: "rbb_like".into(),
                tau: Some(schedule.into()),
                m: Some(*m),
                delay: None,
                power: None,
            },
            StepPolicy::Delayed { delay, power } => PolicyJson {
                rule: "delayed".into(),
                tau: None,
                m: None,
                delay: Some(*delay),
                power: Some(*power),
            },
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: PolicyJson = serde_json::from_str(s)?;
        Self::from_parts(
            &doc.rule,
            doc.tau.as_ref().map(TauSchedule::try_from).transpose()?,
            doc.m,
            doc.delay,
            doc.power,
        )
    }

    /// Assemble a policy from loosely typed parts (wire formats, CLI flags).
    pub fn from_parts(
        rule: &str,
        tau: Option<TauSchedule>,
        m: Option<u32>,
        delay: Option<usize>,
        power: Option<f64>,
    ) -> Result<Self> {
        match rule {
            "sd" => Ok(StepPolicy::Sd),
            "bb1" => Ok(StepPolicy::Bb1),
            "bb2" => Ok(StepPolicy::Bb2),
            "rbb" => Ok(StepPolicy::Rbb { schedule: tau.unwrap_or_else(|| TauSchedule::constant(0.0)) }),
            "rbb_like" => {
                let m = m.unwrap_or(1);
                if m < 1 {
                    return Err(Error::InvalidSpec("m must be >= 1".into()));
                }
                Ok(StepPolicy::RbbLike {
                    m,
                    schedule: tau.unwrap_or_else(|| TauSchedule::constant(0.0)),
                })
            }
            "delayed" => {
                let power = power.unwrap_or(1.0);
                if !(power >= 1.0) {
                    return Err(Error::InvalidSpec(format!("power must be >= 1, got {power}")));
                }
                Ok(StepPolicy::Delayed { delay: delay.unwrap_or(1), power })
            }
            other => Err(Error::Parse(format!("unknown rule '{other}'"))),
        }
    }
}
