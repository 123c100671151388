//! Convex-function condition calculus: the generalised inverse, the
//! `Φ_p(t) = Φ(t^p)` and `H_p = log Φ_p` transforms, and numeric
//! classification of the divergence conditions built from them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{trace_from_density, Classification, GrowthClassifier, Segment, Verdict};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Upper bracket cap for generalised inverses; beyond it the inverse is `∞`.
const BRACKET_CAP: f64 = 1e300;

/// A non-decreasing `Φ: [0, ∞] → [0, ∞]`.
#[derive(Clone)]
pub struct PhiFunction {
    label: String,
    eval: RealFn,
    log_eval: Option<RealFn>,
    convex: bool,
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiFunction")
            .field("label", &self.label)
            .field("convex", &self.convex)
            .finish()
    }
}

fn sample_points() -> Vec<f64> {
    let mut t = vec![0.0];
    t.extend((0..1000).map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / 999.0)));
    t
}

impl PhiFunction {
    /// Builds `Φ`, checking monotonicity (and, when declared, convexity via
    /// the non-decreasing slope `(Φ(t) - Φ(0))/t`) on 1000 log-spaced points.
    pub fn new<F>(label: impl Into<String>, eval: F, convex: bool) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let phi = Self {
            label: label.into(),
            eval: Arc::new(eval),
            log_eval: None,
            convex,
        };
        phi.validate()?;
        Ok(phi)
    }

    /// Supplies an overflow-safe `log Φ`.
    pub fn with_log<F>(mut self, log_eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.log_eval = Some(Arc::new(log_eval));
        self
    }

    fn validate(&self) -> Result<()> {
        let ts = sample_points();
        let vals: Vec<f64> = ts.iter().map(|&t| self.eval(t)).collect();
        for (k, v) in vals.iter().enumerate() {
            if v.is_nan() || *v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{}: value {v} at t = {} is not in [0, ∞]",
                    self.label, ts[k]
                )));
            }
        }
        for k in 1..vals.len() {
            if vals[k] < vals[k - 1] {
                return Err(Error::InvalidInput(format!(
                    "{} decreases near t = {}",
                    self.label, ts[k]
                )));
            }
        }
        if self.convex {
            let v0 = vals[0];
            let mut prev = f64::NEG_INFINITY;
            for k in 1..vals.len() {
                let slope = (vals[k] - v0) / ts[k];
                if slope < prev * (1.0 - 1e-9) - 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "{} is declared convex but its slope decreases near t = {}",
                        self.label, ts[k]
                    )));
                }
                prev = slope;
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// `Φ(t)`; `t = ∞` returns the supremum.
    pub fn eval(&self, t: f64) -> f64 {
        if t.is_infinite() {
            return (self.eval)(f64::MAX);
        }
        (self.eval)(t)
    }

    /// `log Φ(t)`, using the supplied closed form when present.
    pub fn log_eval(&self, t: f64) -> f64 {
        match &self.log_eval {
            Some(l) => l(t),
            None => self.eval(t).ln(),
        }
    }

    /// `Φ(0)`.
    pub fn at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    /// `Φ(+0)`.
    pub fn at_zero_plus(&self) -> f64 {
        self.eval(f64::MIN_POSITIVE)
    }

    /// `sup{t : Φ(t) = 0}` (0 when `Φ(0) > 0`, `∞` when `Φ ≡ 0`).
    pub fn zero_threshold(&self) -> f64 {
        if self.at_zero() > 0.0 {
            return 0.0;
        }
        // inf{t : Φ(t) > 0} = inf{t : Φ(t) ≥ τ} as τ ↓ 0; bisect the sign.
        monotone_inverse(|t| if self.eval(t) > 0.0 { 1.0 } else { 0.0 }, 0.5)
    }

    pub fn exp() -> Self {
        Self::new("exp", f64::exp, true).unwrap().with_log(|t| t)
    }

    /// `t^k` for `k ≥ 1`.
    pub fn power(k: f64) -> Result<Self> {
        if !(k >= 1.0) {
            return Err(Error::InvalidInput(format!(
                "power phi needs k >= 1, got {k}"
            )));
        }
        Ok(
            Self::new(format!("power:{k}"), move |t: f64| t.powf(k), true)?
                .with_log(move |t: f64| k * t.ln()),
        )
    }

    pub fn square() -> Self {
        Self::power(2.0).unwrap().relabel("square")
    }

    pub fn identity() -> Self {
        Self::power(1.0).unwrap().relabel("identity")
    }

    /// `exp(√t)`; convex only for `t ≥ 1` so declared non-convex.
    pub fn exp_sqrt() -> Self {
        Self::new("exp_sqrt", |t: f64| t.sqrt().exp(), false)
            .unwrap()
            .with_log(f64::sqrt)
    }

    /// `√t`, concave and sublinear.
    pub fn sqrt() -> Self {
        Self::new("sqrt", f64::sqrt, false).unwrap()
    }

    /// `t log(1 + t)`.
    pub fn t_log1p() -> Self {
        Self::new("t_log1p", |t: f64| t * t.ln_1p(), true).unwrap()
    }

    /// `exp(t / log(e + t))`.
    pub fn exp_t_over_log() -> Self {
        let log = |t: f64| t / (std::f64::consts::E + t).ln();
        Self::new("exp_t_over_log", move |t| log(t).exp(), false)
            .unwrap()
            .with_log(log)
    }

    /// `0` below `at`, `high` from `at` on.
    pub fn step(at: f64, high: f64) -> Result<Self> {
        Self::new(
            format!("step:{at}:{high}"),
            move |t| if t < at { 0.0 } else { high },
            false,
        )
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(format!("constant:{c}"), move |_| c, true)
    }

    fn relabel(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }

    /// Resolves a textual selector: `exp`, `square`, `identity`, `exp_sqrt`,
    /// `sqrt`, `t_log1p`, `exp_t_over_log`, `power:K`, `constant:C`,
    /// `step:AT:HIGH`.
    pub fn from_selector(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let num = |i: usize| -> Result<f64> {
            args.get(i)
                .ok_or_else(|| {
                    Error::InvalidInput(format!("phi selector '{s}' needs {} argument(s)", i + 1))
                })?
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("phi selector '{s}': {e}")))
        };
        match head {
            "exp" => Ok(Self::exp()),
            "square" => Ok(Self::square()),
            "identity" | "t" => Ok(Self::identity()),
            "exp_sqrt" => Ok(Self::exp_sqrt()),
            "sqrt" => Ok(Self::sqrt()),
            "t_log1p" => Ok(Self::t_log1p()),
            "exp_t_over_log" => Ok(Self::exp_t_over_log()),
            "power" => Self::power(num(0)?),
            "constant" => Self::constant(num(0)?),
            "step" => Self::step(num(0)?, num(1)?),
            _ => Err(Error::InvalidInput(format!("unknown phi selector '{s}'"))),
        }
    }
}

/// `inf{t ≥ 0 : f(t) ≥ τ}` for non-decreasing `f`, by geometric bracket
/// expansion and bisection. Returns `∞` when `f` stays below `τ` up to the
/// bracket cap.
pub fn monotone_inverse(f: impl Fn(f64) -> f64, tau: f64) -> f64 {
    if f(0.0) >= tau {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) < tau {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_CAP {
            return f64::INFINITY;
        }
    }
    for _ in 0..400 {
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let mid = if lo > 0.0 && hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= tau {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `Φ⁻¹(τ) = inf{t : Φ(t) ≥ τ}`.
pub fn phi_inverse(phi: &PhiFunction, tau: f64) -> f64 {
    monotone_inverse(|t| phi.eval(t), tau)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseCheck {
    pub pass: bool,
    /// Samples where `Φ⁻¹(Φ(t)) > t + tol`.
    pub violations: Vec<f64>,
    /// Samples with strict inequality, expected on constancy intervals.
    pub strict: Vec<f64>,
}

/// Checks `Φ⁻¹(Φ(t)) ≤ t` on the samples.
pub fn phi_inverse_of_phi_check(phi: &PhiFunction, samples: &[f64], tol: f64) -> InverseCheck {
    let mut violations = Vec::new();
    let mut strict = Vec::new();
    for &t in samples {
        let back = phi_inverse(phi, phi.eval(t));
        let slack = tol * t.abs().max(1.0);
        if back > t + slack {
            violations.push(t);
        } else if back < t - slack {
            strict.push(t);
        }
    }
    InverseCheck {
        pass: violations.is_empty(),
        violations,
        strict,
    }
}

/// `Φ_p`, `H_p` and their inverses for a fixed exponent `p`.
#[derive(Debug, Clone)]
pub struct Transforms<'a> {
    phi: &'a PhiFunction,
    p: f64,
    t_star: f64,
}

pub fn transforms(phi: &PhiFunction, p: f64) -> Result<Transforms<'_>> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "exponent p must be positive, got {p}"
        )));
    }
    Ok(Transforms {
        phi,
        p,
        t_star: phi.zero_threshold().powf(1.0 / p),
    })
}

impl Transforms<'_> {
    pub fn p(&self) -> f64 {
        self.p
    }

    /// `t₀ = sup{t : Φ_p(t) = 0}`.
    pub fn zero_threshold(&self) -> f64 {
        self.t_star
    }

    pub fn phi_p(&self, t: f64) -> f64 {
        self.phi.eval(t.powf(self.p))
    }

    pub fn h_p(&self, t: f64) -> f64 {
        self.phi.log_eval(t.powf(self.p))
    }

    /// `H_p'(t)`, zero on `[0, t₀]`; central differences with one
    /// Richardson level elsewhere.
    pub fn h_p_prime(&self, t: f64) -> f64 {
        if t <= self.t_star {
            return 0.0;
        }
        let h = (1e-4 * t).min(0.5 * (t - self.t_star));
        let d = |h: f64| (self.h_p(t + h) - self.h_p(t - h)) / (2.0 * h);
        let v = (4.0 * d(0.5 * h) - d(h)) / 3.0;
        if v.is_nan() {
            0.0
        } else {
            v
        }
    }

    /// `Φ_p⁻¹(τ)` by direct bisection on `Φ_p`.
    pub fn phi_p_inverse(&self, tau: f64) -> f64 {
        monotone_inverse(|t| self.phi_p(t), tau)
    }

    /// `H_p⁻¹(η) = inf{t : H_p(t) ≥ η}`.
    pub fn h_p_inverse(&self, eta: f64) -> f64 {
        monotone_inverse(|t| self.h_p(t), eta)
    }
}

/// The divergence conditions on `Φ` that the calculus classifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `∫_δ^∞ H_p'(t) dt/t`.
    HPrime,
    /// `∫_δ^∞ dH_p(t)/t`, as a Stieltjes sum.
    Stieltjes,
    /// `∫_δ^∞ H_p(t) dt/t²`.
    HOverSquare,
    /// `∫_0^Δ H_p(1/t) dt`.
    HReciprocal,
    /// `∫_{δ*}^∞ dη / H_p⁻¹(η)`.
    HInverse,
    /// `∫_{δ*}^∞ dτ / (τ Φ_p⁻¹(τ))`.
    PhiInverse,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::HPrime,
        Condition::Stieltjes,
        Condition::HOverSquare,
        Condition::HReciprocal,
        Condition::HInverse,
        Condition::PhiInverse,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Condition::HPrime => "h-prime",
            Condition::Stieltjes => "stieltjes",
            Condition::HOverSquare => "h-over-square",
            Condition::HReciprocal => "h-reciprocal",
            Condition::HInverse => "h-inverse",
            Condition::PhiInverse => "phi-inverse",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown condition '{s}'")))
    }
}

/// Growing-cutoff schedule: `decades` decades from the lower limit with
/// `per_decade` classifier segments each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSchedule {
    pub decades: f64,
    pub per_decade: usize,
    /// Stieltjes grid resolution.
    pub stieltjes_per_decade: usize,
}

impl Default for CutoffSchedule {
    fn default() -> Self {
        Self {
            decades: 8.0,
            per_decade: 4,
            stieltjes_per_decade: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub cutoff: f64,
    pub partial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    /// Condition name (one of [`Condition`], or `sufficiency` / `log-phi`).
    pub condition: String,
    pub p: f64,
    pub lower_limit: f64,
    pub verdict: Verdict,
    pub exponent: Option<f64>,
    /// Cumulative partial integrals at increasing cutoffs.
    pub trace: Vec<TracePoint>,
}

fn cumulative(segments: &[Segment], cutoff: impl Fn(f64) -> f64) -> Vec<TracePoint> {
    let mut total = 0.0;
    segments
        .iter()
        .map(|s| {
            total += s.increment;
            TracePoint {
                cutoff: cutoff(s.l_end),
                partial: total,
            }
        })
        .collect()
}

fn verdict_from(
    name: &str,
    p: f64,
    lower: f64,
    segments: &[Segment],
    cutoff: impl Fn(f64) -> f64,
    classifier: &GrowthClassifier,
) -> ConditionVerdict {
    let Classification {
        verdict, exponent, ..
    } = classifier.classify_detailed(segments);
    ConditionVerdict {
        condition: name.to_string(),
        p,
        lower_limit: lower,
        verdict,
        exponent,
        trace: cumulative(segments, cutoff),
    }
}

/// Default lower limit for a condition: `δ = t₀ + 1`, `Δ = 1/(t₀ + 1)`,
/// `δ* = max(H_p(+0), 0) + 1` or `Φ_p(+0) + 1`.
pub fn default_lower_limit(tr: &Transforms<'_>, condition: Condition) -> f64 {
    let t0 = tr.zero_threshold();
    match condition {
        Condition::HPrime | Condition::Stieltjes | Condition::HOverSquare => t0 + 1.0,
        Condition::HReciprocal => 1.0 / (t0 + 1.0),
        Condition::HInverse => tr.phi.at_zero_plus().ln().max(0.0) + 1.0,
        Condition::PhiInverse => tr.phi.at_zero_plus() + 1.0,
    }
}

fn check_lower_limit(tr: &Transforms<'_>, condition: Condition, lower: f64) -> Result<()> {
    let t0 = tr.zero_threshold();
    let ok = match condition {
        Condition::HPrime | Condition::Stieltjes | Condition::HOverSquare => {
            lower > t0 && lower.is_finite()
        }
        Condition::HReciprocal => lower > 0.0 && lower * t0 < 1.0,
        Condition::HInverse => lower > tr.phi.at_zero_plus().ln() && lower.is_finite(),
        Condition::PhiInverse => lower > tr.phi.at_zero_plus() && lower.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{condition}: lower limit {lower} does not clear the zero set of Φ_p (t0 = {t0}, Φ(+0) = {}); \
             there the integrand is -∞ or indeterminate and carries no information",
            tr.phi.at_zero_plus()
        )))
    }
}

/// Classifies one condition for `(Φ, p)` by partial integrals over the
/// schedule. `lower = None` picks [`default_lower_limit`].
pub fn classify_condition(
    phi: &PhiFunction,
    p: f64,
    condition: Condition,
    lower: Option<f64>,
    schedule: &CutoffSchedule,
    classifier: &GrowthClassifier,
) -> Result<ConditionVerdict> {
    let tr = transforms(phi, p)?;
    let lower = lower.unwrap_or_else(|| default_lower_limit(&tr, condition));
    check_lower_limit(&tr, condition, lower)?;
    let name = condition.as_str();
    let (d, k) = (schedule.decades, schedule.per_decade);
    let l0 = lower.ln();
    let segments = match condition {
        Condition::HPrime => trace_from_density(|l| tr.h_p_prime(l.exp()), l0, d, k),
        Condition::Stieltjes => stieltjes_segments(&tr, lower, schedule),
        Condition::HOverSquare => trace_from_density(|l| tr.h_p(l.exp()) * (-l).exp(), l0, d, k),
        Condition::HReciprocal => {
            // L = ln(1/t); dt = -t dL
            trace_from_density(|l| tr.h_p((-l).exp().recip()) * (-l).exp(), -l0, d, k)
        }
        Condition::HInverse => trace_from_density(|l| l.exp() / tr.h_p_inverse(l.exp()), l0, d, k),
        Condition::PhiInverse => trace_from_density(|l| 1.0 / tr.phi_p_inverse(l.exp()), l0, d, k),
    };
    let cutoff = |l: f64| {
        if condition == Condition::HReciprocal {
            (-l).exp()
        } else {
            l.exp()
        }
    };
    Ok(verdict_from(name, p, lower, &segments, cutoff, classifier))
}

fn stieltjes_segments(tr: &Transforms<'_>, lower: f64, schedule: &CutoffSchedule) -> Vec<Segment> {
    let per_segment = (schedule.stieltjes_per_decade / schedule.per_decade).max(1);
    let n_seg = (schedule.decades * schedule.per_decade as f64).round() as usize;
    let step = std::f64::consts::LN_10 / (per_segment * schedule.per_decade) as f64;
    let l0 = lower.ln();
    let mut h_prev = tr.h_p(lower);
    let mut segments = Vec::with_capacity(n_seg);
    for s in 0..n_seg {
        let mut inc = 0.0;
        for m in 0..per_segment {
            let idx = s * per_segment + m;
            let t_i = (l0 + idx as f64 * step).exp();
            let t_next = (l0 + (idx + 1) as f64 * step).exp();
            let h_next = tr.h_p(t_next);
            let dh = h_next - h_prev;
            inc += if dh.is_nan() { 0.0 } else { dh / t_i };
            h_prev = h_next;
        }
        segments.push(Segment {
            l_start: l0 + (s * per_segment) as f64 * step,
            l_end: l0 + ((s + 1) * per_segment) as f64 * step,
            increment: inc,
        });
    }
    segments
}

/// The sufficiency condition `∫_{δ0}^∞ dτ/(τ Φ⁻¹(τ)) = ∞`.
pub fn condition_sufficiency(
    phi: &PhiFunction,
    delta0: f64,
    schedule: &CutoffSchedule,
    classifier: &GrowthClassifier,
) -> Result<ConditionVerdict> {
    let tau0 = phi.at_zero();
    if !(delta0 > tau0) {
        return Err(Error::Precondition(format!(
            "sufficiency: δ0 = {delta0} must exceed Φ(0) = {tau0}; below it Φ⁻¹ vanishes and the integral carries no information"
        )));
    }
    let mut v = classify_condition(
        phi,
        1.0,
        Condition::PhiInverse,
        Some(delta0),
        schedule,
        classifier,
    )?;
    v.condition = "sufficiency".into();
    Ok(v)
}

/// The necessity condition `∫_δ^∞ log Φ(t) dt/t² = ∞`.
pub fn condition_log_phi(
    phi: &PhiFunction,
    delta: f64,
    schedule: &CutoffSchedule,
    classifier: &GrowthClassifier,
) -> Result<ConditionVerdict> {
    let t0 = phi.zero_threshold();
    if !(delta > t0) {
        return Err(Error::Precondition(format!(
            "log-phi: δ = {delta} must exceed t0 = {t0}"
        )));
    }
    let mut v = classify_condition(
        phi,
        1.0,
        Condition::HOverSquare,
        Some(delta),
        schedule,
        classifier,
    )?;
    v.condition = "log-phi".into();
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryRow {
    pub phi: String,
    pub p: f64,
    /// One entry per condition; `Err` carries a precondition diagnostic.
    pub verdicts: Vec<(Condition, std::result::Result<Verdict, String>)>,
    /// All decisive verdicts coincide.
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceBattery {
    pub rows: Vec<BatteryRow>,
    pub all_agree: bool,
    /// A divergent verdict at `p` persists at every larger sampled `p`.
    pub monotone_in_p: bool,
}

/// Classifies every condition for every `(Φ, p)` pair.
pub fn equivalence_battery(
    phis: &[PhiFunction],
    ps: &[f64],
    schedule: &CutoffSchedule,
    classifier: &GrowthClassifier,
) -> EquivalenceBattery {
    let mut sorted_ps = ps.to_vec();
    sorted_ps.sort_by(f64::total_cmp);
    let mut rows = Vec::new();
    let mut monotone = true;
    for phi in phis {
        let mut phi_rows = Vec::new();
        for &p in &sorted_ps {
            let verdicts: Vec<_> = Condition::ALL
                .iter()
                .map(|&c| {
                    let v = classify_condition(phi, p, c, None, schedule, classifier)
                        .map(|v| v.verdict)
                        .map_err(|e| e.to_string());
                    (c, v)
                })
                .collect();
            let decisive: Vec<Verdict> = verdicts
                .iter()
                .filter_map(|(_, v)| v.as_ref().ok().copied())
                .filter(|v| v.is_decisive())
                .collect();
            let agree = decisive.windows(2).all(|w| w[0] == w[1]);
            phi_rows.push(BatteryRow {
                phi: phi.label().to_string(),
                p,
                verdicts,
                agree,
            });
        }
        for (ci, _) in Condition::ALL.iter().enumerate() {
            let mut seen_divergent = false;
            for row in &phi_rows {
                match &row.verdicts[ci].1 {
                    Ok(Verdict::Divergent) => seen_divergent = true,
                    Ok(Verdict::Convergent) if seen_divergent => monotone = false,
                    _ => {}
                }
            }
        }
        rows.extend(phi_rows);
    }
    let all_agree = rows.iter().all(|r| r.agree);
    EquivalenceBattery {
        rows,
        all_agree,
        monotone_in_p: monotone,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearGrowth {
    pub c: f64,
    pub t: f64,
}

/// Witnesses `Φ(t) ≥ C·t` on `[T, ∞)`, or `None` when the sampled ratio
/// `Φ(t)/t` decays at the top of the range.
pub fn linear_growth_check(phi: &PhiFunction) -> Option<LinearGrowth> {
    let ts: Vec<f64> = (0..=180)
        .map(|k| 10f64.powf(-6.0 + k as f64 / 10.0))
        .collect();
    let ratio: Vec<f64> = ts.iter().map(|&t| phi.eval(t) / t).collect();
    let n = ts.len();
    let top = ratio[n - 1];
    if !(top > 0.0) || top < ratio[n - 11] * (1.0 - 1e-9) {
        return None;
    }
    let min_from = |start: usize| ratio[start..].iter().copied().fold(f64::INFINITY, f64::min);
    // T = 0 is allowed when the ratio does not vanish towards the origin.
    if ratio[0] >= ratio[10] * (1.0 - 1e-9) {
        let c = min_from(0);
        if c > 0.0 {
            return Some(LinearGrowth { c, t: 0.0 });
        }
    }
    for decade in 0..=12 {
        let start = 60 + 10 * decade;
        let c = min_from(start);
        if c > 0.0 {
            return Some(LinearGrowth { c, t: ts[start] });
        }
    }
    None
}
