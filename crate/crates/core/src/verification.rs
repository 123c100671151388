//! Distortion bounds, two-sided mean inequalities, class membership and
//! equicontinuity probes on evaluable maps.
//!
//! Every checker returns a report carrying both sides of the inequality at
//! each sample so that callers can tabulate margins; `pass` is derived from
//! the samples, never asserted independently.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{spherical_diameter, spherical_distance, Domain, ExtendedPoint, Ring};
use crate::growth::{GrowthClassifier, Verdict};
use crate::mappings::{self, MappingModel};
use crate::means::{
    circle_integral, circle_mean, default_epsilon_schedule, divergence_at_zero, fmo_estimate,
    FmoConfig, FmoVerdict, FnProfile,
};
use crate::modulus::{
    annulus_modulus, extremal_weight_ring, image_annulus_modulus, lower_rhs, ring_rhs, CurveKind,
    RadialWeight,
};
use crate::phi::{
    classify_condition, condition_sufficiency, linear_growth_check, phi_inverse, transforms,
    Condition, CutoffSchedule, PhiFunction,
};
use crate::quad::{integrate, integrate_log, QuadConfig};

/// Absolute tolerance for closed-form comparisons.
pub const CLOSED_FORM_TOL: f64 = 1e-6;
/// Relative tolerance for comparisons between two quadratures.
pub const QUADRATURE_REL_TOL: f64 = 0.01;
/// Omitted-set gap used for disk-to-disk maps.
pub const DEFAULT_GAP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisStatus {
    Verified,
    Violated,
    Assumed,
}

/// Direction of a checked inequality `lhs ≤ rhs` or `lhs ≥ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundSample {
    /// Distance to the centre (or the scale parameter `ε`).
    pub radius: f64,
    pub angle: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub map: String,
    pub ring: Option<String>,
    pub relation: Relation,
    pub hypothesis: HypothesisStatus,
    pub diagnosis: Option<String>,
    pub parameters: Vec<(String, f64)>,
    pub tolerance: f64,
    pub samples: Vec<BoundSample>,
    /// Smallest signed slack over the samples (`rhs - lhs` for `AtMost`).
    pub min_margin: f64,
    pub pass: bool,
}

/// Tolerance pair: `abs + rel·|rhs|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const CLOSED_FORM: Tolerance = Tolerance {
        abs: CLOSED_FORM_TOL,
        rel: 1e-6,
    };
    pub const QUADRATURE: Tolerance = Tolerance {
        abs: CLOSED_FORM_TOL,
        rel: QUADRATURE_REL_TOL,
    };

    fn slack(&self, rhs: f64) -> f64 {
        self.abs + self.rel * rhs.abs()
    }
}

struct ReportBuilder {
    report: BoundReport,
    tol: Tolerance,
}

impl ReportBuilder {
    fn new(name: &str, map: &str, relation: Relation, tol: Tolerance) -> Self {
        Self {
            report: BoundReport {
                name: name.into(),
                map: map.into(),
                ring: None,
                relation,
                hypothesis: HypothesisStatus::Assumed,
                diagnosis: None,
                parameters: Vec::new(),
                tolerance: tol.abs,
                samples: Vec::new(),
                min_margin: f64::INFINITY,
                pass: false,
            },
            tol,
        }
    }

    fn ring(mut self, ring: Option<&Ring>) -> Self {
        self.report.ring = ring.map(|r| r.to_string());
        self
    }

    fn param(mut self, key: &str, value: f64) -> Self {
        self.report.parameters.push((key.into(), value));
        self
    }

    fn hypothesis(&mut self, status: HypothesisStatus, diagnosis: Option<String>) {
        self.report.hypothesis = status;
        if diagnosis.is_some() {
            self.report.diagnosis = diagnosis;
        }
    }

    fn sample(&mut self, radius: f64, angle: f64, lhs: f64, rhs: f64) {
        let margin = match self.report.relation {
            Relation::AtMost => rhs - lhs,
            Relation::AtLeast => lhs - rhs,
        };
        let pass = !margin.is_nan() && margin >= -self.tol.slack(rhs);
        self.report.min_margin = self.report.min_margin.min(if margin.is_nan() {
            f64::NEG_INFINITY
        } else {
            margin
        });
        self.report.samples.push(BoundSample {
            radius,
            angle,
            lhs,
            rhs,
            pass,
        });
    }

    fn finish(mut self) -> BoundReport {
        self.report.pass = self.report.hypothesis != HypothesisStatus::Violated
            && !self.report.samples.is_empty()
            && self.report.samples.iter().all(|s| s.pass);
        self.report
    }
}

/// Seeded sample layout: `radii` log-uniform radii times `angles` uniform
/// angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleDesign {
    pub radii: usize,
    pub angles: usize,
    pub seed: u64,
}

impl Default for SampleDesign {
    fn default() -> Self {
        Self {
            radii: 100,
            angles: 100,
            seed: 0,
        }
    }
}

impl SampleDesign {
    pub fn len(&self) -> usize {
        self.radii * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Radii in `[lo, hi)` sorted increasingly, and angles in `[0, 2π)`.
    pub fn draw(&self, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let span = (hi / lo).ln();
        let mut radii: Vec<f64> = (0..self.radii)
            .map(|_| lo * (span * rng.gen::<f64>()).exp())
            .collect();
        radii.sort_by(f64::total_cmp);
        let angles = (0..self.angles)
            .map(|_| 2.0 * PI * rng.gen::<f64>())
            .collect();
        (radii, angles)
    }
}

/// `r ↦ q_{z0}(r)`, the circle mean of `K_f`. Radial maps about the origin
/// are evaluated on one ray.
pub fn distortion_mean<'a>(
    f: &'a MappingModel,
    z0: Complex64,
) -> Box<dyn Fn(f64) -> f64 + Send + Sync + 'a> {
    if f.radial().is_some() && z0.norm() == 0.0 {
        Box::new(move |r| f.distortion_at(Complex64::new(r, 0.0)))
    } else {
        Box::new(move |r| {
            circle_mean(|z| f.distortion_at(z), z0, r, f.domain()).unwrap_or(f64::NAN)
        })
    }
}

fn recip(q: f64) -> f64 {
    if q.is_infinite() {
        0.0
    } else {
        1.0 / q
    }
}

/// `I(r, ε0)` at increasing radii by cumulative integration of `1/(r q)`.
fn cumulative_i(
    q: &(dyn Fn(f64) -> f64 + Send + Sync + '_),
    radii: &[f64],
    eps0: f64,
) -> Result<Vec<f64>> {
    let cfg = QuadConfig::default();
    let mut out = vec![0.0; radii.len()];
    let mut acc = 0.0;
    let mut upper = eps0;
    for (k, &r) in radii.iter().enumerate().rev() {
        let qr = q(r);
        if qr == 0.0 {
            return Err(Error::Precondition(format!(
                "mean distortion vanishes at r = {r}"
            )));
        }
        acc += integrate_log(|t| recip(q(t)) / t, r, upper, cfg).value;
        out[k] = acc;
        upper = r;
    }
    Ok(out)
}

/// Spherical diameter of the omitted set `C̄ \ image`, from a polar sample
/// of the extended plane.
pub fn omitted_diameter(image: &Domain) -> Result<f64> {
    let mut pts = vec![ExtendedPoint::Infinity];
    if !image.contains(Complex64::new(0.0, 0.0)) {
        pts.push(ExtendedPoint::finite(0.0, 0.0));
    }
    for k in -24..=24 {
        let r = 10f64.powf(k as f64 / 8.0);
        for j in 0..64 {
            let w = Complex64::from_polar(r, j as f64 * PI / 32.0);
            if !image.contains(w) {
                pts.push(ExtendedPoint::Finite(w));
            }
        }
    }
    spherical_diameter(&pts)
}

fn gap_hypothesis(f: &MappingModel, delta: f64) -> (HypothesisStatus, Option<String>) {
    match f.image().map(omitted_diameter) {
        Some(Ok(d)) if d >= delta => (HypothesisStatus::Verified, None),
        Some(Ok(d)) => (
            HypothesisStatus::Violated,
            Some(format!(
                "omitted set has spherical diameter {d} < Δ = {delta}"
            )),
        ),
        _ => (
            HypothesisStatus::Assumed,
            Some("image domain unknown; omitted-set gap assumed".into()),
        ),
    }
}

fn check_centre(f: &MappingModel, z0: Complex64, eps0: f64) -> Result<()> {
    if !(eps0 > 0.0) {
        return Err(Error::Precondition(format!(
            "eps0 must be positive, got {eps0}"
        )));
    }
    match f.domain().boundary_distance(z0) {
        Some(d) if eps0 > d => Err(Error::Precondition(format!(
            "eps0 = {eps0} exceeds the distance {d} from {z0} to the boundary"
        ))),
        _ if !f.domain().contains(z0) => Err(Error::OutsideDomain {
            point: z0,
            domain: f.domain().description(),
        }),
        _ => Ok(()),
    }
}

fn spherical_gap(f: &MappingModel, z: Complex64, w0: ExtendedPoint) -> f64 {
    spherical_distance(f.eval(z), w0)
}

/// `(32/Δ)·exp(-(2π/c)·I^{2-p})`.
pub fn exponential_bound(delta: f64, c: f64, p: f64, i_val: f64) -> Result<f64> {
    if !(delta > 0.0 && c > 0.0 && p <= 2.0 && i_val > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need Δ > 0, c > 0, p ≤ 2, I > 0; got Δ = {delta}, c = {c}, p = {p}, I = {i_val}"
        )));
    }
    Ok(32.0 / delta * (-(2.0 * PI / c) * i_val.powf(2.0 - p)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRow {
    pub eps: f64,
    /// `∫_{ε<|z-z0|<ε0} K ψ_ε² dA`.
    pub weighted: f64,
    /// `I(ε) = ∫_ε^{ε0} ψ_ε`.
    pub i_val: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedHypothesis {
    pub status: HypothesisStatus,
    pub diagnosis: Option<String>,
    pub p: f64,
    /// Minimal `c` with `weighted ≤ c·I^p` over the schedule.
    pub c_min: f64,
    pub rows: Vec<HypothesisRow>,
}

/// Checks `∫ K ψ_ε² dA ≤ c·I(ε)^p` with `0 < I(ε) < ∞` along a schedule and
/// reports the minimal admissible `c`.
pub fn weighted_hypothesis<K, W>(
    k: K,
    z0: Complex64,
    eps0: f64,
    psi: W,
    p: f64,
    schedule: &[f64],
) -> WeightedHypothesis
where
    K: Fn(Complex64) -> f64,
    W: Fn(f64, f64) -> f64,
{
    let plane = Domain::plane();
    let cfg = QuadConfig::default();
    let mut rows = Vec::with_capacity(schedule.len());
    let mut c_min: f64 = 0.0;
    let mut violation = None;
    if p > 2.0 {
        violation = Some(format!("exponent p = {p} exceeds 2"));
    }
    for &eps in schedule {
        if !(eps > 0.0 && eps < eps0) {
            violation = Some(format!("schedule value {eps} outside (0, {eps0})"));
            continue;
        }
        let weighted = integrate_log(
            |r| {
                let w = psi(eps, r);
                if w == 0.0 {
                    return 0.0;
                }
                w * w
                    * circle_integral(&k, z0, r, &plane)
                        .map(|c| c.value)
                        .unwrap_or(f64::NAN)
            },
            eps,
            eps0,
            cfg,
        )
        .value;
        let i_val = integrate_log(|t| psi(eps, t), eps, eps0, cfg).value;
        if !(i_val > 0.0 && i_val.is_finite()) {
            violation = Some(format!("I(ε) = {i_val} at ε = {eps} is not in (0, ∞)"));
        } else {
            c_min = c_min.max(weighted / i_val.powf(p));
        }
        rows.push(HypothesisRow {
            eps,
            weighted,
            i_val,
        });
    }
    WeightedHypothesis {
        status: if violation.is_some() {
            HypothesisStatus::Violated
        } else {
            HypothesisStatus::Verified
        },
        diagnosis: violation,
        p,
        c_min,
        rows,
    }
}

fn log_schedule(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / n as f64))
        .collect()
}

/// The exponential bound with `ψ(t) = 1/t` and `p = 1`: the hypothesis
/// constant `c` is fitted on the sampled scales, then
/// `h(f(z), f(z0)) ≤ (32/Δ)(|z - z0|/ε0)^{2π/c}` is checked.
pub fn weighted_exponential_check(
    f: &MappingModel,
    ring: &Ring,
    delta: f64,
    design: &SampleDesign,
) -> Result<BoundReport> {
    let z0 = ring.center();
    let eps0 = ring.outer();
    check_centre(f, z0, eps0)?;
    let (radii, angles) = design.draw(ring.inner(), eps0);
    let schedule = log_schedule(ring.inner(), eps0, 16);
    let hyp = weighted_hypothesis(
        |z| f.distortion_at(z),
        z0,
        eps0,
        |_, t| 1.0 / t,
        1.0,
        &schedule,
    );
    let mut b = ReportBuilder::new(
        "weighted-exponential",
        f.label(),
        Relation::AtMost,
        Tolerance::CLOSED_FORM,
    )
    .ring(Some(ring))
    .param("c", hyp.c_min)
    .param("p", 1.0)
    .param("delta", delta);
    let (status, diag) = gap_hypothesis(f, delta);
    b.hypothesis(status, diag);
    if hyp.status == HypothesisStatus::Violated {
        b.hypothesis(HypothesisStatus::Violated, hyp.diagnosis.clone());
        return Ok(b.finish());
    }
    let w0 = f.eval(z0);
    for &r in &radii {
        let rhs = exponential_bound(delta, hyp.c_min, 1.0, (eps0 / r).ln())?;
        for &a in &angles {
            let lhs = spherical_gap(f, z0 + Complex64::from_polar(r, a), w0);
            b.sample(r, a, lhs, rhs);
        }
    }
    Ok(b.finish())
}

/// `h(f(z), f(z0)) ≤ (32/Δ)·exp(-∫_{|z-z0|}^{ε0} dr/(r q(r)))` with
/// `ε0 = ring.outer()`, sampled over the ring.
pub fn mean_distortion_check(
    f: &MappingModel,
    ring: &Ring,
    delta: f64,
    design: &SampleDesign,
) -> Result<BoundReport> {
    let z0 = ring.center();
    let eps0 = ring.outer();
    check_centre(f, z0, eps0)?;
    let q = distortion_mean(f, z0);
    let (radii, angles) = design.draw(ring.inner(), eps0);
    let i_vals = cumulative_i(q.as_ref(), &radii, eps0)?;
    let mut b = ReportBuilder::new(
        "mean-distortion",
        f.label(),
        Relation::AtMost,
        Tolerance::CLOSED_FORM,
    )
    .ring(Some(ring))
    .param("eps0", eps0)
    .param("delta", delta);
    let (status, diag) = gap_hypothesis(f, delta);
    b.hypothesis(status, diag);
    let w0 = f.eval(z0);
    for (k, &r) in radii.iter().enumerate() {
        let rhs = 32.0 / delta * (-i_vals[k]).exp();
        for &a in &angles {
            let lhs = spherical_gap(f, z0 + Complex64::from_polar(r, a), w0);
            b.sample(r, a, lhs, rhs);
        }
    }
    Ok(b.finish())
}

/// Right side of [`mean_distortion_check`] at the given radii.
pub fn mean_distortion_rhs(
    f: &MappingModel,
    z0: Complex64,
    eps0: f64,
    delta: f64,
    radii: &[f64],
) -> Result<Vec<f64>> {
    let q = distortion_mean(f, z0);
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    let i_vals = cumulative_i(q.as_ref(), &sorted, eps0)?;
    Ok(radii
        .iter()
        .map(|r| {
            let k = sorted.partition_point(|x| x < r);
            32.0 / delta * (-i_vals[k]).exp()
        })
        .collect())
}

/// Logarithmic bound `h ≤ (32/Δ)·log(1/ε0)/log(1/|z - z0|)` under
/// `q(r) ≤ log(1/r)` on `(0, ε0)`.
pub fn log_distortion_check(
    f: &MappingModel,
    z0: Complex64,
    eps0: f64,
    delta: f64,
    design: &SampleDesign,
) -> Result<BoundReport> {
    check_centre(f, z0, eps0)?;
    if eps0 >= 1.0 {
        return Err(Error::Precondition(format!(
            "logarithmic bound needs eps0 < 1, got {eps0}"
        )));
    }
    let q = distortion_mean(f, z0);
    let lo = eps0 * 1e-6;
    let (radii, angles) = design.draw(lo, eps0);
    let mut b = ReportBuilder::new(
        "log-distortion",
        f.label(),
        Relation::AtMost,
        Tolerance::CLOSED_FORM,
    )
    .param("eps0", eps0)
    .param("delta", delta);
    let (status, diag) = gap_hypothesis(f, delta);
    b.hypothesis(status, diag);
    let probe = log_schedule(lo, eps0, 64);
    if let Some(r) = probe
        .iter()
        .chain(&radii)
        .find(|&&r| q(r) > (1.0 / r).ln() * (1.0 + 1e-9))
    {
        b.hypothesis(
            HypothesisStatus::Violated,
            Some(format!(
                "q({r}) = {} exceeds log(1/r) = {}",
                q(*r),
                (1.0 / r).ln()
            )),
        );
    }
    let w0 = f.eval(z0);
    let l0 = (1.0 / eps0).ln();
    for &r in &radii {
        let rhs = 32.0 / delta * l0 / (1.0 / r).ln();
        for &a in &angles {
            let lhs = spherical_gap(f, z0 + Complex64::from_polar(r, a), w0);
            b.sample(r, a, lhs, rhs);
        }
    }
    Ok(b.finish())
}

/// Envelope constant `c = max q(r)/log(1/r)` over log-spaced radii in
/// `[lo, eps0]`.
pub fn log_envelope(f: &MappingModel, z0: Complex64, lo: f64, eps0: f64) -> f64 {
    let q = distortion_mean(f, z0);
    log_schedule(lo, eps0, 400)
        .into_iter()
        .chain([eps0])
        .map(|r| q(r) / (1.0 / r).ln())
        .fold(0.0, f64::max)
}

/// Power bound `h ≤ (32/Δ)·[log(1/ε0)/log(1/|z - z0|)]^{1/c}` with `c` the
/// envelope constant of `q(r) ≤ c·log(1/r)` on the sampled radii.
pub fn power_bound_check(
    f: &MappingModel,
    ring: &Ring,
    delta: f64,
    design: &SampleDesign,
) -> Result<BoundReport> {
    let z0 = ring.center();
    let eps0 = ring.outer();
    check_centre(f, z0, eps0)?;
    if eps0 >= 1.0 {
        return Err(Error::Precondition(format!(
            "power bound needs eps0 < 1, got {eps0}"
        )));
    }
    let (radii, angles) = design.draw(ring.inner(), eps0);
    let c = log_envelope(f, z0, ring.inner(), eps0).max(
        radii
            .iter()
            .map(|&r| distortion_mean(f, z0)(r) / (1.0 / r).ln())
            .fold(0.0, f64::max),
    );
    let mut b = ReportBuilder::new("power", f.label(), Relation::AtMost, Tolerance::CLOSED_FORM)
        .ring(Some(ring))
        .param("c", c)
        .param("delta", delta);
    let (status, diag) = gap_hypothesis(f, delta);
    b.hypothesis(status, diag);
    let w0 = f.eval(z0);
    let l0 = (1.0 / eps0).ln();
    for &r in &radii {
        let rhs = 32.0 / delta * (l0 / (1.0 / r).ln()).powf(1.0 / c);
        for &a in &angles {
            let lhs = spherical_gap(f, z0 + Complex64::from_polar(r, a), w0);
            b.sample(r, a, lhs, rhs);
        }
    }
    Ok(b.finish())
}

/// Minimal `c` with `∫_{ε<|z|<1} K_f dA/|z|² ≤ c·log(1/ε)` on the schedule
/// `ε = 10^{-k/4}`, `k = 1..=32`.
pub fn disk_hypothesis_constant(f: &MappingModel) -> f64 {
    let q = distortion_mean(f, Complex64::new(0.0, 0.0));
    let cfg = QuadConfig::default();
    let schedule: Vec<f64> = (1..=32).map(|k| 10f64.powf(-(k as f64) / 4.0)).collect();
    let mut c: f64 = 0.0;
    let mut acc = 0.0;
    let mut upper = 1.0;
    for &eps in &schedule {
        acc += integrate_log(|r| 2.0 * PI * q(r) / r, eps, upper, cfg).value;
        upper = eps;
        c = c.max(acc / (1.0 / eps).ln());
    }
    c
}

/// Self-maps of the unit disk fixing the origin: `|f(z)| ≤ 64|z|^{2π/c}`
/// with `c` the minimal hypothesis constant.
pub fn disk_power_check(f: &MappingModel, design: &SampleDesign) -> Result<BoundReport> {
    let origin = Complex64::new(0.0, 0.0);
    let w0 = f
        .eval(origin)
        .as_finite()
        .ok_or_else(|| Error::Precondition("f(0) is not finite".into()))?;
    if w0.norm() > 1e-12 {
        return Err(Error::Precondition(format!("f(0) = {w0} is not 0")));
    }
    let c = disk_hypothesis_constant(f);
    let mut b = ReportBuilder::new(
        "disk-power",
        f.label(),
        Relation::AtMost,
        Tolerance::CLOSED_FORM,
    )
    .param("c", c);
    match f.image() {
        Some(img) => {
            let inside = (0..64).all(|k| {
                let w = f.eval(Complex64::from_polar(0.999_999, k as f64 * PI / 32.0));
                w.as_finite()
                    .is_some_and(|w| w.norm() < 1.0 + 1e-12 && img.contains(w))
            });
            b.hypothesis(
                if inside {
                    HypothesisStatus::Verified
                } else {
                    HypothesisStatus::Violated
                },
                (!inside).then(|| "f does not map the unit disk into itself".to_string()),
            );
        }
        None => b.hypothesis(HypothesisStatus::Assumed, None),
    }
    let (radii, angles) = design.draw(1e-6, 1.0);
    for &r in &radii {
        let rhs = 64.0 * r.powf(2.0 * PI / c);
        for &a in &angles {
            let lhs = f
                .eval(Complex64::from_polar(r, a))
                .as_finite()
                .map_or(f64::INFINITY, |w| w.norm());
            b.sample(r, a, lhs, rhs);
        }
    }
    Ok(b.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaFit {
    pub map: String,
    pub beta0: f64,
    pub eps0: f64,
    pub pass: bool,
    pub fmo: FmoVerdict,
}

/// Empirical exponent for `h ≤ (32/Δ)·[log(1/ε0)/log(1/|z - z0|)]^β`.
///
/// Requires a bounded mean-oscillation verdict for `K_f` at `z0`; searches
/// `ε0` over the given schedule and reports the largest `β` on a `1e-3`
/// grid that holds at every sample.
pub fn fmo_power_fit(
    f: &MappingModel,
    z0: Complex64,
    eps0_schedule: &[f64],
    delta: f64,
    design: &SampleDesign,
) -> Result<BetaFit> {
    let fmo = fmo_estimate(
        |z| f.distortion_at(z),
        z0,
        &default_epsilon_schedule(),
        f.domain(),
        FmoConfig::default(),
    )?;
    if fmo.verdict != FmoVerdict::Bounded {
        return Err(Error::HypothesisFails(format!(
            "distortion of '{}' has no finite mean oscillation at {z0} (verdict {:?})",
            f.label(),
            fmo.verdict
        )));
    }
    let w0 = f.eval(z0);
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for &eps0 in eps0_schedule {
        if check_centre(f, z0, eps0).is_err() || eps0 >= 1.0 {
            continue;
        }
        let (radii, angles) = design.draw(eps0 * 1e-6, eps0);
        let l0 = (1.0 / eps0).ln();
        let mut beta = 100.0f64;
        for &r in &radii {
            let ratio = l0 / (1.0 / r).ln();
            for &a in &angles {
                let h = spherical_gap(f, z0 + Complex64::from_polar(r, a), w0);
                if h > 0.0 {
                    beta = beta.min((h * delta / 32.0).ln() / ratio.ln());
                }
            }
        }
        let beta = (beta * 1000.0).floor() / 1000.0;
        if beta > best.0 {
            best = (beta, eps0);
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Precondition(
            "no admissible eps0 in the schedule".into(),
        ));
    }
    Ok(BetaFit {
        map: f.label().to_string(),
        beta0: best.0,
        eps0: best.1,
        pass: best.0 > 0.0,
        fmo: fmo.verdict,
    })
}

/// Mean of `g` over the ring `ε < |z| < 1` about the origin.
fn ring_mean<G: Fn(Complex64) -> f64>(g: G, eps: f64) -> f64 {
    let plane = Domain::plane();
    let cfg = QuadConfig::default();
    let total = integrate(
        |r| circle_integral(&g, Complex64::new(0.0, 0.0), r, &plane).map_or(f64::NAN, |c| c.value),
        eps,
        1.0,
        cfg,
    )
    .value;
    total / (PI * (1.0 - eps * eps))
}

/// `½ ∫_{eM}^{M/ε²} dτ / (τ [Φ⁻¹(τ)]^{1/p})`, zero on an empty range.
pub fn phi_tau_integral(phi: &PhiFunction, p: f64, m: f64, eps: f64) -> Result<f64> {
    let tr = transforms(phi, p)?;
    let (a, b) = (E * m, m / (eps * eps));
    if !(b > a) {
        return Ok(0.0);
    }
    let v = integrate(
        |l: f64| recip(tr.phi_p_inverse(l.exp())),
        a.ln(),
        b.ln(),
        QuadConfig::default(),
    )
    .value;
    Ok(0.5 * v)
}

#[allow(clippy::too_many_arguments)]
fn mean_inequality<Qf>(
    name: &str,
    label: &str,
    q: Qf,
    phi: &PhiFunction,
    p: f64,
    exponent: f64,
    truncate: bool,
    schedule: &[f64],
) -> Result<BoundReport>
where
    Qf: Fn(Complex64) -> f64,
{
    transforms(phi, p)?;
    let plane = Domain::plane();
    let origin = Complex64::new(0.0, 0.0);
    let qt = |z: Complex64| {
        let v = q(z);
        if truncate {
            v.max(1.0)
        } else {
            v
        }
    };
    let mut b = ReportBuilder::new(name, label, Relation::AtLeast, Tolerance::QUADRATURE)
        .param("p", p)
        .param("exponent", exponent);
    b.hypothesis(
        if phi.is_convex() && phi.at_zero_plus() > 0.0 {
            HypothesisStatus::Verified
        } else {
            HypothesisStatus::Assumed
        },
        None,
    );
    let cfg = QuadConfig::default();
    for &eps in schedule {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidInput(format!(
                "schedule value {eps} outside (0, 1)"
            )));
        }
        let m = ring_mean(|z| phi.eval(qt(z)), eps);
        if !m.is_finite() {
            return Err(Error::NotFinite(format!("ring mean of Φ∘Q at ε = {eps}")));
        }
        let lhs = integrate_log(
            |r| {
                let qr = circle_mean(&q, origin, r, &plane).unwrap_or(f64::NAN);
                recip(qr.powf(exponent)) / r
            },
            eps,
            1.0,
            cfg,
        )
        .value;
        let rhs = phi_tau_integral(phi, p, m, eps)?;
        b.sample(eps, 0.0, lhs, rhs);
    }
    Ok(b.finish())
}

/// `∫_ε^1 dr/(r q^{1/p}) ≥ ½ ∫_{eM(ε)}^{M(ε)/ε²} dτ/(τ[Φ⁻¹(τ)]^{1/p})` with
/// `M(ε)` the mean of `Φ∘Q` over `ε < |z| < 1`.
pub fn phi_mean_inequality<Qf>(
    label: &str,
    q: Qf,
    phi: &PhiFunction,
    p: f64,
    schedule: &[f64],
) -> Result<BoundReport>
where
    Qf: Fn(Complex64) -> f64,
{
    mean_inequality("phi-mean", label, q, phi, p, 1.0 / p, false, schedule)
}

/// The truncated form: exponent `λ/p` on `q`, and the ring mean taken of
/// `Φ∘Q_*` with `Q_* = max(Q, 1)`.
pub fn truncated_phi_mean_inequality<Qf>(
    label: &str,
    q: Qf,
    phi: &PhiFunction,
    p: f64,
    lambda: f64,
    schedule: &[f64],
) -> Result<BoundReport>
where
    Qf: Fn(Complex64) -> f64,
{
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput(format!(
            "lambda must lie in (0,1), got {lambda}"
        )));
    }
    mean_inequality(
        "truncated-phi-mean",
        label,
        q,
        phi,
        p,
        lambda / p,
        true,
        schedule,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferOutcome {
    Pass,
    Fail,
    NotApplicable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub label: String,
    pub phi: String,
    pub p: f64,
    /// `∫_{|z|<1} Φ(Q) dA`.
    pub integral: f64,
    pub condition: Verdict,
    pub conclusion: Verdict,
    pub outcome: TransferOutcome,
}

/// Finite `∫Φ(Q)` plus a divergent `∫dτ/(τ[Φ⁻¹]^{1/p})` should force
/// `∫_0 dr/(r q^{1/p}) = ∞`.
pub fn phi_divergence_transfer<Qf>(
    label: &str,
    q: Qf,
    phi: &PhiFunction,
    p: f64,
) -> Result<TransferReport>
where
    Qf: Fn(Complex64) -> f64,
{
    let plane = Domain::plane();
    let origin = Complex64::new(0.0, 0.0);
    let integral = integrate(
        |r| circle_integral(|z| phi.eval(q(z)), origin, r, &plane).map_or(f64::NAN, |c| c.value),
        0.0,
        1.0,
        QuadConfig::default(),
    )
    .value;
    let classifier = GrowthClassifier::default();
    let condition = classify_condition(
        phi,
        p,
        Condition::PhiInverse,
        Some(phi.at_zero().max(phi.at_zero_plus()) + 1.0),
        &CutoffSchedule::default(),
        &classifier,
    )?
    .verdict;
    let profile = FnProfile::new(
        |r: f64| circle_mean(&q, origin, r, &plane).map_or(f64::NAN, |m| m.powf(1.0 / p)),
        0.0,
        1.0,
    );
    let conclusion = divergence_at_zero(&profile, 0.5, &classifier).0.verdict;
    let outcome = if !integral.is_finite() || condition != Verdict::Divergent {
        TransferOutcome::NotApplicable
    } else {
        match conclusion {
            Verdict::Divergent => TransferOutcome::Pass,
            Verdict::Convergent => TransferOutcome::Fail,
            Verdict::Inconclusive => TransferOutcome::Inconclusive,
        }
    };
    Ok(TransferReport {
        label: label.into(),
        phi: phi.label().into(),
        p,
        integral,
        condition,
        conclusion,
        outcome,
    })
}

/// Budget `M` and omitted-set gap `Δ` defining the class.
#[derive(Debug, Clone)]
pub struct ClassConstraint {
    pub phi: PhiFunction,
    pub budget: f64,
    pub gap: f64,
}

impl ClassConstraint {
    pub fn new(phi: PhiFunction, budget: f64, gap: f64) -> Result<Self> {
        if !(budget > 0.0) {
            return Err(Error::InvalidInput(format!(
                "budget must be positive, got {budget}"
            )));
        }
        if !(gap > 0.0 && gap < 1.0) {
            return Err(Error::InvalidInput(format!(
                "gap must lie in (0,1), got {gap}"
            )));
        }
        Ok(Self { phi, budget, gap })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMembership {
    pub map: String,
    /// `∫_D Φ(K_f) dA / (1 + |z|²)²`.
    pub weighted_integral: f64,
    /// `∫_D Φ(K_f) dA`.
    pub unweighted_integral: f64,
    pub omitted_diameter: Option<f64>,
    pub budget: f64,
    pub gap: f64,
    /// `M·(1 + δ*²)` with `δ* = sup_D |z|`, for bounded domains.
    pub converted_budget: Option<f64>,
    pub member: bool,
    pub diagnosis: Option<String>,
}

/// Integrates `Φ(K_f)` over the domain in polar coordinates about the
/// origin and samples the omitted set of the declared image.
pub fn class_membership(f: &MappingModel, constraint: &ClassConstraint) -> Result<ClassMembership> {
    let origin = Complex64::new(0.0, 0.0);
    let domain = f.domain();
    let sup = domain.sup_distance(origin).ok_or_else(|| {
        Error::Precondition(format!(
            "class integral needs a bounded domain, got {}",
            domain.description()
        ))
    })?;
    let phi = &constraint.phi;
    let cfg = QuadConfig::default();
    let circle_l1 = |r: f64| -> f64 {
        if f.radial().is_some() && domain.boundary_distance(origin).is_some_and(|d| r < d) {
            2.0 * PI * r * phi.eval(f.distortion_at(Complex64::new(r, 0.0)))
        } else {
            match circle_integral(|z| phi.eval(f.distortion_at(z)), origin, r, domain) {
                Ok(c) => c.value,
                Err(Error::CircleMissesDomain { .. }) => 0.0,
                Err(_) => f64::NAN,
            }
        }
    };
    let weighted = integrate(|r| circle_l1(r) / (1.0 + r * r).powi(2), 0.0, sup, cfg).value;
    let unweighted = integrate(circle_l1, 0.0, sup, cfg).value;
    let omitted = f.image().map(omitted_diameter).transpose()?;
    let mut diagnosis = None;
    let mut member = true;
    if !weighted.is_finite() {
        member = false;
        diagnosis = Some("weighted integral is infinite".to_string());
    } else if weighted > constraint.budget {
        member = false;
        diagnosis = Some(format!(
            "weighted integral {weighted} exceeds the budget {}",
            constraint.budget
        ));
    }
    match omitted {
        Some(d) if d < constraint.gap => {
            member = false;
            diagnosis.get_or_insert(format!(
                "omitted set diameter {d} is below Δ = {}",
                constraint.gap
            ));
        }
        None => {
            member = false;
            diagnosis.get_or_insert("image domain unknown".to_string());
        }
        _ => {}
    }
    Ok(ClassMembership {
        map: f.label().into(),
        weighted_integral: weighted,
        unweighted_integral: unweighted,
        omitted_diameter: omitted,
        budget: constraint.budget,
        gap: constraint.gap,
        converted_budget: Some(constraint.budget * (1.0 + sup * sup)),
        member,
        diagnosis,
    })
}

/// Geometric `δ` grid for the continuity probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub delta_max: f64,
    pub delta_floor: f64,
    pub per_decade: usize,
    pub angles: usize,
    /// Radius at which the per-member gap `h(f(z), f(z0))` is recorded.
    pub probe_radius: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            delta_max: 0.999,
            delta_floor: 1e-8,
            per_decade: 8,
            angles: 16,
            probe_radius: 0.01,
        }
    }
}

pub fn default_probe_targets() -> Vec<f64> {
    vec![0.5, 0.2, 0.1, 0.05, 0.01]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberContinuity {
    pub map: String,
    /// Largest sampled `δ` per target `ε`; 0 when none works.
    pub deltas: Vec<f64>,
    /// `max_θ h(f(z0 + r e^{iθ}), f(z0))` at the probe radius.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityTable {
    pub center: Complex64,
    pub targets: Vec<f64>,
    pub members: Vec<MemberContinuity>,
    /// Infimum of `δ(ε)` over the family, per target.
    pub infimum: Vec<f64>,
    pub probe_radius: f64,
    pub max_gap: f64,
    pub uniform: bool,
}

/// Empirical modulus of continuity at `z0` for each member and the uniform
/// verdict over the family.
pub fn equicontinuity_probe(
    family: &[MappingModel],
    z0: Complex64,
    targets: &[f64],
    cfg: &ProbeConfig,
) -> ContinuityTable {
    let n = ((cfg.delta_max / cfg.delta_floor).log10() * cfg.per_decade as f64).round() as usize;
    let deltas: Vec<f64> = (0..=n)
        .map(|k| cfg.delta_max * (cfg.delta_floor / cfg.delta_max).powf(k as f64 / n as f64))
        .collect();
    let angles: Vec<f64> = (0..cfg.angles)
        .map(|j| (j as f64 + 0.5) * 2.0 * PI / cfg.angles as f64)
        .collect();
    let members: Vec<MemberContinuity> = family
        .iter()
        .map(|f| {
            let w0 = f.eval(z0);
            let ring_max: Vec<f64> = deltas
                .iter()
                .map(|&d| {
                    let r = d * (1.0 - 1e-6);
                    angles
                        .iter()
                        .map(|&a| spherical_gap(f, z0 + Complex64::from_polar(r, a), w0))
                        .fold(0.0, f64::max)
                })
                .collect();
            // sup over |z - z0| < δ_k: the maximum over all rings at or inside δ_k.
            let mut sup = vec![0.0; deltas.len()];
            let mut running: f64 = 0.0;
            for k in (0..deltas.len()).rev() {
                running = running.max(ring_max[k]);
                sup[k] = running;
            }
            let per_target = targets
                .iter()
                .map(|&eps| {
                    deltas
                        .iter()
                        .zip(&sup)
                        .find(|(_, &s)| s < eps)
                        .map_or(0.0, |(&d, _)| d)
                })
                .collect();
            let gap = angles
                .iter()
                .map(|&a| spherical_gap(f, z0 + Complex64::from_polar(cfg.probe_radius, a), w0))
                .fold(0.0, f64::max);
            MemberContinuity {
                map: f.label().into(),
                deltas: per_target,
                gap,
            }
        })
        .collect();
    let infimum: Vec<f64> = (0..targets.len())
        .map(|t| {
            members
                .iter()
                .map(|m| m.deltas[t])
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let uniform = infimum.iter().all(|&d| d > 0.0);
    let max_gap = members.iter().map(|m| m.gap).fold(0.0, f64::max);
    ContinuityTable {
        center: z0,
        targets: targets.to_vec(),
        members,
        infimum,
        probe_radius: cfg.probe_radius,
        max_gap,
        uniform,
    }
}

#[derive(Debug, Clone)]
pub struct CounterexampleFamily {
    pub members: Vec<MappingModel>,
    pub memberships: Vec<ClassMembership>,
    pub table: ContinuityTable,
    /// Level constant in `K(r) = max(1, Φ⁻¹(c / (r² L(r)²)))`.
    pub level: f64,
    pub cores: Vec<f64>,
}

/// Builds a family inside the class for `(Φ, M, Δ)` that is not
/// equicontinuous at the origin, when the sufficiency condition fails.
///
/// Member `m` is radial with `K(r) = max(1, Φ⁻¹(c/(r² L²)))`,
/// `L = 1 + log(1/r)`, on `4^{-m} < r < 1` and a similarity inside. Since
/// `∫ 2πr · c/(r²L²) dr = 2πc`, the budget is at most `πΦ(1) + 2πc`; `c` is
/// halved until every member passes [`class_membership`]. The radial
/// integral `∫ dt/(t K)` stays bounded as the core shrinks exactly when the
/// sufficiency integral converges, so the images of small circles stay
/// away from `f(0) = 0`.
pub fn counterexample_family(
    phi: &PhiFunction,
    budget: f64,
    gap: f64,
    targets: &[f64],
    probe: &ProbeConfig,
) -> Result<CounterexampleFamily> {
    let constraint = ClassConstraint::new(phi.clone(), budget, gap)?;
    let classifier = GrowthClassifier::default();
    let delta0 = phi.at_zero() + 1.0;
    let sufficiency = condition_sufficiency(phi, delta0, &CutoffSchedule::default(), &classifier)?;
    if sufficiency.verdict == Verdict::Divergent {
        return Err(Error::HypothesisFails(format!(
            "the sufficiency integral for '{}' diverges, so every class is equicontinuous",
            phi.label()
        )));
    }
    if linear_growth_check(phi).is_none() {
        return Err(Error::HypothesisFails(format!(
            "'{}' has no eventual linear growth",
            phi.label()
        )));
    }
    let phi1 = phi.eval(1.0);
    let mut level = 0.9 * (budget - PI * phi1) / (2.0 * PI);
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "budget {budget} does not exceed πΦ(1) = {}",
            PI * phi1
        )));
    }
    let cores: Vec<f64> = (1..=16).map(|m| 4f64.powi(-m)).collect();
    for _ in 0..20 {
        let members = cores
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let phi = phi.clone();
                let c = level;
                mappings::radial_from_distortion(
                    format!("counterexample:{}", i + 1),
                    move |r: f64| {
                        let l = 1.0 + (1.0 / r).ln();
                        phi_inverse(&phi, c / (r * r * l * l)).max(1.0)
                    },
                    s,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let memberships = members
            .iter()
            .map(|f| class_membership(f, &constraint))
            .collect::<Result<Vec<_>>>()?;
        if memberships.iter().all(|m| m.member) {
            let table = equicontinuity_probe(&members, Complex64::new(0.0, 0.0), targets, probe);
            return Ok(CounterexampleFamily {
                members,
                memberships,
                table,
                level,
                cores,
            });
        }
        level *= 0.5;
    }
    Err(Error::NotFinite(
        "no admissible level constant found for the class budget".into(),
    ))
}

/// Built-in map battery: identity, stretches of order 2 and 3, the
/// logarithmic map and the contraction of order 10.
pub fn battery_maps() -> Vec<MappingModel> {
    vec![
        mappings::identity(),
        mappings::radial_stretch(2.0).expect("valid exponent"),
        mappings::radial_stretch(3.0).expect("valid exponent"),
        mappings::log_type_map(),
        mappings::shrinking_stretch_family(&[10])
            .expect("valid index")
            .remove(0),
    ]
}

pub fn battery_rings() -> Vec<Ring> {
    [(0.05, 0.5), (0.1, 0.9), (0.2, 0.4)]
        .iter()
        .map(|&(a, b)| Ring::centered(a, b).expect("valid ring"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub map: String,
    pub ring: String,
    pub i_integral: f64,
    pub image_connecting: f64,
    /// `2π / I`.
    pub connecting_bound: f64,
    /// Ring functional for each admissible test weight.
    pub weight_bounds: Vec<(String, f64)>,
    pub image_separating: f64,
    /// `∫ dr / ‖K_f‖₁(r)`.
    pub lower_bound: f64,
    pub pass: bool,
}

/// Image moduli of a radial map against the ring and lower functionals of
/// its distortion.
pub fn modulus_chain_check(f: &MappingModel, ring: &Ring) -> Result<ChainReport> {
    let conn = image_annulus_modulus(f, ring, CurveKind::Connecting)?;
    let sep = image_annulus_modulus(f, ring, CurveKind::Separating)?;
    let g = f.clone();
    let extremal = extremal_weight_ring(move |z| g.distortion_at(z), ring)?;
    let k = |z: Complex64| f.distortion_at(z);
    let mut weight_bounds = Vec::new();
    for w in [
        extremal.weight.clone(),
        RadialWeight::uniform(ring),
        RadialWeight::logarithmic(ring),
    ] {
        let r = ring_rhs(k, ring, &w)?;
        if r.admissible {
            weight_bounds.push((w.label.clone(), r.value));
        }
    }
    let lower = lower_rhs(k, ring.center(), ring.inner(), ring.outer(), f.domain())?;
    let bound = 2.0 * PI / extremal.i_integral;
    let rel = 1e-6;
    let pass = conn <= bound * (1.0 + rel)
        && weight_bounds
            .iter()
            .all(|(_, v)| conn <= v * (1.0 + QUADRATURE_REL_TOL * 0.1) + CLOSED_FORM_TOL)
        && sep >= lower * (1.0 - rel)
        && (conn * sep - 1.0).abs() < 1e-9
        && (annulus_modulus(ring, CurveKind::Connecting) > 0.0);
    Ok(ChainReport {
        map: f.label().into(),
        ring: ring.to_string(),
        i_integral: extremal.i_integral,
        image_connecting: conn,
        connecting_bound: bound,
        weight_bounds,
        image_separating: sep,
        lower_bound: lower,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{
        identity, log_type_map, radial_stretch, shrinking_stretch_family, LOG_MAP_CORE,
    };

    const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

    fn small() -> SampleDesign {
        SampleDesign {
            radii: 20,
            angles: 8,
            seed: 7,
        }
    }

    #[test]
    fn exponential_bound_reference_values() {
        assert!((exponential_bound(1.0, 2.0 * PI, 1.0, 1.0).unwrap() - 32.0 / E).abs() < 1e-12);
        assert!((exponential_bound(1.0, 2.0 * PI, 1.0, 5f64.ln()).unwrap() - 6.4).abs() < 1e-12);
        let a = exponential_bound(0.5, 3.0, 2.0, 0.1).unwrap();
        let b = exponential_bound(0.5, 3.0, 2.0, 10.0).unwrap();
        assert!((a - b).abs() < 1e-12 && (a - 64.0 * (-2.0 * PI / 3.0).exp()).abs() < 1e-12);
        assert!(exponential_bound(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(exponential_bound(1.0, 1.0, 2.5, 1.0).is_err());
    }

    #[test]
    fn weighted_hypothesis_constants() {
        let sched = [1e-4, 1e-3, 0.01, 0.1];
        let h = weighted_hypothesis(|_| 3.0, ORIGIN, 0.5, |_, t| 1.0 / t, 1.0, &sched);
        assert_eq!(h.status, HypothesisStatus::Verified);
        assert!((h.c_min - 6.0 * PI).abs() < 1e-6);
        let h1 = weighted_hypothesis(|_| 1.0, ORIGIN, 0.5, |_, t| 1.0 / t, 1.0, &sched);
        assert!((h1.c_min - 2.0 * PI).abs() < 1e-6);
        let h0 = weighted_hypothesis(|_| 1.0, ORIGIN, 0.5, |_, _| 0.0, 1.0, &sched);
        assert_eq!(h0.status, HypothesisStatus::Violated);
    }

    #[test]
    fn mean_distortion_reference_values() {
        let f = radial_stretch(3.0).unwrap();
        let rhs = mean_distortion_rhs(&f, ORIGIN, 0.5, 1.0, &[0.1]).unwrap()[0];
        assert!((rhs - 32.0 * 0.2f64.powf(1.0 / 3.0)).abs() < 1e-6);
        assert!((rhs - 18.72).abs() < 0.01);
        let ring = Ring::centered(0.05, 0.5).unwrap();
        let rep = mean_distortion_check(&f, &ring, DEFAULT_GAP, &small()).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.hypothesis, HypothesisStatus::Verified);
        let id = identity();
        let rhs = mean_distortion_rhs(&id, ORIGIN, 0.5, 1.0, &[0.01, 0.2]).unwrap();
        assert!((rhs[0] - 32.0 * 0.02).abs() < 1e-8 && (rhs[1] - 32.0 * 0.4).abs() < 1e-8);
    }

    #[test]
    fn log_map_matches_logarithmic_form() {
        let f = log_type_map();
        let eps0 = LOG_MAP_CORE;
        let radii = [1e-6, 1e-4, 0.01];
        let rhs = mean_distortion_rhs(&f, ORIGIN, eps0, 1.0, &radii).unwrap();
        for (r, v) in radii.iter().zip(rhs) {
            let closed = 32.0 * (1.0 / eps0).ln() / (1.0 / r).ln();
            assert!((v - closed).abs() < 1e-6 * closed, "{v} vs {closed}");
        }
        let rep = log_distortion_check(&f, ORIGIN, eps0, DEFAULT_GAP, &small()).unwrap();
        assert!(rep.pass, "{:?}", rep.diagnosis);
        let bad = log_distortion_check(
            &radial_stretch(3.0).unwrap(),
            ORIGIN,
            0.3,
            DEFAULT_GAP,
            &small(),
        )
        .unwrap();
        assert_eq!(bad.hypothesis, HypothesisStatus::Violated);
        assert!(!bad.pass);
    }

    #[test]
    fn disk_power_reference_constants() {
        let f2 = radial_stretch(2.0).unwrap();
        assert!((disk_hypothesis_constant(&f2) - 4.0 * PI).abs() < 1e-6);
        assert!((disk_hypothesis_constant(&identity()) - 2.0 * PI).abs() < 1e-6);
        let f5 = radial_stretch(5.0).unwrap();
        assert!((disk_hypothesis_constant(&f5) - 10.0 * PI).abs() < 1e-6);
        assert!(disk_power_check(&f2, &small()).unwrap().pass);
        let shifted = MappingModel::new("shift", Domain::unit_disk(), |z: Complex64| {
            (0.5 * z + 0.1).into()
        });
        assert!(disk_power_check(&shifted, &small()).is_err());
    }

    #[test]
    fn beta_fit_reference_cases() {
        let sched = [0.5, 0.25, 0.1];
        let fit = fmo_power_fit(
            &radial_stretch(3.0).unwrap(),
            ORIGIN,
            &sched,
            DEFAULT_GAP,
            &small(),
        )
        .unwrap();
        assert!(fit.pass && fit.beta0 >= 1.0 / 3.0, "{fit:?}");
        let fit = fmo_power_fit(&identity(), ORIGIN, &sched, DEFAULT_GAP, &small()).unwrap();
        assert!(fit.beta0 >= 1.0);
        let err = fmo_power_fit(
            &crate::mappings::log_squared_map(),
            ORIGIN,
            &sched,
            DEFAULT_GAP,
            &small(),
        );
        assert!(matches!(err, Err(Error::HypothesisFails(_))));
    }

    #[test]
    fn phi_mean_worked_case() {
        let rep = phi_mean_inequality("one", |_| 1.0, &PhiFunction::exp(), 1.0, &[0.1]).unwrap();
        let s = rep.samples[0];
        assert!((s.lhs - 10f64.ln()).abs() < 1e-3);
        let expected = 0.5 * ((1.0 + 2.0 * 10f64.ln()).ln() - 2f64.ln());
        assert!((s.rhs - expected).abs() < 1e-3);
        assert!((s.rhs - 0.5153).abs() < 1e-3);
        assert!(rep.pass);
    }

    #[test]
    fn phi_mean_empty_range_near_one() {
        let rep = phi_mean_inequality("one", |_| 1.0, &PhiFunction::exp(), 1.0, &[0.7, 0.9, 0.99])
            .unwrap();
        assert!(rep.pass);
        assert_eq!(rep.samples[2].rhs, 0.0);
    }

    #[test]
    fn truncated_inequality_paths() {
        let sched = [0.01, 0.1, 0.5];
        let phi = PhiFunction::exp();
        let a = truncated_phi_mean_inequality("one", |_| 1.0, &phi, 1.0, 0.5, &sched).unwrap();
        let b = phi_mean_inequality("one", |_| 1.0, &phi, 1.0, &sched).unwrap();
        assert!(a.pass);
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((x.lhs - y.lhs).abs() < 1e-9);
        }
        assert!(
            truncated_phi_mean_inequality("half", |_| 0.5, &phi, 1.0, 0.5, &sched)
                .unwrap()
                .pass
        );
        let crossing = |z: Complex64| 0.5 + 2.0 * z.norm();
        assert!(
            truncated_phi_mean_inequality("crossing", crossing, &phi, 2.0, 0.3, &sched)
                .unwrap()
                .pass
        );
        assert!(truncated_phi_mean_inequality("one", |_| 1.0, &phi, 1.0, 1.5, &sched).is_err());
    }

    #[test]
    fn divergence_transfer_outcomes() {
        let e = PhiFunction::exp();
        assert_eq!(
            phi_divergence_transfer("one", |_| 1.0, &e, 1.0)
                .unwrap()
                .outcome,
            TransferOutcome::Pass
        );
        let f = radial_stretch(3.0).unwrap();
        let k = |z: Complex64| f.distortion_at(z);
        assert_eq!(
            phi_divergence_transfer("stretch", k, &e, 1.0)
                .unwrap()
                .outcome,
            TransferOutcome::Pass
        );
        let sq = PhiFunction::new("one_plus_square", |t: f64| 1.0 + t * t, true).unwrap();
        assert_eq!(
            phi_divergence_transfer("one", |_| 1.0, &sq, 1.0)
                .unwrap()
                .outcome,
            TransferOutcome::NotApplicable
        );
    }

    #[test]
    fn class_membership_reference_cases() {
        let c = ClassConstraint::new(PhiFunction::exp(), 10.0, DEFAULT_GAP).unwrap();
        let id = class_membership(&identity(), &c).unwrap();
        assert!(id.member);
        assert!(id.weighted_integral <= E * PI);
        assert!((id.omitted_diameter.unwrap() - 1.0).abs() < 1e-12);
        assert!((id.converted_budget.unwrap() - 20.0).abs() < 1e-12);
        let lin = ClassConstraint::new(PhiFunction::identity(), 10.0, DEFAULT_GAP).unwrap();
        let s3 = class_membership(&radial_stretch(3.0).unwrap(), &lin).unwrap();
        assert!(s3.member && s3.weighted_integral <= 3.0 * PI);
        let g = shrinking_stretch_family(&[100]).unwrap().remove(0);
        let m = class_membership(&g, &c).unwrap();
        assert!(!m.member && m.diagnosis.is_some());
    }

    #[test]
    fn membership_is_monotone_in_budget() {
        let f = radial_stretch(2.0).unwrap();
        let mut was_member = false;
        for m in [1.0, 5.0, 6.0, 7.0, 20.0] {
            let c = ClassConstraint::new(PhiFunction::identity(), m, DEFAULT_GAP).unwrap();
            let now = class_membership(&f, &c).unwrap().member;
            assert!(!was_member || now);
            was_member = now;
        }
        assert!(was_member);
    }

    #[test]
    fn probes_separate_stretches_from_shrinking_family() {
        let stretches: Vec<_> = [1.0, 1.5, 2.0, 3.0]
            .iter()
            .map(|&a| radial_stretch(a).unwrap())
            .collect();
        let t = equicontinuity_probe(
            &stretches,
            ORIGIN,
            &default_probe_targets(),
            &ProbeConfig::default(),
        );
        assert!(t.uniform);
        let fam = shrinking_stretch_family(&[1, 10, 100, 1000]).unwrap();
        let t = equicontinuity_probe(
            &fam,
            ORIGIN,
            &default_probe_targets(),
            &ProbeConfig::default(),
        );
        assert!(!t.uniform);
        assert!(
            t.max_gap >= 0.7 && (t.members[3].gap - 0.7055).abs() < 1e-3,
            "{}",
            t.members[3].gap
        );
        let single = equicontinuity_probe(
            &[identity()],
            ORIGIN,
            &default_probe_targets(),
            &ProbeConfig::default(),
        );
        assert!(single.uniform);
    }

    #[test]
    fn counterexample_error_path_for_exponential() {
        let r = counterexample_family(
            &PhiFunction::exp(),
            4.0 * PI,
            0.5,
            &default_probe_targets(),
            &ProbeConfig::default(),
        );
        assert!(matches!(r, Err(Error::HypothesisFails(_))));
    }

    #[test]
    fn counterexample_family_breaks_equicontinuity() {
        for phi in [PhiFunction::identity(), PhiFunction::square()] {
            let fam = counterexample_family(&phi, 10.0, DEFAULT_GAP, &default_probe_targets(), &ProbeConfig::default())
                .unwrap();
            assert!(fam.memberships.iter().all(|m| m.member));
            assert!(!fam.table.uniform, "{}: {:?}", phi.label(), fam.table.infimum);
            assert!(fam.table.max_gap > 0.1, "{}", fam.table.max_gap);
        }
    }
}
