//! Circle and disk means, radial mean profiles, mean-oscillation estimates
//! and divergence tests for `∫ dr / (r q(r))`.

use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{circle_quadrature, CircleIntegral, Domain, DEFAULT_CIRCLE_NODES};
use crate::growth::{trace_from_density, Classification, GrowthClassifier, Segment};
use crate::quad::{gauss_legendre, integrate_log, QuadConfig};

/// Circle quadrature of `q` over `D ∩ S(z0, r)`, failing when the circle
/// misses the domain.
pub fn circle_integral<Q>(q: Q, z0: Complex64, r: f64, domain: &Domain) -> Result<CircleIntegral>
where
    Q: Fn(Complex64) -> f64,
{
    let ci = circle_quadrature(z0, r, q, domain, DEFAULT_CIRCLE_NODES)?;
    if ci.is_empty() {
        return Err(Error::CircleMissesDomain { radius: r });
    }
    Ok(ci)
}

/// Arc-length integral of `q` over the in-domain part of `S(z0, r)`.
pub fn circle_l1<Q>(q: Q, z0: Complex64, r: f64, domain: &Domain) -> Result<f64>
where
    Q: Fn(Complex64) -> f64,
{
    Ok(circle_integral(q, z0, r, domain)?.value)
}

/// Mean of `q` over the in-domain part of `S(z0, r)`.
pub fn circle_mean<Q>(q: Q, z0: Complex64, r: f64, domain: &Domain) -> Result<f64>
where
    Q: Fn(Complex64) -> f64,
{
    let ci = circle_integral(q, z0, r, domain)?;
    Ok(ci.value / ci.arc_length)
}

/// Quadrature sizes for [`disk_mean`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskRule {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for DiskRule {
    fn default() -> Self {
        Self {
            radial_nodes: 256,
            angular_nodes: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskMean {
    pub value: f64,
    /// Fraction of the quadrature weight dropped at infinite nodes.
    pub excluded_fraction: f64,
}

fn check_disk(z0: Complex64, eps: f64, domain: &Domain) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "disk radius must be positive, got {eps}"
        )));
    }
    let exits = Error::DiskExitsDomain {
        center: z0,
        radius: eps,
    };
    if !domain.contains(z0) {
        return Err(exits);
    }
    match domain.boundary_distance(z0) {
        Some(d) if d < eps => Err(exits),
        Some(_) => Ok(()),
        None => {
            let rim = eps * (1.0 - 1e-12);
            let inside = (0..256)
                .all(|k| domain.contains(z0 + Complex64::from_polar(rim, k as f64 * PI / 128.0)));
            if inside {
                Ok(())
            } else {
                Err(exits)
            }
        }
    }
}

/// Polar disk nodes `(z, weight)` with weights summing to one: Gauss–Legendre
/// in the area variable `s = (r/ε)²`, periodic trapezoid in angle.
fn disk_nodes(z0: Complex64, eps: f64, rule: DiskRule) -> Vec<(Complex64, f64)> {
    let (xs, ws) = gauss_legendre(rule.radial_nodes);
    let na = rule.angular_nodes;
    let mut nodes = Vec::with_capacity(xs.len() * na);
    for (x, w) in xs.iter().zip(&ws) {
        let s = 0.5 * (x + 1.0);
        let r = eps * s.sqrt();
        let wr = 0.5 * w / na as f64;
        for k in 0..na {
            let theta = (k as f64 + 0.5) * 2.0 * PI / na as f64;
            nodes.push((z0 + Complex64::from_polar(r, theta), wr));
        }
    }
    nodes
}

fn weighted_mean(nodes: &[(Complex64, f64)], values: impl Iterator<Item = f64>) -> DiskMean {
    let mut sum = 0.0;
    let mut kept = 0.0;
    let mut dropped = 0.0;
    for ((_, w), v) in nodes.iter().zip(values) {
        if v.is_finite() {
            sum += w * v;
            kept += w;
        } else {
            dropped += w;
        }
    }
    DiskMean {
        value: if kept > 0.0 { sum / kept } else { f64::NAN },
        excluded_fraction: dropped / (kept + dropped),
    }
}

/// Area mean of `phi` over `B(z0, ε)`.
pub fn disk_mean<F>(phi: F, z0: Complex64, eps: f64, domain: &Domain) -> Result<DiskMean>
where
    F: Fn(Complex64) -> f64,
{
    disk_mean_with(phi, z0, eps, domain, DiskRule::default())
}

pub fn disk_mean_with<F>(
    phi: F,
    z0: Complex64,
    eps: f64,
    domain: &Domain,
    rule: DiskRule,
) -> Result<DiskMean>
where
    F: Fn(Complex64) -> f64,
{
    check_disk(z0, eps, domain)?;
    let nodes = disk_nodes(z0, eps, rule);
    Ok(weighted_mean(&nodes, nodes.iter().map(|(z, _)| phi(*z))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FmoVerdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

/// Thresholds for [`fmo_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FmoConfig {
    /// Oscillations at or below this cap count as bounded.
    pub cap: f64,
    /// Minimal per-decade growth over the tail for an unbounded verdict.
    pub growth_per_decade: f64,
    pub tail_decades: f64,
    /// Relative slack when testing the tail for monotone non-increase.
    pub monotone_slack: f64,
    pub rule: DiskRule,
}

impl Default for FmoConfig {
    fn default() -> Self {
        Self {
            cap: 10.0,
            growth_per_decade: 0.5,
            tail_decades: 3.0,
            monotone_slack: 1e-3,
            rule: DiskRule::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmoEstimate {
    pub center: Complex64,
    pub epsilons: Vec<f64>,
    pub oscillations: Vec<f64>,
    pub disk_means: Vec<f64>,
    pub max_excluded_fraction: f64,
    /// Set when more than `1e-6` of some disk was dropped as singular.
    pub flagged: bool,
    pub verdict: FmoVerdict,
}

/// `ε = 10^{-k/2}` for `k = 2..=16`, i.e. `0.1` down to `1e-8`.
pub fn default_epsilon_schedule() -> Vec<f64> {
    (2..=16).map(|k| 10f64.powf(-(k as f64) / 2.0)).collect()
}

fn check_schedule(eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        return Err(Error::InvalidInput("empty epsilon schedule".into()));
    }
    if eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput(
            "epsilon schedule must be strictly decreasing".into(),
        ));
    }
    Ok(())
}

/// Mean oscillation `⨍_B |φ - φ̄_ε|` at each `ε` of a decreasing schedule,
/// with a bounded/unbounded/inconclusive verdict.
pub fn fmo_estimate<F>(
    phi: F,
    z0: Complex64,
    epsilons: &[f64],
    domain: &Domain,
    cfg: FmoConfig,
) -> Result<FmoEstimate>
where
    F: Fn(Complex64) -> f64,
{
    check_schedule(epsilons)?;
    let mut oscillations = Vec::with_capacity(epsilons.len());
    let mut disk_means = Vec::with_capacity(epsilons.len());
    let mut max_excluded: f64 = 0.0;
    for &eps in epsilons {
        check_disk(z0, eps, domain)?;
        let nodes = disk_nodes(z0, eps, cfg.rule);
        let values: Vec<f64> = nodes.iter().map(|(z, _)| phi(*z)).collect();
        let mean = weighted_mean(&nodes, values.iter().copied());
        let osc = weighted_mean(&nodes, values.iter().map(|v| (v - mean.value).abs()));
        max_excluded = max_excluded.max(mean.excluded_fraction);
        disk_means.push(mean.value);
        oscillations.push(osc.value);
    }
    let verdict = fmo_verdict(epsilons, &oscillations, &cfg);
    Ok(FmoEstimate {
        center: z0,
        epsilons: epsilons.to_vec(),
        oscillations,
        disk_means,
        max_excluded_fraction: max_excluded,
        flagged: max_excluded > 1e-6,
        verdict,
    })
}

fn fmo_verdict(eps: &[f64], osc: &[f64], cfg: &FmoConfig) -> FmoVerdict {
    if osc.iter().any(|v| !v.is_finite()) {
        return FmoVerdict::Inconclusive;
    }
    let last = *eps.last().unwrap();
    let tail_start = last * 10f64.powf(cfg.tail_decades);
    let tail: Vec<usize> = (0..eps.len())
        .filter(|&i| eps[i] <= tail_start * (1.0 + 1e-9))
        .collect();
    // Growth per decade across pairs at least one decade apart in the tail.
    let mut min_growth = f64::INFINITY;
    let mut pairs = 0;
    for &i in &tail {
        if let Some(&j) = tail
            .iter()
            .find(|&&j| eps[j] <= eps[i] / 10.0 * (1.0 + 1e-9))
        {
            let decades = (eps[i] / eps[j]).log10();
            min_growth = min_growth.min((osc[j] - osc[i]) / decades);
            pairs += 1;
        }
    }
    let covers_tail = eps[0] >= tail_start * (1.0 - 1e-9);
    if covers_tail && pairs >= 2 && min_growth >= cfg.growth_per_decade {
        return FmoVerdict::Unbounded;
    }
    let non_increasing = tail
        .windows(2)
        .all(|w| osc[w[1]] <= osc[w[0]] * (1.0 + cfg.monotone_slack) + 1e-12);
    let tail_max = tail.iter().map(|&i| osc[i]).fold(0.0, f64::max);
    if non_increasing || tail_max <= cfg.cap {
        FmoVerdict::Bounded
    } else {
        FmoVerdict::Inconclusive
    }
}

/// A radial mean profile `r ↦ q(r)` on a radius range.
pub trait RadialMean {
    fn q(&self, r: f64) -> f64;
    /// Closed range `[lo, hi]` on which `q` may be evaluated; `lo` may be 0
    /// for generators reaching arbitrarily small radii.
    fn range(&self) -> (f64, f64);
}

/// Closed-form profile given by a function.
pub struct FnProfile<F> {
    f: F,
    lo: f64,
    hi: f64,
}

impl<F: Fn(f64) -> f64> FnProfile<F> {
    pub fn new(f: F, lo: f64, hi: f64) -> Self {
        Self { f, lo, hi }
    }
}

impl<F: Fn(f64) -> f64> RadialMean for FnProfile<F> {
    fn q(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// Profile of circle means of a scalar field, evaluated on demand.
pub struct CircleMeanProfile<'a, Q> {
    field: Q,
    center: Complex64,
    domain: &'a Domain,
}

impl<'a, Q: Fn(Complex64) -> f64> CircleMeanProfile<'a, Q> {
    pub fn new(field: Q, center: Complex64, domain: &'a Domain) -> Self {
        Self {
            field,
            center,
            domain,
        }
    }
}

impl<Q: Fn(Complex64) -> f64> RadialMean for CircleMeanProfile<'_, Q> {
    fn q(&self, r: f64) -> f64 {
        circle_mean(&self.field, self.center, r, self.domain).unwrap_or(f64::NAN)
    }

    fn range(&self) -> (f64, f64) {
        (
            0.0,
            self.domain
                .sup_distance(self.center)
                .unwrap_or(f64::INFINITY),
        )
    }
}

/// Sampled profile `q_{z0}(r)` on increasing radii, interpolated linearly
/// in `ln r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanProfile {
    pub center: Complex64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl MeanProfile {
    pub fn new(center: Complex64, radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.len() != values.len() {
            return Err(Error::InvalidInput(
                "profile needs matching non-empty radii and values".into(),
            ));
        }
        if radii[0] <= 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "profile radii must be positive and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::InvalidInput(
                "profile values must be nonnegative".into(),
            ));
        }
        Ok(Self {
            center,
            radii,
            values,
        })
    }

    /// Samples circle means of `field` about `center`.
    pub fn sample<Q>(field: Q, center: Complex64, radii: &[f64], domain: &Domain) -> Result<Self>
    where
        Q: Fn(Complex64) -> f64,
    {
        let values = radii
            .iter()
            .map(|&r| circle_mean(&field, center, r, domain))
            .collect::<Result<Vec<_>>>()?;
        Self::new(center, radii.to_vec(), values)
    }

    pub fn from_fn(center: Complex64, radii: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            center,
            radii.to_vec(),
            radii.iter().map(|&r| f(r)).collect(),
        )
    }
}

impl RadialMean for MeanProfile {
    fn q(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if n == 1 {
            return self.values[0];
        }
        let i = self.radii.partition_point(|&x| x <= r).clamp(1, n - 1);
        let (r0, r1) = (self.radii[i - 1], self.radii[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        if !v0.is_finite() || !v1.is_finite() {
            return if r - r0 < r1 - r { v0 } else { v1 };
        }
        let t = ((r / r0).ln() / (r1 / r0).ln()).clamp(0.0, 1.0);
        v0 + t * (v1 - v0)
    }

    fn range(&self) -> (f64, f64) {
        (self.radii[0], *self.radii.last().unwrap())
    }
}

fn inverse_q(q: f64) -> f64 {
    if q.is_infinite() {
        0.0
    } else {
        1.0 / q
    }
}

/// `I(r1, r2) = ∫ dr / (r q(r))`; infinite `q` contributes nothing.
pub fn i_integral<P: RadialMean + ?Sized>(profile: &P, r1: f64, r2: f64) -> Result<f64> {
    let (lo, hi) = profile.range();
    if !(r1 > 0.0 && r1 < r2) {
        return Err(Error::InvalidInput(format!(
            "need 0 < r1 < r2, got ({r1}, {r2})"
        )));
    }
    if r1 < lo * (1.0 - 1e-12) || r2 > hi * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "range ({r1}, {r2}) lies outside the profile range ({lo}, {hi})"
        )));
    }
    let r = integrate_log(
        |r| inverse_q(profile.q(r)) / r,
        r1,
        r2,
        QuadConfig::default(),
    );
    Ok(r.value)
}

/// Classifies `∫_0^{ε0} dr / (r q(r))` from partial integrals over `δ`
/// decades below `ε0`, in the variable `L = ln(1/δ)`.
pub fn divergence_at_zero<P: RadialMean + ?Sized>(
    profile: &P,
    eps0: f64,
    classifier: &GrowthClassifier,
) -> (Classification, Vec<Segment>) {
    let lo = profile.range().0;
    let available = if lo > 0.0 {
        (eps0 / lo).log10()
    } else {
        f64::INFINITY
    };
    let decades = available.clamp(0.0, 8.0);
    let trace = trace_from_density(|l| inverse_q(profile.q((-l).exp())), -eps0.ln(), decades, 4);
    (classifier.classify_detailed(&trace), trace)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LebesguePoint {
    pub epsilons: Vec<f64>,
    pub means: Vec<f64>,
    pub is_lebesgue_point: bool,
}

/// Disk means of `|Q - Q(z0)|` along the schedule; a Lebesgue point when the
/// last mean is within `tol`.
pub fn lebesgue_point_check<Q>(
    q: Q,
    z0: Complex64,
    epsilons: &[f64],
    domain: &Domain,
    tol: f64,
) -> Result<LebesguePoint>
where
    Q: Fn(Complex64) -> f64,
{
    check_schedule(epsilons)?;
    let q0 = q(z0);
    if !q0.is_finite() {
        return Err(Error::NotFinite(format!("Q({z0})")));
    }
    let means = epsilons
        .iter()
        .map(|&e| disk_mean(|z| (q(z) - q0).abs(), z0, e, domain).map(|m| m.value))
        .collect::<Result<Vec<_>>>()?;
    let is_lebesgue_point = means.last().is_some_and(|m| *m <= tol);
    Ok(LebesguePoint {
        epsilons: epsilons.to_vec(),
        means,
        is_lebesgue_point,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    /// Smallest `c` with `q(r) ≤ c log(1/r)` on every sample.
    pub envelope: f64,
    /// Least-squares coefficient.
    pub least_squares: f64,
    /// RMS residual of the least-squares fit.
    pub residual: f64,
    /// Slope of `ln q` against `ln ln(1/r)`; near 0 for bounded profiles.
    pub growth_order: f64,
    pub samples: usize,
}

/// Fits `q(r) ≈ c·log(1/r)` on the samples below `r = 0.1`.
pub fn log_singularity_fit(profile: &MeanProfile) -> Result<LogFit> {
    let pts: Vec<(f64, f64)> = profile
        .radii
        .iter()
        .zip(&profile.values)
        .filter(|(r, _)| **r < 0.1)
        .map(|(r, q)| ((1.0 / r).ln(), *q))
        .collect();
    if pts.len() < 8 {
        return Err(Error::InvalidInput(format!(
            "log fit needs at least 8 radii below 0.1, got {}",
            pts.len()
        )));
    }
    let envelope = pts
        .iter()
        .map(|(l, q)| q / l)
        .fold(f64::NEG_INFINITY, f64::max);
    let sll: f64 = pts.iter().map(|(l, _)| l * l).sum();
    let slq: f64 = pts.iter().map(|(l, q)| l * q).sum();
    let c = slq / sll;
    let residual =
        (pts.iter().map(|(l, q)| (q - c * l).powi(2)).sum::<f64>() / pts.len() as f64).sqrt();
    let logs: Vec<(f64, f64)> = pts
        .iter()
        .filter(|(_, q)| *q > 0.0 && q.is_finite())
        .map(|(l, q)| (l.ln(), q.ln()))
        .collect();
    let growth_order = if logs.len() >= 2 {
        let n = logs.len() as f64;
        let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 {
            sxy / sxx
        } else {
            0.0
        }
    } else {
        f64::NAN
    };
    Ok(LogFit {
        envelope,
        least_squares: c,
        residual,
        growth_order,
        samples: pts.len(),
    })
}

/// Geometric radii `r_k` with `per_decade` points per decade on `[lo, hi]`.
pub fn log_radii(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).round().max(1.0) as usize;
    (0..=n)
        .map(|k| lo * (hi / lo).powf(k as f64 / n as f64))
        .collect()
}

/// Per-decade scale used by divergence tests, `ln 10`.
pub const DECADE: f64 = LN_10;
