//! Conformal modulus of ring curve families: the annulus closed form, a
//! discrete solver on polar grids, extremal densities and the ring/lower
//! functionals.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, PolarGrid, RadialSpacing, Ring};
use crate::mappings::MappingModel;
use crate::means::{circle_integral, circle_mean};
use crate::quad::{integrate_log, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// Curves joining the two boundary circles.
    Connecting,
    /// Closed curves separating the boundary circles.
    Separating,
    /// In-domain pieces of concentric circles.
    Circles,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Connecting => "connecting",
            CurveKind::Separating => "separating",
            CurveKind::Circles => "circles",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CurveFamilySpec {
    pub kind: CurveKind,
    pub ring: Ring,
    pub domain: Domain,
}

impl CurveFamilySpec {
    pub fn new(kind: CurveKind, ring: Ring) -> Self {
        Self {
            kind,
            ring,
            domain: Domain::plane(),
        }
    }

    pub fn within(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }
}

/// Closed-form modulus of the annulus families: `2π / log(r2/r1)` for
/// connecting curves and the reciprocal for separating ones.
pub fn annulus_modulus(ring: &Ring, kind: CurveKind) -> f64 {
    match kind {
        CurveKind::Connecting => 2.0 * PI / ring.log_ratio(),
        CurveKind::Separating | CurveKind::Circles => ring.log_ratio() / (2.0 * PI),
    }
}

/// Modulus of the image ring family of a radial map centred at the origin.
pub fn image_annulus_modulus(f: &MappingModel, ring: &Ring, kind: CurveKind) -> Result<f64> {
    let profile = f
        .radial()
        .ok_or_else(|| Error::NonRadialMap(f.label().to_string()))?;
    if ring.center().norm() != 0.0 {
        return Err(Error::NonRadialMap(format!(
            "{} about {} (radial maps are centred at 0)",
            f.label(),
            ring.center()
        )));
    }
    let image = Ring::centered(profile.value(ring.inner()), profile.value(ring.outer()))?;
    Ok(annulus_modulus(&image, kind))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulusMethod {
    ClosedForm,
    Discrete,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusResult {
    pub value: f64,
    pub method: ModulusMethod,
    pub iterations: usize,
    /// Largest constraint violation `1 - ∫_γ ρ ds` before the final rescale.
    pub residual: f64,
    pub converged: bool,
}

/// A density sampled at the cell centres of a polar grid.
#[derive(Debug, Clone)]
pub struct GridDensity {
    pub grid: PolarGrid,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// `∫ ρ² dA` by the cell rule.
    pub fn energy(&self) -> f64 {
        let na = self.grid.n_angular();
        (0..self.grid.n_radial())
            .map(|i| {
                let a = self.grid.cell_area(i);
                self.values[i * na..(i + 1) * na]
                    .iter()
                    .map(|v| a * v * v)
                    .sum::<f64>()
            })
            .sum()
    }

    /// Line integral of `ρ` along the node circle of shell `i`.
    pub fn circle_integral(&self, i: usize) -> f64 {
        let ds = self.grid.radius(i) * self.grid.dtheta();
        (0..self.grid.n_angular())
            .map(|j| self.value(i, j) * ds)
            .sum()
    }
}

/// A discretised curve: the cells it crosses with the length inside each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub cells: Vec<(usize, f64)>,
}

impl SampledCurve {
    pub fn length(&self) -> f64 {
        self.cells.iter().map(|c| c.1).sum()
    }

    fn integral(&self, rho: &[f64]) -> f64 {
        self.cells.iter().map(|&(k, l)| rho[k] * l).sum()
    }
}

/// Grid and sampling sizes for [`discrete_modulus`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscreteConfig {
    pub n_radial: usize,
    pub n_angular: usize,
    /// Number of sampled curves; `None` picks `max(720, n_angular)` radial
    /// segments or `max(256, 2 n_radial)` circles, so every cell column or
    /// row is met by some curve.
    pub curves: Option<usize>,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl DiscreteConfig {
    pub fn square(n: usize) -> Self {
        Self {
            n_radial: n,
            n_angular: n,
            curves: None,
            tol: 1e-8,
            max_sweeps: 20_000,
        }
    }

    fn curve_count(&self, kind: CurveKind) -> usize {
        self.curves.unwrap_or(match kind {
            CurveKind::Connecting => self.n_angular.max(720),
            CurveKind::Separating | CurveKind::Circles => (2 * self.n_radial).max(256),
        })
    }
}

impl Default for DiscreteConfig {
    fn default() -> Self {
        Self::square(128)
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    pub result: ModulusResult,
    pub density: GridDensity,
    pub curves: usize,
}

/// Discretises the family on a geometric polar grid of the ring.
pub fn sample_curves(
    family: &CurveFamilySpec,
    grid: &PolarGrid,
    count: usize,
) -> Vec<SampledCurve> {
    let ring = family.ring;
    let domain = &family.domain;
    let na = grid.n_angular();
    let mut curves = Vec::with_capacity(count);
    match family.kind {
        CurveKind::Connecting => {
            for c in 0..count {
                let theta = (c as f64 + 0.5) * 2.0 * PI / count as f64;
                let j = grid.sector_of(theta);
                let mut cells = Vec::with_capacity(grid.n_radial());
                let mut complete = true;
                for i in 0..grid.n_radial() {
                    let (a, b) = grid.shell(i);
                    let mid = ring.center() + Complex64::from_polar(grid.radius(i), theta);
                    if domain.contains(mid) {
                        cells.push((grid.index(i, j), b - a));
                    } else {
                        complete = false;
                    }
                }
                if complete {
                    curves.push(SampledCurve { cells });
                }
            }
        }
        CurveKind::Separating | CurveKind::Circles => {
            let (r1, r2) = (ring.inner(), ring.outer());
            for c in 0..count {
                let s = r1 * (r2 / r1).powf((c as f64 + 0.5) / count as f64);
                let Some(i) = grid.shell_of(s) else { continue };
                let ds = s * grid.dtheta();
                let mut cells = Vec::with_capacity(na);
                let mut complete = true;
                for j in 0..na {
                    let z = ring.center() + Complex64::from_polar(s, grid.angle(j));
                    if domain.contains(z) {
                        cells.push((grid.index(i, j), ds));
                    } else {
                        complete = false;
                    }
                }
                let keep = match family.kind {
                    CurveKind::Separating => complete,
                    _ => !cells.is_empty(),
                };
                if keep {
                    curves.push(SampledCurve { cells });
                }
            }
        }
    }
    curves
}

/// Minimises `∫ρ² dA` subject to `∫_γ ρ ds ≥ 1` on the sampled curves by
/// Hildreth's dual coordinate ascent (cyclic projections in the
/// area-weighted norm). The returned density is rescaled so that every
/// sampled constraint holds exactly.
pub fn solve_curves(
    grid: &PolarGrid,
    curves: &[SampledCurve],
    tol: f64,
    max_sweeps: usize,
) -> Result<DiscreteSolution> {
    if curves.is_empty() || curves.iter().all(|c| c.cells.is_empty()) {
        return Err(Error::EmptyCurveFamily);
    }
    let na = grid.n_angular();
    let area = |k: usize| grid.cell_area(k / na);
    let norms: Vec<f64> = curves
        .iter()
        .map(|c| c.cells.iter().map(|&(k, l)| l * l / area(k)).sum())
        .collect();
    let mut rho = vec![0.0; grid.len()];
    let mut lambda = vec![0.0; curves.len()];
    let energy =
        |rho: &[f64]| -> f64 { rho.iter().enumerate().map(|(k, v)| area(k) * v * v).sum() };
    let mut previous = 0.0;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps {
        sweeps += 1;
        for (c, curve) in curves.iter().enumerate() {
            if norms[c] <= 0.0 {
                continue;
            }
            let slack = 1.0 - curve.integral(&rho);
            let delta = (slack / norms[c]).max(-lambda[c]);
            if delta != 0.0 {
                lambda[c] += delta;
                for &(k, l) in &curve.cells {
                    rho[k] += delta * l / area(k);
                }
            }
        }
        let violation = max_violation(curves, &rho);
        let current = energy(&rho);
        let change = (current - previous).abs() / current.max(f64::MIN_POSITIVE);
        previous = current;
        if violation < tol && change < tol {
            converged = true;
            break;
        }
    }
    let residual = max_violation(curves, &rho);
    for v in rho.iter_mut() {
        *v = v.max(0.0);
    }
    let min_integral = curves
        .iter()
        .filter(|c| !c.cells.is_empty())
        .map(|c| c.integral(&rho))
        .fold(f64::INFINITY, f64::min);
    if !(min_integral > 0.0) {
        return Err(Error::NotFinite(
            "discrete modulus: a sampled curve carries no density".into(),
        ));
    }
    let scale = 1.0 / min_integral;
    for v in rho.iter_mut() {
        *v *= scale;
    }
    let value = energy(&rho);
    Ok(DiscreteSolution {
        result: ModulusResult {
            value,
            method: ModulusMethod::Discrete,
            iterations: sweeps,
            residual,
            converged,
        },
        density: GridDensity {
            grid: grid.clone(),
            values: rho,
        },
        curves: curves.len(),
    })
}

fn max_violation(curves: &[SampledCurve], rho: &[f64]) -> f64 {
    curves
        .iter()
        .filter(|c| !c.cells.is_empty())
        .map(|c| 1.0 - c.integral(rho))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
}

/// Discrete modulus of a ring curve family on a geometric polar grid.
pub fn discrete_modulus(
    family: &CurveFamilySpec,
    cfg: &DiscreteConfig,
) -> Result<DiscreteSolution> {
    let grid = PolarGrid::new(
        family.ring,
        cfg.n_radial,
        cfg.n_angular,
        RadialSpacing::Geometric,
    )?;
    let curves = sample_curves(family, &grid, cfg.curve_count(family.kind));
    solve_curves(&grid, &curves, cfg.tol, cfg.max_sweeps)
}

/// `∫_ε^{ε0} dr / ‖Q‖₁(r)` with `‖Q‖₁(r)` the `L¹` norm of `Q` over the
/// in-domain part of `S(z0, r)`. Radii where the norm is infinite or the
/// circle misses the domain contribute nothing.
pub fn lower_rhs<Q>(q: Q, z0: Complex64, eps: f64, eps0: f64, domain: &Domain) -> Result<f64>
where
    Q: Fn(Complex64) -> f64,
{
    if !(eps > 0.0 && eps < eps0) {
        return Err(Error::Precondition(format!(
            "need 0 < eps < eps0, got eps = {eps}, eps0 = {eps0}"
        )));
    }
    if let Some(d0) = domain.sup_distance(z0) {
        if eps0 > d0 * (1.0 + 1e-12) {
            return Err(Error::Precondition(format!(
                "eps0 = {eps0} exceeds the domain extent {d0} about {z0}"
            )));
        }
    }
    let integrand = |r: f64| match circle_integral(&q, z0, r, domain) {
        Ok(ci) if ci.value.is_finite() && ci.value > 0.0 => 1.0 / ci.value,
        Ok(ci) if ci.value == 0.0 => f64::INFINITY,
        _ => 0.0,
    };
    Ok(integrate_log(integrand, eps, eps0, QuadConfig::default()).value)
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A radial weight `η(r)` on a ring.
#[derive(Clone)]
pub struct RadialWeight {
    pub label: String,
    f: RealFn,
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialWeight")
            .field("label", &self.label)
            .finish()
    }
}

impl RadialWeight {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    /// `∫_{r1}^{r2} η dr`.
    pub fn integral(&self, ring: &Ring) -> f64 {
        integrate_log(
            |r| self.eval(r),
            ring.inner(),
            ring.outer(),
            QuadConfig::default(),
        )
        .value
    }

    /// `η ≡ 1/(r2 - r1)`.
    pub fn uniform(ring: &Ring) -> Self {
        let w = 1.0 / (ring.outer() - ring.inner());
        Self::new("uniform", move |_| w)
    }

    /// `η = 1/(r log(r2/r1))`.
    pub fn logarithmic(ring: &Ring) -> Self {
        let l = ring.log_ratio();
        Self::new("logarithmic", move |r| 1.0 / (r * l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingRhs {
    pub value: f64,
    pub eta_integral: f64,
    pub admissible: bool,
}

/// `∫_ring Q(z) η²(|z - z0|) dA`, computed as `∫ η(r)² ‖Q‖₁(r) dr` with full
/// circles about the ring centre. Admissibility `∫η dr ≥ 1` is reported, not
/// enforced.
pub fn ring_rhs<Q>(q: Q, ring: &Ring, eta: &RadialWeight) -> Result<RingRhs>
where
    Q: Fn(Complex64) -> f64,
{
    let plane = Domain::plane();
    let integrand = |r: f64| {
        let e = eta.eval(r);
        if e == 0.0 {
            return 0.0;
        }
        match circle_integral(&q, ring.center(), r, &plane) {
            Ok(ci) => e * e * ci.value,
            Err(_) => f64::NAN,
        }
    };
    let value = integrate_log(integrand, ring.inner(), ring.outer(), QuadConfig::default()).value;
    if value.is_nan() {
        return Err(Error::NotFinite(format!("ring functional on {ring}")));
    }
    let eta_integral = eta.integral(ring);
    Ok(RingRhs {
        value,
        eta_integral,
        admissible: eta_integral >= 1.0 - 1e-9,
    })
}

/// The extremal ring weight `η₀(r) = 1/(I r q(r))` with its normaliser
/// `I = ∫ dr/(r q)`.
#[derive(Debug, Clone)]
pub struct ExtremalWeight {
    pub i_integral: f64,
    pub weight: RadialWeight,
}

pub fn extremal_weight_ring<Q>(q: Q, ring: &Ring) -> Result<ExtremalWeight>
where
    Q: Fn(Complex64) -> f64 + Send + Sync + 'static,
{
    let q = Arc::new(q);
    let center = ring.center();
    let mean = {
        let q = q.clone();
        move |r: f64| circle_mean(|z| q(z), center, r, &Domain::plane()).unwrap_or(f64::NAN)
    };
    let recip = |m: f64| if m.is_infinite() { 0.0 } else { 1.0 / m };
    let i = integrate_log(
        |r| recip(mean(r)) / r,
        ring.inner(),
        ring.outer(),
        QuadConfig::default(),
    )
    .value;
    if !(i.is_finite() && i > 0.0) {
        return Err(Error::DegenerateModulusIntegral(i));
    }
    let weight = RadialWeight::new("extremal", move |r| recip(mean(r)) / (i * r));
    Ok(ExtremalWeight {
        i_integral: i,
        weight,
    })
}

/// The lower extremal density `ρ₀ = Q / ‖Q‖₁(|z - z0|)` on a polar grid
/// about `z0`; cells outside the domain carry zero.
pub fn extremal_density_lower<Q>(q: Q, grid: &PolarGrid, domain: &Domain) -> Result<GridDensity>
where
    Q: Fn(Complex64) -> f64,
{
    let na = grid.n_angular();
    let mut values = vec![0.0; grid.len()];
    let z0 = grid.ring().center();
    for i in 0..grid.n_radial() {
        let r = grid.radius(i);
        let ds = r * grid.dtheta();
        let row: Vec<f64> = (0..na)
            .map(|j| {
                let z = grid.node(i, j);
                if domain.contains(z) {
                    q(z)
                } else {
                    0.0
                }
            })
            .collect();
        let norm: f64 = row.iter().map(|v| v * ds).sum();
        if !(norm > 0.0) {
            return Err(Error::ZeroCircleNorm { radius: r });
        }
        if !norm.is_finite() {
            return Err(Error::NotFinite(format!(
                "circle norm at r = {r} about {z0}"
            )));
        }
        for (j, v) in row.iter().enumerate() {
            values[grid.index(i, j)] = v / norm;
        }
    }
    Ok(GridDensity {
        grid: grid.clone(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::radial_stretch;
    use std::f64::consts::E;

    const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn annulus_closed_forms() {
        let r = Ring::centered(1.0, E).unwrap();
        assert!((annulus_modulus(&r, CurveKind::Connecting) - 2.0 * PI).abs() < 1e-12);
        assert!((annulus_modulus(&r, CurveKind::Separating) - 1.0 / (2.0 * PI)).abs() < 1e-12);
        let r2 = Ring::centered(1.0, E * E).unwrap();
        assert!((annulus_modulus(&r2, CurveKind::Connecting) - PI).abs() < 1e-12);
    }

    #[test]
    fn image_annulus_of_radial_maps() {
        let ring = Ring::centered(0.1, 0.5).unwrap();
        let f = radial_stretch(3.0).unwrap();
        let conn = image_annulus_modulus(&f, &ring, CurveKind::Connecting).unwrap();
        assert!((conn - 2.0 * PI / 125f64.ln()).abs() < 1e-12);
        assert!((conn - 1.3013).abs() < 1e-4);
        let sep = image_annulus_modulus(&f, &ring, CurveKind::Separating).unwrap();
        assert!((sep - 0.7684).abs() < 1e-4);
        let id = crate::mappings::identity();
        let ring = Ring::centered(0.3, 0.3 * E).unwrap();
        assert!(
            (image_annulus_modulus(&id, &ring, CurveKind::Connecting).unwrap() - 2.0 * PI).abs()
                < 1e-12
        );
        let g = MappingModel::new("shift", Domain::plane(), |z: Complex64| (z + 1.0).into());
        assert!(matches!(
            image_annulus_modulus(&g, &ring, CurveKind::Connecting),
            Err(Error::NonRadialMap(_))
        ));
    }

    #[test]
    fn discrete_connecting_modulus_small_grid() {
        let ring = Ring::centered(1.0, E).unwrap();
        let sol = discrete_modulus(
            &CurveFamilySpec::new(CurveKind::Connecting, ring),
            &DiscreteConfig::square(64),
        )
        .unwrap();
        assert!(
            (sol.result.value / (2.0 * PI) - 1.0).abs() < 0.02,
            "{}",
            sol.result.value
        );
    }

    #[test]
    fn discrete_separating_modulus_small_grid() {
        let ring = Ring::centered(1.0, E).unwrap();
        let sol = discrete_modulus(
            &CurveFamilySpec::new(CurveKind::Separating, ring),
            &DiscreteConfig::square(64),
        )
        .unwrap();
        assert!(
            (sol.result.value * 2.0 * PI - 1.0).abs() < 0.02,
            "{}",
            sol.result.value
        );
    }

    #[test]
    fn subfamily_has_smaller_modulus() {
        let ring = Ring::centered(1.0, E).unwrap();
        let grid = PolarGrid::new(ring, 32, 64, RadialSpacing::Geometric).unwrap();
        let family = CurveFamilySpec::new(CurveKind::Connecting, ring);
        let curves = sample_curves(&family, &grid, 720);
        let full = solve_curves(&grid, &curves, 1e-9, 10_000)
            .unwrap()
            .result
            .value;
        let half: Vec<_> = curves.iter().step_by(2).cloned().collect();
        let sub = solve_curves(&grid, &half, 1e-9, 10_000)
            .unwrap()
            .result
            .value;
        assert!(sub <= full * (1.0 + 1e-9), "{sub} > {full}");
    }

    #[test]
    fn empty_family_is_an_error() {
        let ring = Ring::centered(1.0, 2.0).unwrap();
        let family = CurveFamilySpec::new(CurveKind::Separating, ring).within(Domain::unit_disk());
        assert!(matches!(
            discrete_modulus(&family, &DiscreteConfig::square(16)),
            Err(Error::EmptyCurveFamily)
        ));
    }

    #[test]
    fn lower_rhs_reference_values() {
        let disk = Domain::unit_disk();
        let one = lower_rhs(|_| 1.0, ORIGIN, 0.1, 1.0, &disk).unwrap();
        assert!((one - 10f64.ln() / (2.0 * PI)).abs() < 1e-6);
        assert!((one - 0.3665).abs() < 1e-4);
        let two = lower_rhs(|_| 2.0, ORIGIN, 0.1, 1.0, &disk).unwrap();
        assert!((two - 0.5 * one).abs() < 1e-10);
        let f = radial_stretch(3.0).unwrap();
        let k = lower_rhs(|z| f.distortion_at(z), ORIGIN, 0.01, 1.0, &disk).unwrap();
        assert!((k - 100f64.ln() / (6.0 * PI)).abs() < 1e-6);
        assert!((k - 0.2443).abs() < 1e-4);
        assert!(lower_rhs(|_| 1.0, ORIGIN, 1.0, 0.5, &disk).is_err());
    }

    #[test]
    fn ring_rhs_reference_values() {
        let ring = Ring::centered(1.0, 2.0).unwrap();
        let r = ring_rhs(|_| 1.0, &ring, &RadialWeight::uniform(&ring)).unwrap();
        assert!((r.value - 3.0 * PI).abs() < 1e-8);
        assert!(r.admissible);
        let zero = ring_rhs(|_| 0.0, &ring, &RadialWeight::uniform(&ring)).unwrap();
        assert_eq!(zero.value, 0.0);
        let half = RadialWeight::new("half", |_| 0.5);
        assert!(!ring_rhs(|_| 1.0, &ring, &half).unwrap().admissible);
    }

    #[test]
    fn extremal_weight_normalisation() {
        let ring = Ring::centered(1.0, E).unwrap();
        let w = extremal_weight_ring(|_| 1.0, &ring).unwrap();
        assert!((w.i_integral - 1.0).abs() < 1e-10);
        assert!((w.weight.eval(1.7) - 1.0 / 1.7).abs() < 1e-10);
        let w4 = extremal_weight_ring(|_| 4.0, &ring).unwrap();
        assert!((w4.i_integral - 0.25).abs() < 1e-10);
        assert!((w4.weight.eval(2.0) - 0.5).abs() < 1e-10);
        assert!((w4.weight.integral(&ring) - 1.0).abs() < 1e-8);
        let rhs = ring_rhs(|_| 1.0, &ring, &w.weight).unwrap();
        assert!((rhs.value - 2.0 * PI).abs() < 1e-6);
        assert!(matches!(
            extremal_weight_ring(|_| f64::INFINITY, &ring),
            Err(Error::DegenerateModulusIntegral(_))
        ));
    }

    #[test]
    fn lower_extremal_density_normalises_circles() {
        let ring = Ring::centered(0.1, 0.9).unwrap();
        let grid = PolarGrid::new(ring, 16, 128, RadialSpacing::Geometric).unwrap();
        let disk = Domain::unit_disk();
        let d = extremal_density_lower(|_| 1.0, &grid, &disk).unwrap();
        for i in 0..grid.n_radial() {
            assert!((d.circle_integral(i) - 1.0).abs() < 1e-9);
            assert!((d.value(i, 3) - 1.0 / (2.0 * PI * grid.radius(i))).abs() < 1e-9);
        }
        let d7 = extremal_density_lower(|_| 7.0, &grid, &disk).unwrap();
        assert!(d
            .values
            .iter()
            .zip(&d7.values)
            .all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(matches!(
            extremal_density_lower(|_| 0.0, &grid, &disk),
            Err(Error::ZeroCircleNorm { .. })
        ));
    }
}
