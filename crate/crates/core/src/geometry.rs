//! Extended-plane points, the chordal metric, rings, domains and the
//! quadrature grids every other module integrates on.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of angular nodes for circle quadrature.
pub const DEFAULT_CIRCLE_NODES: usize = 1024;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedPoint {
    Finite(Complex64),
    Infinity,
}

impl ExtendedPoint {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtendedPoint::Finite(Complex64::new(re, im))
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedPoint::Finite(z) => Some(z),
            ExtendedPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }
}

impl From<Complex64> for ExtendedPoint {
    fn from(z: Complex64) -> Self {
        ExtendedPoint::Finite(z)
    }
}

impl From<f64> for ExtendedPoint {
    fn from(x: f64) -> Self {
        ExtendedPoint::Finite(Complex64::new(x, 0.0))
    }
}

/// Chordal distance on the Riemann sphere of diameter one.
pub fn spherical_distance(a: ExtendedPoint, b: ExtendedPoint) -> f64 {
    match (a, b) {
        (ExtendedPoint::Infinity, ExtendedPoint::Infinity) => 0.0,
        (ExtendedPoint::Finite(z), ExtendedPoint::Infinity)
        | (ExtendedPoint::Infinity, ExtendedPoint::Finite(z)) => 1.0 / (1.0 + z.norm_sqr()).sqrt(),
        (ExtendedPoint::Finite(z), ExtendedPoint::Finite(w)) => {
            (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
        }
    }
}

/// Supremum of pairwise chordal distances over a finite point set.
pub fn spherical_diameter(points: &[ExtendedPoint]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut best = 0.0f64;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            best = best.max(spherical_distance(a, b));
        }
    }
    Ok(best)
}

/// Inversion in the unit circle, `z ↦ z/|z|²`, swapping `0` and `∞`.
pub fn invert(z: ExtendedPoint) -> ExtendedPoint {
    match z {
        ExtendedPoint::Infinity => ExtendedPoint::Finite(Complex64::new(0.0, 0.0)),
        ExtendedPoint::Finite(w) => {
            let n = w.norm_sqr();
            if n == 0.0 {
                ExtendedPoint::Infinity
            } else {
                ExtendedPoint::Finite(w / n)
            }
        }
    }
}

type Predicate = Arc<dyn Fn(Complex64) -> bool + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Plane,
    Disk { center: Complex64, radius: f64 },
    HalfPlane { point: Complex64, normal: Complex64 },
    Custom { label: String, predicate: Predicate },
}

/// An open planar domain given by a hard membership predicate.
///
/// The named shapes also know their boundary distance, which drives the
/// finite-difference step control and the disk-containment checks.
#[derive(Clone)]
pub struct Domain {
    shape: Shape,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Domain({})", self.description())
    }
}

impl Domain {
    pub fn plane() -> Self {
        Self {
            shape: Shape::Plane,
        }
    }

    pub fn disk(center: Complex64, radius: f64) -> Self {
        Self {
            shape: Shape::Disk { center, radius },
        }
    }

    pub fn unit_disk() -> Self {
        Self::disk(Complex64::new(0.0, 0.0), 1.0)
    }

    /// `{ z : Re((z - point)·conj(normal)) > 0 }`.
    pub fn half_plane(point: Complex64, normal: Complex64) -> Self {
        let normal = normal / normal.norm();
        Self {
            shape: Shape::HalfPlane { point, normal },
        }
    }

    pub fn custom<F>(label: impl Into<String>, predicate: F) -> Self
    where
        F: Fn(Complex64) -> bool + Send + Sync + 'static,
    {
        Self {
            shape: Shape::Custom {
                label: label.into(),
                predicate: Arc::new(predicate),
            },
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match &self.shape {
            Shape::Plane => true,
            Shape::Disk { center, radius } => (z - center).norm() < *radius,
            Shape::HalfPlane { point, normal } => ((z - point) * normal.conj()).re > 0.0,
            Shape::Custom { predicate, .. } => predicate(z),
        }
    }

    /// Distance from `z` to the boundary, when the shape knows it.
    pub fn boundary_distance(&self, z: Complex64) -> Option<f64> {
        match &self.shape {
            Shape::Plane => Some(f64::INFINITY),
            Shape::Disk { center, radius } => Some((radius - (z - center).norm()).abs()),
            Shape::HalfPlane { point, normal } => Some(((z - point) * normal.conj()).re.abs()),
            Shape::Custom { .. } => None,
        }
    }

    /// `sup_{z ∈ D} |z - z0|`, when the shape knows it.
    pub fn sup_distance(&self, z0: Complex64) -> Option<f64> {
        match &self.shape {
            Shape::Plane | Shape::HalfPlane { .. } => Some(f64::INFINITY),
            Shape::Disk { center, radius } => Some((z0 - center).norm() + radius),
            Shape::Custom { .. } => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.shape, Shape::Disk { .. })
    }

    pub fn description(&self) -> String {
        match &self.shape {
            Shape::Plane => "plane".to_string(),
            Shape::Disk { center, radius } => format!("disk |z - {center}| < {radius}"),
            Shape::HalfPlane { point, normal } => {
                format!("half-plane through {point} with normal {normal}")
            }
            Shape::Custom { label, .. } => label.clone(),
        }
    }
}

/// The open annulus `r1 < |z - z0| < r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    center: Complex64,
    inner: f64,
    outer: f64,
}

impl Ring {
    pub fn new(center: Complex64, inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "ring radii must satisfy 0 < r1 < r2 < inf, got ({inner}, {outer})"
            )));
        }
        Ok(Self {
            center,
            inner,
            outer,
        })
    }

    /// Ring about the origin.
    pub fn centered(inner: f64, outer: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), inner, outer)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn log_ratio(&self) -> f64 {
        (self.outer / self.inner).ln()
    }

    pub fn area(&self) -> f64 {
        PI * (self.outer * self.outer - self.inner * self.inner)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let d = (z - self.center).norm();
        d > self.inner && d < self.outer
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.center == Complex64::new(0.0, 0.0) {
            write!(f, "{}:{}", self.inner, self.outer)
        } else {
            write!(f, "{}:{}@{}", self.inner, self.outer, self.center)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialSpacing {
    Uniform,
    Geometric,
}

/// Tensor-product cell grid on a ring: `n_radial` shells times `n_angular`
/// sectors, one node at each cell centre.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    ring: Ring,
    spacing: RadialSpacing,
    edges: Vec<f64>,
    radii: Vec<f64>,
    row_areas: Vec<f64>,
    n_angular: usize,
}

impl PolarGrid {
    pub fn new(
        ring: Ring,
        n_radial: usize,
        n_angular: usize,
        spacing: RadialSpacing,
    ) -> Result<Self> {
        if n_radial == 0 || n_angular == 0 {
            return Err(Error::InvalidInput(
                "polar grid needs at least one radial and one angular node".into(),
            ));
        }
        let (r1, r2) = (ring.inner(), ring.outer());
        let edges: Vec<f64> = (0..=n_radial)
            .map(|i| {
                let t = i as f64 / n_radial as f64;
                match spacing {
                    RadialSpacing::Uniform => r1 + (r2 - r1) * t,
                    RadialSpacing::Geometric => r1 * (r2 / r1).powf(t),
                }
            })
            .collect();
        let radii = edges
            .windows(2)
            .map(|w| match spacing {
                RadialSpacing::Uniform => 0.5 * (w[0] + w[1]),
                RadialSpacing::Geometric => (w[0] * w[1]).sqrt(),
            })
            .collect();
        let dtheta = 2.0 * PI / n_angular as f64;
        let row_areas = edges
            .windows(2)
            .map(|w| 0.5 * dtheta * (w[1] * w[1] - w[0] * w[0]))
            .collect();
        Ok(Self {
            ring,
            spacing,
            edges,
            radii,
            row_areas,
            n_angular,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn spacing(&self) -> RadialSpacing {
        self.spacing
    }

    pub fn n_radial(&self) -> usize {
        self.radii.len()
    }

    pub fn n_angular(&self) -> usize {
        self.n_angular
    }

    pub fn len(&self) -> usize {
        self.n_radial() * self.n_angular
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.n_angular as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Radial extent `[r_i, r_{i+1}]` of shell `i`.
    pub fn shell(&self, i: usize) -> (f64, f64) {
        (self.edges[i], self.edges[i + 1])
    }

    pub fn angle(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dtheta()
    }

    /// Cell area (exact sector area), identical along a shell.
    pub fn cell_area(&self, i: usize) -> f64 {
        self.row_areas[i]
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        self.ring.center() + Complex64::from_polar(self.radii[i], self.angle(j))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_angular + j
    }

    /// Shell containing radius `r`, if any.
    pub fn shell_of(&self, r: f64) -> Option<usize> {
        if r < self.edges[0] || r >= *self.edges.last().unwrap() {
            return None;
        }
        let i = self.edges.partition_point(|&e| e <= r);
        Some(i.saturating_sub(1).min(self.n_radial() - 1))
    }

    /// Sector containing angle `theta` (taken modulo 2π).
    pub fn sector_of(&self, theta: f64) -> usize {
        let t = theta.rem_euclid(2.0 * PI);
        ((t / self.dtheta()) as usize).min(self.n_angular - 1)
    }

    pub fn total_area(&self) -> f64 {
        self.row_areas.iter().sum::<f64>() * self.n_angular as f64
    }
}

/// Result of a circle quadrature over `D ∩ S(z0, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleIntegral {
    /// Arc-length integral over the finite in-domain nodes, or `∞` when the
    /// integrand is infinite on a run of adjacent nodes.
    pub value: f64,
    /// Arc length of the in-domain part of the circle.
    pub arc_length: f64,
    /// Arc length carried by isolated infinite nodes that were dropped.
    pub excluded_length: f64,
    pub nodes_in_domain: usize,
    pub nodes: usize,
}

impl CircleIntegral {
    pub fn is_empty(&self) -> bool {
        self.nodes_in_domain == 0
    }

    pub fn mean(&self) -> f64 {
        let len = self.arc_length - self.excluded_length;
        if len > 0.0 {
            self.value / len
        } else {
            f64::NAN
        }
    }
}

/// Composite (periodic) trapezoid rule on the circle `S(z0, r)` restricted
/// to `domain`. Nodes sit at `θ_k = (k + ½)·2π/n`.
///
/// A single infinite node flanked by finite ones is treated as a point
/// singularity and dropped (its arc length is reported as excluded); two or
/// more adjacent infinite nodes make the integral infinite.
pub fn circle_quadrature<F>(
    z0: Complex64,
    r: f64,
    integrand: F,
    domain: &Domain,
    nodes: usize,
) -> Result<CircleIntegral>
where
    F: Fn(Complex64) -> f64,
{
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "circle radius must be positive, got {r}"
        )));
    }
    if nodes == 0 {
        return Err(Error::InvalidInput("circle quadrature needs nodes".into()));
    }
    let dtheta = 2.0 * PI / nodes as f64;
    let weight = r * dtheta;
    let values: Vec<Option<f64>> = (0..nodes)
        .map(|k| {
            let z = z0 + Complex64::from_polar(r, (k as f64 + 0.5) * dtheta);
            domain.contains(z).then(|| integrand(z))
        })
        .collect();
    let singular = |k: usize| matches!(values[k], Some(v) if !v.is_finite());
    let mut sum = 0.0;
    let mut inside = 0;
    let mut excluded = 0;
    let mut clustered = false;
    for (k, v) in values.iter().enumerate() {
        let Some(v) = *v else { continue };
        inside += 1;
        if v.is_finite() {
            sum += v;
        } else {
            let prev = (k + nodes - 1) % nodes;
            let next = (k + 1) % nodes;
            if nodes > 2 && !singular(prev) && !singular(next) {
                excluded += 1;
            } else {
                clustered = true;
            }
        }
    }
    let value = if clustered {
        f64::INFINITY
    } else {
        sum * weight
    };
    Ok(CircleIntegral {
        value,
        arc_length: inside as f64 * weight,
        excluded_length: excluded as f64 * weight,
        nodes_in_domain: inside,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn chordal_distance_reference_values() {
        let zero = ExtendedPoint::from(0.0);
        assert_eq!(spherical_distance(zero, ExtendedPoint::Infinity), 1.0);
        let d = spherical_distance(zero, ExtendedPoint::from(1.0));
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let z = ExtendedPoint::finite(0.3, -2.0);
        assert_eq!(spherical_distance(z, z), 0.0);
        assert_eq!(
            spherical_distance(ExtendedPoint::Infinity, ExtendedPoint::Infinity),
            0.0
        );
    }

    #[test]
    fn diameter_of_small_sets() {
        assert_eq!(
            spherical_diameter(&[ExtendedPoint::finite(2.0, 1.0)]).unwrap(),
            0.0
        );
        let d = spherical_diameter(&[ExtendedPoint::from(0.0), ExtendedPoint::Infinity]).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(spherical_diameter(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn diameter_of_exterior_of_unit_disk_is_one() {
        let mut pts = vec![ExtendedPoint::Infinity];
        for &r in &[1.0, 1.5, 3.0, 10.0, 100.0] {
            for k in 0..64 {
                pts.push(Complex64::from_polar(r, 2.0 * PI * k as f64 / 64.0).into());
            }
        }
        let d = spherical_diameter(&pts).unwrap();
        assert!((d - 1.0).abs() < 1e-3, "{d}");
    }

    #[test]
    fn inversion_swaps_zero_and_infinity() {
        assert_eq!(invert(ExtendedPoint::from(0.0)), ExtendedPoint::Infinity);
        assert_eq!(invert(ExtendedPoint::Infinity), ExtendedPoint::from(0.0));
        assert_eq!(invert(ExtendedPoint::from(2.0)), ExtendedPoint::from(0.5));
    }

    #[test]
    fn ring_rejects_bad_radii() {
        assert!(Ring::centered(1.0, 1.0).is_err());
        assert!(Ring::centered(0.0, 1.0).is_err());
        assert!(Ring::centered(2.0, 1.0).is_err());
        assert!(Ring::centered(0.5, 1.0).is_ok());
    }

    #[test]
    fn polar_grid_area_matches_annulus() {
        let ring = Ring::new(c(0.3, -0.2), 0.2, 1.7).unwrap();
        for spacing in [RadialSpacing::Uniform, RadialSpacing::Geometric] {
            let g = PolarGrid::new(ring, 37, 53, spacing).unwrap();
            let rel = (g.total_area() - ring.area()).abs() / ring.area();
            assert!(rel < 1e-9, "{spacing:?}: {rel}");
        }
    }

    #[test]
    fn grid_locates_shells_and_sectors() {
        let g = PolarGrid::new(
            Ring::centered(1.0, 2.0).unwrap(),
            4,
            8,
            RadialSpacing::Uniform,
        )
        .unwrap();
        assert_eq!(g.shell_of(1.0), Some(0));
        assert_eq!(g.shell_of(1.3), Some(1));
        assert_eq!(g.shell_of(1.99), Some(3));
        assert_eq!(g.shell_of(2.0), None);
        assert_eq!(g.sector_of(0.1), 0);
        assert_eq!(g.sector_of(-0.1), 7);
    }

    #[test]
    fn circle_quadrature_constants_and_symmetry() {
        let plane = Domain::plane();
        let one =
            circle_quadrature(c(0.0, 0.0), 0.5, |_| 1.0, &plane, DEFAULT_CIRCLE_NODES).unwrap();
        assert!((one.value - PI).abs() < 1e-12);
        let k = circle_quadrature(c(1.0, 1.0), 0.7, |_| 2.5, &plane, 1024).unwrap();
        assert!((k.value - 2.5 * 2.0 * PI * 0.7).abs() / k.value < 1e-9);
        let cos = circle_quadrature(c(0.0, 0.0), 1.3, |z| z.re / z.norm(), &plane, 1024).unwrap();
        assert!(cos.value.abs() < 1e-9);
    }

    #[test]
    fn circle_outside_domain_is_flagged_empty() {
        let d = Domain::disk(c(10.0, 0.0), 1.0);
        let r = circle_quadrature(c(0.0, 0.0), 1.0, |_| 1.0, &d, 64).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn isolated_singular_node_is_excluded_but_runs_are_not() {
        let plane = Domain::plane();
        // Node 0 sits at angle π/n; make only that one infinite.
        let n = 16;
        let first = Complex64::from_polar(1.0, PI / n as f64);
        let r = circle_quadrature(
            c(0.0, 0.0),
            1.0,
            |z| {
                if (z - first).norm() < 1e-9 {
                    f64::INFINITY
                } else {
                    1.0
                }
            },
            &plane,
            n,
        )
        .unwrap();
        assert!(r.value.is_finite());
        assert!((r.excluded_length - 2.0 * PI / n as f64).abs() < 1e-12);
        let r = circle_quadrature(
            c(0.0, 0.0),
            1.0,
            |z| if z.im > 0.0 { f64::INFINITY } else { 1.0 },
            &plane,
            n,
        )
        .unwrap();
        assert!(r.value.is_infinite());
    }
}
