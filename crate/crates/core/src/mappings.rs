//! Evaluable mapping models, Wirtinger derivatives and the distortion
//! coefficient, plus the built-in radial test families.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, ExtendedPoint};
use crate::quad::{integrate_log, QuadConfig};

/// Default finite-difference step for [`wirtinger`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// The Wirtinger derivatives `(f_z, f_z̄)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativePair {
    pub fz: Complex64,
    pub fzbar: Complex64,
}

impl DerivativePair {
    pub fn new(fz: Complex64, fzbar: Complex64) -> Self {
        Self { fz, fzbar }
    }

    pub fn real(fz: f64, fzbar: f64) -> Self {
        Self::new(Complex64::new(fz, 0.0), Complex64::new(fzbar, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.fz.is_finite() && self.fzbar.is_finite()
    }
}

/// `|f_z|² - |f_z̄|²`.
pub fn jacobian(d: DerivativePair) -> f64 {
    d.fz.norm_sqr() - d.fzbar.norm_sqr()
}

/// `|f_z| + |f_z̄|`, the operator norm of the differential.
pub fn operator_norm(d: DerivativePair) -> f64 {
    d.fz.norm() + d.fzbar.norm()
}

/// Distortion coefficient value in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Distortion(f64);

impl Distortion {
    pub const ONE: Distortion = Distortion(1.0);
    pub const INFINITE: Distortion = Distortion(f64::INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for Distortion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Pointwise distortion: the norm/Jacobian quotient where `J ≠ 0`, one where
/// the differential vanishes, infinity elsewhere.
pub fn distortion(d: DerivativePair) -> Distortion {
    let a = d.fz.norm();
    let b = d.fzbar.norm();
    if a == 0.0 && b == 0.0 {
        return Distortion::ONE;
    }
    if jacobian(d) != 0.0 {
        Distortion(((a + b) / (a - b).abs()).max(1.0))
    } else {
        Distortion::INFINITE
    }
}

type Evaluator = Arc<dyn Fn(Complex64) -> ExtendedPoint + Send + Sync>;
type DerivativeProvider = Arc<dyn Fn(Complex64) -> DerivativePair + Send + Sync>;
type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A radial profile `r ↦ ρ(r)`, optionally with its derivative.
#[derive(Clone)]
pub struct RadialProfile {
    rho: RealFn,
    drho: Option<RealFn>,
    distortion: Option<RealFn>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("explicit_derivative", &self.drho.is_some())
            .finish()
    }
}

impl RadialProfile {
    pub fn new<F>(rho: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            rho: Arc::new(rho),
            drho: None,
            distortion: None,
        }
    }

    pub fn with_derivative<F>(mut self, drho: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.drho = Some(Arc::new(drho));
        self
    }

    /// Declares the dilatation quotient in closed form, bypassing
    /// differentiation of the profile.
    pub fn with_distortion<F>(mut self, k: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.distortion = Some(Arc::new(k));
        self
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.rho)(r)
    }

    /// `ρ'(r)`, by Richardson-extrapolated central differences when no
    /// explicit derivative was supplied.
    pub fn derivative(&self, r: f64) -> f64 {
        if let Some(d) = &self.drho {
            return d(r);
        }
        let h = 1e-5 * r;
        let d = |h: f64| ((self.rho)(r + h) - (self.rho)(r - h)) / (2.0 * h);
        (4.0 * d(0.5 * h) - d(h)) / 3.0
    }

    /// Dilatation quotient `max(ρ', ρ/r) / min(ρ', ρ/r)`.
    pub fn quotient(&self, r: f64) -> f64 {
        if let Some(k) = &self.distortion {
            return k(r);
        }
        let dr = self.derivative(r);
        let q = self.value(r) / r;
        let (lo, hi) = if dr < q { (dr, q) } else { (q, dr) };
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    }
}

/// An evaluable planar homeomorphism on a domain.
#[derive(Clone)]
pub struct MappingModel {
    label: String,
    domain: Domain,
    image: Option<Domain>,
    eval: Evaluator,
    derivatives: Option<DerivativeProvider>,
    radial: Option<RadialProfile>,
}

impl fmt::Debug for MappingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MappingModel")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("radial", &self.radial.is_some())
            .field("analytic", &self.derivatives.is_some())
            .finish()
    }
}

impl MappingModel {
    pub fn new<F>(label: impl Into<String>, domain: Domain, eval: F) -> Self
    where
        F: Fn(Complex64) -> ExtendedPoint + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            domain,
            image: None,
            eval: Arc::new(eval),
            derivatives: None,
            radial: None,
        }
    }

    pub fn with_derivatives<F>(mut self, provider: F) -> Self
    where
        F: Fn(Complex64) -> DerivativePair + Send + Sync + 'static,
    {
        self.derivatives = Some(Arc::new(provider));
        self
    }

    /// Declares the image domain `f(D)`, needed for omitted-set estimates.
    pub fn with_image(mut self, image: Domain) -> Self {
        self.image = Some(image);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn image(&self) -> Option<&Domain> {
        self.image.as_ref()
    }

    pub fn radial(&self) -> Option<&RadialProfile> {
        self.radial.as_ref()
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    pub fn eval(&self, z: Complex64) -> ExtendedPoint {
        (self.eval)(z)
    }

    pub fn analytic_derivatives(&self, z: Complex64) -> Option<DerivativePair> {
        self.derivatives.as_ref().map(|d| d(z))
    }

    /// Analytic derivatives when available, otherwise [`wirtinger`] with the
    /// default step. At the centre of a radial map the radial limit is used.
    pub fn derivatives(&self, z: Complex64) -> Result<DerivativePair> {
        let z = if self.radial.is_some() && z.norm() == 0.0 {
            Complex64::new(RADIAL_LIMIT_RADIUS, 0.0)
        } else {
            z
        };
        match &self.derivatives {
            Some(d) => Ok(d(z)),
            None => wirtinger(self, z, DEFAULT_FD_STEP),
        }
    }

    /// `K_f(z)`; `∞` where the differential is degenerate or unavailable.
    pub fn distortion_at(&self, z: Complex64) -> f64 {
        if let Some(k) = self.radial.as_ref().and_then(|p| p.distortion.as_ref()) {
            return k(z.norm().max(RADIAL_LIMIT_RADIUS));
        }
        match self.derivatives(z) {
            Ok(d) if d.is_finite() => distortion(d).value(),
            _ => f64::INFINITY,
        }
    }

    /// The distortion coefficient as a scalar field.
    pub fn distortion_field(&self) -> impl Fn(Complex64) -> f64 + Send + Sync + '_ {
        move |z| self.distortion_at(z)
    }
}

/// Radius at which radial maps report their limit values at the centre.
const RADIAL_LIMIT_RADIUS: f64 = 1e-9;

fn finite_value(f: &MappingModel, z: Complex64) -> Result<Complex64> {
    f.eval(z)
        .as_finite()
        .filter(|w| w.is_finite())
        .ok_or(Error::NonFiniteValue(z))
}

/// Central-difference Wirtinger derivatives with one Richardson level.
///
/// Near a boundary of known distance the step shrinks to half that distance.
pub fn wirtinger(f: &MappingModel, z: Complex64, step: f64) -> Result<DerivativePair> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!(
            "difference step must be positive, got {step}"
        )));
    }
    let domain = f.domain();
    if !domain.contains(z) {
        return Err(Error::OutsideDomain {
            point: z,
            domain: domain.description(),
        });
    }
    let h = match domain.boundary_distance(z) {
        Some(d) => step.min(0.5 * d),
        None => step,
    };
    let i = Complex64::new(0.0, 1.0);
    let eval = |p: Complex64| -> Result<Complex64> {
        if !domain.contains(p) {
            return Err(Error::StencilOutsideDomain {
                point: p,
                domain: domain.description(),
            });
        }
        finite_value(f, p)
    };
    let partials = |h: f64| -> Result<(Complex64, Complex64)> {
        let hx = Complex64::new(h, 0.0);
        let hy = i * h;
        let fx = (eval(z + hx)? - eval(z - hx)?) / (2.0 * h);
        let fy = (eval(z + hy)? - eval(z - hy)?) / (2.0 * h);
        Ok((fx, fy))
    };
    let (fx1, fy1) = partials(h)?;
    let (fx2, fy2) = partials(0.5 * h)?;
    let fx = (4.0 * fx2 - fx1) / 3.0;
    let fy = (4.0 * fy2 - fy1) / 3.0;
    Ok(DerivativePair {
        fz: 0.5 * (fx - i * fy),
        fzbar: 0.5 * (fx + i * fy),
    })
}

fn radial_model(label: String, radius: f64, profile: RadialProfile) -> MappingModel {
    let origin = Complex64::new(0.0, 0.0);
    let eval_profile = profile.clone();
    let deriv_profile = profile.clone();
    let image_radius = profile.value(radius);
    let mut model = MappingModel::new(label, Domain::disk(origin, radius), move |z| {
        let r = z.norm();
        if r == 0.0 {
            ExtendedPoint::Finite(origin)
        } else {
            ExtendedPoint::Finite(z * (eval_profile.value(r) / r))
        }
    })
    .with_derivatives(move |z| {
        let r = z.norm();
        let u = z / r;
        let dr = deriv_profile.derivative(r);
        let q = deriv_profile.value(r) / r;
        DerivativePair {
            fz: Complex64::new(0.5 * (dr + q), 0.0),
            fzbar: 0.5 * (dr - q) * u * u,
        }
    });
    if image_radius.is_finite() && image_radius > 0.0 {
        model = model.with_image(Domain::disk(origin, image_radius));
    }
    model.radial = Some(profile);
    model
}

/// `z ↦ z|z|^{α-1}` on the unit disk for any `α > 0`; distortion
/// `max(α, 1/α)` away from the origin.
pub fn power_stretch(alpha: f64) -> Result<MappingModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "stretch exponent must be positive, got {alpha}"
        )));
    }
    let profile = RadialProfile::new(move |r: f64| r.powf(alpha))
        .with_derivative(move |r: f64| alpha * r.powf(alpha - 1.0));
    Ok(radial_model(format!("power_stretch:{alpha}"), 1.0, profile))
}

/// `z ↦ z|z|^{α-1}` on the unit disk, `α ≥ 1`; constant distortion `α`.
pub fn radial_stretch(alpha: f64) -> Result<MappingModel> {
    if !(alpha >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "radial stretch needs alpha >= 1, got {alpha}; use power_stretch for contractions"
        )));
    }
    Ok(power_stretch(alpha)?.with_label(format!("radial_stretch:{alpha}")))
}

/// Identity of the unit disk.
pub fn identity() -> MappingModel {
    let profile = RadialProfile::new(|r| r).with_derivative(|_| 1.0);
    radial_model("identity".into(), 1.0, profile)
}

/// `re^{iθ} ↦ ρ(r)e^{iθ}` on the disk of the given radius.
///
/// The profile is checked to be positive and strictly increasing on a
/// log-spaced sample of 400 radii.
pub fn radial_map(
    label: impl Into<String>,
    profile: RadialProfile,
    radius: f64,
) -> Result<MappingModel> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "domain radius must be positive, got {radius}"
        )));
    }
    let n = 400;
    let mut prev = 0.0;
    for k in 0..n {
        let r = radius * 10f64.powf(-8.0 * (1.0 - k as f64 / (n - 1) as f64)) * (1.0 - 1e-12);
        let v = profile.value(r);
        if !(v.is_finite() && v > prev) {
            return Err(Error::NonMonotone(r));
        }
        prev = v;
    }
    Ok(radial_model(label.into(), radius, profile))
}

/// `g_m(z) = z|z|^{1/m - 1}`, distortion `m` away from the origin.
pub fn shrinking_stretch_family(m_values: &[u32]) -> Result<Vec<MappingModel>> {
    m_values
        .iter()
        .map(|&m| {
            if m == 0 {
                return Err(Error::InvalidInput("family index m must be >= 1".into()));
            }
            Ok(power_stretch(1.0 / m as f64)?.with_label(format!("shrinking:{m}")))
        })
        .collect()
}

/// Radius below which [`log_type_map`] is logarithmic.
pub const LOG_MAP_CORE: f64 = 0.135_335_283_236_612_7; // e^{-2}

/// Radial map with `K_f(z) = log(1/|z|)` for `|z| < e^{-2}` and the identity
/// outside; `ρ(r) = 2e^{-2}/log(1/r)` on the core.
pub fn log_type_map() -> MappingModel {
    let c = 2.0 * LOG_MAP_CORE;
    let profile = RadialProfile::new(move |r: f64| {
        if r < LOG_MAP_CORE {
            c / (1.0 / r).ln()
        } else {
            r
        }
    })
    .with_derivative(move |r: f64| {
        if r < LOG_MAP_CORE {
            let l = (1.0 / r).ln();
            c / (r * l * l)
        } else {
            1.0
        }
    });
    radial_model("log_type".into(), 1.0, profile)
}

/// Radial map with `K_f(z) = log²(1/|z|)` for `|z| < 1/e`, identity outside.
/// Its distortion does not have finite mean oscillation at the origin.
pub fn log_squared_map() -> MappingModel {
    let core = (-1.0f64).exp();
    let profile = RadialProfile::new(move |r: f64| {
        if r < core {
            let l = (1.0 / r).ln();
            core * ((1.0 - l * l * l) / 3.0).exp()
        } else {
            r
        }
    })
    .with_derivative(move |r: f64| {
        if r < core {
            let l = (1.0 / r).ln();
            core * ((1.0 - l * l * l) / 3.0).exp() * l * l / r
        } else {
            1.0
        }
    })
    // ρ underflows below r ≈ 1e-6, so the distortion is given in closed form.
    .with_distortion(move |r: f64| if r < core { (1.0 / r).ln().powi(2) } else { 1.0 });
    radial_model("log_squared".into(), 1.0, profile)
}

/// Radial self-map of the unit disk with a prescribed distortion profile:
/// `K_f = k(|z|)` for `core < |z| < 1` (the angular stretch `ρ/r` dominates
/// `ρ'`), and a similarity on `|z| < core`.
///
/// `ρ(r) = exp(-∫_r^1 dt / (t k(t)))`, so `ρ(1) = 1`. Requires `k ≥ 1`.
pub fn radial_from_distortion<K>(label: impl Into<String>, k: K, core: f64) -> Result<MappingModel>
where
    K: Fn(f64) -> f64 + Send + Sync + 'static,
{
    if !(core > 0.0 && core < 1.0) {
        return Err(Error::InvalidInput(format!(
            "core radius must lie in (0,1), got {core}"
        )));
    }
    let k = Arc::new(k);
    let per_decade = 64usize;
    let decades = -core.log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    let nodes: Vec<f64> = (0..=n)
        .map(|i| core.powf(1.0 - i as f64 / n as f64))
        .collect();
    let cfg = QuadConfig::default();
    let kk = k.clone();
    let integrand = move |t: f64| 1.0 / (t * kk(t).max(1.0));
    // cumulative[i] = ∫_{nodes[i]}^1 dt/(t k)
    let mut cumulative = vec![0.0; n + 1];
    for i in (0..n).rev() {
        cumulative[i] =
            cumulative[i + 1] + integrate_log(&integrand, nodes[i], nodes[i + 1], cfg).value;
    }
    for (i, &c) in cumulative.iter().enumerate() {
        if !c.is_finite() {
            return Err(Error::NotFinite(format!(
                "radial integral at r = {}",
                nodes[i]
            )));
        }
    }
    let nodes = Arc::new(nodes);
    let cumulative = Arc::new(cumulative);
    let rho_core = (-cumulative[0]).exp();
    let log_rho = {
        let nodes = nodes.clone();
        let cumulative = cumulative.clone();
        let integrand = integrand.clone();
        move |r: f64| -> f64 {
            if r >= 1.0 {
                return r.ln();
            }
            let i = nodes.partition_point(|&x| x <= r).min(nodes.len() - 1);
            let upper = nodes[i];
            -(cumulative[i] + integrate_log(&integrand, r, upper, cfg).value)
        }
    };
    let log_rho = Arc::new(log_rho);
    let lr = log_rho.clone();
    let kd = k.clone();
    let profile = RadialProfile::new(move |r: f64| {
        if r < core {
            rho_core * r / core
        } else {
            lr(r).exp()
        }
    })
    .with_derivative(move |r: f64| {
        if r < core {
            rho_core / core
        } else {
            log_rho(r).exp() / (r * kd(r).max(1.0))
        }
    })
    .with_distortion(move |r: f64| if r < core { 1.0 } else { k(r).max(1.0) });
    Ok(radial_model(label.into(), 1.0, profile))
}
