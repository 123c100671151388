use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty point set")]
    EmptySet,

    #[error("point {point} lies outside the domain ({domain})")]
    OutsideDomain { point: Complex64, domain: String },

    #[error("difference stencil point {point} leaves the domain ({domain})")]
    StencilOutsideDomain { point: Complex64, domain: String },

    #[error("mapping is not finite at {0}")]
    NonFiniteValue(Complex64),

    #[error("radial profile is not strictly increasing near r = {0}")]
    NonMonotone(f64),

    #[error("circle of radius {radius} does not meet the domain")]
    CircleMissesDomain { radius: f64 },

    #[error("disk of radius {radius} about {center} is not contained in the domain")]
    DiskExitsDomain { center: Complex64, radius: f64 },

    #[error("circle L1-norm vanishes at r = {radius}")]
    ZeroCircleNorm { radius: f64 },

    #[error("modulus integral I = {0} is not finite and positive")]
    DegenerateModulusIntegral(f64),

    #[error("no curves in the sampled family")]
    EmptyCurveFamily,

    #[error("mapping '{0}' is not radial")]
    NonRadialMap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value is not finite: {0}")]
    NotFinite(String),

    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
}
