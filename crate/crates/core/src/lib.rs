//! Numerical laboratory for planar homeomorphisms with finite distortion.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: extended-plane points, the chordal metric, rings, polar grids
//!   and circle quadrature.
//! - [`quad`]: adaptive Gauss–Kronrod and Gauss–Legendre rules shared by the
//!   higher modules.
//! - [`mappings`]: evaluable mapping models, Wirtinger derivatives, the
//!   distortion coefficient and the built-in radial test families.
//! - [`modulus`]: closed-form and discrete conformal moduli of ring curve
//!   families, extremal densities and the ring/lower functionals.
//! - [`means`]: circle and disk means, mean-oscillation estimates and
//!   divergence tests on radial mean profiles.
//! - [`growth`]: the partial-integral growth classifier used by every
//!   divergence verdict.
//! - [`phi`]: the convex-function condition calculus.
//! - [`verification`]: distortion bounds, class membership and equicontinuity
//!   probes.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod growth;
pub mod mappings;
pub mod means;
pub mod modulus;
pub mod phi;
pub mod quad;
pub mod verification;

pub use error::{Error, Result};
pub use geometry::{Domain, ExtendedPoint, PolarGrid, RadialSpacing, Ring};
pub use growth::{GrowthClassifier, Verdict};
pub use mappings::{DerivativePair, Distortion, MappingModel};
pub use num_complex::Complex64;
