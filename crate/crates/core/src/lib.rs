//! Exact construction and verification of symmetric four-directional bivariate
//! pseudo-spline subdivision schemes.
//!
//! - [`laurent`]: sparse Laurent polynomials over arbitrary-precision rationals.
//! - [`symbols`]: closed-form symbol constructors for every scheme family.
//! - [`analysis`]: symmetry, sum rules, reproduction, interpolation, support.
//! - [`mask`] and [`subdivision`]: dense masks, refinement, limit sampling.
//! - [`format`]: JSON mask documents, grid CSV, PGM export.

pub mod analysis;
pub mod error;
pub mod format;
pub mod laurent;
pub mod mask;
pub mod subdivision;
pub mod symbols;

pub use analysis::{DegreeReport, SupportOctagon, SupportReport};
pub use error::{Error, Result};
pub use laurent::{BivariateLaurent, Exponent2, Rational, Transform, UnivariateLaurent};
pub use mask::MaskMatrix;
pub use subdivision::{GridFunction, Polynomial2, Window};
pub use symbols::{Family, Params, SchemeSymbol};
