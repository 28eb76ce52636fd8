//! Exact symbolic toolkit for linear differential operators whose
//! coefficients are rational at infinity.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: Gaussian rationals, univariate polynomials and rational
//!   functions in a (possibly ramified) variable `z^(1/p)`, and the ray
//!   ordering on exponential parts.
//! * [`tower`]: differential field towers built from exponentials,
//!   primitives and roots, with exact derivation and structural zero tests.
//! * [`linop`]: operator algebra (application, composition, right division,
//!   GCRD, gauge normalisation, change of variables, Wronskians).
//! * [`formal`]: formal solutions at the irregular singular point at
//!   infinity (Newton polygon, truncated series, formal Wronskians).
//! * [`frank`]: the `M_{k,mu}` relation systems and the associated
//!   substitution identities and recursions.
//! * [`casebook`]: end-to-end verification scenarios with JSON reports.

pub mod casebook;
pub mod error;
pub mod field;
pub mod formal;
pub mod frank;
pub mod linop;
pub mod sample;
pub mod tower;

pub use error::{Error, Result};
pub use field::{GaussRat, Poly, Rat, RatFun, RayOrder};
pub use linop::LinOp;
pub use tower::{Tower, TowerBuilder, TowerElem};
