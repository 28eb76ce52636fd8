//! Exact scalars, polynomials and rational functions in `z^(1/p)`.

pub mod gauss;
pub mod poly;
pub mod ratfun;
pub mod ray;

pub use gauss::{GaussRat, Rat};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use ray::{ray_compare, RayOrder};
