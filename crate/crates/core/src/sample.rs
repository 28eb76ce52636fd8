//! Seeded random inputs for property runs and the casebook.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::field::gauss::gr;
use crate::field::{Poly, RatFun};
use crate::linop::RatOp;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer polynomial in `z^(1/ram)` of degree exactly `deg`, coefficients
/// in `-bound..=bound`.
pub fn poly(rng: &mut SampleRng, ram: u32, deg: usize, bound: i64) -> Poly {
    let mut cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
    while cs[deg] == 0 {
        cs[deg] = rng.gen_range(-bound..=bound);
    }
    Poly::from_ints(ram, &cs)
}

/// Polynomial of degree at most `deg`, possibly zero.
pub fn poly_upto(rng: &mut SampleRng, ram: u32, deg: usize, bound: i64) -> Poly {
    let cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
    Poly::from_ints(ram, &cs)
}

/// Even polynomial `P(Y) = sum p_j Y^(2j)`, degree at most `deg`, nonconstant.
pub fn even_poly(rng: &mut SampleRng, deg: usize, bound: i64) -> Poly {
    let half = deg / 2;
    assert!(half >= 1, "an even nonconstant polynomial needs degree >= 2");
    let top = rng.gen_range(1..=half);
    let mut cs = vec![0i64; 2 * top + 1];
    for j in 0..=top {
        cs[2 * j] = rng.gen_range(-bound..=bound);
    }
    while cs[2 * top] == 0 {
        cs[2 * top] = rng.gen_range(-bound..=bound);
    }
    Poly::from_ints(1, &cs)
}

/// Rational function with numerator degree at most `deg` and a monic-ish
/// nonzero denominator of degree at most `deg`.
pub fn ratfun(rng: &mut SampleRng, deg: usize, bound: i64) -> RatFun {
    let num = poly_upto(rng, 1, deg, bound);
    let dd = rng.gen_range(0..=deg);
    let den = poly(rng, 1, dd, bound);
    RatFun::new(num, den).expect("nonzero denominator")
}

/// Operator of order exactly `order` with polynomial coefficients of degree
/// at most `deg` (leading coefficient nonzero).
pub fn poly_op(rng: &mut SampleRng, order: usize, deg: usize, bound: i64) -> RatOp {
    let mut cs: Vec<RatFun> = (0..order).map(|_| RatFun::from_poly(poly_upto(rng, 1, deg, bound))).collect();
    let d = rng.gen_range(0..=deg);
    cs.push(RatFun::from_poly(poly(rng, 1, d, bound)));
    RatOp::new(cs)
}

/// Operator of order exactly `order` with rational coefficients.
pub fn rat_op(rng: &mut SampleRng, order: usize, deg: usize, bound: i64) -> RatOp {
    let mut cs: Vec<RatFun> = (0..order).map(|_| ratfun(rng, deg, bound)).collect();
    let mut lead = ratfun(rng, deg, bound);
    while lead.is_zero() {
        lead = ratfun(rng, deg, bound);
    }
    cs.push(lead);
    RatOp::new(cs)
}

/// Nonzero integer in `-bound..=bound`.
pub fn nonzero_int(rng: &mut SampleRng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

pub fn small_scalar(rng: &mut SampleRng, bound: i64) -> crate::field::GaussRat {
    gr(nonzero_int(rng, bound))
}
