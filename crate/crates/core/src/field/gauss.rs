//! Scalars: arbitrary-precision rationals and Gaussian rationals.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub type Rat = BigRational;
pub type GaussRat = Complex<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn gr(n: i64) -> GaussRat {
    Complex::new(rat(n), Rat::zero())
}

pub fn grq(n: i64, d: i64) -> GaussRat {
    Complex::new(ratq(n, d), Rat::zero())
}

pub fn from_rat(r: Rat) -> GaussRat {
    Complex::new(r, Rat::zero())
}

pub fn imag_unit() -> GaussRat {
    Complex::new(Rat::zero(), Rat::one())
}

pub fn is_real(c: &GaussRat) -> bool {
    c.im.is_zero()
}

pub fn is_integer(c: &GaussRat) -> bool {
    c.im.is_zero() && c.re.is_integer()
}

pub fn to_c64(c: &GaussRat) -> Complex<f64> {
    Complex::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Product with a shortcut for the (common) all-real case.
pub fn gmul(a: &GaussRat, b: &GaussRat) -> GaussRat {
    if a.im.is_zero() && b.im.is_zero() {
        Complex::new(&a.re * &b.re, Rat::zero())
    } else {
        a * b
    }
}

/// Quotient with a shortcut for real operands; `b` must be nonzero.
pub fn gdiv(a: &GaussRat, b: &GaussRat) -> GaussRat {
    if a.im.is_zero() && b.im.is_zero() {
        Complex::new(&a.re / &b.re, Rat::zero())
    } else {
        a / b
    }
}

/// Integer power with negative exponents allowed for nonzero bases.
pub fn pow_i(c: &GaussRat, e: i64) -> GaussRat {
    let mut base = if e < 0 { c.inv() } else { c.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = GaussRat::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

/// Square root in Q(i) when one exists.
pub fn sqrt_exact(c: &GaussRat) -> Option<GaussRat> {
    if c.is_zero() {
        return Some(GaussRat::zero());
    }
    // (a+bi)^2 = c: a^2 - b^2 = re, 2ab = im, a^2 + b^2 = |c|
    let norm = &c.re * &c.re + &c.im * &c.im;
    let modulus = rat_sqrt(&norm)?;
    let a2 = (&modulus + &c.re) / rat(2);
    let b2 = (&modulus - &c.re) / rat(2);
    let a = rat_sqrt(&a2)?;
    let mut b = rat_sqrt(&b2)?;
    if c.im.is_negative() {
        b = -b;
    }
    let cand = Complex::new(a, b);
    if &cand * &cand == *c {
        Some(cand)
    } else {
        None
    }
}

pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Total order used only for canonical output ordering (real part first).
pub fn cmp_gauss(a: &GaussRat, b: &GaussRat) -> Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical `a+bi` rendering.
pub fn fmt_gauss(c: &GaussRat) -> String {
    if c.im.is_zero() {
        return fmt_rat(&c.re);
    }
    let im = if c.im.is_one() {
        "i".to_string()
    } else if (-&c.im).is_one() {
        "-i".to_string()
    } else {
        format!("{}i", fmt_rat(&c.im))
    };
    if c.re.is_zero() {
        im
    } else if c.im.is_negative() {
        format!("{}{}", fmt_rat(&c.re), im)
    } else {
        format!("{}+{}", fmt_rat(&c.re), im)
    }
}

/// Rendering that re-parses unambiguously inside expressions: `(a+b*i)`.
pub fn fmt_gauss_expr(c: &GaussRat) -> String {
    let re = fmt_rat(&c.re);
    let im_abs = fmt_rat(&c.im.abs());
    let im_term = if c.im.abs().is_one() {
        "i".to_string()
    } else {
        format!("{im_abs}*i")
    };
    if c.im.is_zero() {
        if c.re.is_integer() {
            re
        } else {
            format!("({re})")
        }
    } else if c.re.is_zero() {
        if c.im.is_negative() {
            format!("(-{im_term})")
        } else if c.im.is_one() {
            im_term
        } else {
            format!("({im_term})")
        }
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        format!("({re}{sign}{im_term})")
    }
}

/// Falling factorial `c (c-1) ... (c-n+1)`.
pub fn falling(c: &GaussRat, n: usize) -> GaussRat {
    (0..n).fold(GaussRat::one(), |acc, j| acc * (c - gr(j as i64)))
}

pub fn binom(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Rat::from_integer(acc)
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_forms() {
        assert_eq!(fmt_gauss(&grq(1, 2)), "1/2");
        assert_eq!(fmt_gauss(&Complex::new(rat(1), ratq(-3, 4))), "1-3/4i");
        assert_eq!(fmt_gauss(&imag_unit()), "i");
        assert_eq!(fmt_gauss_expr(&Complex::new(ratq(1, 2), rat(2))), "(1/2+2*i)");
        assert_eq!(fmt_gauss_expr(&grq(-2, 3)), "(-2/3)");
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(sqrt_exact(&gr(-4)), Some(Complex::new(rat(0), rat(2))));
        assert_eq!(sqrt_exact(&Complex::new(rat(0), rat(2))), Some(Complex::new(rat(1), rat(1))));
        assert_eq!(sqrt_exact(&gr(2)), None);
        assert_eq!(sqrt_exact(&grq(9, 4)), Some(grq(3, 2)));
    }

    #[test]
    fn binomials_and_falling() {
        assert_eq!(binom(5, 2), rat(10));
        assert_eq!(falling(&gr(-2), 3), gr(-24));
        assert_eq!(pow_i(&gr(2), -3), grq(1, 8));
    }
}
