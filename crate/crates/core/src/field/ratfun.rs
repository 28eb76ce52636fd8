use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gauss::{gr, lcm_u32, GaussRat, Rat};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Rational function `num/den` in `x = z^(1/ram)`, kept in lowest terms with
/// a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = if num.ram() == den.ram() {
            (num, den)
        } else {
            let r = lcm_u32(num.ram(), den.ram());
            (num.lift(r), den.lift(r))
        };
        if num.is_zero() {
            return Ok(RatFun::zero(num.ram()));
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g)?;
        let (mut d, _) = den.div_rem(&g)?;
        let lc = d.lead().inv();
        n = n.scale(&lc);
        d = d.scale(&lc);
        Ok(RatFun { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let ram = p.ram();
        RatFun { num: p, den: Poly::one(ram) }
    }

    pub fn zero(ram: u32) -> RatFun {
        RatFun { num: Poly::zero(ram), den: Poly::one(ram) }
    }

    pub fn one(ram: u32) -> RatFun {
        RatFun::constant(ram, GaussRat::one())
    }

    pub fn constant(ram: u32, c: GaussRat) -> RatFun {
        RatFun::from_poly(Poly::constant(ram, c))
    }

    pub fn z(ram: u32) -> RatFun {
        RatFun::from_poly(Poly::z(ram))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn ram(&self) -> u32 {
        self.num.ram()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        self.is_constant().then(|| self.num.constant_term())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn lift(&self, ram: u32) -> RatFun {
        RatFun { num: self.num.lift(ram), den: self.den.lift(ram) }
    }

    /// Lowest ramification index that represents this function.
    pub fn reduce_ram(&self) -> RatFun {
        let p = self.ram();
        let mut g = p;
        for poly in [&self.num, &self.den] {
            for (j, c) in poly.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    g = num_integer::gcd(g, j as u32);
                }
            }
        }
        if g <= 1 || g == p && self.is_constant() {
            if self.is_constant() && p != 1 {
                return RatFun::constant(1, self.num.constant_term());
            }
            return self.clone();
        }
        let shrink = |poly: &Poly| {
            Poly::new(
                p / g,
                poly.coeffs().iter().step_by(g as usize).cloned().collect(),
            )
        };
        RatFun { num: shrink(&self.num), den: shrink(&self.den) }
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: &GaussRat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.ram());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<RatFun> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok((0..e.unsigned_abs()).fold(RatFun::one(self.ram()), |acc, _| &acc * &base))
    }

    /// d/dz, with `d(z^(1/p))/dz = (1/p) z^(1/p - 1)`.
    pub fn derive(&self) -> RatFun {
        let p = self.ram();
        let n = &self.num;
        let d = &self.den;
        let top = &(&n.deriv_x() * d) - &(n * &d.deriv_x());
        // multiply by 1/(p x^(p-1))
        let bottom = &(d * d) * &Poly::monomial(p, gr(p as i64), (p - 1) as usize);
        RatFun::new(top, bottom).expect("nonzero denominator")
    }

    /// `(deg num - deg den)/p`; `None` for the zero function.
    pub fn deg_infty(&self) -> Option<Rat> {
        let dn = self.num.degree()? as i64;
        let dd = self.den.degree().expect("nonzero denominator") as i64;
        Some(Rat::new((dn - dd).into(), (self.ram() as i64).into()))
    }

    /// Leading coefficient at infinity (ratio of leading coefficients).
    pub fn lead_coeff(&self) -> GaussRat {
        if self.is_zero() {
            GaussRat::zero()
        } else {
            self.num.lead() / self.den.lead()
        }
    }

    /// Substitute `z -> z^n` (so `x -> x^n`), keeping the ramification.
    pub fn compose_power(&self, n: usize) -> RatFun {
        let p = self.ram();
        RatFun::new(self.num.substitute_power(n, p), self.den.substitute_power(n, p))
            .expect("nonzero denominator")
    }

    pub fn render(&self) -> String {
        if self.den.is_constant() {
            return self.num.render();
        }
        let wrap = |p: &Poly| {
            let s = p.render();
            let simple = p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
                && !s.starts_with('-');
            if simple {
                s
            } else {
                format!("({s})")
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.ram() != rhs.ram() {
            let r = lcm_u32(self.ram(), rhs.ram());
            return &self.lift(r) + &rhs.lift(r);
        }
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::new(num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.ram() != rhs.ram() {
            let r = lcm_u32(self.ram(), rhs.ram());
            return &self.lift(r) * &rhs.lift(r);
        }
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

/// Panics on division by zero; use [`RatFun::checked_div`] to get an error.
impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> RatFun {
        RatFun::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::{grq, rat, ratq};

    fn zpoly(c: &[i64]) -> RatFun {
        RatFun::from_poly(Poly::from_ints(1, c))
    }

    #[test]
    fn derive_examples() {
        assert_eq!(zpoly(&[0, 0, 1]).derive(), zpoly(&[0, 2]));
        // d/dz z^(1/2) = (1/2) z^(-1/2) = 1/(2x)
        let sqrt_z = RatFun::from_poly(Poly::var(2));
        let expect = RatFun::new(Poly::one(2), Poly::monomial(2, gr(2), 1)).unwrap();
        assert_eq!(sqrt_z.derive(), expect);
        assert_eq!(expect.deg_infty(), Some(ratq(-1, 2)));
    }

    #[test]
    fn division_examples() {
        let q = zpoly(&[-1, 0, 1]).checked_div(&zpoly(&[-1, 1])).unwrap();
        assert_eq!(q, zpoly(&[1, 1]));
        assert_eq!(zpoly(&[1]).checked_div(&RatFun::zero(1)), Err(Error::DivisionByZero));
    }

    #[test]
    fn degree_at_infinity() {
        let a = RatFun::new(Poly::from_ints(1, &[0, 0, 0, 1]), Poly::from_ints(1, &[-1, 1])).unwrap();
        assert_eq!(a.deg_infty(), Some(rat(2)));
        let b = RatFun::new(Poly::one(1), Poly::from_ints(1, &[0, 1])).unwrap();
        assert_eq!(b.deg_infty(), Some(rat(-1)));
        // z^(1/2) (1 + 1/z) = (x^2 + 1)/x in x = z^(1/2)
        let c = RatFun::new(Poly::from_ints(2, &[1, 0, 1]), Poly::var(2)).unwrap();
        assert_eq!(c.deg_infty(), Some(ratq(1, 2)));
        assert_eq!(RatFun::zero(1).deg_infty(), None);
    }

    #[test]
    fn mixed_ramification_lifts() {
        let a = RatFun::from_poly(Poly::var(2));
        let b = RatFun::from_poly(Poly::var(3));
        let s = &a * &b; // z^(1/2 + 1/3) = z^(5/6)
        assert_eq!(s.ram(), 6);
        assert_eq!(s.deg_infty(), Some(ratq(5, 6)));
        assert_eq!(s.num().coeff(5), grq(1, 1));
    }

    #[test]
    fn reduce_ram_collapses() {
        let a = RatFun::from_poly(Poly::from_ints(2, &[1, 0, 3]));
        assert_eq!(a.reduce_ram(), zpoly(&[1, 3]));
    }
}
