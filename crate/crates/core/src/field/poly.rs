use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gauss::{fmt_gauss_expr, gr, GaussRat, Rat};
use crate::error::{Error, Result};

/// Univariate polynomial over Q(i) in the variable `x = z^(1/ram)`.
///
/// Coefficients are stored in ascending degree; the last stored coefficient
/// is nonzero unless the polynomial is zero (empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ram: u32,
    coeffs: Vec<GaussRat>,
}

impl Poly {
    pub fn new(ram: u32, mut coeffs: Vec<GaussRat>) -> Poly {
        assert!(ram >= 1, "ramification index must be at least 1");
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ram, coeffs }
    }

    pub fn zero(ram: u32) -> Poly {
        Poly::new(ram, Vec::new())
    }

    pub fn one(ram: u32) -> Poly {
        Poly::constant(ram, GaussRat::one())
    }

    pub fn constant(ram: u32, c: GaussRat) -> Poly {
        Poly::new(ram, vec![c])
    }

    /// The variable `x = z^(1/ram)`.
    pub fn var(ram: u32) -> Poly {
        Poly::monomial(ram, GaussRat::one(), 1)
    }

    /// `z` itself, i.e. `x^ram`.
    pub fn z(ram: u32) -> Poly {
        Poly::monomial(ram, GaussRat::one(), ram as usize)
    }

    pub fn monomial(ram: u32, c: GaussRat, deg: usize) -> Poly {
        let mut coeffs = vec![GaussRat::zero(); deg + 1];
        coeffs[deg] = c;
        Poly::new(ram, coeffs)
    }

    pub fn from_ints(ram: u32, coeffs: &[i64]) -> Poly {
        Poly::new(ram, coeffs.iter().map(|&c| gr(c)).collect())
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> GaussRat {
        self.coeffs.get(j).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree in `x`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> GaussRat {
        self.coeffs.last().cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn constant_term(&self) -> GaussRat {
        self.coeff(0)
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        Poly::new(self.ram, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv();
        self.scale(&inv)
    }

    /// Re-express in `y = z^(1/new_ram)`; `new_ram` must be a multiple of `ram`.
    pub fn lift(&self, new_ram: u32) -> Poly {
        assert!(new_ram.is_multiple_of(self.ram), "cannot lift z^(1/{}) to z^(1/{})", self.ram, new_ram);
        if new_ram == self.ram {
            return self.clone();
        }
        self.substitute_power((new_ram / self.ram) as usize, new_ram)
    }

    /// `x -> x^n`, keeping the result in ramification `ram`.
    pub fn substitute_power(&self, n: usize, ram: u32) -> Poly {
        if self.is_zero() {
            return Poly::zero(ram);
        }
        let mut coeffs = vec![GaussRat::zero(); (self.coeffs.len() - 1) * n + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j * n] = c.clone();
        }
        Poly::new(ram, coeffs)
    }

    /// Derivative with respect to `x` (not `z`).
    pub fn deriv_x(&self) -> Poly {
        Poly::new(
            self.ram,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * gr(j as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussRat::zero(), |acc, c| acc * x + c)
    }

    pub fn div_rem(&self, other: &Poly) -> Result<(Poly, Poly)> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ram = self.ram;
        let mut rem = self.coeffs.clone();
        let dd = other.coeffs.len() - 1;
        if rem.len() < other.coeffs.len() {
            return Ok((Poly::zero(ram), self.clone()));
        }
        let inv = other.lead().inv();
        let mut quot = vec![GaussRat::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv;
            if !c.is_zero() {
                for (j, b) in other.coeffs.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &c * b;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(ram, quot), Poly::new(ram, rem)))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(self.ram), |acc, _| &acc * self)
    }

    /// Exponent (in `z`) of the degree-`j` term.
    pub fn exponent_of(&self, j: usize) -> Rat {
        Rat::new((j as i64).into(), (self.ram as i64).into())
    }

    /// Render as an expression in `z` with rational exponents, e.g. `(2/3)*z^(3/2)`.
    pub fn render(&self) -> String {
        render_terms(
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (c.clone(), self.exponent_of(j))),
        )
    }
}

/// Render `sum c * z^e` given (coefficient, exponent) pairs in display order.
pub fn render_terms(terms: impl Iterator<Item = (GaussRat, Rat)>) -> String {
    let mut out = String::new();
    for (c, e) in terms {
        let mon = render_z_power(&e);
        let neg_real = c.im.is_zero() && c.re < Rat::zero();
        let (sign, mag) = if neg_real { ("-", -c.clone()) } else { ("+", c.clone()) };
        let body = if mon.is_empty() {
            fmt_gauss_expr(&mag)
        } else if mag.is_one() {
            mon
        } else {
            format!("{}*{}", fmt_gauss_expr(&mag), mon)
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if sign == "-" { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

pub fn render_z_power(e: &Rat) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        "z".to_string()
    } else if e.is_integer() && *e > Rat::zero() {
        format!("z^{}", e.numer())
    } else if e.is_integer() {
        format!("z^({})", e.numer())
    } else {
        format!("z^({}/{})", e.numer(), e.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn aligned(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if a.ram == b.ram {
        (a.clone(), b.clone())
    } else {
        let r = super::gauss::lcm_u32(a.ram, b.ram);
        (a.lift(r), b.lift(r))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        if self.ram != rhs.ram {
            let (a, b) = aligned(self, rhs);
            return &a + &b;
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.ram, (0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.ram, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.ram != rhs.ram {
            let (a, b) = aligned(self, rhs);
            return &a * &b;
        }
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.ram);
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::new(self.ram, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add, Poly);
forward_owned!(Sub, sub, Poly);
forward_owned!(Mul, mul, Poly);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::grq;

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(1, &[-1, 0, 1]);
        let b = Poly::from_ints(1, &[-1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(1, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&Poly::from_ints(1, &[1, 1])), Poly::from_ints(1, &[1, 1]));
        assert!(a.div_rem(&Poly::zero(1)).is_err());
    }

    #[test]
    fn lifting_keeps_meaning() {
        // z^(1/2) + 1 in ram 2 becomes z^(2/4) + 1 in ram 4
        let p = Poly::from_ints(2, &[1, 1]);
        assert_eq!(p.lift(4), Poly::from_ints(4, &[1, 0, 1]));
    }

    #[test]
    fn rendering() {
        let p = Poly::new(2, vec![gr(0), gr(0), gr(0), grq(2, 3)]);
        assert_eq!(p.render(), "(2/3)*z^(3/2)");
        assert_eq!((-&p).render(), "-(2/3)*z^(3/2)");
        assert_eq!(Poly::from_ints(1, &[0, -1, 3]).render(), "3*z^2 - z");
    }
}
