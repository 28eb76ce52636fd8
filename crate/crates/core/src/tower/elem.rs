use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::mpoly::MPoly;
use crate::error::{Error, Result};
use crate::field::gauss::{gr, pow_i, GaussRat};

/// Element of a differential field tower: a reduced quotient of polynomials
/// in the tower variables.
///
/// Canonical form: `gcd(num, den) = 1` and the lex-leading coefficient of
/// `den` is 1, so structural equality is equality in the field. Elements do
/// not carry their tower; derivation goes through [`super::Tower::derive`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerElem {
    num: MPoly,
    den: MPoly,
}

impl TowerElem {
    pub fn new(num: MPoly, den: MPoly) -> Result<TowerElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(TowerElem::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> TowerElem {
        if num.is_zero() {
            return TowerElem::zero();
        }
        if let Some(c) = den.as_constant() {
            return TowerElem { num: num.scale(&c.inv()), den: MPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        TowerElem::unit_normal(num, den)
    }

    /// Scale so the denominator's leading coefficient is 1 (inputs coprime).
    fn unit_normal(num: MPoly, den: MPoly) -> TowerElem {
        let lc = den.lead_coeff();
        if lc.is_one() {
            TowerElem { num, den }
        } else {
            let inv = lc.inv();
            TowerElem { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: MPoly) -> TowerElem {
        TowerElem { num: p, den: MPoly::one() }
    }

    pub fn zero() -> TowerElem {
        TowerElem::from_poly(MPoly::zero())
    }

    pub fn one() -> TowerElem {
        TowerElem::from_poly(MPoly::one())
    }

    pub fn constant(c: GaussRat) -> TowerElem {
        TowerElem::from_poly(MPoly::constant(c))
    }

    pub fn int(n: i64) -> TowerElem {
        TowerElem::constant(gr(n))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.den.is_constant() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Bit set of tower variables occurring in numerator or denominator.
    pub fn var_mask(&self) -> u32 {
        self.num.var_mask() | self.den.var_mask()
    }

    pub fn inv(&self) -> Result<TowerElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(TowerElem::unit_normal(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &TowerElem) -> Result<TowerElem> {
        Ok(self * &o.inv()?)
    }

    pub fn scale(&self, c: &GaussRat) -> TowerElem {
        if c.is_zero() {
            return TowerElem::zero();
        }
        TowerElem { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<TowerElem> {
        if let Some(c) = self.as_constant() {
            if c.is_zero() && e < 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(TowerElem::constant(pow_i(&c, e)));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = u32::try_from(e.unsigned_abs()).map_err(|_| Error::Operator("exponent too large".into()))?;
        // numerator and denominator stay coprime under powers
        Ok(TowerElem { num: base.num.pow(n), den: base.den.pow(n) })
    }
}

impl Add for &TowerElem {
    type Output = TowerElem;
    fn add(self, o: &TowerElem) -> TowerElem {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_constant() {
                return TowerElem::from_poly(self.num.add(&o.num));
            }
            return TowerElem::reduce(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_constant() {
            let num = self.num.mul(&o.den).add(&o.num);
            return TowerElem { num, den: o.den.clone() };
        }
        if o.den.is_constant() {
            let num = o.num.mul(&self.den).add(&self.num);
            return TowerElem { num, den: self.den.clone() };
        }
        // Henrici: only the common factor of the denominators can cancel
        let g = self.den.gcd(&o.den);
        if g.is_constant() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            if num.is_zero() {
                return TowerElem::zero();
            }
            return TowerElem::unit_normal(num, self.den.mul(&o.den));
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let t = self.num.mul(&d1).add(&o.num.mul(&b1));
        if t.is_zero() {
            return TowerElem::zero();
        }
        let g2 = t.gcd(&g);
        if g2.is_constant() {
            TowerElem::unit_normal(t, b1.mul(&o.den))
        } else {
            TowerElem::unit_normal(
                t.div_exact(&g2).expect("gcd divides"),
                b1.mul(&o.den.div_exact(&g2).expect("gcd divides")),
            )
        }
    }
}

impl Sub for &TowerElem {
    type Output = TowerElem;
    fn sub(self, o: &TowerElem) -> TowerElem {
        self + &(-o)
    }
}

impl Neg for &TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        TowerElem { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Mul for &TowerElem {
    type Output = TowerElem;
    fn mul(self, o: &TowerElem) -> TowerElem {
        if self.is_zero() || o.is_zero() {
            return TowerElem::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        // cross cancellation keeps the result reduced
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let cancel = |p: &MPoly, g: &MPoly| {
            if g.is_constant() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = cancel(&self.num, &g1).mul(&cancel(&o.num, &g2));
        let den = cancel(&self.den, &g2).mul(&cancel(&o.den, &g1));
        TowerElem::unit_normal(num, den)
    }
}

/// Panics on division by zero; [`TowerElem::checked_div`] returns an error.
impl Div for &TowerElem {
    type Output = TowerElem;
    fn div(self, o: &TowerElem) -> TowerElem {
        self.checked_div(o).expect("division by zero tower element")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TowerElem {
            type Output = TowerElem;
            fn $m(self, rhs: TowerElem) -> TowerElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TowerElem> for TowerElem {
            type Output = TowerElem;
            fn $m(self, rhs: &TowerElem) -> TowerElem {
                (&self).$m(rhs)
            }
        }
        impl $tr<TowerElem> for &TowerElem {
            type Output = TowerElem;
            fn $m(self, rhs: TowerElem) -> TowerElem {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        -&self
    }
}

impl From<GaussRat> for TowerElem {
    fn from(c: GaussRat) -> TowerElem {
        TowerElem::constant(c)
    }
}

impl std::iter::Sum for TowerElem {
    fn sum<I: Iterator<Item = TowerElem>>(iter: I) -> TowerElem {
        iter.fold(TowerElem::zero(), |a, b| a + b)
    }
}
