//! Truncated Laurent series in descending powers of `x = z^(1/p)`.

use num_traits::Zero;

use crate::field::gauss::{gdiv, gmul, gr, lcm_u32, GaussRat, Rat};
use crate::field::{Poly, RatFun};

/// `sum_i coeffs[i] x^(top - i)`, exact for exponents `>= known` (all
/// exponents when `known` is `None`); lower terms are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct PSeries {
    ram: u32,
    top: i64,
    coeffs: Vec<GaussRat>,
    known: Option<i64>,
}

impl PSeries {
    pub fn new(ram: u32, top: i64, coeffs: Vec<GaussRat>, known: Option<i64>) -> PSeries {
        let mut s = PSeries { ram, top, coeffs, known };
        s.clip();
        s
    }

    pub fn zero(ram: u32) -> PSeries {
        PSeries { ram, top: 0, coeffs: Vec::new(), known: None }
    }

    pub fn from_poly(p: &Poly) -> PSeries {
        let top = p.degree().map(|d| d as i64).unwrap_or(0);
        PSeries::new(p.ram(), top, p.coeffs().iter().rev().cloned().collect(), None)
    }

    /// Expansion of `r` at infinity, exact for exponents `>= lowest`.
    pub fn from_ratfun(r: &RatFun, lowest: i64) -> PSeries {
        if r.is_zero() {
            return PSeries::zero(r.ram());
        }
        if r.is_polynomial() {
            let inv = r.den().lead().inv();
            return PSeries::from_poly(&r.num().scale(&inv));
        }
        let n = r.num().coeffs();
        let d = r.den().coeffs();
        let top = n.len() as i64 - d.len() as i64;
        let count = (top - lowest + 1).max(0) as usize;
        // power series division in y = 1/x
        let nr: Vec<&GaussRat> = n.iter().rev().collect();
        let dr: Vec<&GaussRat> = d.iter().rev().collect();
        let inv = dr[0].inv();
        let mut out: Vec<GaussRat> = Vec::with_capacity(count);
        for i in 0..count {
            let mut acc = nr.get(i).map(|c| (*c).clone()).unwrap_or_else(GaussRat::zero);
            for j in 1..=i.min(dr.len() - 1) {
                acc = &acc - &gmul(dr[j], &out[i - j]);
            }
            out.push(gmul(&acc, &inv));
        }
        PSeries::new(r.ram(), top, out, Some(lowest))
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn known(&self) -> Option<i64> {
        self.known
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    /// Coefficient of `x^e` (zero outside the stored range).
    pub fn coeff(&self, e: i64) -> GaussRat {
        let i = self.top - e;
        if i < 0 || i as usize >= self.coeffs.len() {
            GaussRat::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    fn bottom(&self) -> i64 {
        self.top - self.coeffs.len() as i64 + 1
    }

    /// Drop unknown coefficients and leading/trailing zeros.
    fn clip(&mut self) {
        if let Some(k) = self.known {
            let keep = (self.top - k + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.top = self.known.unwrap_or(0);
            return;
        }
        self.coeffs.drain(..lead_zeros);
        self.top -= lead_zeros as i64;
        if self.known.is_none() {
            while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                self.coeffs.pop();
            }
        }
    }

    /// Leading term `(exponent in x, coefficient)`, if any known term is
    /// nonzero.
    pub fn leading(&self) -> Option<(i64, GaussRat)> {
        self.coeffs.first().map(|c| (self.top, c.clone()))
    }

    pub fn lift(&self, ram: u32) -> PSeries {
        assert!(ram.is_multiple_of(self.ram));
        let s = (ram / self.ram) as i64;
        if s == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * s as usize);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                coeffs.extend(std::iter::repeat_n(GaussRat::zero(), s as usize - 1));
            }
            coeffs.push(c.clone());
        }
        PSeries::new(ram, self.top * s, coeffs, self.known.map(|k| (k - 1) * s + 1))
    }

    fn aligned(&self, o: &PSeries) -> (PSeries, PSeries) {
        let r = lcm_u32(self.ram, o.ram);
        (self.lift(r), o.lift(r))
    }

    pub fn add(&self, o: &PSeries) -> PSeries {
        if self.ram != o.ram {
            let (a, b) = self.aligned(o);
            return a.add(&b);
        }
        let known = match (self.known, o.known) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        if self.coeffs.is_empty() && o.coeffs.is_empty() {
            return PSeries { ram: self.ram, top: 0, coeffs: Vec::new(), known };
        }
        let top = match (self.coeffs.is_empty(), o.coeffs.is_empty()) {
            (true, _) => o.top,
            (_, true) => self.top,
            _ => self.top.max(o.top),
        };
        let low = match known {
            Some(k) => k,
            None => self.bottom().min(o.bottom()),
        };
        let coeffs = (low..=top).rev().map(|e| self.coeff(e) + o.coeff(e)).collect();
        PSeries::new(self.ram, top, coeffs, known)
    }

    pub fn neg(&self) -> PSeries {
        PSeries {
            ram: self.ram,
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            known: self.known,
        }
    }

    pub fn sub(&self, o: &PSeries) -> PSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> PSeries {
        PSeries::new(self.ram, self.top, self.coeffs.iter().map(|a| gmul(a, c)).collect(), self.known)
    }

    pub fn mul(&self, o: &PSeries) -> PSeries {
        if self.ram != o.ram {
            let (a, b) = self.aligned(o);
            return a.mul(&b);
        }
        let ka = self.known.map(|k| k + o.top);
        let kb = o.known.map(|k| k + self.top);
        let known = match (ka, kb) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return PSeries::new(self.ram, 0, Vec::new(), known);
        }
        let top = self.top + o.top;
        let low = known.unwrap_or(self.bottom() + o.bottom());
        let n = (top - low + 1).max(0) as usize;
        let mut coeffs = vec![GaussRat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] = &coeffs[i + j] + &gmul(a, b);
            }
        }
        PSeries::new(self.ram, top, coeffs, known)
    }

    /// `d/dz`, with `d x^e / dz = (e/p) x^(e-p)`.
    pub fn derive(&self) -> PSeries {
        let p = self.ram as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = self.top - i as i64;
                gmul(c, &gdiv(&gr(e), &gr(p)))
            })
            .collect();
        PSeries::new(self.ram, self.top - p, coeffs, self.known.map(|k| k - p))
    }

    /// Exponent of the leading term in `z`.
    pub fn lead_exponent(&self) -> Option<Rat> {
        self.leading().map(|(e, _)| Rat::new(e.into(), (self.ram as i64).into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::grq;

    #[test]
    fn expand_geometric() {
        // 1/(z - 1) = z^-1 + z^-2 + ...
        let r = RatFun::new(Poly::one(1), Poly::from_ints(1, &[-1, 1])).unwrap();
        let s = PSeries::from_ratfun(&r, -4);
        assert_eq!(s.top(), -1);
        assert_eq!(s.coeffs().len(), 4);
        assert!(s.coeffs().iter().all(|c| *c == gr(1)));
    }

    #[test]
    fn product_tracks_precision() {
        let r = RatFun::new(Poly::one(1), Poly::from_ints(1, &[-1, 1])).unwrap();
        let s = PSeries::from_ratfun(&r, -3);
        let z = PSeries::from_poly(&Poly::from_ints(1, &[0, 1]));
        let p = s.mul(&z); // 1 + z^-1 + z^-2 + O(z^-3)
        assert_eq!(p.top(), 0);
        assert_eq!(p.known(), Some(-2));
        assert_eq!(p.coeffs().len(), 3);
        let d = s.derive(); // -z^-2 - 2 z^-3 + ...
        assert_eq!(d.leading(), Some((-2, gr(-1))));
        assert_eq!(d.known(), Some(-4));
    }

    #[test]
    fn lifting() {
        let s = PSeries::from_poly(&Poly::from_ints(1, &[1, 1]));
        let l = s.lift(2);
        assert_eq!(l.coeff(2), gr(1));
        assert_eq!(l.coeff(1), gr(0));
        assert_eq!(l.coeff(0), gr(1));
        assert_eq!(s.scale(&grq(1, 2)).coeff(1), grq(1, 2));
    }
}
