//! Exponential parts and their bookkeeping: sums, shifts, ray classes.

use num_traits::{One, Zero};
use std::cmp::Ordering;

use super::newton::exponential_parts;
use super::series::PSeries;
use crate::error::{Error, Result};
use crate::field::gauss::{cmp_gauss, gr, lcm_u32, to_c64, GaussRat};
use crate::field::{ray_compare, Poly, RatFun, RayOrder};
use crate::linop::RatOp;

/// Polynomial in `z^(1/p)` with zero constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpPart {
    poly: Poly,
}

impl ExpPart {
    pub fn new(poly: Poly) -> Result<ExpPart> {
        if !poly.constant_term().is_zero() {
            return Err(Error::Precondition(format!(
                "exponential part {} has a nonzero constant term",
                poly.render()
            )));
        }
        Ok(ExpPart { poly })
    }

    /// Drop the constant term, the normalisation used for exponential parts.
    pub fn normalized(poly: &Poly) -> ExpPart {
        let mut cs = poly.coeffs().to_vec();
        if let Some(c) = cs.first_mut() {
            *c = GaussRat::zero();
        }
        ExpPart { poly: Poly::new(poly.ram(), cs) }
    }

    pub fn zero() -> ExpPart {
        ExpPart { poly: Poly::zero(1) }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn ram(&self) -> u32 {
        self.poly.ram()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn lift(&self, ram: u32) -> ExpPart {
        ExpPart { poly: self.poly.lift(ram) }
    }

    pub fn render(&self) -> String {
        self.poly.render()
    }

    pub fn add(&self, o: &ExpPart) -> ExpPart {
        ExpPart { poly: &self.poly + &o.poly }
    }

    pub fn sub(&self, o: &ExpPart) -> ExpPart {
        ExpPart { poly: &self.poly - &o.poly }
    }

    pub fn scale(&self, c: &GaussRat) -> ExpPart {
        ExpPart { poly: self.poly.scale(c) }
    }

    /// `q'` as an exact series.
    pub fn derivative_series(&self) -> PSeries {
        PSeries::from_poly(&self.poly).derive()
    }

    pub fn derivative(&self) -> RatFun {
        RatFun::from_poly(self.poly.clone()).derive()
    }

    /// Equality regardless of the ramification used to write the parts.
    pub fn same_as(&self, o: &ExpPart) -> bool {
        self.sub(o).is_zero()
    }

    /// Total order for canonical listings: coefficientwise from the highest
    /// power down.
    pub fn canonical_cmp(&self, o: &ExpPart) -> Ordering {
        let r = lcm_u32(self.ram(), o.ram());
        let (a, b) = (self.poly.lift(r), o.poly.lift(r));
        let n = a.coeffs().len().max(b.coeffs().len());
        for j in (0..n).rev() {
            let ord = cmp_gauss(&a.coeff(j), &b.coeff(j));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

/// `{q_j + kappa (j != lambda), q_lambda - (k-1) kappa}`; `lambda` is
/// 1-based.
pub fn shifted_parts(qs: &[ExpPart], kappa: &ExpPart, lambda: usize) -> Result<Vec<ExpPart>> {
    let k = qs.len();
    if lambda < 1 || lambda > k {
        return Err(Error::Precondition(format!("index {lambda} outside 1..={k}")));
    }
    Ok(qs
        .iter()
        .enumerate()
        .map(|(j, q)| {
            if j + 1 == lambda {
                q.sub(&kappa.scale(&gr(k as i64 - 1)))
            } else {
                q.add(kappa)
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RayClass {
    A,
    B,
    C,
    None,
}

/// Classify three distinct parts on the ray `arg z = theta` by the
/// configuration of `kappa_1 < kappa_2 < kappa_3` relative to 0.
pub fn classify_parts_on_ray(parts: &[ExpPart; 3], theta: f64) -> Result<RayClass> {
    for i in 0..3 {
        for j in i + 1..3 {
            if parts[i].same_as(&parts[j]) {
                return Err(Error::Precondition("parts must be pairwise distinct".into()));
            }
        }
    }
    let mut sorted: Vec<&ExpPart> = parts.iter().collect();
    // insertion sort, since comparisons can fail with a near tie
    for i in 1..3 {
        let mut j = i;
        while j > 0 && ray_compare(sorted[j].poly(), sorted[j - 1].poly(), theta)? == RayOrder::Prec {
            sorted.swap(j, j - 1);
            j -= 1;
        }
    }
    let zero = Poly::zero(1);
    let vs0 = |p: &ExpPart| ray_compare(p.poly(), &zero, theta);
    let strict = ray_compare(sorted[0].poly(), sorted[1].poly(), theta)? == RayOrder::Prec;
    let (k1, k2, k3) = (sorted[0], sorted[1], sorted[2]);
    let class = if k3.is_zero() {
        if strict && vs0(k2)? == RayOrder::Prec {
            RayClass::B
        } else {
            RayClass::None
        }
    } else if k2.is_zero() {
        if vs0(k1)? == RayOrder::Prec && vs0(k3)? == RayOrder::Succ {
            RayClass::C
        } else {
            RayClass::None
        }
    } else if strict && vs0(k2)? == RayOrder::Prec && vs0(k3)? == RayOrder::Succ {
        RayClass::A
    } else {
        RayClass::None
    };
    Ok(class)
}

/// The part of `-integral(a)` with positive powers of `z`, for `a` with
/// `deg a < 0`.
pub fn abel_expected(a: &RatFun) -> ExpPart {
    if a.is_zero() {
        return ExpPart::zero();
    }
    let p = a.ram() as i64;
    let s = PSeries::from_ratfun(a, -p + 1);
    let mut coeffs = vec![GaussRat::zero(); p as usize];
    for e in (-p + 1)..=s.top().min(-1) {
        // integral of x^e dz is p/(e+p) x^(e+p)
        let c = s.coeff(e);
        if !c.is_zero() {
            coeffs[(e + p) as usize] = -(c * gr(p)) / gr(e + p);
        }
    }
    ExpPart::normalized(&Poly::new(a.ram(), coeffs))
}

fn abel_setup(l: &RatOp) -> Result<(RatOp, RatFun)> {
    let k = l.order();
    if k == 0 {
        return Err(Error::Precondition("operator of order 0".into()));
    }
    let m = l.monic()?;
    let a = m.coeff(k - 1);
    if !a.is_zero() && a.deg_infty().is_some_and(|d| d >= num_traits::zero()) {
        return Err(Error::Precondition(format!(
            "a_(k-1) = {} does not vanish at infinity",
            a.render()
        )));
    }
    Ok((m, a))
}

/// Sum of the exponential parts, with multiplicity, equals the positive-power
/// part of `-integral(a_{k-1})` (zero when `a_{k-1}` has integer powers).
pub fn check_abel(l: &RatOp) -> Result<bool> {
    let (m, a) = abel_setup(l)?;
    let parts = exponential_parts(&m)?;
    if !parts.is_exact() {
        return Err(Error::Approximate);
    }
    let sum = parts
        .parts
        .iter()
        .fold(ExpPart::zero(), |acc, (p, mult)| acc.add(&p.scale(&gr(*mult as i64))));
    Ok(sum.same_as(&abel_expected(&a)))
}

/// Floating check of the sum rule for operators whose parts are only known
/// approximately. Approximate parts carry their leading term only, so the
/// comparison is made at the highest exponent among them, where no unknown
/// lower-order term can contribute. Returns the absolute deviation there.
pub fn abel_defect_approx(l: &RatOp) -> Result<f64> {
    let (m, a) = abel_setup(l)?;
    let parts = exponential_parts(&m)?;
    let expected = abel_expected(&a);
    let Some(e) = parts.approx.iter().map(|ap| ap.exponent.clone()).max() else {
        return Ok(0.0);
    };
    let coeff_at = |p: &ExpPart| {
        let scaled = &e * crate::field::Rat::from_integer((p.ram() as i64).into());
        match i64::try_from(scaled.to_integer()) {
            Ok(idx) if scaled.is_integer() && idx >= 0 => to_c64(&p.poly().coeff(idx as usize)),
            _ => num_complex::Complex::new(0.0, 0.0),
        }
    };
    let mut total = num_complex::Complex::new(0.0, 0.0);
    for ap in parts.approx.iter().filter(|ap| ap.exponent == e) {
        total += ap.coeff * ap.multiplicity as f64;
    }
    for (p, mult) in &parts.parts {
        total += coeff_at(p) * *mult as f64;
    }
    Ok((total - coeff_at(&expected)).norm())
}

impl Default for ExpPart {
    fn default() -> Self {
        ExpPart::zero()
    }
}

impl ExpPart {
    pub fn one_z() -> ExpPart {
        ExpPart { poly: Poly::monomial(1, GaussRat::one(), 1) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::grq;

    fn zpart(c: &[i64]) -> ExpPart {
        ExpPart::new(Poly::from_ints(1, c)).unwrap()
    }

    #[test]
    fn shifts() {
        let p = zpart(&[0, 1]);
        let qs = vec![p.clone(), ExpPart::zero(), p.scale(&gr(-1))];
        assert_eq!(shifted_parts(&qs, &ExpPart::zero(), 2).unwrap(), qs);
        let out = shifted_parts(&qs, &p, 1).unwrap();
        assert!(out[0].same_as(&p.scale(&gr(-1))));
        assert!(out[1].same_as(&p));
        assert!(out[2].is_zero());
        assert!(shifted_parts(&qs, &p, 4).is_err());
    }

    #[test]
    fn ray_classes() {
        let c = |a: i64, b: i64, d: i64| [zpart(&[0, a]), zpart(&[0, b]), zpart(&[0, d])];
        assert_eq!(classify_parts_on_ray(&c(-2, -1, 1), 0.0).unwrap(), RayClass::A);
        assert_eq!(classify_parts_on_ray(&c(-2, -1, 0), 0.0).unwrap(), RayClass::B);
        assert_eq!(classify_parts_on_ray(&c(-1, 0, 1), 0.0).unwrap(), RayClass::C);
        assert_eq!(classify_parts_on_ray(&c(1, 2, 3), 0.0).unwrap(), RayClass::None);
    }

    #[test]
    fn abel_examples() {
        let op = |cs: &[&[i64]]| {
            RatOp::new(cs.iter().map(|c| RatFun::from_poly(Poly::from_ints(1, c))).collect())
        };
        assert!(check_abel(&op(&[&[-1], &[], &[1]])).unwrap());
        assert!(check_abel(&op(&[&[0, -1], &[], &[1]])).unwrap());
        assert!(matches!(check_abel(&op(&[&[], &[1], &[1]])), Err(Error::Precondition(_))));
    }

    #[test]
    fn abel_expected_ramified() {
        // a = z^(-1/2): -integral = -2 z^(1/2)
        let a = RatFun::new(Poly::one(2), Poly::var(2)).unwrap();
        assert_eq!(abel_expected(&a).render(), "-2*z^(1/2)");
        assert_eq!(grq(1, 1), gr(1));
    }
}
