//! Second-order asymptotics for `w'' + A w = 0`.

use num_complex::Complex;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

use super::newton::{exponential_parts, ExpParts};
use super::parts::ExpPart;
use crate::error::{Error, Result};
use crate::field::gauss::{fmt_gauss, fmt_rat, gdiv, gr, sqrt_exact, to_c64, GaussRat, Rat};
use crate::field::RatFun;
use crate::linop::RatOp;

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalRayData {
    /// Angles in `[0, 2pi)` with `c_n e^(i(n+2)theta) > 0`, ascending.
    pub angles: Vec<f64>,
    pub n: i64,
    pub c_n: GaussRat,
    /// Leading term of `Z = integral A^(1/2)`: `2 c_n^(1/2) z^((n+2)/2) / (n+2)`.
    pub z_exponent: Rat,
    pub z_coeff: Option<GaussRat>,
    pub z_coeff_approx: Complex<f64>,
    /// Exponent of `A^(-1/4)`, the power of `z` in both solutions.
    pub gamma: Rat,
    /// Exponential parts `+-iZ` of the two formal solutions.
    pub parts: ExpParts,
}

impl CriticalRayData {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "angles": self.angles,
            "n": self.n,
            "c_n": fmt_gauss(&self.c_n),
            "z_exponent": fmt_rat(&self.z_exponent),
            "z_coeff": self.z_coeff.as_ref().map(fmt_gauss),
            "z_coeff_approx": [self.z_coeff_approx.re, self.z_coeff_approx.im],
            "gamma": fmt_rat(&self.gamma),
            "parts": self.parts.to_json(),
        })
    }

    /// Exact `+-iZ` leading parts, when `c_n` has a square root in Q(i).
    pub fn leading_parts(&self) -> Option<[ExpPart; 2]> {
        let c = self.z_coeff.as_ref()?;
        let i = crate::field::gauss::imag_unit();
        let e = &self.z_exponent;
        let ram = e.denom().to_u32()?;
        let deg = e.numer().to_usize()?;
        let mk = |s: GaussRat| ExpPart::new(crate::field::Poly::monomial(ram, s, deg)).ok();
        let iz = crate::field::gauss::gmul(&i, c);
        Some([mk(iz.clone())?, mk(-iz)?])
    }
}

pub fn hille_second_order(a_star: &RatFun) -> Result<CriticalRayData> {
    let deg = a_star
        .deg_infty()
        .ok_or_else(|| Error::Precondition("A must be nonzero".into()))?;
    if !deg.is_integer() {
        return Err(Error::Precondition(format!("deg A = {} is not an integer", fmt_rat(&deg))));
    }
    let n = deg.to_integer().to_i64().unwrap_or(i64::MIN);
    if n < -1 {
        return Err(Error::Precondition(format!("deg A = {n} < -1")));
    }
    let c_n = a_star.lead_coeff();
    let cf = to_c64(&c_n);
    let arg = cf.arg();
    let m = (n + 2) as f64;
    let mut angles: Vec<f64> = (0..n + 2)
        .map(|j| (2.0 * PI * j as f64 - arg) / m)
        .map(|t| t.rem_euclid(2.0 * PI))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let z_exponent = Rat::new((n + 2).into(), 2.into());
    let scale = gdiv(&gr(2), &gr(n + 2));
    let z_coeff = sqrt_exact(&c_n).map(|s| crate::field::gauss::gmul(&s, &scale));
    let z_coeff_approx = cf.sqrt() * (2.0 / m);
    let gamma = Rat::new((-n).into(), 4.into());
    let op = RatOp::new(vec![a_star.clone(), RatFun::zero(1), RatFun::one(1)]);
    let parts = exponential_parts(&op)?;
    Ok(CriticalRayData { angles, n, c_n, z_exponent, z_coeff, z_coeff_approx, gamma, parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Poly;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn critical_rays() {
        let d = hille_second_order(&RatFun::constant(1, gr(-1))).unwrap();
        assert!(close(&d.angles, &[PI / 2.0, 3.0 * PI / 2.0]));
        let d = hille_second_order(&RatFun::constant(1, gr(1))).unwrap();
        assert!(close(&d.angles, &[0.0, PI]));
        let airy = RatFun::from_poly(Poly::from_ints(1, &[0, -1]));
        let d = hille_second_order(&airy).unwrap();
        assert!(close(&d.angles, &[PI / 3.0, PI, 5.0 * PI / 3.0]));
    }

    #[test]
    fn airy_parts_agree_with_newton() {
        let airy = RatFun::from_poly(Poly::from_ints(1, &[0, -1]));
        let d = hille_second_order(&airy).unwrap();
        let [a, b] = d.leading_parts().unwrap();
        let listed = d.parts.listed();
        assert!(listed.iter().any(|p| p.same_as(&a)));
        assert!(listed.iter().any(|p| p.same_as(&b)));
        assert_eq!(d.gamma, Rat::new((-1).into(), 4.into()));
    }

    #[test]
    fn degree_below_minus_one_rejected() {
        let a = RatFun::new(Poly::one(1), Poly::from_ints(1, &[0, 0, 1])).unwrap();
        assert!(hille_second_order(&a).is_err());
    }
}
