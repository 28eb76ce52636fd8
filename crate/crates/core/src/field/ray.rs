use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use super::gauss::{lcm_u32, GaussRat, Rat};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Floating tolerance for non-exact ray comparisons.
pub const RAY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum RayOrder {
    Prec,
    Sim,
    Succ,
}

impl RayOrder {
    pub fn reverse(self) -> RayOrder {
        match self {
            RayOrder::Prec => RayOrder::Succ,
            RayOrder::Sim => RayOrder::Sim,
            RayOrder::Succ => RayOrder::Prec,
        }
    }

    fn from_sign(o: Ordering) -> RayOrder {
        match o {
            Ordering::Less => RayOrder::Prec,
            Ordering::Equal => RayOrder::Sim,
            Ordering::Greater => RayOrder::Succ,
        }
    }
}

/// Number of quarter turns in `theta` when it is (numerically) an integer
/// multiple of pi/2.
fn quarter_turns(theta: f64) -> Option<i64> {
    let q = theta / FRAC_PI_2;
    let m = q.round();
    ((q - m).abs() < 1e-12).then_some(m as i64)
}

/// Real part of `c * i^n`, exactly.
fn re_times_i_pow(c: &GaussRat, n: i64) -> Rat {
    match n.rem_euclid(4) {
        0 => c.re.clone(),
        1 => -c.im.clone(),
        2 => -c.re.clone(),
        _ => c.im.clone(),
    }
}

/// Order `p` against `q` along the ray `arg z = theta` as `r -> +inf`:
/// compare `Re p(r e^{i theta})` with `Re q(r e^{i theta})` term by term from
/// the highest power of `r` downwards.
///
/// Terms whose rotation is a whole number of quarter turns are compared
/// exactly; others in floating point, where a value within [`RAY_TOL`] of
/// zero coming from a nonzero coefficient is reported as a near tie.
pub fn ray_compare(p: &Poly, q: &Poly, theta: f64) -> Result<RayOrder> {
    let ram = lcm_u32(p.ram(), q.ram());
    let d = &p.lift(ram) - &q.lift(ram);
    let turns = quarter_turns(theta);
    for j in (0..d.coeffs().len()).rev() {
        let c = &d.coeffs()[j];
        if c.is_zero() {
            continue;
        }
        let exact = turns.filter(|m| (j as i64 * m) % ram as i64 == 0);
        if let Some(m) = exact {
            let v = re_times_i_pow(c, j as i64 * m / ram as i64);
            if !v.is_zero() {
                return Ok(RayOrder::from_sign(if v.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }));
            }
            continue;
        }
        let phi = j as f64 * theta / ram as f64;
        let re = c.re.to_f64().unwrap_or(f64::NAN);
        let im = c.im.to_f64().unwrap_or(f64::NAN);
        let v = re * phi.cos() - im * phi.sin();
        if v.abs() < RAY_TOL {
            return Err(Error::NearTie { degree: j });
        }
        return Ok(RayOrder::from_sign(v.partial_cmp(&0.0).unwrap_or(Ordering::Equal)));
    }
    Ok(RayOrder::Sim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::imag_unit;

    fn zp(c: &[i64]) -> Poly {
        Poly::from_ints(1, c)
    }

    #[test]
    fn basic_orders() {
        assert_eq!(ray_compare(&zp(&[0, 0, 1]), &Poly::zero(1), 0.0), Ok(RayOrder::Succ));
        assert_eq!(ray_compare(&zp(&[0, -2]), &zp(&[0, -1]), 0.0), Ok(RayOrder::Prec));
        let iz = Poly::monomial(1, imag_unit(), 1);
        assert_eq!(ray_compare(&iz, &Poly::zero(1), 0.0), Ok(RayOrder::Sim));
    }

    #[test]
    fn quarter_turn_is_exact() {
        // Re(i * i r) = -r on the ray theta = pi/2
        let iz = Poly::monomial(1, imag_unit(), 1);
        assert_eq!(ray_compare(&iz, &Poly::zero(1), FRAC_PI_2), Ok(RayOrder::Prec));
        // z on theta = pi/2 has zero real part: exact Sim, not a near tie
        assert_eq!(ray_compare(&zp(&[0, 1]), &Poly::zero(1), FRAC_PI_2), Ok(RayOrder::Sim));
    }

    #[test]
    fn near_tie_is_reported() {
        // z^(1/2) just off theta = pi: too far from pi for the exact path,
        // but Re e^{i theta/2} is within tolerance of zero
        let x = Poly::var(2);
        let theta = std::f64::consts::PI + 1.8e-12;
        assert_eq!(ray_compare(&x, &Poly::zero(2), theta), Err(Error::NearTie { degree: 1 }));
    }
}
