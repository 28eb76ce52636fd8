//! Logarithmic-derivative substitutions and pole-multiplicity arithmetic.

use num_traits::One;

use crate::error::{Error, Result};
use crate::field::gauss::{gr, Rat};
use crate::tower::{Tower, TowerElem};

/// With `p'/p = d0 q'/q + d1` and `q'' + nu1 q' + nu0 q = 0`, write
/// `p^(k)/p = sum_j b_j (q'/q)^j` using `(q'/q)' = -(q'/q)^2 - nu1 q'/q - nu0`.
/// Returns `b_0..b_k`; `b_k = d0 (d0-1) ... (d0-k+1)`.
pub fn logderiv_substitution(
    tw: &Tower,
    d0: &TowerElem,
    d1: &TowerElem,
    nu1: &TowerElem,
    nu0: &TowerElem,
    k: usize,
) -> Vec<TowerElem> {
    // polynomials in Q = q'/q, ascending
    let mut r = vec![TowerElem::one()];
    for _ in 0..k {
        let mut next = vec![TowerElem::zero(); r.len() + 1];
        for (j, b) in r.iter().enumerate() {
            next[j] = &next[j] + &tw.derive(b);
            if j > 0 {
                // j b Q^(j-1) (-Q^2 - nu1 Q - nu0)
                let jb = b.scale(&gr(j as i64));
                next[j + 1] = &next[j + 1] - &jb;
                next[j] = &next[j] - &(&jb * nu1);
                next[j - 1] = &next[j - 1] - &(&jb * nu0);
            }
            // (d0 Q + d1) b Q^j
            next[j + 1] = &next[j + 1] + &(d0 * b);
            next[j] = &next[j] + &(d1 * b);
        }
        r = next;
    }
    r
}

/// Coefficients `(E2, E1, E0)` with
/// `E2 p''/p + E1 p'/p + E0 = (p'/p)^2 + e1 p'/p + e0`, obtained by writing
/// `q'/q = A p'/p + B` (`A = 1/d0`, `B = -d1/d0`) in the Riccati equation of
/// `q`.
pub fn second_order_residual(
    tw: &Tower,
    d0: &TowerElem,
    d1: &TowerElem,
    nu1: &TowerElem,
    nu0: &TowerElem,
    e1: &TowerElem,
    e0: &TowerElem,
) -> Result<(TowerElem, TowerElem, TowerElem)> {
    if d0.is_zero() || (d0 - &TowerElem::one()).is_zero() {
        return Err(Error::Precondition("d0 must not be identically 0 or 1".into()));
    }
    let a = d0.inv()?;
    let b = -(d1 * &a);
    let w = &a - &(&a * &a);
    let winv = w.inv()?;
    let e2 = &a * &winv;
    let e1_out = &(&(&(&tw.derive(&a) + &(&(&a * &b) * &TowerElem::int(2))) + &(nu1 * &a)) + &(&w * e1)) * &winv;
    let e0_out = &(&(&(&(&tw.derive(&b) + &(&b * &b)) + &(nu1 * &b)) + nu0) + &(&w * e0)) * &winv;
    Ok((e2, e1_out, e0_out))
}

/// `E0` in `(D + delta) o (D^2 + E1 D + E0) = D^3 + B2 D^2 + B1 D + B0`:
/// `E0 = -E1' + E1^2 - E1 B2 + B1`.
pub fn lem3_second_coeff(tw: &Tower, b2: &TowerElem, b1: &TowerElem, e1: &TowerElem) -> TowerElem {
    &(&(&(e1 * e1) - &tw.derive(e1)) - &(e1 * b2)) + b1
}

/// For a pole of `g` of order `m`: `(g')^{-k}` coefficient
/// `(-1)^k m (m+1) ... (m+k-1)` and
/// `chi(m) = m (m+1) ... (m+k-1) / (m + (k-1)/2)^k`.
pub fn pole_weight(k: usize, m: u64) -> Result<(Rat, Rat)> {
    if k < 2 || m < 1 {
        return Err(Error::Precondition(format!("need k >= 2 and m >= 1 (k = {k}, m = {m})")));
    }
    let mut prod = Rat::one();
    for i in 0..k as u64 {
        prod *= Rat::from_integer((m + i).into());
    }
    let sign = if k.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
    let mid = Rat::from_integer(m.into()) + Rat::new((k as i64 - 1).into(), 2.into());
    let mut denom = Rat::one();
    for _ in 0..k {
        denom *= &mid;
    }
    Ok((sign * &prod, prod / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::{falling, from_rat, rat, ratq};
    use crate::tower::TowerBuilder;

    #[test]
    fn low_order_substitution() {
        let tw = Tower::rational(1);
        let z = tw.z();
        let (d0, d1) = (z.clone(), TowerElem::int(3));
        let b = logderiv_substitution(&tw, &d0, &d1, &TowerElem::int(2), &z, 1);
        assert_eq!(b, vec![d1.clone(), d0.clone()]);
        let b = logderiv_substitution(&tw, &d0, &d1, &TowerElem::zero(), &TowerElem::zero(), 2);
        assert_eq!(b[2], &d0 * &(&d0 - &TowerElem::one()));
    }

    #[test]
    fn leading_coefficient_is_falling_factorial() {
        let tw = Tower::rational(1);
        for k in 2..=6 {
            for m in 1..=5i64 {
                let d0 = TowerElem::int(-m);
                let b = logderiv_substitution(&tw, &d0, &tw.z(), &tw.z(), &TowerElem::int(1), k);
                let expect = falling(&gr(-m), k);
                assert_eq!(b[k].as_constant(), Some(expect.clone()));
                assert_eq!(from_rat(pole_weight(k, m as u64).unwrap().0), expect);
            }
        }
    }

    #[test]
    fn second_order_on_witness() {
        // q = e^(2z): q'' - 4 q = 0; p = q^2 e^z, so d0 = 2, d1 = 1
        let mut bld = TowerBuilder::new();
        let q = bld.exp("q", TowerElem::int(2)).unwrap();
        let tw = bld.build();
        let (d0, d1, nu1, nu0) = (TowerElem::int(2), TowerElem::int(1), TowerElem::zero(), TowerElem::int(-4));
        let (e1, e0) = (tw.z(), TowerElem::int(5));
        let (ee2, ee1, ee0) = second_order_residual(&tw, &d0, &d1, &nu1, &nu0, &e1, &e0).unwrap();
        assert!(!ee2.is_zero());
        let pp = &(&tw.derive(&q) * &q.inv().unwrap()).scale(&gr(2)) + &d1;
        let ppp = &tw.derive(&pp) + &(&pp * &pp);
        let lhs = &(&(&ee2 * &ppp) + &(&ee1 * &pp)) + &ee0;
        let rhs = &(&(&pp * &pp) + &(&e1 * &pp)) + &e0;
        assert!((lhs - rhs).is_zero());
        assert!(second_order_residual(&tw, &TowerElem::one(), &d1, &nu1, &nu0, &e1, &e0).is_err());
    }

    #[test]
    fn third_order_round_trip() {
        let tw = Tower::rational(1);
        let z = tw.z();
        let delta = &z + &TowerElem::int(2);
        let e1 = &z * &z;
        let e0 = z.inv().unwrap();
        let n = crate::linop::LinOp::d_plus(delta).compose(
            &tw,
            &crate::linop::LinOp::new(vec![e0.clone(), e1.clone(), TowerElem::one()]),
        );
        assert_eq!(lem3_second_coeff(&tw, &n.coeff(2), &n.coeff(1), &e1), e0);
        assert_eq!(lem3_second_coeff(&tw, &TowerElem::zero(), &z, &TowerElem::zero()), z);
    }

    #[test]
    fn pole_weights() {
        assert_eq!(pole_weight(3, 1).unwrap(), (rat(-6), ratq(3, 4)));
        assert_eq!(pole_weight(2, 1).unwrap(), (rat(2), ratq(8, 9)));
        assert!(pole_weight(1, 1).is_err());
    }
}
