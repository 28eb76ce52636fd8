
use super::example1::HTower;
use super::{Check, Report};
use crate::error::{Error, Result};
use crate::field::gauss::{gr, GaussRat, Rat};
use crate::field::{Poly, RatFun};
use crate::linop::LinOp;
use crate::tower::{Tower, TowerElem};

fn half(n: i64) -> GaussRat {
    GaussRat::new(Rat::new(n.into(), 2.into()), Rat::from_integer(0.into()))
}

/// `Z o M o Z^-1`.
fn conjugate(tw: &Tower, z: &TowerElem, m: &LinOp) -> Result<LinOp> {
    Ok(LinOp::scalar(z.clone()).compose(tw, &m.compose(tw, &LinOp::scalar(z.inv()?))))
}

/// `(D + lo delta) o ... o (D + hi delta)` as an operator.
fn m_op(ht: &HTower, lo: usize, hi: usize) -> LinOp {
    (lo..=hi).fold(LinOp::identity(), |acc, j| {
        acc.compose(&ht.tw, &LinOp::d_plus(ht.delta.scale(&gr(j as i64))))
    })
}

/// With `Z'/Z = -alpha/k + ((k+1)/2) delta` and `L_k = Z M_k Z^-1`: the
/// `D^(k-1)` coefficient of `L_k` is `alpha`, the functions with
/// `y_j'/y_j = -alpha/k - ((k-1)/2) H''/H' + (j-1) H'/H` solve `L_k`, their
/// log-derivatives sum as required by Abel's identity, and the second-order
/// tail `L2 = Z (D + (k-1) delta)(D + k delta) Z^-1` maps `Z phi` and `Z psi`
/// as stated.
pub fn verify_theorem_reps(k: usize, delta: &Poly, m: u64, alpha: &RatFun) -> Result<Report> {
    if k < 2 || m == 0 {
        return Err(Error::Precondition("need k >= 2 and m >= 1".into()));
    }
    let kk = k as i64;
    let (ht, z) = HTower::with_extra(delta, |d| {
        let a = crate::tower::Tower::rational(1).from_ratfun(alpha)?;
        let u = &a.scale(&GaussRat::new(Rat::new((-1).into(), kk.into()), Rat::from_integer(0.into()))) + &d.scale(&half(kk + 1));
        Ok(Some(("Z", u)))
    })?;
    let z = z.expect("declared");
    let tw = &ht.tw;
    let a = tw.from_ratfun(alpha)?;
    let tag = format!("k={k}, m={m}, delta={}, alpha={}", delta.render(), alpha.render());
    let mut rep = Report::new("theorem-reps");

    let lk = conjugate(tw, &z, &m_op(&ht, 1, k))?;
    rep.push(Check::zero(tw, format!("L_k has D^(k-1) coefficient alpha ({tag})"), "gauge change Z", &(&lk.coeff(k - 1) - &a)));
    let rational = lk.coeffs().iter().all(|c| tw.to_ratfun(c).is_some());
    rep.push(Check::holds(format!("L_k has rational coefficients ({tag})"), "gauge change Z", rational, || lk.render(tw)));

    let base = &a.scale(&GaussRat::new(Rat::new((-1).into(), kk.into()), Rat::from_integer(0.into()))) - &ht.delta.scale(&half(kk - 1));
    let lh = ht.hp.checked_div(&ht.h)?;
    let mut sum = TowerElem::zero();
    for j in 1..=k {
        let wj = &base + &lh.scale(&gr(j as i64 - 1));
        rep.push(Check::zero(tw, format!("L_k[y_{j}] = 0 ({tag})"), "solution log-derivatives", &lk.apply_logderiv(tw, &wj)));
        sum = sum + wj;
    }
    let c2 = half(kk * (kk - 1));
    let expect = &(&-a.clone() - &ht.delta.scale(&c2)) + &lh.scale(&c2);
    rep.push(Check::zero(tw, format!("sum of y_j'/y_j ({tag})"), "solution log-derivatives", &(&sum - &expect)));

    let l2 = conjugate(tw, &z, &m_op(&ht, k - 1, k))?;
    let hpk = ht.hp.pow(-kk)?;
    let phi = &hpk * &ht.eh;
    let psi = &hpk * &ht.h.pow(-(m as i64))?;
    let hp2 = ht.hp.pow(2 - kk)?;
    let lhs = l2.apply(tw, &(&z * &phi));
    rep.push(Check::zero(tw, format!("L2[Z phi] = Z (H')^(2-k) e^H ({tag})"), "second-order tail", &(&lhs - &(&(&z * &hp2) * &ht.eh))));
    let c = GaussRat::new(Rat::from_integer((m * (m + 1)).into()), Rat::from_integer(0.into()));
    let target = (&(&z * &hp2) * &ht.h.pow(-(m as i64) - 2)?).scale(&c);
    let lhs = l2.apply(tw, &(&z * &psi));
    rep.push(Check::zero(tw, format!("L2[Z psi] = m(m+1) Z (H')^(2-k) H^(-m-2) ({tag})"), "second-order tail", &(&lhs - &target)).with_value(crate::field::gauss::fmt_gauss(&c)));
    let rational = l2.coeffs().iter().all(|c| tw.to_ratfun(c).is_some()) && l2.leading().is_one();
    rep.push(Check::holds(format!("L2 is monic with rational coefficients ({tag})"), "second-order tail", rational, || l2.render(tw)));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_delta_z() {
        let alpha = RatFun::new(Poly::from_ints(1, &[1]), Poly::from_ints(1, &[1, 1])).unwrap();
        let rep = verify_theorem_reps(3, &Poly::from_ints(1, &[0, 1]), 2, &alpha).unwrap();
        assert!(rep.passed(), "{}", rep.render_text());
        assert_eq!(rep.checks.len(), 9);
    }

    #[test]
    fn zero_alpha() {
        let rep = verify_theorem_reps(4, &Poly::from_ints(1, &[1, 0, 2]), 1, &RatFun::zero(1)).unwrap();
        assert!(rep.passed(), "{}", rep.render_text());
    }
}
