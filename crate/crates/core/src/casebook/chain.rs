//! The elimination chain that follows from `q + d g' - a g = e^P`: from the
//! top Frank relation to a constant-coefficient equation in `zeta = P`.

use num_traits::Zero;
use rand::Rng;

use super::{Check, Report};
use crate::error::Result;
use crate::field::gauss::{fmt_rat, from_rat, Rat};
use crate::frank::FrankSystem;
use crate::linop::LinOp;
use crate::sample::{self, SampleRng};
use crate::tower::{Tower, TowerBuilder, TowerElem};

fn r(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn el(q: &Rat) -> TowerElem {
    TowerElem::constant(from_rat(q.clone()))
}

/// The constants of the chain for given `k` and `x = d - (k-1)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainConstants {
    pub eta1: Rat,
    pub eta2: Rat,
    pub eta3: Rat,
    pub eta4: Rat,
}

impl ChainConstants {
    /// `None` when `x = 0` or `k^2 - 1 - 12 x^2 = 0` (no chain).
    pub fn new(k: i64, x: &Rat) -> Option<ChainConstants> {
        let kk = r(k * k);
        let s = &kk - r(1) - r(12) * x * x;
        if x.is_zero() || s.is_zero() {
            return None;
        }
        let eta1 = r(6) * (&kk - r(4) * x * x - r(3)) / &s;
        if eta1.is_zero() {
            return None;
        }
        let eta2 = r(24) * x / (r(k) * (&kk - r(1)) * &eta1);
        let eta3 = -(&kk - r(1)) * &eta1 / (r(24) * x);
        let eta4 = -r(2) * (&kk - r(4)) / s;
        Some(ChainConstants { eta1, eta2, eta3, eta4 })
    }
}

struct ChainTower {
    tw: Tower,
    /// `P'`, generic: `P''/P' = w`, `w'' = 0`.
    pp: TowerElem,
    ep: TowerElem,
    elam: TowerElem,
}

fn chain_tower(lambda: &Rat) -> Result<ChainTower> {
    let mut b = TowerBuilder::new();
    let w1 = b.prim("w1", TowerElem::zero())?;
    let w = b.prim("w", w1)?;
    let pp = b.exp("Pp", w)?;
    let ep = b.exp("eP", pp.clone())?;
    let elam = b.exp("eLP", pp.scale(&from_rat(lambda.clone())))?;
    Ok(ChainTower { tw: b.build(), pp, ep, elam })
}

/// Regression checks for the chain, for every `d in 0..k` and random
/// rational data.
pub fn verify_elimination_chain(k: usize, rng: &mut SampleRng) -> Result<Report> {
    let kk = k as i64;
    let lambda = Rat::new(rng.gen_range(-5..=5i64).into(), rng.gen_range(1..=4i64).into());
    let ct = chain_tower(&lambda)?;
    let tw = &ct.tw;
    let base = Tower::rational(1);
    let rnd = |rng: &mut SampleRng| base.from_ratfun(&sample::ratfun(rng, 2, 3));
    let c = (0..k - 1).map(|_| rnd(rng)).collect::<Result<Vec<_>>>()?;
    let cap = (0..k - 1).map(|_| rnd(rng)).collect::<Result<Vec<_>>>()?;
    let a = rnd(rng)?;
    let sys = FrankSystem::new(k, c, cap)?;
    let dk2 = sys.d(kk - 2);
    let top = sys.frank_equation(tw, k - 1)?;
    let kq = el(&r(kk));
    let mut rep = Report::new("elimination-chain");
    let lp = tw.derive(&ct.pp).checked_div(&ct.pp)?;

    rep.push(Check::zero(tw, format!("top relation maps e^P to -P' e^P (k={k})"), "e^P substitution", &(&top.phi_op.apply(tw, &ct.ep) + &(&ct.pp * &ct.ep))));
    for d in 0..kk {
        let x = r(d) - Rat::new((kk - 1).into(), 2.into());
        let tag = format!("k={k}, d={d}, x={}", fmt_rat(&x));
        // P' e^P = x g'' - a g' - (D_{k-2}/k + a') g
        let sub = LinOp::new(vec![a.clone(), el(&r(-d))]);
        let got = top.phi_op.compose(tw, &sub).sub(&top.g_op);
        let want = LinOp::new(vec![-(&dk2.checked_div(&kq)? + &tw.derive(&a)), -a.clone(), el(&x)]);
        rep.push(Check::holds(format!("first-order chain equation ({tag})"), "e^P substitution", got == want, || got.render(tw)));
        // its derivative, divided through by e^P
        let diffd = want.d_compose(tw).sub(&want.mul_left(&(&lp + &ct.pp)));
        let s = &lp + &ct.pp;
        let shown = LinOp::new(vec![
            &(&s * &(&dk2.checked_div(&kq)? + &tw.derive(&a))) - &(&tw.derive(&dk2).checked_div(&kq)? + &tw.derive_n(&a, 2)),
            &(&a * &s) - &(&dk2.checked_div(&kq)? + &tw.derive(&a).scale(&from_rat(r(2)))),
            -(&(&el(&x) * &s) + &a),
            el(&x),
        ]);
        rep.push(Check::holds(format!("differentiated chain equation ({tag})"), "e^P substitution", diffd == shown, || diffd.render(tw)));

        let Some(k_) = ChainConstants::new(kk, &x) else {
            rep.push(Check::skipped(format!("chain constants ({tag})"), "chain constants", "x = 0 or k^2 - 1 - 12 x^2 = 0"));
            continue;
        };
        let s12 = r(kk * kk) - r(1) - r(12) * &x * &x;
        let closed = (r(4) * &x * &x + r(3) - r(kk * kk)) * (r(kk * kk) - r(1)) / (r(4) * &x * &s12);
        rep.push(Check::holds(format!("eta_3 closed form ({tag})"), "chain constants", k_.eta3 == closed && -r(1) / (r(kk) * &k_.eta2) == k_.eta3, || fmt_rat(&k_.eta3)).with_value(fmt_rat(&k_.eta3)));
        rep.push(Check::holds(format!("eta_4 nonzero ({tag})"), "chain constants", !k_.eta4.is_zero(), String::new).with_value(fmt_rat(&k_.eta4)));

        // Z = eta_2 P'^-2 solves (2P''/P' + eta_1 P') Z + Z' = 24x / (k(k^2-1) P')
        let z = el(&k_.eta2).checked_div(&(&ct.pp * &ct.pp))?;
        let lhs = &(&(&lp.scale(&from_rat(r(2))) + &(&el(&k_.eta1) * &ct.pp)) * &z) + &tw.derive(&z);
        let rhs = el(&(r(24) * &x / (r(kk) * (r(kk * kk) - r(1))))).checked_div(&ct.pp)?;
        rep.push(Check::zero(tw, format!("particular solution of the Z equation ({tag})"), "Z equation", &(&lhs - &rhs)));

        // D_{k-2} = P'^2/eta_2; the formula for a in terms of D_{k-2}' / D_{k-2}
        let dd = (&ct.pp * &ct.pp).checked_div(&el(&k_.eta2))?;
        let a7 = &(&el(&(-&x / r(2))) * &tw.derive(&dd).checked_div(&dd)?) + &(&el(&(r(2) * &x * (r(kk * kk) - r(4)) / &s12)) * &ct.pp);
        let a4 = -(&(&lp + &(&el(&k_.eta4) * &ct.pp)) * &el(&x));
        rep.push(Check::zero(tw, format!("a = -x(P''/P' + eta_4 P') ({tag})"), "eta_4 form", &(&a7 - &a4)));
        let c5 = &(&lp + &ct.pp) - &(&(-a4.checked_div(&el(&x))?) + &(&el(&(r(12) * &x / (r(kk) * (r(kk * kk) - r(1))))) * &dd.checked_div(&ct.pp)?));
        rep.push(Check::zero(tw, format!("g'' coefficient match ({tag})"), "eta_4 form", &c5));

        // y = e^(lambda P)/P': x (y' + (P''/P' + eta_4 P') y)' + eta_3 P'^2 y
        let y = ct.elam.checked_div(&ct.pp)?;
        let inner = &tw.derive(&y) + &(&(&lp + &(&el(&k_.eta4) * &ct.pp)) * &y);
        let lhs = &(&el(&x) * &tw.derive(&inner)) + &(&(&el(&k_.eta3) * &(&ct.pp * &ct.pp)) * &y);
        let aux = &x * &lambda * &lambda + &x * &k_.eta4 * &lambda + &k_.eta3;
        let rhs = &(&ct.pp * &ct.elam) * &el(&aux);
        rep.push(Check::zero(tw, format!("reduction to constant coefficients in zeta = P, lambda={} ({tag})", fmt_rat(&lambda)), "constant-coefficient form", &(&lhs - &rhs)));

        if d == 0 || d == kk - 1 {
            let km1 = r(kk - 1);
            let ok_coeffs = &x * &k_.eta4 == &x * (r(kk + 2) / &km1) && k_.eta3 == &x * r(kk + 1) / (&km1 * &km1);
            let roots_ok = (1..=2).all(|j| {
                let l = r(1) - r(j * kk) / &km1;
                (&x * &l * &l + &x * &k_.eta4 * &l + &k_.eta3).is_zero()
            });
            rep.push(Check::holds(format!("auxiliary roots 1 - jk/(k-1) ({tag})"), "auxiliary equation", ok_coeffs && roots_ok, String::new));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_chain() {
        let mut rng = sample::rng(3);
        let rep = verify_elimination_chain(3, &mut rng).unwrap();
        assert!(rep.passed(), "{}", rep.render_text());
    }

    #[test]
    fn eta_values() {
        // k = 3, x = 1 (d = 2): k^2 - 1 - 12 = -4
        let c = ChainConstants::new(3, &r(1)).unwrap();
        assert_eq!(c.eta4, Rat::new(5.into(), 2.into()));
        assert_eq!(c.eta3, Rat::new(1.into(), 1.into()));
        assert!(ChainConstants::new(3, &r(0)).is_none());
    }
}
