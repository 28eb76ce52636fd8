use num_traits::Zero;

use super::{gauss_str, Check, Report};
use crate::error::{Error, Result};
use crate::field::gauss::{falling, gr, GaussRat};
use crate::field::{Poly, RatFun};
use crate::frank::pole_weight;
use crate::tower::{Tower, TowerBuilder, TowerElem};

/// Tower with `H'' / H' = delta`: generators `Hp = H'`, `H`, `eH = e^H`.
pub(crate) struct HTower {
    pub tw: Tower,
    pub delta: TowerElem,
    pub hp: TowerElem,
    pub h: TowerElem,
    pub eh: TowerElem,
}

impl HTower {
    pub fn new(delta: &Poly) -> Result<HTower> {
        HTower::with_extra(delta, |_| Ok(None)).map(|(t, _)| t)
    }

    /// Also declares one further exponential generator built from `delta`.
    pub fn with_extra(
        delta: &Poly,
        extra: impl FnOnce(&TowerElem) -> Result<Option<(&'static str, TowerElem)>>,
    ) -> Result<(HTower, Option<TowerElem>)> {
        if delta.is_zero() {
            return Err(Error::Precondition("delta must be nonzero".into()));
        }
        let mut b = TowerBuilder::new();
        let d = b.tower().from_ratfun(&RatFun::from_poly(delta.clone()))?;
        let hp = b.exp("Hp", d.clone())?;
        let h = b.prim("H", hp.clone())?;
        let eh = b.exp("eH", hp.clone())?;
        let x = match extra(&d)? {
            Some((name, u)) => Some(b.exp(name, u)?),
            None => None,
        };
        Ok((HTower { tw: b.build(), delta: d, hp, h, eh }, x))
    }

    /// `(D + lo delta) o ... o (D + hi delta)` applied to `y`.
    pub fn m_chain(&self, lo: usize, hi: usize, y: &TowerElem) -> TowerElem {
        (lo..=hi).rev().fold(y.clone(), |acc, j| {
            &self.tw.derive(&acc) + &(&self.delta.scale(&gr(j as i64)) * &acc)
        })
    }

    pub fn poly_in_h(&self, p: &Poly) -> TowerElem {
        p.coeffs().iter().rev().fold(TowerElem::zero(), |acc, c| &(&acc * &self.h) + &TowerElem::constant(c.clone()))
    }
}

/// `(-1)^k m (m+1) ... (m+k-1)`.
fn signed_rising(k: usize, m: u64) -> GaussRat {
    falling(&gr(-(m as i64)), k)
}

/// `M_k = (D + delta) ... (D + k delta)` on `phi = (H')^-k e^H`,
/// `psi = (H')^-k H^-m` and `(H')^-k P(H)` for `deg P < k`. The basis
/// `1, H, ..., H^(k-1)` is always checked; `extra` adds further `P`.
pub fn verify_example1(delta: &Poly, k: usize, m: u64, extra: &[Poly]) -> Result<Report> {
    if k == 0 || m == 0 {
        return Err(Error::Precondition("need k >= 1 and m >= 1".into()));
    }
    let ht = HTower::new(delta)?;
    let tw = &ht.tw;
    let tag = format!("k={k}, m={m}, delta={}", delta.render());
    let mut rep = Report::new("example1");
    let hpk = ht.hp.pow(-(k as i64))?;

    let phi = &hpk * &ht.eh;
    rep.push(Check::zero(tw, format!("M_k[phi] = e^H ({tag})"), "example-1 phi identity", &(ht.m_chain(1, k, &phi) - ht.eh.clone())));

    let psi = &hpk * &ht.h.pow(-(m as i64))?;
    let scaled = &ht.m_chain(1, k, &psi) * &ht.h.pow((m as usize + k) as i64)?;
    let c = scaled.as_constant();
    rep.push(Check::zero(tw, format!("M_k[psi] is a constant times H^(-m-k) ({tag})"), "example-1 psi identity", &tw.derive(&scaled)));
    let expect = signed_rising(k, m);
    let cross = if k >= 2 { pole_weight(k, m)?.0 == expect.re && expect.im.is_zero() } else { true };
    rep.push(
        Check::holds(
            format!("extracted c = (-1)^k m(m+1)...(m+k-1) ({tag})"),
            "example-1 psi constant",
            c.as_ref() == Some(&expect) && cross,
            || format!("c = {}, expected {}", gauss_str(&scaled), crate::field::gauss::fmt_gauss(&expect)),
        )
        .with_value(gauss_str(&scaled)),
    );

    let basis = (0..k).map(|j| Poly::monomial(1, gr(1), j));
    for (i, p) in basis.chain(extra.iter().cloned()).enumerate() {
        if p.degree().is_some_and(|d| d >= k) {
            return Err(Error::Precondition(format!("P = {} has degree >= k", p.render())));
        }
        let y = &hpk * &ht.poly_in_h(&p);
        let what = if i < k { format!("H^{i}") } else { format!("P = {}", p.render()) };
        rep.push(Check::zero(tw, format!("M_k annihilates (H')^-k {what} ({tag})"), "example-1 annihilation", &ht.m_chain(1, k, &y)));
    }
    Ok(rep)
}
