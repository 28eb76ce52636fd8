
use super::{Check, Report};
use crate::error::{Error, Result};
use crate::field::{Poly, RatFun};
use crate::linop::LinOp;
use crate::tower::{Tower, TowerBuilder, TowerElem};

/// Which numerator survives in `F/f = (B_2 t^2 + B_1 t + B_0)/(1-t)^3`,
/// `t = e^z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example2Target {
    B2,
    B1,
    B0,
}

impl Example2Target {
    pub const ALL: [Example2Target; 3] = [Example2Target::B2, Example2Target::B1, Example2Target::B0];

    fn index(self) -> usize {
        match self {
            Example2Target::B0 => 0,
            Example2Target::B1 => 1,
            Example2Target::B2 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        ["B0", "B1", "B2"][self.index()]
    }
}

#[derive(Clone, Debug)]
pub struct Example2 {
    pub report: Report,
    pub b1: RatFun,
    pub b2: RatFun,
    /// The surviving numerator.
    pub b_keep: RatFun,
}

/// Coefficients of a polynomial in the generator `t` (variable `v`), each
/// divided by the `t`-free denominator.
fn t_coeffs(e: &TowerElem, v: usize) -> Result<Vec<TowerElem>> {
    if e.den().degree_in(v) > 0 {
        return Err(Error::Internal("expected a polynomial in e^z".into()));
    }
    e.num()
        .coeffs_in(v)
        .into_iter()
        .map(|c| TowerElem::new(c, e.den().clone()))
        .collect()
}

fn coeff(cs: &[TowerElem], j: usize) -> TowerElem {
    cs.get(j).cloned().unwrap_or_else(TowerElem::zero)
}

fn to_rat(tw: &Tower, e: &TowerElem) -> Result<RatFun> {
    tw.to_ratfun(e).ok_or_else(|| Error::Internal("coefficient is not rational".into()))
}

/// With `f'/f = P/(1-e^z)`, choose rational `b_1, b_2` so that
/// `F = f''' + b_2 f'' + b_1 f'` has `F/f = B t^j / (1-t)^3` for the target
/// numerator, by solving the two linear conditions that kill the others.
pub fn verify_example2(p: &Poly, target: Example2Target) -> Result<Example2> {
    if p.is_zero() {
        return Err(Error::Precondition("P must be nonzero".into()));
    }
    let mut bld = TowerBuilder::new();
    let t = bld.exp("t", TowerElem::one())?;
    let tw = bld.build();
    let v = t.var_mask().trailing_zeros() as usize;
    let pe = tw.from_ratfun(&RatFun::from_poly(p.clone()))?;
    let one_t = &TowerElem::one() - &t;
    let w = pe.checked_div(&one_t)?;
    let r = tw.logderiv_powers(&w, 3);
    let q = t_coeffs(&(&r[1] * &one_t.pow(2)?), v)?;
    let rr = t_coeffs(&(&r[2] * &one_t.pow(3)?), v)?;
    let (q1, q0) = (coeff(&q, 1), coeff(&q, 0));
    let dp = tw.derive(&pe);
    let tag = format!("P={}, target {}", p.render(), target.name());
    let mut rep = Report::new("example2");
    rep.push(Check::zero(&tw, format!("Q_1 = P - P' ({tag})"), "example-2 second derivative", &(&q1 - &(&pe - &dp))));
    rep.push(Check::zero(&tw, format!("Q_0 = P' + P^2 ({tag})"), "example-2 second derivative", &(&q0 - &(&dp + &(&pe * &pe)))));
    rep.push(Check::holds(format!("f'''/f numerator has t-degree <= 2 ({tag})"), "example-2 third derivative", rr.len() <= 3, || format!("{} coefficients", rr.len())));

    // B_j = R_j + alpha_j b_2 + beta_j b_1
    let rows = [
        (coeff(&rr, 0), q0.clone(), pe.clone()),
        (coeff(&rr, 1), &q1 - &q0, pe.scale(&crate::field::gauss::gr(-2))),
        (coeff(&rr, 2), -q1.clone(), pe.clone()),
    ];
    let keep = target.index();
    let (i, j) = match keep {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let (ri, ai, bi) = &rows[i];
    let (rj, aj, bj) = &rows[j];
    let det = &(ai * bj) - &(aj * bi);
    if det.is_zero() {
        return Err(Error::Precondition(format!("the linear system for b_1, b_2 is singular for P = {}", p.render())));
    }
    // a b2 + b b1 = -r
    let b2 = (&(&-ri.clone() * bj) + &(rj * bi)).checked_div(&det)?;
    let b1 = (&(ai * &-rj.clone()) + &(aj * ri)).checked_div(&det)?;
    let bs: Vec<TowerElem> = rows.iter().map(|(r, a, b)| &(r + &(a * &b2)) + &(b * &b1)).collect();
    for idx in [i, j] {
        rep.push(Check::zero(&tw, format!("B_{idx} = 0 ({tag})"), "example-2 linear system", &bs[idx]));
    }
    let op = LinOp::new(vec![TowerElem::zero(), b1.clone(), b2.clone(), TowerElem::one()]);
    let quotient = op.apply_logderiv(&tw, &w);
    let expect = (&bs[keep] * &t.pow(keep as i64)?).checked_div(&one_t.pow(3)?)?;
    rep.push(Check::zero(&tw, format!("F/f = B_{keep} t^{keep}/(1-t)^3 ({tag})"), "example-2 quotient", &(&quotient - &expect)));
    let b_keep = to_rat(&tw, &bs[keep])?;
    rep.push(
        Check::holds(format!("B_{keep} is nonzero ({tag})"), "example-2 quotient", !b_keep.is_zero(), || "B vanishes".into())
            .with_value(b_keep.render()),
    );
    let (b1, b2) = (to_rat(&tw, &b1)?, to_rat(&tw, &b2)?);
    rep.push(Check::holds(format!("b_1, b_2 rational ({tag})"), "example-2 linear system", true, String::new).with_value(format!("b1 = {}, b2 = {}", b1.render(), b2.render())));
    Ok(Example2 { report: rep, b1, b2, b_keep })
}
