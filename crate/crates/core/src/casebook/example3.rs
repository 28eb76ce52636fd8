
use super::{Check, Report};
use crate::error::{Error, Result};
use crate::field::gauss::{grq, ratq};
use crate::field::Poly;
use crate::linop::LinOp;
use crate::tower::{Tower, TowerBuilder, TowerElem};

/// `b_1 = -P'/P - Y''/Y'`, `b_0 = -(P Y')^2` as `D^2 + b_1 D + b_0`.
fn stage_op(tw: &Tower, p: &TowerElem, yp: &TowerElem) -> Result<LinOp> {
    let b1 = -(&tw.derive(p).checked_div(p)? + &tw.derive(yp).checked_div(yp)?);
    let py = p * yp;
    Ok(LinOp::new(vec![-(&py * &py), b1, TowerElem::one()]))
}

/// `h = cosh Y` with `Y = z^(m/2)`, `f'/f = P h'/h`, `P = P_1(Y)`.
/// Checks `R/f = (P - P^2) Y'^2 / h^2` and `S'/S = (P-2) h'/h` for
/// `R = f'' + b_1 f' + b_0 f`, `S = R / ((P - P^2) Y'^2)`, then repeats the
/// construction with `P - 2` and composes the two stages into a fourth-order
/// operator with rational coefficients.
pub fn verify_example3(m: u32, p1: &Poly) -> Result<Report> {
    if m == 0 {
        return Err(Error::Precondition("need m >= 1".into()));
    }
    if p1.is_zero() || p1.ram() != 1 {
        return Err(Error::Precondition("P_1 must be a nonzero polynomial in Y".into()));
    }
    let mut bld = TowerBuilder::new();
    if m % 2 == 1 {
        bld.root("x", 2)?;
    }
    let y = bld.tower().z_pow(&ratq(m as i64, 2))?;
    let yp = bld.tower().derive(&y);
    let t = bld.exp("t", yp.clone())?;
    let tw = bld.build();
    let h = (&t + &t.inv()?).scale(&grq(1, 2));
    let lh = tw.derive(&h).checked_div(&h)?;
    let p = p1.coeffs().iter().rev().fold(TowerElem::zero(), |acc, c| &(&acc * &y) + &TowerElem::constant(c.clone()));
    let w = &p * &lh;
    let tag = format!("m={m}, P_1={}", p1.render().replace('z', "Y"));
    let mut rep = Report::new("example3");

    let a = stage_op(&tw, &p, &yp)?;
    let rf = a.apply_logderiv(&tw, &w);
    let h2 = &h * &h;
    let kappa = &(&p - &(&p * &p)) * &(&yp * &yp);
    rep.push(Check::zero(&tw, format!("R/f = (P-P^2)(Y')^2/h^2 ({tag})"), "example-3 first quotient", &(&rf - &kappa.checked_div(&h2)?)));
    if kappa.is_zero() {
        rep.push(Check::skipped(format!("S'/S and second stage ({tag})"), "example-3 iteration", "P - P^2 vanishes identically; R/f is forced to 0"));
        return Ok(rep);
    }
    let s_over_f = rf.checked_div(&kappa)?;
    rep.push(Check::zero(&tw, format!("S/f = h^-2 ({tag})"), "example-3 iteration", &(&s_over_f - &h2.inv()?)));
    let ls = &tw.derive(&s_over_f).checked_div(&s_over_f)? + &w;
    let p2 = &p - &TowerElem::int(2);
    rep.push(Check::zero(&tw, format!("S'/S = (P-2)h'/h ({tag})"), "example-3 iteration", &(&ls - &(&p2 * &lh))));

    let bop = stage_op(&tw, &p2, &yp)?;
    let kappa2 = &(&p2 - &(&p2 * &p2)) * &(&yp * &yp);
    let sq = bop.apply_logderiv(&tw, &ls);
    rep.push(Check::zero(&tw, format!("second stage: (S''+c_1S'+c_0S)/S = (P2-P2^2)(Y')^2/h^2 ({tag})"), "example-3 second quotient", &(&sq - &kappa2.checked_div(&h2)?)));
    // R = kappa S, so D^2 + d_1 D + d_0 = kappa o B o kappa^-1
    let bk = LinOp::scalar(kappa.clone()).compose(&tw, &bop.compose(&tw, &LinOp::scalar(kappa.inv()?)));
    // conjugation by kappa: d_1 = c_1 - 2g, d_0 = c_0 - c_1 g + g^2 - g', g = kappa'/kappa;
    // with R'/R = S'/S + g this makes the R quotient equal the S quotient
    let g = tw.derive(&kappa).checked_div(&kappa)?;
    let (c0, c1) = (bop.coeff(0), bop.coeff(1));
    let d1 = &c1 - &g.scale(&grq(2, 1));
    let d0 = &(&(&c0 - &(&c1 * &g)) + &(&g * &g)) - &tw.derive(&g);
    let lr = &tw.derive(&rf).checked_div(&rf)? + &w;
    let res = [&bk.coeff(1) - &d1, &bk.coeff(0) - &d0, &lr - &(&ls + &g)];
    let ok = res.iter().all(|r| r.is_zero());
    rep.push(Check::holds(format!("(R''+d_1R'+d_0R)/R matches the S quotient ({tag})"), "example-3 second quotient", ok, || {
        res.iter().map(|r| tw.render(r)).collect::<Vec<_>>().join("; ")
    }));
    let e = bk.compose(&tw, &a);
    let rational = e.coeffs().iter().all(|c| tw.to_ratfun(c).is_some());
    rep.push(Check::holds(format!("fourth-order operator has rational coefficients ({tag})"), "example-3 composed operator", rational && e.order() == 4 && e.is_monic(), || e.render(&tw)));
    let fr = e.apply_logderiv(&tw, &w).checked_div(&rf)?;
    rep.push(Check::zero(&tw, format!("F/R equals the second-stage quotient ({tag})"), "example-3 composed operator", &(&fr - &sq)));
    Ok(rep)
}
