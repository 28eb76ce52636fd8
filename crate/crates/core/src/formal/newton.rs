//! Exponential parts at infinity by iterated Newton polygons.

use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use super::parts::ExpPart;
use super::roots::roots;
use crate::error::{Error, Result};
use crate::field::gauss::{from_rat, gdiv, to_c64, GaussRat, Rat};
use crate::field::{Poly, RatFun};
use crate::linop::RatOp;

/// An exponential part whose characteristic root left Q(i): only the
/// leading term `coeff * z^exponent` is reported, in floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxPart {
    pub coeff: Complex<f64>,
    pub exponent: Rat,
    pub multiplicity: usize,
}

/// Exponential parts with multiplicities, over the common ramification
/// `ram`. `approx` is nonempty when some part could not be found exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpParts {
    pub parts: Vec<(ExpPart, usize)>,
    pub approx: Vec<ApproxPart>,
    pub ram: u32,
}

impl ExpParts {
    pub fn is_exact(&self) -> bool {
        self.approx.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.parts.iter().map(|(_, m)| m).sum::<usize>()
            + self.approx.iter().map(|a| a.multiplicity).sum::<usize>()
    }

    /// Exact parts listed with repetition, sorted descending.
    pub fn listed(&self) -> Vec<ExpPart> {
        let mut out: Vec<ExpPart> = self
            .parts
            .iter()
            .flat_map(|(p, m)| std::iter::repeat_n(p.clone(), *m))
            .collect();
        out.sort_by(|a, b| b.canonical_cmp(a));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let parts: Vec<_> = self
            .listed()
            .iter()
            .map(|p| serde_json::json!({ "poly": p.render() }))
            .collect();
        let mut v = serde_json::json!({ "parts": parts, "ram": self.ram });
        if !self.approx.is_empty() {
            v["approximate"] = self
                .approx
                .iter()
                .map(|a| {
                    serde_json::json!({
                        "coeff": [a.coeff.re, a.coeff.im],
                        "exponent": crate::field::gauss::fmt_rat(&a.exponent),
                        "multiplicity": a.multiplicity,
                    })
                })
                .collect();
        }
        v
    }
}

/// Exponential parts of the formal solutions of `L y = 0` at infinity.
///
/// Slopes of the upper Newton polygon of `(j, deg a_j)` give the growth
/// `z^lambda` of `y'/y`; roots of the edge's characteristic polynomial give
/// the leading coefficient; each root is refined on the shifted operator
/// `sum a_j (D + c z^lambda)^j`, restricted to slower growth.
pub fn exponential_parts(l: &RatOp) -> Result<ExpParts> {
    if l.order() == 0 {
        return Ok(ExpParts { parts: Vec::new(), approx: Vec::new(), ram: 1 });
    }
    let (found, approx) = search(l.coeffs(), None, 0)?;
    let mut parts: Vec<(ExpPart, usize)> = Vec::new();
    for (p, m) in found {
        let part = ExpPart::new(reduce_poly(&p))?;
        match parts.iter_mut().find(|(q, _)| q.same_as(&part)) {
            Some(entry) => entry.1 += m,
            None => parts.push((part, m)),
        }
    }
    let ram = parts
        .iter()
        .map(|(p, _)| p.ram())
        .chain(approx.iter().map(|a| a.exponent.denom().to_u32().unwrap_or(1)))
        .fold(1, crate::field::gauss::lcm_u32);
    let parts = parts.into_iter().map(|(p, m)| (p.lift(ram), m)).collect();
    let out = ExpParts { parts, approx, ram };
    if out.total_multiplicity() != l.order() {
        return Err(Error::Internal(format!(
            "found {} exponential parts for an operator of order {}",
            out.total_multiplicity(),
            l.order()
        )));
    }
    Ok(out)
}

fn reduce_poly(p: &Poly) -> Poly {
    RatFun::from_poly(p.clone()).reduce_ram().num().clone()
}

type Found = (Vec<(Poly, usize)>, Vec<ApproxPart>);

fn search(l: &[RatFun], bound: Option<&Rat>, depth: usize) -> Result<Found> {
    if depth > 64 {
        return Err(Error::Internal("Newton polygon recursion did not terminate".into()));
    }
    let pts: Vec<(usize, Rat)> = l
        .iter()
        .enumerate()
        .filter_map(|(j, a)| a.deg_infty().map(|d| (j, d)))
        .collect();
    let jmin = pts.first().map(|p| p.0).unwrap_or(0);
    let hull = upper_hull(&pts);
    let minus_one = -Rat::one();
    let mut zero_count = jmin;
    let mut found: Vec<(Poly, usize)> = Vec::new();
    let mut approx = Vec::new();
    for w in hull.windows(2) {
        let (j1, d1) = (&w[0].0, &w[0].1);
        let (j2, d2) = (&w[1].0, &w[1].1);
        let len = j2 - j1;
        let slope = (d2 - d1) / Rat::from_integer((len as i64).into());
        let lambda = -slope.clone();
        if bound.is_some_and(|b| lambda >= *b) {
            continue;
        }
        if lambda <= minus_one {
            zero_count += len;
            continue;
        }
        let mut char_coeffs = vec![GaussRat::zero(); len + 1];
        for (j, d) in &pts {
            if j >= j1 && j <= j2 {
                let on_edge = *d == d1 + &slope * Rat::from_integer(((j - j1) as i64).into());
                if on_edge {
                    char_coeffs[j - j1] = l[*j].lead_coeff();
                }
            }
        }
        let rs = roots(&Poly::new(1, char_coeffs));
        let e = &lambda + Rat::one();
        for (c, m) in rs.exact.iter().filter(|(c, _)| !c.is_zero()) {
            let lead = z_power_poly(&gdiv(c, &from_rat(e.clone())), &e);
            let w = z_power_rat(c, &lambda);
            let shifted = shift_op(l, &w);
            let (sub, sub_approx) = search(&shifted, Some(&lambda), depth + 1)?;
            let got = sub.iter().map(|s| s.1).sum::<usize>()
                + sub_approx.iter().map(|a| a.multiplicity).sum::<usize>();
            if got != *m {
                return Err(Error::Internal(format!(
                    "root of multiplicity {m} refined into {got} parts"
                )));
            }
            for (q, mq) in sub {
                found.push((&lead + &q, mq));
            }
            for a in sub_approx {
                approx.push(ApproxPart {
                    coeff: to_c64(&gdiv(c, &from_rat(e.clone()))),
                    exponent: e.clone(),
                    multiplicity: a.multiplicity,
                });
            }
        }
        let ef = e.to_f64().unwrap_or(f64::NAN);
        for (c, m) in rs.approx.iter().filter(|(c, _)| c.norm() > 1e-12) {
            approx.push(ApproxPart { coeff: c / ef, exponent: e.clone(), multiplicity: *m });
        }
    }
    if zero_count > 0 {
        found.push((Poly::zero(1), zero_count));
    }
    Ok((found, approx))
}

/// `c z^e` as a polynomial in the smallest ramified variable (e >= 0).
fn z_power_poly(c: &GaussRat, e: &Rat) -> Poly {
    let ram = e.denom().to_u32().expect("small ramification");
    let deg = e.numer().to_usize().expect("nonnegative exponent");
    Poly::monomial(ram, c.clone(), deg)
}

/// `c z^e` as a rational function in the smallest ramified variable.
fn z_power_rat(c: &GaussRat, e: &Rat) -> RatFun {
    if e.is_negative() {
        let ram = e.denom().to_u32().expect("small ramification");
        let deg = (-e.numer()).to_usize().expect("exponent");
        RatFun::new(Poly::constant(ram, c.clone()), Poly::monomial(ram, GaussRat::one(), deg))
            .expect("nonzero")
    } else {
        RatFun::from_poly(z_power_poly(c, e))
    }
}

/// `sum_j a_j (D + w)^j`.
fn shift_op(l: &[RatFun], w: &RatFun) -> Vec<RatFun> {
    let mut out = vec![RatFun::zero(1); l.len()];
    let mut power = vec![RatFun::one(1)];
    for (j, a) in l.iter().enumerate() {
        if j > 0 {
            let mut next = vec![RatFun::zero(1); power.len() + 1];
            for (i, p) in power.iter().enumerate() {
                next[i] = &(&next[i] + &p.derive()) + &(w * p);
                next[i + 1] = &next[i + 1] + p;
            }
            power = next;
        }
        if a.is_zero() {
            continue;
        }
        for (i, p) in power.iter().enumerate() {
            out[i] = &out[i] + &(a * p);
        }
    }
    out
}

/// Public form of the shift, used by the solution and consistency checks:
/// the operator `e^(-q) L e^(q)` for an exponential part `q`.
pub fn conjugate_by_exp(l: &RatOp, q: &Poly) -> RatOp {
    let qp = RatFun::from_poly(q.clone()).derive();
    RatOp::new(shift_op(l.coeffs(), &qp))
}

fn cross(o: &(usize, Rat), a: &(usize, Rat), b: &(usize, Rat)) -> Rat {
    let ax = Rat::from_integer(((a.0 as i64) - (o.0 as i64)).into());
    let bx = Rat::from_integer(((b.0 as i64) - (o.0 as i64)).into());
    ax * (&b.1 - &o.1) - (&a.1 - &o.1) * bx
}

fn upper_hull(pts: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    let mut hull: Vec<(usize, Rat)> = Vec::new();
    for p in pts {
        while hull.len() >= 2
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).cmp(&Rat::zero()) != Ordering::Less
        {
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull
}
