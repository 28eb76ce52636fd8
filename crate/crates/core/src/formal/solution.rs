//! Log-free formal solutions `exp(P) z^gamma sum u_n z^(-n/p)`.

use num_traits::{One, Zero};

use super::newton::{conjugate_by_exp, exponential_parts};
use super::parts::ExpPart;
use super::series::PSeries;
use crate::error::{Error, Result};
use crate::field::gauss::{falling, fmt_gauss, from_rat, gdiv, gmul, gr, lcm_u32, GaussRat, Rat};
use crate::field::{Poly, RatFun};
use crate::linop::RatOp;
use crate::tower::{TowerBuilder, TowerElem};

pub const DEFAULT_TRUNC: usize = 8;

/// Canonical formal solution `exp(q) z^gamma sum_mu U_mu (log z)^mu`.
/// Only `log_degree = 0` is ever constructed here.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSol {
    pub exp_part: ExpPart,
    pub gamma: GaussRat,
    pub log_degree: usize,
    /// `series[mu]` in descending powers of `z^(1/ram)`, normalised to start
    /// at exponent 0.
    pub series: Vec<PSeries>,
    pub trunc: usize,
}

impl FormalSol {
    pub fn ram(&self) -> u32 {
        self.series.first().map(|s| s.ram()).unwrap_or(1)
    }

    pub fn lead_series(&self) -> &PSeries {
        &self.series[self.log_degree]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = self.lead_series();
        let coeffs: Vec<String> = (0..=self.trunc as i64).map(|n| fmt_gauss(&s.coeff(-n))).collect();
        serde_json::json!({
            "exp": self.exp_part.render(),
            "gamma": fmt_gauss(&self.gamma),
            "ram": s.ram(),
            "series": coeffs,
            "trunc": self.trunc,
        })
    }
}

/// The data `L_P[z^s] / z^s = sum_t phi_t(s) x^(h-t)`, with `phi_t(s) =
/// sum_j c[t][j] s (s-1) ... (s-j+1)`.
struct Indicial {
    h: i64,
    c: Vec<Vec<GaussRat>>,
}

impl Indicial {
    fn new(lp: &RatOp, ram: u32, terms: usize) -> Indicial {
        let p = ram as i64;
        let mut series = Vec::new();
        for (j, b) in lp.coeffs().iter().enumerate() {
            // b_j z^-j
            let zj = RatFun::new(Poly::one(ram), Poly::monomial(ram, GaussRat::one(), j * ram as usize))
                .expect("nonzero");
            let e = &b.lift(lcm_u32(b.ram(), ram)) * &zj;
            series.push(e);
        }
        let h = series
            .iter()
            .filter_map(|e| e.deg_infty())
            .map(|d| (d * Rat::from_integer(p.into())).to_integer())
            .max()
            .map(|v| i64::try_from(v).expect("small degree"))
            .unwrap_or(0);
        let low = h - terms as i64;
        let expanded: Vec<PSeries> = series.iter().map(|e| PSeries::from_ratfun(e, low).lift(ram)).collect();
        let c = (0..=terms)
            .map(|t| expanded.iter().map(|s| s.coeff(h - t as i64)).collect())
            .collect();
        Indicial { h, c }
    }

    fn phi(&self, t: usize, s: &GaussRat) -> GaussRat {
        self.c[t]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(GaussRat::zero(), |acc, (j, c)| acc + gmul(c, &falling(s, j)))
    }

    /// `phi_0` as a polynomial in `s`.
    fn phi0_poly(&self) -> Poly {
        let mut acc = Poly::zero(1);
        for (j, c) in self.c[0].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut f = Poly::one(1);
            for i in 0..j {
                f = &f * &Poly::new(1, vec![gr(-(i as i64)), GaussRat::one()]);
            }
            acc = &acc + &f.scale(c);
        }
        acc
    }
}

/// Formal solution for an exponential part of multiplicity one, to
/// `order` terms after the leading one.
pub fn formal_solution(l: &RatOp, part: &ExpPart, order: usize) -> Result<FormalSol> {
    let parts = exponential_parts(l)?;
    let mult = parts
        .parts
        .iter()
        .find(|(q, _)| q.same_as(part))
        .map(|(_, m)| *m)
        .ok_or_else(|| {
            Error::Precondition(format!("{} is not an exponential part of the operator", part.render()))
        })?;
    if mult > 1 {
        return Err(Error::UnsupportedLog(mult));
    }
    let ram = lcm_u32(part.ram(), l.ram());
    let p = Rat::from_integer((ram as i64).into());
    let lp = conjugate_by_exp(l, part.poly());
    let ind = Indicial::new(&lp, ram, order);
    let phi0 = ind.phi0_poly();
    let gamma = match phi0.degree() {
        Some(1) => gdiv(&-phi0.coeff(0), &phi0.coeff(1)),
        Some(0) | None => {
            return Err(Error::Internal("indicial polynomial is constant".into()));
        }
        Some(d) => return Err(Error::UnsupportedLog(d)),
    };
    let shift = |n: usize| &gamma - from_rat(Rat::from_integer((n as i64).into()) / &p);
    let mut u: Vec<GaussRat> = vec![GaussRat::one()];
    for n in 1..=order {
        let mut acc = GaussRat::zero();
        for t in 1..=n {
            let prev = &u[n - t];
            if !prev.is_zero() {
                acc += gmul(prev, &ind.phi(t, &shift(n - t)));
            }
        }
        let denom = ind.phi(0, &shift(n));
        if denom.is_zero() {
            return Err(Error::Internal(format!("resonant recursion at step {n}")));
        }
        u.push(gdiv(&-acc, &denom));
    }
    Ok(FormalSol {
        exp_part: part.clone(),
        gamma,
        log_degree: 0,
        series: vec![PSeries::new(ram, 0, u, Some(-(order as i64)))],
        trunc: order,
    })
}

/// Outcome of substituting a truncated solution back into its operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// Exponent (in `z`) of `L[y_N] / (e^P z^gamma)`; `None` if it vanishes.
    pub exponent: Option<Rat>,
    /// Exponent of the smallest retained contribution, `(h - N)/p`.
    pub floor: Rat,
}

impl Residual {
    pub fn ok(&self) -> bool {
        self.exponent.as_ref().is_none_or(|e| *e < self.floor)
    }
}

/// Substitute the truncated solution into `L` by direct differentiation in
/// a tower carrying `e^P` and `z^gamma` as exponential generators.
pub fn solution_residual(l: &RatOp, sol: &FormalSol) -> Result<Residual> {
    let ram = lcm_u32(sol.ram(), l.ram());
    let mut b = TowerBuilder::new();
    if ram > 1 {
        b.root("x", ram)?;
    }
    let pprime = b.tower().from_ratfun(&sol.exp_part.derivative())?;
    let e = b.exp("E", pprime)?;
    let gz = b.tower().z().inv()?.scale(&sol.gamma);
    let g = b.exp("G", gz)?;
    let tw = b.build();
    let x_inv = tw.x().inv()?;
    let series = sol.lead_series().lift(ram);
    let mut body = TowerElem::zero();
    for n in 0..=(sol.trunc as i64 * (ram / sol.ram()) as i64) {
        let c = series.coeff(-n);
        if !c.is_zero() {
            body = body + x_inv.pow(n)?.scale(&c);
        }
    }
    let y = &(&e * &g) * &body;
    let op = l.to_linop(&tw)?;
    let r = op.apply(&tw, &y).checked_div(&(&e * &g))?;
    let r = tw
        .to_ratfun(&r)
        .ok_or_else(|| Error::Internal("residual left the base field".into()))?;
    let lp = conjugate_by_exp(l, sol.exp_part.poly());
    let ind = Indicial::new(&lp, ram, 0);
    let floor = Rat::new(
        (ind.h - (sol.trunc as i64) * (ram / sol.ram()) as i64).into(),
        (ram as i64).into(),
    );
    Ok(Residual { exponent: r.deg_infty(), floor })
}
