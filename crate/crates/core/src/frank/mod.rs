//! Frank's method: the relations tying a pair `(G, Phi)` to the coefficients
//! of two operators `D^k + sum c_j D^j` and `D^k + sum C_j D^j`, and their
//! eliminations.

pub mod lemmas;
pub mod recursion;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::gauss::{binom, from_rat, gdiv, gmul, gr, grq, GaussRat};
use crate::linop::LinOp;
use crate::tower::{Tower, TowerBuilder, TowerElem};

pub use lemmas::{lem3_second_coeff, logderiv_substitution, pole_weight, second_order_residual};
pub use recursion::{rj_mu_recursion, t3_formula, t3_rederived, SymbolicT};

/// Coefficients `c_0..c_{k-2}` and `C_0..C_{k-2}`; the conventions
/// `C_k = 1`, `c_{k-1} = C_{k-1} = c_{-1} = C_{-1} = 0` are applied by the
/// accessors.
#[derive(Clone, Debug, PartialEq)]
pub struct FrankSystem {
    k: usize,
    c: Vec<TowerElem>,
    cap: Vec<TowerElem>,
}

/// `phi_op[Phi] = g_op[G]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub mu: usize,
    pub phi_op: LinOp,
    pub g_op: LinOp,
}

impl Relation {
    /// `phi_op[Phi] - g_op[G]`.
    pub fn residual(&self, tw: &Tower, g: &TowerElem, phi: &TowerElem) -> TowerElem {
        self.phi_op.apply(tw, phi) - self.g_op.apply(tw, g)
    }

    pub fn to_json(&self, tw: &Tower) -> serde_json::Value {
        serde_json::json!({
            "mu": self.mu,
            "phi": self.phi_op.render(tw),
            "g": self.g_op.render(tw),
        })
    }
}

/// Relations obtained from the two highest nontrivial ones by eliminating
/// derivatives of `Phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowRelations {
    /// `D_{k-2} Phi = (k(k^2-1)/12) G''' + ...`
    pub eq_y: Relation,
    /// `(2 D_{k-3}/(k-2)) Phi = (k(k^2-1)/12) G'''' + ...`
    pub eq_z: Relation,
    /// `D* Phi = ((k+2) D_{k-2}/3) G'' + d_3 G' + d_4 G`
    pub eq_dstar: Relation,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Elimination {
    /// Every `D_mu` vanishes: the two operators coincide.
    Case1,
    /// `Phi = T*[G]` with `nu` the largest index of a nonzero `D_mu`;
    /// `reduced` are operators in `G` alone (the first is `U - D o T*`).
    Case2 { nu: usize, tstar: LinOp, reduced: Vec<LinOp> },
}

impl FrankSystem {
    pub fn new(k: usize, c: Vec<TowerElem>, cap: Vec<TowerElem>) -> Result<FrankSystem> {
        if k < 3 {
            return Err(Error::Precondition(format!("k = {k} < 3")));
        }
        if c.len() != k - 1 || cap.len() != k - 1 {
            return Err(Error::Precondition(format!(
                "expected {} coefficients c_0..c_(k-2) and C_0..C_(k-2)",
                k - 1
            )));
        }
        Ok(FrankSystem { k, c, cap })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self, mu: i64) -> TowerElem {
        if (0..self.k as i64 - 1).contains(&mu) {
            self.c[mu as usize].clone()
        } else {
            TowerElem::zero()
        }
    }

    pub fn cap(&self, mu: i64) -> TowerElem {
        if mu == self.k as i64 {
            TowerElem::one()
        } else if (0..self.k as i64 - 1).contains(&mu) {
            self.cap[mu as usize].clone()
        } else {
            TowerElem::zero()
        }
    }

    /// `D_mu = C_mu - c_mu`.
    pub fn d(&self, mu: i64) -> TowerElem {
        self.cap(mu) - self.c(mu)
    }

    pub fn m_k_mu(&self, mu: i64) -> Result<LinOp> {
        m_k_mu(self.k, &self.cap, mu)
    }

    /// `S_mu = M_{k,mu} - c_mu` and `T_mu = -M_{k,mu-1} + c_mu M_{k,k-1} +
    /// (c_mu' + c_{mu-1})`, unnormalised.
    fn raw(&self, tw: &Tower, mu: usize) -> Result<(LinOp, LinOp)> {
        let m = mu as i64;
        let s = self.m_k_mu(m)?.sub(&LinOp::scalar(self.c(m)));
        let t = self
            .m_k_mu(m - 1)?
            .neg()
            .add(&self.m_k_mu(self.k as i64 - 1)?.mul_left(&self.c(m)))
            .add(&LinOp::scalar(tw.derive(&self.c(m)) + self.c(m - 1)));
        Ok((s, t))
    }

    /// Relation `mu` in the form `S_mu[Phi] = T_mu[G]`. For `mu = k-1` it is
    /// divided by `-k`, so the left side is `-Phi'`.
    pub fn frank_equation(&self, tw: &Tower, mu: usize) -> Result<Relation> {
        if mu >= self.k {
            return Err(Error::Precondition(format!("mu = {mu} outside 0..k-1")));
        }
        let (s, t) = self.raw(tw, mu)?;
        if mu == self.k - 1 {
            let f = TowerElem::constant(gdiv(&gr(-1), &gr(self.k as i64)));
            return Ok(Relation { mu, phi_op: s.mul_left(&f), g_op: t.mul_left(&f) });
        }
        Ok(Relation { mu, phi_op: s, g_op: t })
    }

    pub fn relations(&self, tw: &Tower) -> Result<Vec<Relation>> {
        (0..self.k).map(|mu| self.frank_equation(tw, mu)).collect()
    }

    /// `U` with `Phi' = U[G]`: `U = -((k-1)/2) D^2 - D_{k-2}/k`.
    pub fn u_op(&self) -> LinOp {
        let k = self.k as i64;
        LinOp::new(vec![
            -(self.d(k - 2).scale(&gdiv(&gr(1), &gr(k)))),
            TowerElem::zero(),
            TowerElem::constant(grq(-(k - 1), 2)),
        ])
    }

    /// `T-check_mu = T_mu - sum_{j>=1} c_{j,mu} D^{j-1} o U`, so that relation
    /// `mu` reads `D_mu Phi = T-check_mu[G]` once `Phi' = U[G]`.
    pub fn tcheck(&self, tw: &Tower, mu: usize) -> Result<LinOp> {
        let (s, t) = self.raw(tw, mu)?;
        let u = self.u_op();
        let mut acc = t;
        let mut du = u;
        for j in 1..=s.order() {
            if j > 1 {
                du = du.d_compose(tw);
            }
            let cj = s.coeff(j);
            if !cj.is_zero() {
                acc = acc.sub(&du.mul_left(&cj));
            }
        }
        Ok(acc)
    }

    pub fn low_relations(&self, tw: &Tower) -> Result<LowRelations> {
        let k = self.k as i64;
        let dk2 = self.d(k - 2);
        let y = self.tcheck(tw, self.k - 2)?;
        let eq_y = Relation { mu: self.k - 2, phi_op: LinOp::scalar(dk2.clone()), g_op: y.clone() };
        let two_over = TowerElem::constant(gdiv(&gr(2), &gr(k - 2)));
        let zop = self.tcheck(tw, self.k - 3)?.mul_left(&two_over);
        let zlhs = &two_over * &self.d(k - 3);
        let eq_z = Relation { mu: self.k - 3, phi_op: LinOp::scalar(zlhs.clone()), g_op: zop.clone() };
        // differentiate eq_y, replace Phi' by U[G], subtract from eq_z
        let dstar = zlhs - tw.derive(&dk2);
        let g_op = zop.sub(&y.d_compose(tw)).add(&self.u_op().mul_left(&dk2));
        let eq_dstar = Relation { mu: self.k - 3, phi_op: LinOp::scalar(dstar), g_op };
        Ok(LowRelations { eq_y, eq_z, eq_dstar })
    }

    pub fn eliminate_phi(&self, tw: &Tower) -> Result<Elimination> {
        let nu = match (0..self.k - 1).rev().find(|&mu| !self.d(mu as i64).is_zero()) {
            Some(nu) => nu,
            None => return Ok(Elimination::Case1),
        };
        let tstar = self.tcheck(tw, nu)?.mul_left(&self.d(nu as i64).inv()?);
        let mut reduced = vec![self.u_op().sub(&tstar.d_compose(tw))];
        for mu in (0..self.k).filter(|&mu| mu != nu) {
            let (s, t) = self.raw(tw, mu)?;
            reduced.push(s.compose(tw, &tstar).sub(&t));
        }
        Ok(Elimination::Case2 { nu, tstar, reduced })
    }
}

/// `M_{k,mu} = sum_{m=mu}^k binom(m, mu) C_m D^(m-mu)` with `C_k = 1`,
/// `C_{k-1} = 0`; `caps` are `C_0..C_{k-2}`. `M_{k,-1} = 0`.
pub fn m_k_mu(k: usize, caps: &[TowerElem], mu: i64) -> Result<LinOp> {
    if mu == -1 {
        return Ok(LinOp::zero());
    }
    if mu < -1 || mu > k as i64 {
        return Err(Error::Precondition(format!("mu = {mu} outside -1..={k}")));
    }
    let mu = mu as usize;
    let cap = |m: usize| -> TowerElem {
        if m == k {
            TowerElem::one()
        } else if m + 1 == k {
            TowerElem::zero()
        } else {
            caps.get(m).cloned().unwrap_or_else(TowerElem::zero)
        }
    };
    let mut coeffs = vec![TowerElem::zero(); k - mu + 1];
    for m in mu..=k {
        coeffs[m - mu] = cap(m).scale(&from_rat(binom(m, mu)));
    }
    Ok(LinOp::new(coeffs))
}

/// A genuine constant-coefficient instance with exactly one nonzero `D_nu`:
/// `G = e^(a z)` and `Phi = tau G` satisfy all `k` relations. The
/// coefficients solve the linear conditions the relations impose; when
/// `nu != k-2`, the top relation forces `tau = -(k-1) a/2`.
#[derive(Clone, Debug)]
pub struct ConstantInstance {
    pub tower: Tower,
    pub system: FrankSystem,
    pub g: TowerElem,
    pub phi: TowerElem,
    pub nu: usize,
}

pub fn constant_instance(k: usize, nu: usize, a: &GaussRat, tau: &GaussRat, free: &GaussRat) -> Result<ConstantInstance> {
    if k < 3 || nu > k - 2 {
        return Err(Error::Precondition(format!("need k >= 3 and nu <= k-2 (k = {k}, nu = {nu})")));
    }
    let tau = if nu == k - 2 { tau.clone() } else { gmul(&grq(-(k as i64 - 1), 2), a) };
    // unknowns x = (c_0..c_{k-2}, D_nu)
    let n = k;
    let eval = |x: &[GaussRat]| -> Vec<GaussRat> {
        let c = |m: i64| if (0..k as i64 - 1).contains(&m) { x[m as usize].clone() } else { GaussRat::zero() };
        let cap = |m: i64| {
            if m == k as i64 {
                GaussRat::one()
            } else if m == nu as i64 {
                c(m) + &x[k - 1]
            } else {
                c(m)
            }
        };
        let apow = |e: usize| crate::field::gauss::pow_i(a, e as i64);
        (0..k as i64)
            .map(|mu| {
                let mut lhs = -gmul(&c(mu), &tau);
                for m in mu.max(0)..=k as i64 {
                    let b = from_rat(binom(m as usize, mu as usize));
                    lhs += gmul(&gmul(&b, &cap(m)), &gmul(&apow((m - mu) as usize), &tau));
                }
                let mut rhs = gmul(&c(mu), &gmul(&gr(k as i64), a)) + c(mu - 1);
                if mu >= 1 {
                    for m in (mu - 1)..=k as i64 {
                        let b = from_rat(binom(m as usize, (mu - 1) as usize));
                        rhs -= gmul(&gmul(&b, &cap(m)), &apow((m - mu + 1) as usize));
                    }
                }
                lhs - rhs
            })
            .collect()
    };
    let zero = vec![GaussRat::zero(); n];
    let f0 = eval(&zero);
    let mut rows: Vec<Vec<GaussRat>> = (0..k).map(|_| Vec::with_capacity(n + 1)).collect();
    for i in 0..n {
        let mut e = zero.clone();
        e[i] = GaussRat::one();
        let fi = eval(&e);
        for (r, row) in rows.iter_mut().enumerate() {
            row.push(&fi[r] - &f0[r]);
        }
    }
    for (r, row) in rows.iter_mut().enumerate() {
        row.push(-f0[r].clone());
    }
    let x = solve_linear(rows, n, free)
        .ok_or_else(|| Error::Precondition("inconsistent linear conditions for this (a, tau)".into()))?;
    if x[k - 1].is_zero() {
        return Err(Error::Precondition("solution has D_nu = 0; choose another (a, tau)".into()));
    }
    let mut b = TowerBuilder::new();
    let g = b.exp("G", TowerElem::constant(a.clone()))?;
    let tower = b.build();
    let c: Vec<TowerElem> = x[..k - 1].iter().cloned().map(TowerElem::constant).collect();
    let mut cap = c.clone();
    cap[nu] = &cap[nu] + &TowerElem::constant(x[k - 1].clone());
    let system = FrankSystem::new(k, c, cap)?;
    let phi = g.scale(&tau);
    Ok(ConstantInstance { tower, system, g, phi, nu })
}

/// Exact Gaussian elimination on an augmented matrix; free variables take
/// the value `free`. `None` if inconsistent.
fn solve_linear(mut m: Vec<Vec<GaussRat>>, n: usize, free: &GaussRat) -> Option<Vec<GaussRat>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = gdiv(&GaussRat::one(), &m[r][col]);
        for v in m[r].iter_mut() {
            *v = gmul(v, &inv);
        }
        for i in 0..rows {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=n {
                    let t = gmul(&f, &m[r][j]);
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![free.clone(); n];
    // reduced echelon form: pivot rows only involve free columns
    for (i, &col) in pivots.iter().enumerate() {
        let mut v = m[i][n].clone();
        for j in (col + 1..n).filter(|j| !pivots.contains(j)) {
            v -= gmul(&m[i][j], &x[j]);
        }
        x[col] = v;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::ratq;
    use crate::field::{Poly, RatFun};

    fn rat_system(k: usize) -> (Tower, FrankSystem) {
        let tw = Tower::rational(1);
        let e = |c: &[i64]| tw.from_ratfun(&RatFun::from_poly(Poly::from_ints(1, c))).unwrap();
        let c: Vec<_> = (0..k - 1).map(|i| e(&[i as i64 + 1, 1])).collect();
        let cap: Vec<_> = (0..k - 1).map(|i| e(&[2, 0, i as i64])).collect();
        (tw.clone(), FrankSystem::new(k, c, cap).unwrap())
    }

    #[test]
    fn m_k_mu_examples() {
        let caps = vec![TowerElem::int(5), TowerElem::int(7)];
        assert_eq!(m_k_mu(3, &caps, 3).unwrap(), LinOp::identity());
        assert_eq!(m_k_mu(3, &caps, 2).unwrap(), LinOp::new(vec![TowerElem::zero(), TowerElem::int(3)]));
        assert_eq!(
            m_k_mu(3, &caps, 1).unwrap(),
            LinOp::new(vec![TowerElem::int(7), TowerElem::zero(), TowerElem::int(3)])
        );
        assert!(m_k_mu(3, &caps, -1).unwrap().is_zero());
        assert!(m_k_mu(3, &caps, 4).is_err());
    }

    #[test]
    fn top_relation_coefficients() {
        for k in 3..=7 {
            let (tw, sys) = rat_system(k);
            let r = sys.frank_equation(&tw, k - 1).unwrap();
            assert_eq!(r.phi_op, LinOp::new(vec![TowerElem::zero(), TowerElem::int(-1)]));
            assert_eq!(r.g_op.coeff(2), TowerElem::constant(grq(k as i64 - 1, 2)));
            assert!(r.g_op.coeff(1).is_zero());
            assert_eq!(r.g_op.coeff(0), sys.d(k as i64 - 2).scale(&grq(1, k as i64)));
        }
    }

    #[test]
    fn low_relation_leading_coefficients() {
        for k in 3..=5 {
            let (tw, sys) = rat_system(k);
            let low = sys.low_relations(&tw).unwrap();
            let expect = from_rat(ratq((k * (k * k - 1)) as i64, 12));
            assert_eq!(low.eq_y.g_op.order(), 3);
            assert_eq!(low.eq_y.g_op.coeff(3), TowerElem::constant(expect.clone()));
            assert!(low.eq_y.g_op.coeff(2).is_zero());
            assert_eq!(low.eq_z.g_op.coeff(4), TowerElem::constant(expect));
            assert!(low.eq_z.g_op.coeff(3).is_zero());
            let kk = k as i64;
            let z2 = sys.d(kk - 2).scale(&grq(kk - 1, 3)) + sys.cap(kk - 2).scale(&gr(2));
            assert_eq!(low.eq_z.g_op.coeff(2), z2);
            assert!(low.eq_dstar.g_op.order() <= 2);
            assert_eq!(low.eq_dstar.g_op.coeff(2), sys.d(kk - 2).scale(&grq(kk + 2, 3)));
        }
    }

    #[test]
    fn case_one_detected() {
        let tw = Tower::rational(1);
        let c = vec![TowerElem::int(1), TowerElem::int(2)];
        let sys = FrankSystem::new(3, c.clone(), c).unwrap();
        assert_eq!(sys.eliminate_phi(&tw).unwrap(), Elimination::Case1);
    }

    #[test]
    fn constant_instances_satisfy_all_relations() {
        for (k, nu) in [(3, 1), (3, 0), (4, 2), (4, 1), (4, 0)] {
            let inst = constant_instance(k, nu, &gr(2), &grq(1, 3), &gr(1)).unwrap();
            let tw = &inst.tower;
            for rel in inst.system.relations(tw).unwrap() {
                assert!(rel.residual(tw, &inst.g, &inst.phi).is_zero(), "k={k} nu={nu} mu={}", rel.mu);
            }
            match inst.system.eliminate_phi(tw).unwrap() {
                Elimination::Case2 { nu: got, tstar, reduced } => {
                    assert_eq!(got, nu);
                    assert_eq!(tstar.apply(tw, &inst.g), inst.phi);
                    assert!(reduced.iter().all(|r| r.apply(tw, &inst.g).is_zero()));
                }
                Elimination::Case1 => panic!("expected case 2"),
            }
        }
    }
}
