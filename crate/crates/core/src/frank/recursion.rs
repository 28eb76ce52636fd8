//! Recursions for a symbolic function `T`: the table `R_{j,mu}` and the
//! closed form of `T_3`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::gauss::{from_rat, gr, GaussRat, Rat};
use crate::tower::{Tower, TowerBuilder, TowerElem};

/// A tower carrying a generic `T`: `s1` constant, `s' = s1`, `T'' = s T'`,
/// `T' = Tp`, plus constants `q_0..q_d` for `Q(T) = sum q_i T^i` and
/// `em = e^{-T}`. With `with_t3 = Some((k, d2))` it also carries
/// `rho = Q_0(T)^{1/k}` (`Q_0 = Q (Q-1) ... (Q-k+1)`) and `edt = e^{d2 T}`.
#[derive(Clone, Debug)]
pub struct SymbolicT {
    pub tower: Tower,
    pub t: TowerElem,
    pub tp: TowerElem,
    pub q: Vec<TowerElem>,
    pub em: TowerElem,
    pub rho: Option<TowerElem>,
    pub edt: Option<TowerElem>,
}

fn q_of(t: &TowerElem, q: &[TowerElem]) -> TowerElem {
    q.iter().rev().fold(TowerElem::zero(), |acc, c| &(&acc * t) + c)
}

fn falling_q(qt: &TowerElem, j: usize) -> TowerElem {
    (0..j).fold(TowerElem::one(), |acc, i| &acc * &(qt - &TowerElem::int(i as i64)))
}

impl SymbolicT {
    pub fn new(q_degree: usize) -> Result<SymbolicT> {
        SymbolicT::build(q_degree, None)
    }

    pub fn with_t3(q_degree: usize, k: usize, d2: &Rat) -> Result<SymbolicT> {
        SymbolicT::build(q_degree, Some((k, d2.clone())))
    }

    fn build(q_degree: usize, t3: Option<(usize, Rat)>) -> Result<SymbolicT> {
        let mut b = TowerBuilder::new();
        let s1 = b.prim("s1", TowerElem::zero())?;
        let s = b.prim("s", s1)?;
        let tp = b.exp("Tp", s)?;
        let t = b.prim("T", tp.clone())?;
        let q = (0..=q_degree)
            .map(|i| b.prim(&format!("q{i}"), TowerElem::zero()))
            .collect::<Result<Vec<_>>>()?;
        let em = b.exp("em", -tp.clone())?;
        let (mut rho, mut edt) = (None, None);
        if let Some((k, d2)) = t3 {
            let q0 = falling_q(&q_of(&t, &q), k);
            let u = b.tower().derive(&q0).checked_div(&q0.scale(&gr(k as i64)))?;
            rho = Some(b.exp("rho", u)?);
            edt = Some(b.exp("edt", tp.scale(&from_rat(d2)))?);
        }
        Ok(SymbolicT { tower: b.build(), t, tp, q, em, rho, edt })
    }

    /// `Q(T)`.
    pub fn q_t(&self) -> TowerElem {
        q_of(&self.t, &self.q)
    }

    /// `Q'(T)`, the derivative with respect to `T`.
    pub fn dq_t(&self) -> TowerElem {
        let dq: Vec<TowerElem> = self.q.iter().enumerate().skip(1).map(|(i, c)| c.scale(&gr(i as i64))).collect();
        q_of(&self.t, &dq)
    }

    /// `Q(T) (Q(T)-1) ... (Q(T)-j+1) (T')^j`.
    pub fn closed_form(&self, j: usize) -> TowerElem {
        &falling_q(&self.q_t(), j) * &self.tp.pow(j as i64).expect("nonzero")
    }
}

/// `S_j = sum_mu R_{j,mu} Y^mu` with `S_1 = Q(T) T'` and
/// `S_{j+1} = Y S_j' + j T' (Y - 1) S_j + S_1 S_j`, where `Y' = T'(1 - Y)`.
/// Returns `R[j-1][mu]` for `1 <= j <= jmax`.
pub fn rj_mu_recursion(st: &SymbolicT, jmax: usize) -> Vec<Vec<TowerElem>> {
    let tw = &st.tower;
    let s1 = &st.q_t() * &st.tp;
    let mut out = vec![vec![s1.clone()]];
    for j in 1..jmax {
        let s = out.last().expect("nonempty");
        let mut next = vec![TowerElem::zero(); s.len() + 1];
        for (mu, r) in s.iter().enumerate() {
            // Y * (R' Y^mu + mu R Y^(mu-1) T' (1 - Y))
            next[mu + 1] = &next[mu + 1] + &tw.derive(r);
            if mu > 0 {
                let m = &r.scale(&gr(mu as i64)) * &st.tp;
                next[mu] = &next[mu] + &m;
                next[mu + 1] = &next[mu + 1] - &m;
            }
            // j T' (Y - 1) R Y^mu
            let jt = &r.scale(&gr(j as i64)) * &st.tp;
            next[mu + 1] = &next[mu + 1] + &jt;
            next[mu] = &next[mu] - &jt;
            next[mu] = &next[mu] + &(&s1 * r);
        }
        while next.last().is_some_and(|c| c.is_zero()) && next.len() > 1 {
            next.pop();
        }
        out.push(next);
    }
    out
}

fn check_t3(k: usize, d2: &Rat) -> Result<()> {
    let kd = d2 * Rat::from_integer((k as i64).into());
    let half = Rat::new(1.into(), 2.into());
    if k < 2 || !kd.is_integer() || *d2 < Rat::zero() || *d2 > half {
        return Err(Error::Precondition(format!("need k d2 integral and 0 <= d2 <= 1/2 (k = {k}, d2 = {d2})")));
    }
    Ok(())
}

/// `T_3 = (1/k) sum_{j=0}^{k-2} ((j-k+1)/(Q(T)-j)) Q'(T) T'
///        - (d2 (Q(T)-k+1) + (k-1)/2) T' - ((k-1)/2) T''/T'`.
pub fn t3_formula(st: &SymbolicT, k: usize, d2: &Rat) -> Result<TowerElem> {
    check_t3(k, d2)?;
    let tw = &st.tower;
    let (qt, dq) = (st.q_t(), st.dq_t());
    let kk = k as i64;
    let mut sum = TowerElem::zero();
    for j in 0..=(kk - 2) {
        sum = sum + (&qt - &TowerElem::int(j)).inv()?.scale(&gr(j - kk + 1));
    }
    let first = (&(&sum * &dq) * &st.tp).scale(&GaussRat::new(Rat::new(1.into(), kk.into()), Rat::zero()));
    let half = from_rat(Rat::new((kk - 1).into(), 2.into()));
    let d2g = from_rat(d2.clone());
    let second = &(&(&qt - &TowerElem::int(kk - 1)).scale(&d2g) + &TowerElem::constant(half.clone())) * &st.tp;
    let third = tw.derive(&st.tp).checked_div(&st.tp)?.scale(&half);
    Ok(first - second - third)
}

/// `T_3` re-derived from its definitions: `u = e^{(d2-1)T} / (Q_0^{1/k} T')`,
/// `v = e^T u`, `W_0 = W(u, v)`, `nu_1 = -W_0'/W_0`,
/// `d_1 = nu_1 (Q - (k-1)/2) - Q(T)' - a/k`, `T_3 = Q u'/u + d_1 + a/k`
/// (any `a` cancels; `z` is used). Also returns `nu_1`.
pub fn t3_rederived(st: &SymbolicT, k: usize, d2: &Rat) -> Result<(TowerElem, TowerElem)> {
    check_t3(k, d2)?;
    let tw = &st.tower;
    let (rho, edt) = match (&st.rho, &st.edt) {
        (Some(r), Some(e)) => (r, e),
        _ => return Err(Error::Precondition("tower lacks the Q_0^(1/k) and e^(d2 T) generators".into())),
    };
    let v = edt.checked_div(&(rho * &st.tp))?;
    let u = &v * &st.em;
    let lu = tw.derive(&u).checked_div(&u)?;
    let w0 = &(&u * &tw.derive(&v)) - &(&tw.derive(&u) * &v);
    let nu1 = -tw.derive(&w0).checked_div(&w0)?;
    let d0 = st.q_t();
    let a_over_k = tw.z().scale(&GaussRat::new(Rat::new(1.into(), (k as i64).into()), Rat::zero()));
    let half = TowerElem::constant(from_rat(Rat::new((k as i64 - 1).into(), 2.into())));
    let d1 = &(&(&nu1 * &(&d0 - &half)) - &tw.derive(&d0)) - &a_over_k;
    let y1 = &(&d0 * &lu) + &d1;
    Ok((&y1 + &a_over_k, nu1))
}
