//! Linear differential operators `sum a_j D^j` over a tower.

use num_traits::Zero;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::gauss::{gr, GaussRat};
use crate::field::RatFun;
use crate::tower::{Tower, TowerElem};

/// Operator with tower coefficients `a_0..a_k`, stored ascending and trimmed
/// so that the last coefficient is nonzero (the zero operator is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinOp {
    coeffs: Vec<TowerElem>,
}

impl LinOp {
    pub fn new(mut coeffs: Vec<TowerElem>) -> LinOp {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinOp { coeffs }
    }

    pub fn zero() -> LinOp {
        LinOp { coeffs: Vec::new() }
    }

    pub fn identity() -> LinOp {
        LinOp::scalar(TowerElem::one())
    }

    pub fn scalar(a: TowerElem) -> LinOp {
        LinOp::new(vec![a])
    }

    /// `D^j`.
    pub fn d_pow(j: usize) -> LinOp {
        let mut c = vec![TowerElem::zero(); j + 1];
        c[j] = TowerElem::one();
        LinOp::new(c)
    }

    /// `D + a`.
    pub fn d_plus(a: TowerElem) -> LinOp {
        LinOp::new(vec![a, TowerElem::one()])
    }

    pub fn coeffs(&self) -> &[TowerElem] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> TowerElem {
        self.coeffs.get(j).cloned().unwrap_or_else(TowerElem::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; the zero operator reports 0.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> TowerElem {
        self.coeffs.last().cloned().unwrap_or_else(TowerElem::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Left multiplication by `1/a_k`.
    pub fn monic(&self) -> Result<LinOp> {
        let inv = self.leading().inv()?;
        Ok(self.mul_left(&inv))
    }

    /// `a * L` (multiplication on the left by a function).
    pub fn mul_left(&self, a: &TowerElem) -> LinOp {
        LinOp::new(self.coeffs.iter().map(|c| a * c).collect())
    }

    pub fn add(&self, o: &LinOp) -> LinOp {
        let n = self.coeffs.len().max(o.coeffs.len());
        LinOp::new((0..n).map(|j| self.coeff(j) + o.coeff(j)).collect())
    }

    pub fn sub(&self, o: &LinOp) -> LinOp {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LinOp {
        LinOp::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// `L[y]` for a tower element `y`.
    pub fn apply(&self, tw: &Tower, y: &TowerElem) -> TowerElem {
        let mut acc = TowerElem::zero();
        let mut dy = y.clone();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                dy = tw.derive(&dy);
            }
            if !a.is_zero() {
                acc = acc + a * &dy;
            }
        }
        acc
    }

    /// `L[f]/f` for an abstract `f` with `f'/f = w`.
    pub fn apply_logderiv(&self, tw: &Tower, w: &TowerElem) -> TowerElem {
        let rs = tw.logderiv_powers(w, self.order());
        let mut acc = self.coeff(0);
        for (j, r) in rs.iter().enumerate() {
            let a = self.coeff(j + 1);
            if !a.is_zero() {
                acc = acc + &a * r;
            }
        }
        acc
    }

    /// `D o self`.
    pub fn d_compose(&self, tw: &Tower) -> LinOp {
        let mut out = vec![TowerElem::zero(); self.coeffs.len() + 1];
        for (j, b) in self.coeffs.iter().enumerate() {
            out[j] = &out[j] + &tw.derive(b);
            out[j + 1] = &out[j + 1] + b;
        }
        LinOp::new(out)
    }

    /// `self o other`.
    pub fn compose(&self, tw: &Tower, other: &LinOp) -> LinOp {
        let mut acc = LinOp::zero();
        let mut cur = other.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cur = cur.d_compose(tw);
            }
            if !a.is_zero() {
                acc = acc.add(&cur.mul_left(a));
            }
        }
        acc
    }

    /// `self = Q o p + R` with `ord R < ord p`.
    pub fn right_divide(&self, tw: &Tower, p: &LinOp) -> Result<(LinOp, LinOp)> {
        if p.is_zero() {
            return Err(Error::Operator("right division by the zero operator".into()));
        }
        let lp = p.leading().inv()?;
        let op = p.order();
        if self.is_zero() || self.order() < op {
            return Ok((LinOp::zero(), self.clone()));
        }
        let mut shifts = vec![p.clone()];
        for _ in op..self.order() {
            let next = shifts.last().expect("nonempty").d_compose(tw);
            shifts.push(next);
        }
        let mut q = vec![TowerElem::zero(); self.order() - op + 1];
        let mut r = self.clone();
        while !r.is_zero() && r.order() >= op {
            let s = r.order() - op;
            let t = &r.leading() * &lp;
            r = r.sub(&shifts[s].mul_left(&t));
            q[s] = &q[s] + &t;
        }
        Ok((LinOp::new(q), r))
    }

    /// Render with generator names, e.g. `D^2 - z*D + (z+1)/(z-1)`.
    pub fn render(&self, tw: &Tower) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (j, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let dpart = match j {
                0 => String::new(),
                1 => "D".into(),
                _ => format!("D^{j}"),
            };
            // a single negative term takes its sign outside
            let neg = Tower::negative_monomial(a);
            let coef = if neg { tw.render(&-a) } else { tw.render(a) };
            let simple = a.den().is_constant() && a.num().len() == 1;
            let unit = coef == "1";
            let term = if dpart.is_empty() {
                if simple { coef } else { format!("({coef})") }
            } else if unit {
                dpart
            } else if simple {
                format!("{coef}*{dpart}")
            } else {
                format!("({coef})*{dpart}")
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        out
    }
}

/// Monic greatest common right divisor via the right Euclidean algorithm.
pub fn gcrd(tw: &Tower, ops: &[LinOp]) -> Result<LinOp> {
    let mut it = ops.iter();
    let mut g = it
        .next()
        .ok_or_else(|| Error::Operator("gcrd of an empty list".into()))?
        .clone();
    for b in it {
        let mut a = g;
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.right_divide(tw, &b)?;
            a = b;
            b = r;
        }
        g = a;
    }
    if g.is_zero() {
        Ok(g)
    } else {
        g.monic()
    }
}

/// Remove the `D^{k-1}` term: returns `(Lred, w)` with `w = X'/X = -a_{k-1}/k`
/// and `L[X y] = X Lred[y]`.
pub fn gauge_normalize(tw: &Tower, l: &LinOp) -> Result<(LinOp, TowerElem)> {
    let k = l.order();
    if k < 2 || !l.is_monic() {
        return Err(Error::Precondition("gauge normalisation needs a monic operator of order >= 2".into()));
    }
    let w = -l.coeff(k - 1).scale(&gr(k as i64).inv());
    let dw = LinOp::d_plus(w.clone());
    let mut power = LinOp::identity();
    let mut acc = LinOp::zero();
    for (j, a) in l.coeffs().iter().enumerate() {
        if j > 0 {
            power = dw.compose(tw, &power);
        }
        if !a.is_zero() {
            acc = acc.add(&power.mul_left(a));
        }
    }
    Ok((acc, w))
}

/// Determinant of the Wronskian matrix `[f_j^(i)]`.
pub fn wronskian(tw: &Tower, elems: &[TowerElem]) -> Result<TowerElem> {
    let k = elems.len();
    if k == 0 {
        return Err(Error::Operator("wronskian of an empty list".into()));
    }
    let mut rows = vec![elems.to_vec()];
    for i in 1..k {
        let next = rows[i - 1].iter().map(|f| tw.derive(f)).collect();
        rows.push(next);
    }
    Ok(determinant(rows))
}

/// Exact determinant: minor expansion for `n <= 5`, fraction-free
/// elimination beyond.
pub fn determinant(m: Vec<Vec<TowerElem>>) -> TowerElem {
    let n = m.len();
    if n <= 5 {
        let mut memo = HashMap::new();
        laplace(&m, 0, (1u32 << n) - 1, &mut memo)
    } else {
        bareiss(m)
    }
}

fn laplace(
    m: &[Vec<TowerElem>],
    row: usize,
    cols: u32,
    memo: &mut HashMap<u32, TowerElem>,
) -> TowerElem {
    if cols == 0 {
        return TowerElem::one();
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = TowerElem::zero();
    let mut sign = true;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let a = &m[row][c];
        if !a.is_zero() {
            let minor = laplace(m, row + 1, cols & !(1 << c), memo);
            let term = a * &minor;
            acc = if sign { acc + term } else { acc - term };
        }
        sign = !sign;
    }
    memo.insert(cols, acc.clone());
    acc
}

fn bareiss(mut m: Vec<Vec<TowerElem>>) -> TowerElem {
    let n = m.len();
    let mut prev = TowerElem::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return TowerElem::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = &v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Operator with rational-function coefficients, the input type of the
/// formal-solution machinery and of [`change_variables`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatOp {
    coeffs: Vec<RatFun>,
}

impl RatOp {
    pub fn new(mut coeffs: Vec<RatFun>) -> RatOp {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatOp { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> RatFun {
        self.coeffs.get(j).cloned().unwrap_or_else(|| RatFun::zero(1))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Common ramification of the coefficients.
    pub fn ram(&self) -> u32 {
        self.coeffs.iter().fold(1, |r, c| crate::field::gauss::lcm_u32(r, c.ram()))
    }

    pub fn monic(&self) -> Result<RatOp> {
        let lc = self.coeffs.last().ok_or(Error::DivisionByZero)?.clone();
        Ok(RatOp::new(
            self.coeffs.iter().map(|c| c.checked_div(&lc)).collect::<Result<_>>()?,
        ))
    }

    pub fn to_linop(&self, tw: &Tower) -> Result<LinOp> {
        Ok(LinOp::new(
            self.coeffs.iter().map(|c| tw.from_ratfun(c)).collect::<Result<_>>()?,
        ))
    }

    pub fn from_linop(tw: &Tower, l: &LinOp) -> Result<RatOp> {
        let coeffs = l
            .coeffs()
            .iter()
            .map(|c| {
                tw.to_ratfun(c)
                    .ok_or_else(|| Error::Operator("coefficient is not a rational function".into()))
            })
            .collect::<Result<_>>()?;
        Ok(RatOp::new(coeffs))
    }
}

/// The operator `L~` with `L~[f(z^n)] = (n z^(n-1))^k (L[f])(z^n)`.
///
/// Writing `s = z^n` and `E = (1/s') D`, `f^(m)(z^n) = E^m[f(z^n)]`, and the
/// expansion `E^m = sum_p c_{p,m} D^p` follows
/// `c_{p,m+1} = (c_{p,m}' + c_{p-1,m}) / s'`.
pub fn change_variables(l: &RatOp, n: usize) -> Result<RatOp> {
    if n < 2 {
        return Err(Error::Precondition(format!("change of variables needs n >= 2, got {n}")));
    }
    let k = l.order();
    let ram = l.ram();
    let sp = RatFun::z(ram)
        .pow(n as i64 - 1)?
        .scale(&gr(n as i64));
    let sp_inv = sp.inv()?;
    let mut out = vec![RatFun::zero(ram); k + 1];
    // c[p] holds c_{p,m} for the current m
    let mut c = vec![RatFun::one(ram)];
    for m in 0..=k {
        if m > 0 {
            let mut next = vec![RatFun::zero(ram); m + 1];
            for p in 0..=m {
                let mut v = if p < c.len() { c[p].derive() } else { RatFun::zero(ram) };
                if p >= 1 && p - 1 < c.len() {
                    v = &v + &c[p - 1];
                }
                next[p] = &v * &sp_inv;
            }
            c = next;
        }
        let a = l.coeff(m).lift(ram).compose_power(n);
        if a.is_zero() {
            continue;
        }
        for (p, cp) in c.iter().enumerate() {
            out[p] = &out[p] + &(&a * cp);
        }
    }
    let weight = sp.pow(k as i64)?;
    Ok(RatOp::new(out.iter().map(|c| (&weight * c).reduce_ram()).collect()))
}

impl LinOp {
    /// Coefficient of `D^j` as a constant, when it is one.
    pub fn const_coeff(&self, j: usize) -> Option<GaussRat> {
        let c = self.coeff(j);
        if c.is_zero() {
            Some(GaussRat::zero())
        } else {
            c.as_constant()
        }
    }
}
