//! Sparse multivariate polynomials over Q(i) with lex-ordered terms and an
//! exact gcd.

use num_traits::{One, Zero};
use std::cmp::Ordering;

use crate::field::gauss::{gdiv, gmul, gr, GaussRat};

pub const MAX_VARS: usize = 16;

/// Exponent vector. The derived `Ord` is lex with variable 0 most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn var(v: usize, e: u16) -> Mono {
        let mut m = Mono::default();
        m.0[v] = e;
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(m)
    }

    pub fn meet(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).min(*b);
        }
        m
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mask(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |m, (v, _)| m | (1 << v))
    }
}

/// Polynomial as a list of terms sorted by descending monomial, no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(Mono, GaussRat)>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> MPoly {
        MPoly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> MPoly {
        MPoly::monomial(Mono::one(), c)
    }

    pub fn monomial(m: Mono, c: GaussRat) -> MPoly {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: usize) -> MPoly {
        MPoly::monomial(Mono::var(v, 1), GaussRat::one())
    }

    /// Build from unsorted terms, merging duplicates and dropping zeros.
    pub fn from_terms(mut terms: Vec<(Mono, GaussRat)>) -> MPoly {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, GaussRat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => {
                    if out.last().is_some_and(|(_, c)| c.is_zero()) {
                        out.pop();
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
        MPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, GaussRat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.as_slice() {
            [] => Some(GaussRat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lead(&self) -> Option<&(Mono, GaussRat)> {
        self.terms.first()
    }

    pub fn lead_coeff(&self) -> GaussRat {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(GaussRat::zero)
    }

    /// Bit set of variables that occur.
    pub fn var_mask(&self) -> u32 {
        self.terms.iter().fold(0, |m, (mo, _)| m | mo.mask())
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.0[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total()).max().unwrap_or(0)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_mono(&self) -> Mono {
        let mut it = self.terms.iter();
        let first = it.next().map(|t| t.0).unwrap_or_default();
        it.fold(first, |acc, (m, _)| acc.meet(m))
    }

    pub fn scale(&self, c: &GaussRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (*m, gmul(a, c))).collect() }
    }

    pub fn mul_term(&self, mono: &Mono, c: &GaussRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (m.mul(mono), gmul(a, c))).collect() }
    }

    /// Divide every exponent vector by `mono` (which must divide each term).
    pub fn div_mono(&self, mono: &Mono) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.div(mono).expect("monomial divides"), a.clone()))
                .collect(),
        }
    }

    pub fn monic(&self) -> MPoly {
        match self.terms.first() {
            None => MPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => {
                let inv = c.inv();
                self.scale(&inv)
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.merge(o, true)
    }

    fn merge(&self, o: &MPoly, negate: bool) -> MPoly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, if negate { -&b[j].1 } else { b[j].1.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (*m, if negate { -c } else { c.clone() })));
        MPoly { terms: out }
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        if self.is_zero() || o.is_zero() {
            return MPoly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                prods.push((ma.mul(mb), gmul(ca, cb)));
            }
        }
        MPoly::from_terms(prods)
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> MPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[v] > 0)
            .map(|(m, c)| {
                let mut m2 = *m;
                m2.0[v] -= 1;
                (m2, gmul(c, &gr(m.0[v] as i64)))
            })
            .collect::<Vec<_>>();
        // lowering one exponent keeps lex order except for ties, which
        // cannot occur since distinct terms stay distinct
        MPoly { terms }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (dm, dc) = d.lead()?;
        if d.terms.len() == 1 {
            let inv = dc.inv();
            let terms = self
                .terms
                .iter()
                .map(|(m, c)| Some((m.div(dm)?, gmul(c, &inv))))
                .collect::<Option<Vec<_>>>()?;
            return Some(MPoly { terms });
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()));
        }
        let mut q = Vec::new();
        let mut r = self.clone();
        while let Some((rm, rc)) = r.lead() {
            let m = rm.div(dm)?;
            let c = gdiv(rc, dc);
            r = r.sub(&d.mul_term(&m, &c));
            q.push((m, c));
        }
        Some(MPoly { terms: q })
    }

    /// Coefficients with respect to variable `v`: `self = sum_j out[j] v^j`,
    /// where `out[j]` no longer contains `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, GaussRat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut m2 = *m;
            let e = m2.0[v] as usize;
            m2.0[v] = 0;
            buckets[e].push((m2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MPoly { terms: t }
            })
            .collect()
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = Vec::new();
        for (e, p) in coeffs.iter().enumerate() {
            let mono = Mono::var(v, e as u16);
            terms.extend(p.terms.iter().map(|(m, c)| (m.mul(&mono), c.clone())));
        }
        MPoly::from_terms(terms)
    }

    /// Dense coefficients when `v` is the only variable present.
    pub fn univariate(&self, v: usize) -> Option<Vec<GaussRat>> {
        if self.var_mask() & !(1 << v) != 0 {
            return None;
        }
        let mut out = vec![GaussRat::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            out[m.0[v] as usize] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(v: usize, coeffs: &[GaussRat]) -> MPoly {
        MPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Mono::var(v, e as u16), c.clone()))
                .collect(),
        )
    }

    /// Replace variable `v` by `value`.
    pub fn substitute(&self, v: usize, value: &MPoly) -> MPoly {
        let cs = self.coeffs_in(v);
        let mut acc = MPoly::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &MPoly) -> MPoly {
        gcd(self, o)
    }
}

fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.monic();
    }
    let ma = a.min_mono();
    let mb = b.min_mono();
    let mg = ma.meet(&mb);
    let a1 = if ma.is_one() { a.clone() } else { a.div_mono(&ma) };
    let b1 = if mb.is_one() { b.clone() } else { b.div_mono(&mb) };
    let core = if a1.is_constant() || b1.is_constant() {
        MPoly::one()
    } else {
        gcd_core(a1, b1)
    };
    if mg.is_one() {
        core
    } else {
        core.mul_term(&mg, &GaussRat::one())
    }
}

/// Gcd of two nonconstant polynomials without common monomial content.
fn gcd_core(a: MPoly, b: MPoly) -> MPoly {
    let (ma, mb) = (a.var_mask(), b.var_mask());
    if ma & mb == 0 {
        return MPoly::one();
    }
    // a variable present in only one argument can only contribute through
    // the content with respect to that variable
    if let Some(v) = lowest_bit(ma & !mb) {
        return gcd(&content_in(&a, v), &b);
    }
    if let Some(v) = lowest_bit(mb & !ma) {
        return gcd(&a, &content_in(&b, v));
    }
    // cheap exact-division probes
    let (small, big) = if a.total_degree() <= b.total_degree() { (&a, &b) } else { (&b, &a) };
    if big.div_exact(small).is_some() {
        return small.monic();
    }
    if ma.count_ones() == 1 {
        let v = ma.trailing_zeros() as usize;
        let ua = a.univariate(v).expect("univariate");
        let ub = b.univariate(v).expect("univariate");
        return MPoly::from_univariate(v, &univariate_gcd(ua, ub));
    }
    let v = (0..MAX_VARS)
        .filter(|v| ma & (1 << v) != 0)
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("shared variable");
    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let conta = content(&ca);
    let contb = content(&cb);
    let cont = gcd(&conta, &contb);
    let mut pa = divide_all(&ca, &conta);
    let mut pb = divide_all(&cb, &contb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    // primitive pseudo-remainder sequence in v
    let g = loop {
        let r = pseudo_rem(&pa, &pb);
        if r.is_empty() {
            break pb;
        }
        if r.len() == 1 {
            break vec![MPoly::one()];
        }
        let rc = content(&r);
        pa = pb;
        pb = divide_all(&r, &rc);
    };
    let gp = MPoly::from_coeffs_in(v, &g);
    gp.mul(&cont).monic()
}

fn lowest_bit(m: u32) -> Option<usize> {
    (m != 0).then(|| m.trailing_zeros() as usize)
}

fn content_in(p: &MPoly, v: usize) -> MPoly {
    content(&p.coeffs_in(v))
}

fn content(cs: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    // start from the sparsest coefficient to keep intermediate gcds small
    let mut order: Vec<&MPoly> = cs.iter().filter(|c| !c.is_zero()).collect();
    order.sort_by_key(|c| c.len());
    for c in order {
        g = gcd(&g, c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    g
}

fn divide_all(cs: &[MPoly], d: &MPoly) -> Vec<MPoly> {
    if d.as_constant().is_some_and(|c| c.is_one()) {
        return cs.to_vec();
    }
    cs.iter()
        .map(|c| c.div_exact(d).expect("content divides coefficient"))
        .collect()
}

/// Pseudo-remainder of dense coefficient vectors (ascending in the main
/// variable); trailing zeros trimmed.
fn pseudo_rem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r: Vec<MPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&bj.mul(&lr));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn univariate_gcd(mut a: Vec<GaussRat>, mut b: Vec<GaussRat>) -> Vec<GaussRat> {
    fn trim(v: &mut Vec<GaussRat>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let inv = b.last().expect("nonempty").inv();
        let db = b.len() - 1;
        while a.len() > db {
            let c = gmul(a.last().expect("nonempty"), &inv);
            let shift = a.len() - 1 - db;
            for (j, bj) in b.iter().enumerate() {
                a[j + shift] = &a[j + shift] - gmul(&c, bj);
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(l) = a.last() {
        let inv = l.inv();
        for c in a.iter_mut() {
            *c = gmul(c, &inv);
        }
    }
    a
}
