//! Differential field towers over Q(i)(z^(1/P)).
//!
//! Variable 0 is `x = z^(1/P)`, where `P` is the lcm of the declared root
//! indices. Every exponential or primitive generator gets its own variable,
//! in declaration order. Generators are treated as algebraically
//! independent, so zero testing is structural.

mod elem;
pub mod mpoly;

pub use elem::TowerElem;
pub use mpoly::{MPoly, Mono, MAX_VARS};

use num_traits::{One, Zero};
use std::cell::Cell;

use crate::error::{Error, Result};
use crate::field::gauss::{fmt_gauss_expr, gr, lcm_u32, GaussRat, Rat};
use crate::field::{Poly, RatFun};

#[derive(Clone, Debug, PartialEq)]
pub enum GenKind {
    /// `t'/t = u`
    Exp(TowerElem),
    /// `t' = u`
    Prim(TowerElem),
    /// `t = z^(1/p)`
    Root(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
}

#[derive(Clone, Debug)]
pub struct Tower {
    ram: u32,
    gens: Vec<Generator>,
    /// Tower variable of each generator (roots map to 0).
    var_of: Vec<usize>,
    /// Display name of each variable.
    var_names: Vec<String>,
    /// `D(v) = deriv_num[v] / deriv_den` for every variable `v`.
    deriv_num: Vec<MPoly>,
    deriv_den: MPoly,
}

impl Default for Tower {
    fn default() -> Self {
        Tower::rational(1)
    }
}

impl Tower {
    /// The field Q(i)(z^(1/ram)) with no further generators.
    pub fn rational(ram: u32) -> Tower {
        assert!(ram >= 1);
        let mut t = Tower {
            ram,
            gens: Vec::new(),
            var_of: Vec::new(),
            var_names: vec!["z".into()],
            deriv_num: Vec::new(),
            deriv_den: MPoly::one(),
        };
        // D(x) = 1 / (P x^(P-1))
        let dx = TowerElem::new(
            MPoly::one(),
            MPoly::monomial(Mono::var(0, (ram - 1) as u16), gr(ram as i64)),
        )
        .expect("nonzero");
        t.set_derivs(vec![dx]);
        t
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn num_vars(&self) -> usize {
        self.deriv_num.len()
    }

    fn set_derivs(&mut self, ds: Vec<TowerElem>) {
        let mut den = MPoly::one();
        for d in &ds {
            let g = den.gcd(d.den());
            den = den.mul(&d.den().div_exact(&g).expect("gcd divides"));
        }
        self.deriv_num = ds
            .iter()
            .map(|d| d.num().mul(&den.div_exact(d.den()).expect("lcm multiple")))
            .collect();
        self.deriv_den = den;
    }

    fn derivs(&self) -> Vec<TowerElem> {
        self.deriv_num
            .iter()
            .map(|n| TowerElem::new(n.clone(), self.deriv_den.clone()).expect("nonzero"))
            .collect()
    }

    /// `x = z^(1/P)`.
    pub fn x(&self) -> TowerElem {
        TowerElem::from_poly(MPoly::var(0))
    }

    pub fn z(&self) -> TowerElem {
        TowerElem::from_poly(MPoly::monomial(Mono::var(0, self.ram as u16), GaussRat::one()))
    }

    /// `z^(num/den)` for an exponent whose denominator divides `P`.
    pub fn z_pow(&self, e: &Rat) -> Result<TowerElem> {
        let scaled = e * Rat::from_integer((self.ram as i64).into());
        if !scaled.is_integer() {
            return Err(Error::Tower(format!(
                "z^({e}) needs ramification {} but the tower has {}",
                e.denom(),
                self.ram
            )));
        }
        let n: i64 = scaled.to_integer().try_into().map_err(|_| Error::Tower("exponent too large".into()))?;
        self.x().pow(n)
    }

    pub fn constant(&self, c: GaussRat) -> TowerElem {
        TowerElem::constant(c)
    }

    pub fn gen(&self, name: &str) -> Result<TowerElem> {
        let idx = self
            .gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::Tower(format!("unknown generator `{name}`")))?;
        Ok(self.gen_elem(idx))
    }

    pub fn has_gen(&self, name: &str) -> bool {
        self.gens.iter().any(|g| g.name == name)
    }

    fn gen_elem(&self, idx: usize) -> TowerElem {
        match self.gens[idx].kind {
            GenKind::Root(p) => self.x().pow((self.ram / p) as i64).expect("power"),
            _ => TowerElem::from_poly(MPoly::var(self.var_of[idx])),
        }
    }

    /// Embed a rational function whose ramification divides `P`.
    pub fn from_ratfun(&self, r: &RatFun) -> Result<TowerElem> {
        let num = self.embed_poly(r.num())?;
        let den = self.embed_poly(r.den())?;
        TowerElem::new(num, den)
    }

    fn embed_poly(&self, p: &Poly) -> Result<MPoly> {
        if !self.ram.is_multiple_of(p.ram()) {
            return Err(Error::Tower(format!(
                "ramification {} does not divide the tower's {}",
                p.ram(),
                self.ram
            )));
        }
        let step = (self.ram / p.ram()) as usize;
        let mut dense = vec![GaussRat::zero(); p.coeffs().len().saturating_sub(1) * step + 1];
        for (j, c) in p.coeffs().iter().enumerate() {
            dense[j * step] = c.clone();
        }
        Ok(MPoly::from_univariate(0, &dense))
    }

    /// Convert back to a rational function when only `z` occurs.
    pub fn to_ratfun(&self, e: &TowerElem) -> Option<RatFun> {
        let num = e.num().univariate(0)?;
        let den = e.den().univariate(0)?;
        let r = RatFun::new(Poly::new(self.ram, num), Poly::new(self.ram, den)).ok()?;
        Some(r.reduce_ram())
    }

    /// `D = d/dz`.
    pub fn derive(&self, e: &TowerElem) -> TowerElem {
        if e.is_constant() {
            return TowerElem::zero();
        }
        let dn = self.derive_poly(e.num());
        if e.den().is_constant() {
            return TowerElem::new(dn, self.deriv_den.clone()).expect("nonzero");
        }
        let dd = self.derive_poly(e.den());
        let num = dn.mul(e.den()).sub(&e.num().mul(&dd));
        let den = self.deriv_den.mul(&e.den().mul(e.den()));
        TowerElem::new(num, den).expect("nonzero")
    }

    /// `deriv_den * D(p)` as a polynomial.
    fn derive_poly(&self, p: &MPoly) -> MPoly {
        let mask = p.var_mask();
        let mut acc = MPoly::zero();
        for (v, dv) in self.deriv_num.iter().enumerate() {
            if mask & (1 << v) != 0 && !dv.is_zero() {
                acc = acc.add(&p.partial(v).mul(dv));
            }
        }
        acc
    }

    pub fn derive_n(&self, e: &TowerElem, n: usize) -> TowerElem {
        (0..n).fold(e.clone(), |acc, _| self.derive(&acc))
    }

    /// `r_1..r_m` with `r_j = f^(j)/f` for an abstract `f` with `f'/f = w`,
    /// via `r_{j+1} = r_j' + w r_j`.
    pub fn logderiv_powers(&self, w: &TowerElem, m: usize) -> Vec<TowerElem> {
        let mut out = Vec::with_capacity(m);
        let mut r = w.clone();
        for _ in 0..m {
            out.push(r.clone());
            r = self.derive(&r) + w * &r;
        }
        out
    }

    pub fn is_zero(&self, e: &TowerElem) -> bool {
        e.is_zero()
    }

    /// Whether `e` only involves the first `nvars` variables of this tower.
    pub fn contains(&self, e: &TowerElem) -> bool {
        e.var_mask() >> self.num_vars() == 0
    }

    /// Render as `num/den` with generator names.
    pub fn render(&self, e: &TowerElem) -> String {
        if Self::negative_monomial(e) && !e.den().is_constant() {
            return format!("-{}", self.render(&-e));
        }
        let n = self.render_poly(e.num());
        if e.den().is_constant() {
            return n;
        }
        let d = self.render_poly(e.den());
        let wrap = |s: String, p: &MPoly| {
            if p.len() == 1 && !s.starts_with('-') {
                s
            } else {
                format!("({s})")
            }
        };
        format!("{}/{}", wrap(n, e.num()), wrap(d, e.den()))
    }

    /// Numerator is a single term with a negative rational coefficient.
    pub fn negative_monomial(e: &TowerElem) -> bool {
        e.num().len() == 1 && {
            let c = e.num().lead_coeff();
            c.im.is_zero() && c.re < Rat::zero()
        }
    }

    pub fn render_poly(&self, p: &MPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in p.terms() {
            let mono = self.render_mono(m);
            let neg = c.im.is_zero() && c.re < Rat::zero();
            let mag = if neg { -c } else { c.clone() };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => fmt_gauss_expr(&mag),
                (false, true) => mono,
                (false, false) => format!("{}*{}", fmt_gauss_expr(&mag), mono),
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    fn render_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (v, &e) in m.0.iter().enumerate().take(self.num_vars()) {
            if e == 0 {
                continue;
            }
            if v == 0 {
                let ex = Rat::new((e as i64).into(), (self.ram as i64).into());
                parts.push(crate::field::poly::render_z_power(&ex));
            } else if e == 1 {
                parts.push(self.var_names[v].clone());
            } else {
                parts.push(format!("{}^{}", self.var_names[v], e));
            }
        }
        parts.join("*")
    }
}

/// Incremental construction of a [`Tower`]. Root generators must be declared
/// before anything else, since they fix the base ramification.
#[derive(Debug, Default)]
pub struct TowerBuilder {
    tower: Tower,
    frozen: Cell<bool>,
}

impl TowerBuilder {
    pub fn new() -> TowerBuilder {
        TowerBuilder::default()
    }

    /// Read access to the tower built so far, for constructing elements.
    /// Freezes the base ramification.
    pub fn tower(&self) -> &Tower {
        self.frozen.set(true);
        &self.tower
    }

    fn check_name(&self, name: &str) -> Result<()> {
        if name.is_empty() || name == "z" || name == "D" || name == "i" || self.tower.has_gen(name) {
            return Err(Error::Tower(format!("invalid or duplicate generator name `{name}`")));
        }
        Ok(())
    }

    pub fn root(&mut self, name: &str, p: u32) -> Result<()> {
        self.check_name(name)?;
        if p == 0 {
            return Err(Error::Tower("root index must be positive".into()));
        }
        if self.frozen.get() {
            return Err(Error::Tower(format!(
                "root generator `{name}` must be declared before other generators and elements"
            )));
        }
        let ram = lcm_u32(self.tower.ram, p);
        let gens = std::mem::take(&mut self.tower.gens);
        let var_of = std::mem::take(&mut self.tower.var_of);
        self.tower = Tower::rational(ram);
        self.tower.gens = gens;
        self.tower.var_of = var_of;
        self.tower.gens.push(Generator { name: name.into(), kind: GenKind::Root(p) });
        self.tower.var_of.push(0);
        Ok(())
    }

    pub fn exp(&mut self, name: &str, u: TowerElem) -> Result<TowerElem> {
        self.push(name, GenKind::Exp(u))
    }

    pub fn prim(&mut self, name: &str, u: TowerElem) -> Result<TowerElem> {
        self.push(name, GenKind::Prim(u))
    }

    fn push(&mut self, name: &str, kind: GenKind) -> Result<TowerElem> {
        self.check_name(name)?;
        self.frozen.set(true);
        let v = self.tower.num_vars();
        if v >= MAX_VARS {
            return Err(Error::Tower(format!("at most {} generators", MAX_VARS - 1)));
        }
        let u = match &kind {
            GenKind::Exp(u) | GenKind::Prim(u) => u,
            GenKind::Root(_) => unreachable!(),
        };
        if !self.tower.contains(u) {
            return Err(Error::Tower(format!(
                "defining element of `{name}` is not in a lower level"
            )));
        }
        let t = TowerElem::from_poly(MPoly::var(v));
        let dv = match &kind {
            GenKind::Exp(u) => u * &t,
            GenKind::Prim(u) => u.clone(),
            GenKind::Root(_) => unreachable!(),
        };
        let mut ds = self.tower.derivs();
        ds.push(dv);
        self.tower.set_derivs(ds);
        self.tower.gens.push(Generator { name: name.into(), kind });
        self.tower.var_of.push(v);
        self.tower.var_names.push(name.into());
        Ok(t)
    }

    pub fn build(self) -> Tower {
        self.tower
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::ratq;

    #[test]
    fn exp_and_prim_derivatives() {
        let mut b = TowerBuilder::new();
        let t = b.exp("t", TowerElem::one()).unwrap();
        let tw = b.tower().clone();
        assert_eq!(tw.derive(&t), t);
        let one = TowerElem::one();
        let e = one.checked_div(&(&one - &t)).unwrap();
        let expect = t.checked_div(&(&one - &t).pow(2).unwrap()).unwrap();
        assert_eq!(tw.derive(&e), expect);

        let mut b = TowerBuilder::new();
        let z = b.tower().z();
        let hp = b.exp("Hp", z).unwrap();
        let h = b.prim("H", hp.clone()).unwrap();
        let tw = b.build();
        assert_eq!(tw.derive(&h), hp);
    }

    #[test]
    fn ramified_root() {
        let mut b = TowerBuilder::new();
        b.root("s", 2).unwrap();
        let tw = b.build();
        let s = tw.gen("s").unwrap();
        // d/dz z^(1/2) = (1/2) z^(-1/2)
        let expect = s.pow(-1).unwrap().scale(&crate::field::gauss::grq(1, 2));
        assert_eq!(tw.derive(&s), expect);
        assert_eq!(tw.z_pow(&ratq(3, 2)).unwrap(), s.pow(3).unwrap());
        assert_eq!(tw.render(&expect), "(1/2)/z^(1/2)");
    }

    #[test]
    fn root_after_exp_is_rejected() {
        let mut b = TowerBuilder::new();
        b.exp("t", TowerElem::one()).unwrap();
        assert!(b.root("s", 2).is_err());
        assert!(b.exp("t", TowerElem::one()).is_err());
    }

    #[test]
    fn logderiv_powers_constant() {
        let tw = Tower::rational(1);
        let a = TowerElem::int(3);
        let rs = tw.logderiv_powers(&a, 4);
        assert_eq!(rs[3], TowerElem::int(81));
    }

    #[test]
    fn round_trip_ratfun() {
        let tw = Tower::rational(2);
        let r = RatFun::new(Poly::from_ints(1, &[1, 1]), Poly::from_ints(1, &[0, 1])).unwrap();
        let e = tw.from_ratfun(&r).unwrap();
        assert_eq!(tw.to_ratfun(&e), Some(r));
    }
}
