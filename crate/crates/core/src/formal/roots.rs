//! Roots of characteristic polynomials: exact in Q(i) when possible,
//! floating otherwise.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::field::gauss::{to_c64, GaussRat, Rat};
use crate::field::Poly;

/// Roots with multiplicity. `exact` are verified roots in Q(i); `approx`
/// are numerical roots of the remaining factor (clustered, with
/// multiplicities), present only when the polynomial does not split over
/// Q(i).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub exact: Vec<(GaussRat, usize)>,
    pub approx: Vec<(Complex<f64>, usize)>,
}

/// Numerical roots of a polynomial with complex coefficients via the
/// eigenvalues of its companion matrix.
pub fn numeric_roots(coeffs: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    if n == 1 {
        return vec![-coeffs[0] / lead];
    }
    let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[i] / lead;
    }
    let schur = m.schur();
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

fn denom_lcm(p: &Poly) -> BigInt {
    p.coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.re.denom()).lcm(c.im.denom()))
}

/// Find all roots of `p` (degree >= 1).
pub fn roots(p: &Poly) -> RootSet {
    let mut rest = Poly::new(1, p.coeffs().to_vec());
    let mut out = RootSet::default();
    // squarefree part has simple roots, which the eigen solver resolves well
    let sqf = {
        let g = rest.gcd(&rest.deriv_x());
        rest.div_rem(&g).expect("nonzero").0
    };
    let scale = Rat::from_integer(denom_lcm(&sqf));
    let lead = sqf.lead() * &scale;
    let approx_roots = numeric_roots(&sqf.coeffs().iter().map(to_c64).collect::<Vec<_>>());
    let lead_f = to_c64(&lead);
    for r in approx_roots {
        // a Q(i) root times the (Gaussian integer) leading coefficient of the
        // integral polynomial is a Gaussian integer
        let g = r * lead_f;
        let cand = Complex::new(
            Rat::from_integer(BigInt::from(g.re.round() as i64)),
            Rat::from_integer(BigInt::from(g.im.round() as i64)),
        ) / &lead;
        if out.exact.iter().any(|(c, _)| *c == cand) {
            continue;
        }
        if !sqf.eval(&cand).is_zero() {
            continue;
        }
        let lin = Poly::new(1, vec![-cand.clone(), GaussRat::one()]);
        let mut mult = 0;
        loop {
            let (q, r) = rest.div_rem(&lin).expect("nonzero");
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        out.exact.push((cand, mult));
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.approx = cluster(numeric_roots(
            &rest.coeffs().iter().map(to_c64).collect::<Vec<_>>(),
        ));
    }
    out
}

fn cluster(rs: Vec<Complex<f64>>) -> Vec<(Complex<f64>, usize)> {
    let mut out: Vec<(Complex<f64>, usize)> = Vec::new();
    for r in rs {
        match out.iter_mut().find(|(c, _)| (*c - r).norm() < 1e-6 * (1.0 + r.norm())) {
            Some(entry) => {
                let n = entry.1 as f64;
                entry.0 = (entry.0 * n + r) / (n + 1.0);
                entry.1 += 1;
            }
            None => out.push((r, 1)),
        }
    }
    out
}

/// Float view of a Gaussian rational, for reporting.
pub fn approx_f64(c: &GaussRat) -> (f64, f64) {
    (c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}
