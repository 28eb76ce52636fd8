//! Formal Wronskians of log-free formal solutions.

use num_traits::{One, Zero};

use super::parts::ExpPart;
use super::series::PSeries;
use super::solution::FormalSol;
use crate::error::{Error, Result};
use crate::field::gauss::{from_rat, gmul, lcm_u32, GaussRat, Rat};

fn check_distinct(sols: &[FormalSol]) -> Result<()> {
    for (m, a) in sols.iter().enumerate() {
        if a.log_degree != 0 {
            return Err(Error::UnsupportedLog(a.log_degree + 1));
        }
        for b in &sols[..m] {
            if a.exp_part.same_as(&b.exp_part) {
                return Err(Error::Precondition(format!(
                    "exponential parts {} and {} differ by a constant",
                    a.exp_part.render(),
                    b.exp_part.render()
                )));
            }
        }
    }
    Ok(())
}

fn det(m: &[Vec<PSeries>], ram: u32) -> PSeries {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = PSeries::zero(ram);
    for (j, entry) in m[0].iter().enumerate() {
        let minor: Vec<Vec<PSeries>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = entry.mul(&det(&minor, ram));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// `W(y_1, ..., y_k)` for `y_j = exp(q_j) z^(gamma_j) U_j`, written again
/// as `exp(sum q_j) z^gamma U` with `U` starting at exponent 0.
pub fn formal_wronskian(sols: &[FormalSol]) -> Result<FormalSol> {
    if sols.is_empty() {
        return Err(Error::Precondition("empty list of solutions".into()));
    }
    check_distinct(sols)?;
    let ram = sols.iter().fold(1, |r, s| lcm_u32(lcm_u32(r, s.ram()), s.exp_part.ram()));
    let p = ram as i64;
    let k = sols.len();
    // column j: V_{j,0} = U_j, V_{j,i+1} = V_{j,i}' + (q_j' + gamma_j/z) V_{j,i}
    let mut cols: Vec<Vec<PSeries>> = Vec::with_capacity(k);
    for s in sols {
        let shift = s
            .exp_part
            .lift(ram)
            .derivative_series()
            .add(&PSeries::new(ram, -p, vec![s.gamma.clone()], None));
        let mut col = vec![s.lead_series().lift(ram)];
        for i in 1..k {
            let v = &col[i - 1];
            col.push(v.derive().add(&shift.mul(v)));
        }
        cols.push(col);
    }
    let rows: Vec<Vec<PSeries>> = (0..k).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let w = det(&rows, ram);
    let (top, _) = w
        .leading()
        .ok_or_else(|| Error::Internal("Wronskian vanishes to the available precision".into()))?;
    let known = w.known().map(|kn| kn - top);
    let normalized = PSeries::new(ram, 0, w.coeffs().to_vec(), known);
    let gamma = sols.iter().fold(GaussRat::zero(), |acc, s| acc + &s.gamma)
        + from_rat(Rat::new(top.into(), p.into()));
    let exp_part = sols.iter().fold(ExpPart::zero(), |acc, s| acc.add(&s.exp_part));
    Ok(FormalSol {
        exp_part,
        gamma,
        log_degree: 0,
        trunc: known.map(|kn| (-kn).max(0) as usize).unwrap_or(0),
        series: vec![normalized],
    })
}

/// Leading term predicted by the product formula: the exponent of `z`
/// beyond `exp(sum q_j)` and the coefficient
/// `prod r_j * prod_{m > n} lead(q_m' - q_n')`.
pub fn wronskian_leading(sols: &[FormalSol]) -> Result<(GaussRat, GaussRat)> {
    check_distinct(sols)?;
    let mut expo = GaussRat::zero();
    let mut coeff = GaussRat::one();
    for s in sols {
        let (e, r) = s
            .lead_series()
            .leading()
            .ok_or_else(|| Error::Precondition("zero series".into()))?;
        expo = expo + &s.gamma + from_rat(Rat::new(e.into(), (s.ram() as i64).into()));
        coeff = gmul(&coeff, &r);
    }
    for (m, a) in sols.iter().enumerate() {
        for b in &sols[..m] {
            let d = a.exp_part.sub(&b.exp_part).derivative_series();
            let e = d.lead_exponent().expect("nonconstant difference");
            let (_, c) = d.leading().expect("nonconstant difference");
            expo += from_rat(e);
            coeff = gmul(&coeff, &c);
        }
    }
    Ok((expo, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::gauss::{gr, grq};
    use crate::field::Poly;

    fn sol(part: &[i64], gamma: GaussRat, u: Vec<GaussRat>) -> FormalSol {
        let n = u.len() - 1;
        FormalSol {
            exp_part: ExpPart::new(Poly::from_ints(1, part)).unwrap(),
            gamma,
            log_degree: 0,
            series: vec![PSeries::new(1, 0, u, Some(-(n as i64)))],
            trunc: n,
        }
    }

    #[test]
    fn cosh_pair() {
        let a = sol(&[0, 1], gr(0), vec![gr(1), gr(0), gr(0)]);
        let b = sol(&[0, -1], gr(0), vec![gr(1), gr(0), gr(0)]);
        let w = formal_wronskian(&[a.clone(), b.clone()]).unwrap();
        assert!(w.exp_part.is_zero());
        assert_eq!(w.gamma, gr(0));
        assert_eq!(w.lead_series().coeff(0), gr(-2));
        assert_eq!(wronskian_leading(&[a.clone(), b.clone()]).unwrap(), (gr(0), gr(-2)));
        // odd permutation flips the predicted sign
        assert_eq!(wronskian_leading(&[b, a]).unwrap().1, gr(2));
    }

    #[test]
    fn matches_product_formula() {
        let a = sol(&[0, 1, 1], grq(1, 2), vec![gr(3), gr(1), gr(-2)]);
        let b = sol(&[0, 0, -1], gr(-1), vec![gr(1), gr(5), gr(1)]);
        let c = sol(&[0, 2], gr(0), vec![gr(-1), gr(0), gr(4)]);
        let all = [a, b, c];
        let w = formal_wronskian(&all).unwrap();
        let (e, lead) = wronskian_leading(&all).unwrap();
        assert_eq!(w.gamma, e);
        // W is normalized to start at exponent 0 with the leading coefficient kept
        assert_eq!(w.lead_series().coeff(0), lead);
    }

    #[test]
    fn equal_parts_rejected() {
        let a = sol(&[0, 1], gr(0), vec![gr(1)]);
        assert!(matches!(formal_wronskian(&[a.clone(), a]), Err(Error::Precondition(_))));
    }
}
