//! Algebraic invariants on seeded random inputs.

use lindiff::field::gauss::gr;
use lindiff::field::{ray_compare, RayOrder};
use lindiff::formal::exponential_parts;
use lindiff::linop::{change_variables, gauge_normalize, RatOp};
use lindiff::sample::{self, SampleRng};
use lindiff::{LinOp, Poly, RatFun, Tower, TowerBuilder, TowerElem};
use proptest::prelude::*;
use rand::Rng;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

fn nonzero_ratfun(rng: &mut SampleRng) -> RatFun {
    loop {
        let r = sample::ratfun(rng, 2, 4);
        if !r.is_zero() {
            return r;
        }
    }
}

/// `t = e^z`, `H' = EXP(z)` and `H = PRIM(H')`.
fn witness_tower() -> (Tower, [TowerElem; 3]) {
    let mut b = TowerBuilder::new();
    let t = b.exp("t", TowerElem::one()).unwrap();
    let z = b.tower().z();
    let hp = b.exp("Hp", z).unwrap();
    let h = b.prim("H", hp.clone()).unwrap();
    (b.build(), [t, hp, h])
}

/// A small polynomial in the generators with polynomial coefficients in `z`.
fn tower_elem(rng: &mut SampleRng, tw: &Tower, gens: &[TowerElem; 3]) -> TowerElem {
    let mut acc = tw.from_ratfun(&RatFun::from_poly(sample::poly_upto(rng, 1, 1, 3))).unwrap();
    for g in gens {
        let c = tw.from_ratfun(&RatFun::from_poly(sample::poly_upto(rng, 1, 1, 3))).unwrap();
        let e: i64 = rng.gen_range(0..=1);
        acc = acc + c * g.pow(e).unwrap();
    }
    acc
}

fn op_in(tw: &Tower, l: &RatOp) -> LinOp {
    l.to_linop(tw).unwrap()
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn ratfun_field_laws(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (a, b, c) = (sample::ratfun(&mut rng, 3, 5), sample::ratfun(&mut rng, 3, 5), sample::ratfun(&mut rng, 3, 5));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).derive(), &(&a.derive() * &b) + &(&a * &b.derive()));
        let (x, y) = (nonzero_ratfun(&mut rng), nonzero_ratfun(&mut rng));
        prop_assert_eq!((&x * &y).deg_infty().unwrap(), x.deg_infty().unwrap() + y.deg_infty().unwrap());
        prop_assert_eq!(&(&x / &y) * &y, x);
    }

    #[test]
    fn ramified_lifting_is_transparent(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let p = sample::poly(&mut rng, 2, 3, 4);
        let q = sample::poly(&mut rng, 3, 2, 4);
        let r = RatFun::new(p.clone(), q.clone()).unwrap();
        // lifting to a common index keeps the value; derivation commutes with it
        prop_assert_eq!(r.lift(12).reduce_ram(), r.reduce_ram());
        prop_assert_eq!(r.lift(12).derive().reduce_ram(), r.derive().reduce_ram());
    }

    #[test]
    fn ray_order_is_a_preorder(seed in any::<u64>(), theta in 0.0f64..std::f64::consts::TAU) {
        let mut rng = sample::rng(seed);
        let ps: Vec<Poly> = (0..3).map(|_| sample::poly_upto(&mut rng, 1, 2, 3)).collect();
        let cmp = |a: &Poly, b: &Poly| ray_compare(a, b, theta);
        let (Ok(ab), Ok(ba), Ok(bc), Ok(ac)) = (cmp(&ps[0], &ps[1]), cmp(&ps[1], &ps[0]), cmp(&ps[1], &ps[2]), cmp(&ps[0], &ps[2])) else {
            // a near tie: the caller must perturb theta
            return Ok(());
        };
        prop_assert_eq!(ab, ba.reverse());
        if ab == bc && ab != RayOrder::Sim {
            prop_assert_eq!(ac, ab);
        }
        if ab == RayOrder::Sim {
            prop_assert_eq!(ac, bc);
        }
    }

    #[test]
    fn tower_derivation(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (tw, gens) = witness_tower();
        let a = tower_elem(&mut rng, &tw, &gens);
        let b = tower_elem(&mut rng, &tw, &gens);
        prop_assert!(tw.is_zero(&(tw.derive(&(&a + &b)) - tw.derive(&a) - tw.derive(&b))));
        prop_assert!(tw.is_zero(&(tw.derive(&(&a * &b)) - tw.derive(&a) * &b - &a * tw.derive(&b))));
        // quotient rule against a generator monomial
        let g = &gens[rng.gen_range(0..3)];
        let q = a.checked_div(g).unwrap();
        let quotient_rule = (tw.derive(&a) * g - &a * tw.derive(g)).checked_div(&(g * g)).unwrap();
        prop_assert!(tw.is_zero(&(tw.derive(&q) - quotient_rule)));
    }

    #[test]
    fn logderiv_powers_match_direct_derivatives(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        // f = exp(u) for a random polynomial u, so w = u'
        let u = RatFun::from_poly(sample::poly(&mut rng, 1, 2, 3));
        let mut b = TowerBuilder::new();
        let w = b.tower().from_ratfun(&u.derive()).unwrap();
        let f = b.exp("f", w.clone()).unwrap();
        let tw = b.build();
        let rs = tw.logderiv_powers(&w, 5);
        for (j, r) in rs.iter().enumerate() {
            let direct = tw.derive_n(&f, j + 1).checked_div(&f).unwrap();
            prop_assert!(tw.is_zero(&(r - direct)), "r_{}", j + 1);
        }
    }
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let tw = Tower::rational(1);
        let draw = |rng: &mut SampleRng| {
            let o = rng.gen_range(0..=2);
            op_in(&tw, &sample::rat_op(rng, o, 2, 3))
        };
        let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let left = a.compose(&tw, &b).compose(&tw, &c);
        let right = a.compose(&tw, &b.compose(&tw, &c));
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn right_division_reconstructs(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let tw = Tower::rational(1);
        let on = rng.gen_range(0..=4);
        let op = rng.gen_range(1..=4);
        let n = op_in(&tw, &sample::rat_op(&mut rng, on, 3, 3));
        let p = op_in(&tw, &sample::rat_op(&mut rng, op, 3, 3));
        let (q, r) = n.right_divide(&tw, &p).unwrap();
        prop_assert!(r.is_zero() || r.order() < p.order());
        prop_assert!(q.compose(&tw, &p).add(&r).sub(&n).is_zero());
    }

    #[test]
    fn gcrd_keeps_a_common_right_factor(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let tw = Tower::rational(1);
        let p = op_in(&tw, &sample::poly_op(&mut rng, 1, 1, 3));
        let oa = rng.gen_range(1..=2);
        let a = op_in(&tw, &sample::poly_op(&mut rng, oa, 1, 3));
        let ob = rng.gen_range(1..=2);
        let b = op_in(&tw, &sample::poly_op(&mut rng, ob, 1, 3));
        let g = lindiff::linop::gcrd(&tw, &[a.compose(&tw, &p), b.compose(&tw, &p)]).unwrap();
        prop_assert!(g.is_monic());
        let (_, r) = g.right_divide(&tw, &p).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn apply_logderiv_of_a_composition(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (tw, gens) = witness_tower();
        // f = H' = e^(z^2/2), so f'/f = z
        let f = gens[1].clone();
        let w = tw.z();
        let draw = |rng: &mut SampleRng| {
            let o = rng.gen_range(1..=2);
            op_in(&tw, &sample::poly_op(rng, o, 1, 3))
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let lhs = a.compose(&tw, &b).apply_logderiv(&tw, &w);
        let rhs = a.apply(&tw, &b.apply(&tw, &f)).checked_div(&f).unwrap();
        prop_assert!(tw.is_zero(&(lhs - rhs)));
    }

    #[test]
    fn gauge_conjugation(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let (tw, gens) = witness_tower();
        let k = rng.gen_range(2..=3);
        let l = op_in(&tw, &sample::poly_op(&mut rng, k, 1, 3)).monic().unwrap();
        let (lred, x) = gauge_normalize(&tw, &l).unwrap();
        prop_assert!(lred.coeff(k - 1).is_zero());
        let w = tower_elem(&mut rng, &tw, &gens);
        let lhs = l.apply_logderiv(&tw, &(&x + &w));
        prop_assert!(tw.is_zero(&(lhs - lred.apply_logderiv(&tw, &w))));
    }

    #[test]
    fn change_of_variables_on_monomials(seed in any::<u64>(), n in 2usize..=3, m in 0usize..=5) {
        let mut rng = sample::rng(seed);
        let k = rng.gen_range(1..=3);
        let l = sample::rat_op(&mut rng, k, 1, 3);
        let lt = change_variables(&l, n).unwrap();
        let tw = Tower::rational(1);
        // L~[z^(mn)] against (n z^(n-1))^k (L[z^m])(z^n)
        let zm = tw.z().pow(m as i64).unwrap();
        let lf = tw.to_ratfun(&op_in(&tw, &l).apply(&tw, &zm)).unwrap();
        let weight = RatFun::z(1).pow(n as i64 - 1).unwrap().scale(&gr(n as i64)).pow(k as i64).unwrap();
        let expect = &weight * &lf.compose_power(n);
        let got = tw.to_ratfun(&op_in(&tw, &lt).apply(&tw, &tw.z().pow((m * n) as i64).unwrap())).unwrap();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn exponential_part_multiplicities(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let k = rng.gen_range(1..=3);
        let l = sample::poly_op(&mut rng, k, 2, 3);
        let parts = exponential_parts(&l).unwrap();
        prop_assert_eq!(parts.total_multiplicity(), k);
        for (p, _) in &parts.parts {
            prop_assert!(p.poly().constant_term() == gr(0));
        }
    }
}
