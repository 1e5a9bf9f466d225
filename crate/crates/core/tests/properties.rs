use motivic::cocycles::{carry_cocycle_mod, Cocycle2, FinAbGroup};
use motivic::dieudonne::{build_dieudonne, padic_log, second_kind_integral};
use motivic::extension_classes::{baer_sum_class, eta_class, extends_over_r, kato_pair, push_theorem_check, KummerClass};
use motivic::local_field::{KElement, PiMonomial, Poly};
use motivic::log_model::{build_model_algebra, generic_fibre_check, integrality_report};
use motivic::motive::{compute_monodromy, plus_minus_motives, raynaud_decompose, MonodromyMatrix, Motive};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-60i64..=60, 1i64..=60)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn arb_monomial() -> impl Strategy<Value = PiMonomial> {
    (arb_rational(), -15i64..=15).prop_map(|(c, k)| PiMonomial::new(c, k).unwrap())
}

fn arb_entries(d: usize, r: usize) -> impl Strategy<Value = Vec<Vec<PiMonomial>>> {
    prop::collection::vec(prop::collection::vec(arb_monomial(), r), d)
}

fn arb_motive() -> impl Strategy<Value = Motive> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(d, r)| arb_entries(d, r)).prop_map(|e| Motive::new(e).unwrap())
}

fn arb_motive_pair() -> impl Strategy<Value = (Motive, Motive)> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(d, r)| (arb_entries(d, r), arb_entries(d, r)))
        .prop_map(|(a, b)| (Motive::new(a).unwrap(), Motive::new(b).unwrap()))
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-9i64..=9, 1..5)
        .prop_map(|c| Poly::new(c.into_iter().map(|x| BigRational::from_integer(x.into())).collect()))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn arb_element() -> impl Strategy<Value = KElement> {
    (arb_poly(), arb_poly(), -4i64..=4)
        .prop_map(|(n, d, k)| KElement::new(n, d).unwrap().mul(&KElement::pi_pow(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn valuation_is_additive(x in arb_element(), y in arb_element()) {
        let v = x.mul(&y).valuation().unwrap();
        prop_assert_eq!(v, x.valuation().unwrap() + y.valuation().unwrap());
    }

    #[test]
    fn valuation_of_sum_is_at_least_the_minimum(x in arb_element(), y in arb_element()) {
        let s = x.add(&y);
        if !s.is_zero() {
            let lower = x.valuation().unwrap().min(y.valuation().unwrap());
            prop_assert!(s.valuation().unwrap() >= lower);
        }
    }

    #[test]
    fn power_class_is_idempotent_and_multiplicative(x in arb_monomial(), y in arb_monomial(), n in 1u64..=8) {
        let cx = x.nth_power_class(n).unwrap();
        prop_assert_eq!(cx.nth_power_class(n).unwrap(), cx.clone());
        let cy = y.nth_power_class(n).unwrap();
        prop_assert_eq!(x.mul(&y).nth_power_class(n).unwrap(), cx.mul(&cy).nth_power_class(n).unwrap());
        // x and its class differ by an n-th power
        prop_assert!(x.mul(&cx.inv()).is_nth_power(n).unwrap());
        prop_assert!(x.pow(n as i64).nth_power_class(n).unwrap().is_one());
    }

    #[test]
    fn raynaud_invariants(m in arb_motive()) {
        let dec = raynaud_decompose(&m);
        prop_assert_eq!(dec.u1.mul(&dec.u2).unwrap(), m.clone());
        prop_assert!(dec.u1.has_good_reduction());
        prop_assert_eq!(compute_monodromy(&dec.u2), compute_monodromy(&m));
        let (plus, minus) = plus_minus_motives(&m).unwrap();
        prop_assert_eq!(plus.mul(&minus).unwrap(), dec.u2);
    }

    #[test]
    fn eta_is_a_homomorphism((u, v) in arb_motive_pair(), n in 1u64..=8) {
        let lhs = eta_class(&u.mul(&v).unwrap(), n).unwrap();
        let rhs = baer_sum_class(&eta_class(&u, n).unwrap(), &eta_class(&v, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let inverse = baer_sum_class(&eta_class(&u, n).unwrap(), &eta_class(&u.inv(), n).unwrap()).unwrap();
        prop_assert!(inverse.is_trivial());
    }

    #[test]
    fn good_reduction_criterion(m in arb_motive(), n in 1u64..=8) {
        let ext = extends_over_r(&m, n).unwrap();
        let pair = kato_pair(&m, n).unwrap();
        let u2_class = eta_class(&raynaud_decompose(&m).u2, n).unwrap();
        prop_assert_eq!(ext, pair.n_op.is_zero());
        prop_assert_eq!(ext, u2_class.is_trivial());
    }

    #[test]
    fn push_and_roundtrip(m in arb_motive(), n in 1u64..=8) {
        prop_assert!(push_theorem_check(&m, n).unwrap());
        let pair = kato_pair(&m, n).unwrap();
        prop_assert!(pair.classical.is_unit_class());
        prop_assert_eq!(pair.reconstruct().unwrap(), eta_class(&m, n).unwrap());
    }

    #[test]
    fn decomposition_consistency(m in arb_motive(), n in 1u64..=8) {
        let (plus, minus) = plus_minus_motives(&m).unwrap();
        let u1 = raynaud_decompose(&m).u1;
        let sum = [&u1, &plus, &minus]
            .iter()
            .map(|x| eta_class(x, n).unwrap())
            .reduce(|a, b| baer_sum_class(&a, &b).unwrap())
            .unwrap();
        prop_assert_eq!(sum, eta_class(&m, n).unwrap());
    }

    #[test]
    fn model_algebra_is_integral_and_correct(m in arb_motive(), n in 1u64..=5) {
        let alg = build_model_algebra(&m, n).unwrap();
        prop_assert!(integrality_report(&alg).integral);
        prop_assert!(generic_fibre_check(&alg, &m).unwrap());
        let zero = vec![0; m.r()];
        for i in 0..m.d() {
            prop_assert!(alg.value(i, &zero).is_one());
        }
    }

    #[test]
    fn model_algebra_is_multiplicative((u, v) in arb_motive_pair(), n in 1u64..=4) {
        let prod = build_model_algebra(&u.mul(&v).unwrap(), n).unwrap();
        let (a, b) = (build_model_algebra(&u, n).unwrap(), build_model_algebra(&v, n).unwrap());
        for i in 0..u.d() {
            for (k, pt) in prod.points().iter().enumerate() {
                let expected = a.value(i, pt).mul(b.value(i, pt));
                prop_assert_eq!(
                    prod.table(i)[k].nth_power_class(n).unwrap(),
                    expected.nth_power_class(n).unwrap()
                );
            }
        }
    }

    #[test]
    fn divisible_monodromy_gives_classical_model(m in arb_motive(), n in 1u64..=5) {
        let alg = build_model_algebra(&m, n).unwrap();
        if extends_over_r(&m, n).unwrap() {
            for i in 0..m.d() {
                for v in alg.table(i) {
                    prop_assert_eq!(v.valuation() % n as i64, 0);
                }
            }
        }
    }

    #[test]
    fn dieudonne_identities(
        rows in (1usize..=3, 1usize..=3).prop_flat_map(|(d, r)| prop::collection::vec(prop::collection::vec(-50i64..=50, r), d)),
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
        m in 1u32..=4,
    ) {
        let dd = build_dieudonne(&MonodromyMatrix::new(rows).unwrap(), p, m).unwrap();
        prop_assert!(dd.verdicts().all());
    }

    #[test]
    fn padic_log_is_additive(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        m in 1u32..=5,
        s in 0u64..200,
        t in 0u64..200,
    ) {
        let step = if p == 2 { 4 } else { p };
        let q = p.pow(m);
        let (u, v) = (1 + step * s, 1 + step * t);
        let lu = padic_log(u, p, m).unwrap();
        let lv = padic_log(v, p, m).unwrap();
        prop_assert_eq!(padic_log(u * v, p, m).unwrap(), (lu + lv) % q);
    }

    #[test]
    fn second_kind_coboundary(
        p in prop::sample::select(vec![2u64, 3, 5]),
        m in 1u32..=2,
        raw in prop::collection::vec(0u64..50, 1..=2),
    ) {
        let step = if p == 2 { 4 } else { p };
        let units: Vec<u64> = raw.iter().map(|s| 1 + step * s).collect();
        let h = second_kind_integral(&units, p, m).unwrap();
        prop_assert_eq!(h.coboundary_failure().unwrap(), None);
    }

    #[test]
    fn kummer_class_json_roundtrip(m in arb_motive(), n in 1u64..=8) {
        let c = eta_class(&m, n).unwrap();
        let back: KummerClass = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(back, c);
        let mb: Motive = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(mb, m);
    }

    #[test]
    fn baer_sum_of_coboundary_keeps_the_class(n in 2u64..=6, k in 2u64..=6, h in prop::collection::vec(0i64..6, 6)) {
        let gamma = carry_cocycle_mod(n, k).unwrap();
        let fiber = FinAbGroup::cyclic(k).unwrap();
        let base = FinAbGroup::cyclic(n).unwrap();
        let hvals: Vec<Vec<i64>> = (0..n as usize).map(|i| if i == 0 { vec![0] } else { fiber.reduce(&[h[i % h.len()]]) }).collect();
        let cob = Cocycle2::coboundary(base, fiber, &hvals).unwrap();
        let moved = gamma.baer_sum(&cob).unwrap();
        prop_assert!(moved.is_cocycle());
        prop_assert!(moved.difference(&gamma).unwrap().is_coboundary().unwrap().is_some());
        prop_assert_eq!(moved.extension_group().unwrap().group.order(), gamma.extension_group().unwrap().group.order());
    }
}
