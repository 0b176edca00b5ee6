//! Property tests: ring axioms of the coefficient field carrier, the
//! parse/format round trip, tensor associativity, strategy independence and
//! linearity of normal forms, and the bicharacter laws of the twist phases.

use proptest::prelude::*;

use qpb_core::coeff::{rat, ratio, Mono, Rat, Scalar};
use qpb_core::freealg::{parse, Letter, NcPoly, TensorPoly, Word};
use qpb_core::qgroups::{build_mn, build_sln};
use qpb_core::rewrite::Strategy as ReductionStrategy;
use qpb_core::twist::{eval_gamma, CocycleSpec, WeightVector};

fn arb_mono() -> impl Strategy<Value = Mono> {
    (-4i64..=4, -3i64..=3, -3i64..=3).prop_map(|(q, g12, g13)| {
        Mono::q_pow(q).mul(&Mono::phase(1, 2, g12)).mul(&Mono::phase(1, 3, g13))
    })
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    proptest::collection::vec((arb_mono(), -6i64..=6, 1i64..=3), 0..4).prop_map(|terms| {
        let mut s = Scalar::zero();
        for (m, num, den) in terms {
            s = &s + &Scalar::monomial(m, ratio(num, den));
        }
        s
    })
}

fn arb_word(n: u8, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((1..=n, 1..=n), 0..=max_len)
        .prop_map(|ls| Word(ls.into_iter().map(|(i, j)| Letter::A(i, j)).collect()))
}

fn arb_poly(n: u8) -> impl Strategy<Value = NcPoly> {
    proptest::collection::vec((arb_word(n, 3), arb_scalar()), 0..4).prop_map(|terms| {
        let mut p = NcPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn specialize_is_ring_hom(a in arb_scalar(), b in arb_scalar(), qv in 1i64..=5) {
        let q = rat(qv);
        let lhs = (&a * &b).specialize(&q, true).unwrap();
        let rhs = &a.specialize(&q, true).unwrap() * &b.specialize(&q, true).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = (&a + &b).specialize(&q, false).unwrap();
        let rhs = &a.specialize(&q, false).unwrap() + &b.specialize(&q, false).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parse_format_roundtrip(p in arb_poly(3)) {
        let ctx = build_mn(3).unwrap().pres.context();
        let printed = p.to_string();
        if p.is_zero() {
            prop_assert_eq!(printed, "0");
        } else {
            let again = parse(&printed, &ctx).unwrap();
            prop_assert_eq!(p, again);
        }
    }

    #[test]
    fn tensor_mul_associative_unital(
        a in arb_word(2, 2), b in arb_word(2, 2), c in arb_word(2, 2),
        s in arb_scalar(), t in arb_scalar()
    ) {
        let x = TensorPoly::term(vec![a.clone(), b.clone()], &s + &Scalar::one());
        let y = TensorPoly::term(vec![b.clone(), c.clone()], &t + &Scalar::one());
        let z = TensorPoly::term(vec![c, a], Scalar::one());
        let lhs = x.tensor_mul(&y).unwrap().tensor_mul(&z).unwrap();
        let rhs = x.tensor_mul(&y.tensor_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let unit = TensorPoly::one(2);
        prop_assert_eq!(x.tensor_mul(&unit).unwrap(), x);
    }

    #[test]
    fn normal_form_strategy_independent(w in arb_word(2, 5)) {
        let sl2 = build_sln(2).unwrap();
        let p = NcPoly::word(w);
        let a = sl2.pres.normal_form_with(&p, ReductionStrategy::LeadingLeftmost).unwrap();
        let b = sl2.pres.normal_form_with(&p, ReductionStrategy::TrailingRightmost).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normal_form_linear(p in arb_poly(2), r in arb_poly(2), s in arb_scalar()) {
        let m2 = build_mn(2).unwrap();
        let combo = p.scale(&s).add(&r);
        let lhs = m2.pres.normal_form(&combo).unwrap();
        let rhs = m2.pres.normal_form(&p).unwrap().scale(&s)
            .add(&m2.pres.normal_form(&r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn classical_limit_commutes(u in arb_word(2, 3), v in arb_word(2, 3)) {
        let m2 = build_mn(2).unwrap();
        let classical = m2.pres.specialized(&rat(1), true).unwrap();
        let commutator = NcPoly::word(u.concat(&v)).sub(&NcPoly::word(v.concat(&u)));
        prop_assert!(classical.normal_form(&commutator).unwrap().is_zero());
    }

    #[test]
    fn gamma_is_a_bicharacter(
        u in proptest::collection::vec(-3i64..=3, 3),
        v in proptest::collection::vec(-3i64..=3, 3),
        w in proptest::collection::vec(-3i64..=3, 3)
    ) {
        let c = CocycleSpec::generic(3);
        let (u, v, w) = (WeightVector(u), WeightVector(v), WeightVector(w));
        prop_assert_eq!(
            eval_gamma(&c, &u.add(&v), &w),
            &eval_gamma(&c, &u, &w) * &eval_gamma(&c, &v, &w)
        );
        prop_assert_eq!(
            eval_gamma(&c, &u, &v.add(&w)),
            &eval_gamma(&c, &u, &v) * &eval_gamma(&c, &u, &w)
        );
        // antisymmetry: γ(u,v)γ(v,u) = 1
        prop_assert!((&eval_gamma(&c, &u, &v) * &eval_gamma(&c, &v, &u)).is_one());
    }
}

#[test]
fn hom_grading_well_defined() {
    // the formal Z-degree of freealg words is constant across reduction in
    // the graded carriers (M_n localizations)
    let _ = Rat::from_integer(1.into());
    let m2 = build_mn(2).unwrap();
    let loc = qpb_core::localization::localize(&m2, &[1]).unwrap();
    for w in loc.pres.normal_words(3) {
        let deg = qpb_core::localization::z_degree(&w);
        let nf = loc.pres.normal_form(&NcPoly::word(w.clone())).unwrap();
        for word in nf.words() {
            assert_eq!(qpb_core::localization::z_degree(word), deg);
        }
    }
}
