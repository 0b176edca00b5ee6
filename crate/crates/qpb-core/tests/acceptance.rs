//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see them).  Every tolerance here is exact —
//! all checks are symbolic identities that must reduce to zero.

use qpb_core::bundle::{
    build_cleaving, build_sheaf, canonical_map_section, crossed_cocycle, factorization_check,
    global_sections_pullback, verify_cleaving, verify_sheaf, verify_trivialization,
};
use qpb_core::coeff::{rat, Scalar};
use qpb_core::freealg::{parse, Letter, NcPoly, TensorPoly, Word};
use qpb_core::localization::{coinvariants, localize};
use qpb_core::qgroups::{
    self, build_mn, build_parabolic, build_projective, build_sln, build_torus, default_cap,
    det_q, det_q_col, grassmannian_check, hopf_axiom_report, laplace_first_column,
};
use qpb_core::report::Report;
use qpb_core::twist::{
    build_multiparametric, verify_projective_relations, verify_twist_theorems, CocycleSpec,
    TwistMode,
};
use qpb_core::util::SplitMix64;

fn conclude(id: &str, pass: bool, detail: String) {
    println!("{id}: {}", if pass { "pass" } else { "FAIL" });
    assert!(pass, "{id} failed: {detail}");
}

fn conclude_report(id: &str, rep: &Report) {
    let detail = rep
        .failures()
        .next()
        .map(|c| format!("{}: {}", c.id, c.witness.clone().unwrap_or_default()))
        .unwrap_or_default();
    conclude(id, rep.pass(), detail);
}

/// Criterion 1: local confluence of every shipped base presentation and the
/// multiparametric variants, at the stated degree bounds.
#[test]
fn criterion_01_confluence() {
    let mut rep = Report::new();
    let mut check = |name: &str, pres: &qpb_core::rewrite::Presentation, d: usize| {
        let r = pres.check_confluence(d).unwrap();
        rep.push(qpb_core::report::Check::of(
            format!("confluence/{name}/D{d}"),
            format!("{name} locally confluent up to degree {d}"),
            r.pass(),
            r.unresolved
                .first()
                .map(|a| format!("{}", a.word))
                .unwrap_or_default(),
        ));
    };
    for n in [2u8, 3, 4] {
        check("mq", &build_mn(n).unwrap().pres, default_cap(n));
    }
    for n in [2u8, 3] {
        check("slq", &build_sln(n).unwrap().pres, default_cap(n));
        check("pq", &build_parabolic(n).unwrap().pres, default_cap(n));
        let (sl, pq, proj) = build_multiparametric(n).unwrap();
        check("slq-multiparametric", &sl.pres, default_cap(n).min(sl.pres.degree_cap));
        check("pq-multiparametric", &pq.pres, default_cap(n).min(pq.pres.degree_cap));
        check("projq-multiparametric", &proj.pres, default_cap(n));
    }
    conclude_report("criterion-01 confluence", &rep);
}

/// Criterion 2: Hopf axioms for SL, P and the torus on all generators plus
/// sampled degree-<=3 words.
#[test]
fn criterion_02_hopf_axioms() {
    let mut rep = Report::new();
    let mut rng = SplitMix64::new(0);
    for n in [2u8, 3] {
        for alg in [build_sln(n).unwrap(), build_parabolic(n).unwrap(), build_torus(n).unwrap()]
        {
            let words = alg.pres.normal_words(3);
            let sample: Vec<Word> = (0..6).map(|_| rng.pick(&words).clone()).collect();
            rep.extend(hopf_axiom_report(&alg, &sample).unwrap());
        }
    }
    conclude_report("criterion-02 hopf-axioms", &rep);
}

/// Criterion 3: the determinant suite at n = 2, 3.
#[test]
fn criterion_03_determinant() {
    let mut rep = Report::new();
    for n in [2u8, 3] {
        let mn = build_mn(n).unwrap();
        let det = det_q(n);
        let mut central = true;
        for &l in mn.pres.letters() {
            let g = NcPoly::letter(l);
            if !mn.pres.equal_mod(&det.mul(&g), &g.mul(&det)).unwrap() {
                central = false;
            }
        }
        rep.push(qpb_core::report::Check::of(
            format!("det/central/n{n}"),
            "det_q is central in O_q(M_n)",
            central,
            "",
        ));
        let dd = mn.coproduct(&det).unwrap();
        let dnf = mn.pres.normal_form(&det).unwrap();
        rep.push(qpb_core::report::Check::of(
            format!("det/grouplike/n{n}"),
            "Δ(det_q) = det_q ⊗ det_q",
            dd == TensorPoly::of(&[&dnf, &dnf]),
            "",
        ));
        rep.push(qpb_core::report::Check::of(
            format!("det/row-col/n{n}"),
            "row and column permutation sums agree",
            mn.pres.equal_mod(&det, &det_q_col(n)).unwrap(),
            "",
        ));
        rep.push(qpb_core::report::Check::of(
            format!("det/laplace/n{n}"),
            "first-column quantum Laplace expansion equals det_q",
            mn.pres.equal_mod(&det, &laplace_first_column(n).unwrap()).unwrap(),
            "",
        ));
    }
    conclude_report("criterion-03 determinant", &rep);
}

/// Criterion 4: the factorization J_1(det_q(p)) = det_q(a), full expansion.
#[test]
fn criterion_04_factorization() {
    let mut rep = Report::new();
    rep.extend(factorization_check(2, 1).unwrap());
    rep.extend(factorization_check(2, 2).unwrap());
    rep.extend(factorization_check(3, 1).unwrap());
    conclude_report("criterion-04 factorization", &rep);
}

/// Criterion 5: the cleaving suite — relation preservation, comodule
/// property, convolution invertibility, and the trivialization at D = 3.
#[test]
fn criterion_05_cleaving() {
    let mut rep = Report::new();
    for (n, ks) in [(2u8, vec![1u8, 2]), (3, vec![1, 2, 3])] {
        for k in ks {
            let cl = build_cleaving(n, k).unwrap();
            rep.extend(verify_cleaving(&cl, 0).unwrap());
            rep.extend(verify_trivialization(&cl, 3).unwrap());
            rep.extend(canonical_map_section(&cl, 2).unwrap());
        }
    }
    conclude_report("criterion-05 cleaving", &rep);
}

/// Criterion 6: coinvariants are exactly the monomials in d_j d_i^-1.
#[test]
fn criterion_06_coinvariants() {
    let mut rep = Report::new();
    for (n, len) in [(2u8, 4usize), (3, 3)] {
        let sl = build_sln(n).unwrap();
        for i in 1..=n {
            let loc = localize(&sl, &[i]).unwrap();
            let coin = coinvariants(&loc, 0, len).unwrap();
            println!(
                "  coinvariants n={n} chart {i}: window {} kernel {} target {}",
                coin.window_dim, coin.kernel_dim, coin.target_dim
            );
            rep.extend(coin.report);
        }
    }
    conclude_report("criterion-06 coinvariants", &rep);
}

/// Criterion 7: the sheaf suite — functoriality, comodule morphisms, order
/// independence, and the n = 2 global-sections pullback at D = 3.
#[test]
fn criterion_07_sheaf() {
    let mut rep = Report::new();
    rep.extend(verify_sheaf(&build_sheaf(2).unwrap(), 4).unwrap());
    rep.extend(verify_sheaf(&build_sheaf(3).unwrap(), 3).unwrap());
    rep.extend(global_sections_pullback(3).unwrap());
    conclude_report("criterion-07 sheaf", &rep);
}

/// Criterion 8: Grassmannian semi-coinvariance.
#[test]
fn criterion_08_grassmannian() {
    let mut rep = Report::new();
    for (n, r) in [(2u8, 1u8), (3, 1), (3, 2), (4, 2)] {
        rep.extend(grassmannian_check(n, r).unwrap());
    }
    conclude_report("criterion-08 grassmannian", &rep);
}

/// Criterion 9: the twist suite.
#[test]
fn criterion_09_twist() {
    let mut rep = Report::new();
    for n in [2u8, 3, 4] {
        rep.extend(verify_projective_relations(n).unwrap());
    }
    rep.extend(verify_twist_theorems(2, 3, 0).unwrap());
    rep.extend(verify_twist_theorems(3, 2, 0).unwrap());
    conclude_report("criterion-09 twist", &rep);
}

/// Criterion 10: the classical limit q = 1, g = 1.
#[test]
fn criterion_10_classical_limit() {
    let mut rep = Report::new();
    let mut rng = SplitMix64::new(0);
    for n in [2u8, 3] {
        for alg in [
            build_mn(n).unwrap(),
            build_sln(n).unwrap(),
            build_parabolic(n).unwrap(),
            build_torus(n).unwrap(),
            build_projective(n).unwrap(),
        ] {
            let classical = alg.pres.specialized(&rat(1), true).unwrap();
            let words = alg.pres.normal_words(2);
            let mut ok = true;
            let mut witness = String::new();
            for _ in 0..10 {
                let u = rng.pick(&words).clone();
                let v = rng.pick(&words).clone();
                let comm = NcPoly::word(u.concat(&v)).sub(&NcPoly::word(v.concat(&u)));
                let nf = classical.normal_form(&comm).unwrap();
                if !nf.is_zero() {
                    ok = false;
                    witness = format!("[{u}, {v}] = {nf}");
                    break;
                }
            }
            rep.push(qpb_core::report::Check::of(
                format!("classical/commutative/{}", alg.pres.name),
                "the q = 1, g = 1 specialization is commutative",
                ok,
                witness,
            ));
        }
    }

    // Example coaction values at n = 2: δb = b ⊗ t^-1 + a ⊗ p
    let sl = build_sln(2).unwrap();
    let pq = build_parabolic(2).unwrap();
    let ctx = sl.pres.context();
    let db = sl.coaction_pi(&pq.pres, &parse("a[1,2]", &ctx).unwrap()).unwrap();
    let mut expected = TensorPoly::zero(2);
    expected.add_term(
        vec![Word::letter(Letter::A(1, 2)), Word::letter(Letter::InvP11)],
        Scalar::one(),
    );
    expected.add_term(
        vec![Word::letter(Letter::A(1, 1)), Word::letter(Letter::P(1, 2))],
        Scalar::one(),
    );
    rep.push(qpb_core::report::Check::of(
        "classical/coaction-b",
        "δ(b) = b ⊗ t^-1 + a ⊗ p, specializing to the classical coaction",
        db == expected,
        format!("{db}"),
    ));
    let da = sl.coaction_pi(&pq.pres, &parse("a[1,1]", &ctx).unwrap()).unwrap();
    let expected_a = TensorPoly::term(
        vec![Word::letter(Letter::A(1, 1)), Word::letter(Letter::P(1, 1))],
        Scalar::one(),
    );
    rep.push(qpb_core::report::Check::of(
        "classical/coaction-a",
        "δ(a) = a ⊗ t",
        da == expected_a,
        format!("{da}"),
    ));
    conclude_report("criterion-10 classical-limit", &rep);
}

/// Criterion 11: negative controls — a corrupted cleaving image and a
/// corrupted Manin coefficient must flip their suites to FAIL with nonzero
/// witnesses.
#[test]
fn criterion_11_negative_controls() {
    // corrupt one cleaving image
    let mut cl = build_cleaving(3, 2).unwrap();
    cl.corrupt_image(Letter::P(2, 2), &Scalar::neg_q_pow(-1)).unwrap();
    let rep = verify_cleaving(&cl, 0).unwrap();
    let flipped = !rep.pass();
    let witness_nonzero = rep
        .failures()
        .next()
        .and_then(|c| c.witness.clone())
        .is_some_and(|w| !w.is_empty() && w != "0");
    conclude(
        "criterion-11a corrupted-cleaving-image",
        flipped && witness_nonzero,
        "corruption not detected".into(),
    );

    // corrupt one Manin coefficient in O_q(SL_2): ca -> q ac becomes q^2 ac
    let sl2 = build_sln(2).unwrap();
    let idx = sl2
        .pres
        .rules()
        .iter()
        .position(|r| r.lhs == Word::from_letters(&[Letter::A(2, 1), Letter::A(1, 1)]))
        .unwrap();
    let bad = sl2.pres.with_scaled_rule(idx, &Scalar::q_pow(1)).unwrap();
    let r = bad.check_confluence(6).unwrap();
    let flipped = !r.pass();
    let witness_nonzero = r.unresolved.first().is_some_and(|a| !a.difference.is_zero());
    conclude(
        "criterion-11b corrupted-manin-coefficient",
        flipped && witness_nonzero,
        "corruption not detected".into(),
    );

    // and the untwisted crossed cocycle stays trivial (positive control)
    let tau = crossed_cocycle(2, 1, TwistMode::Both, &CocycleSpec::trivial(2)).unwrap();
    conclude(
        "criterion-11c untwisted-tau-trivial",
        tau.is_trivial() && tau.coinvariance.pass(),
        tau.first_nontrivial().unwrap_or_default(),
    );
    let _ = qgroups::AlgebraFamily::Mn;
}
