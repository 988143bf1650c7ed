use monodromy_core::certifier::{
    certify, orbit_span, reflection_classify, verify_certificate, wedge_dichotomy_check, wedge_dichotomy_ranks,
    Budgets, DensityCertificate, Mode, OrbitWitness, ReflectionKind, Status,
};
use monodromy_core::coverrep::{build_curve_rep, meridian_matrix};
use monodromy_core::exactla::{rank, wedge_power, FieldMatrix};
use monodromy_core::invariants::{expected_group, valid_params, GroupLabel, Params};
use monodromy_core::pham::cyclic_pl_data;
use monodromy_core::Error;
use proptest::prelude::*;

#[test]
fn named_cases_verify_and_replay() {
    for (p, g) in [
        (Params::new(1, 4, 2, 1), "Sp(2)"),
        (Params::new(1, 6, 2, 1), "Sp(4)"),
        (Params::new(1, 6, 3, 1), "SU(3,1)"),
        (Params::new(1, 8, 4, 1), "SU(5,1)"),
        (Params::new(1, 8, 4, 2), "Sp(6)"),
    ] {
        let cert = certify(&p, &Budgets::default()).unwrap();
        assert_eq!(cert.status, Status::Verified, "{p}: {:?}", cert.reasons);
        assert_eq!(cert.verdict, g);
        verify_certificate(&cert).unwrap();
    }
}

#[test]
fn hypothesis_failures_are_never_verified() {
    for p in valid_params(1, 8) {
        if p.m * (p.i as usize) >= 2 * p.r as usize {
            continue;
        }
        let cert = certify(&p, &Budgets::default()).unwrap();
        assert_eq!(cert.status, Status::HypothesisNotMet, "{p}");
        assert_eq!(cert.status.exit_code(), 2);
        verify_certificate(&cert).unwrap();
    }
}

#[test]
fn definite_control_is_finite() {
    let cert = certify(&Params::new(1, 4, 4, 1), &Budgets::default()).unwrap();
    assert_eq!(cert.status, Status::HypothesisNotMet);
    assert_eq!(cert.expected_group, GroupLabel::HypothesisNotMet("mi < 2r".into()));
    let sig = cert.signature.unwrap();
    assert!(sig.0 == 0 || sig.1 == 0);
    let inf = cert.infinite.unwrap();
    assert!(!inf.ok);
    assert_eq!(inf.finite_order, Some(96));
}

#[test]
fn conditional_mode_for_higher_n() {
    for p in [Params::new(2, 6, 2, 1), Params::new(2, 6, 3, 1)] {
        let cert = certify(&p, &Budgets::default()).unwrap();
        assert_eq!(cert.mode, Mode::Conditional);
        assert_eq!(cert.status, Status::Conditional, "{p}: {:?}", cert.reasons);
        assert_eq!(cert.verdict, expected_group(&p).to_string());
        let w = cert.wedge.as_ref().unwrap();
        assert_eq!(w.dichotomy, Some(true));
        assert_eq!(w.algebra_dim, w.expected_algebra_dim);
        assert!(abstract_meridian_consistent(&cert));
        verify_certificate(&cert).unwrap();
    }
}

fn abstract_meridian_consistent(cert: &DensityCertificate) -> bool {
    let w = cert.wedge.as_ref().unwrap();
    let p = cert.params;
    w.abstract_meridian == cyclic_pl_data(p.n, p.m, p.r, p.i).unwrap() && w.abstract_meridian.is_consistent()
}

#[test]
fn tampered_certificates_fail_replay() {
    let cert = certify(&Params::new(1, 6, 3, 1), &Budgets::default()).unwrap();
    verify_certificate(&cert).unwrap();

    let mut bad = cert.clone();
    bad.signature = Some((1, 3));
    assert!(verify_certificate(&bad).is_err());

    let mut bad = cert.clone();
    let span = bad.span.as_mut().unwrap();
    assert_eq!(span.dim, span.ambient);
    span.witnesses.push(OrbitWitness { seed: 0, word: vec![1] });
    assert!(verify_certificate(&bad).is_err());

    let mut bad = cert.clone();
    bad.infinite.as_mut().unwrap().witness.as_mut().unwrap().word = vec![];
    assert!(verify_certificate(&bad).is_err());

    let mut bad = cert.clone();
    bad.span.as_mut().unwrap().ok = false;
    assert!(verify_certificate(&bad).is_err());

    let mut bad = certify(&Params::new(1, 4, 4, 1), &Budgets::default()).unwrap();
    bad.status = Status::Verified;
    assert!(verify_certificate(&bad).is_err());
}

#[test]
fn meridian_kind_matches_vanishing_criterion() {
    for p in valid_params(1, 10) {
        let rep = build_curve_rep(p.m, p.r, p.i).unwrap();
        let transvection = cyclic_pl_data(1, p.m, p.r, p.i).unwrap().is_transvection();
        for j in 0..p.m - 1 {
            let mr = meridian_matrix(&rep, j).unwrap();
            let kind = reflection_classify(&mr.matrix, &rep.form);
            assert_eq!(kind == ReflectionKind::Transvection, transvection, "{p} j={j}");
            if !transvection {
                assert!(matches!(kind, ReflectionKind::ComplexReflection { .. }));
            }
        }
    }
}

#[test]
fn dichotomy_exhaustive() {
    for w in 4..=8 {
        for n in 2..=w - 2 {
            assert!(wedge_dichotomy_check(w, n).unwrap(), "w={w} n={n}");
        }
    }
}

/// Independent count: rank(∧ⁿJ − I) for the Jordan type, computed from an
/// explicit nilpotent matrix built here.
#[test]
fn dichotomy_ranks_match_direct_computation() {
    for (w, n) in [(5, 2), (6, 3), (6, 2)] {
        for jr in wedge_dichotomy_ranks(w, n).unwrap() {
            let mut j = FieldMatrix::identity(w, 1);
            let mut start = 0;
            for b in &jr.blocks {
                for k in start..start + b - 1 {
                    j.set(k, k + 1, monodromy_core::CycloNum::one(1));
                }
                start += b;
            }
            let direct = rank(&wedge_power(&j, n).unwrap().minus_identity());
            assert_eq!(direct, jr.rank, "{:?}", jr.blocks);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn span_is_monotone_in_budget(idx in 0usize..200, small in 1usize..40, extra in 0usize..200) {
        let all = valid_params(1, 8);
        let p = all[idx % all.len()];
        let rep = build_curve_rep(p.m, p.r, p.i).unwrap();
        let seeds = vec![rep.cycles[0].clone()];
        let big = orbit_span(&rep, &seeds, small + extra + 10_000).unwrap();
        match orbit_span(&rep, &seeds, small) {
            Ok(s) => {
                prop_assert_eq!(s.subspace.dim(), big.subspace.dim());
                prop_assert!(s.words_tried <= small);
            }
            Err(Error::BudgetExceeded(_)) => prop_assert!(big.words_tried > small),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn certify_is_deterministic(idx in 0usize..200) {
        let all = valid_params(1, 7);
        let p = all[idx % all.len()];
        let a = serde_json::to_string(&certify(&p, &Budgets::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&certify(&p, &Budgets::default()).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
