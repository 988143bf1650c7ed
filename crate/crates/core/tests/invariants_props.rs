use monodromy_core::invariants::{
    binom, cover_comparison, curve_hodge_numbers, expected_group, invariants_report, signature_formula, valid_params,
    GroupLabel, Params,
};
use proptest::prelude::*;

/// Tuples (n, m, r, i) drawn from the admissible range m ≤ 12.
fn params() -> impl Strategy<Value = Params> {
    let all = valid_params(4, 12);
    (0..all.len()).prop_map(move |k| all[k])
}

/// The signature counted directly: Hodge decomposition of ∧ⁿ of a space of
/// type (a, b), weighted by the parity of the (0,1)-degree.
fn signature_by_subsets(n: usize, a: usize, b: usize) -> (u128, u128) {
    let total = a + b;
    let mut out = (0u128, 0u128);
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let from_b = (mask >> a).count_ones();
        if from_b.is_multiple_of(2) {
            out.0 += 1;
        } else {
            out.1 += 1;
        }
    }
    out
}

#[test]
fn formula_matches_subset_count() {
    for p in valid_params(4, 12) {
        let (h10, h01) = curve_hodge_numbers(p.m, p.r, p.i).unwrap();
        if h10 + h01 > 14 {
            continue;
        }
        assert_eq!(
            signature_formula(&p).unwrap(),
            signature_by_subsets(p.n, h10, h01),
            "{p}"
        );
    }
}

#[test]
fn curve_case_is_hodge_numbers() {
    for p in valid_params(1, 12) {
        let (pp, qq) = signature_formula(&p).unwrap();
        let (h10, h01) = curve_hodge_numbers(p.m, p.r, p.i).unwrap();
        assert_eq!((pp as usize, qq as usize), (h10, h01), "{p}");
    }
}

#[test]
fn report_serializes_expected_fields() {
    let v = serde_json::to_value(invariants_report(&Params::new(1, 8, 4, 2)).unwrap()).unwrap();
    assert_eq!(v["expected_group"], "Sp(6)");
    assert_eq!(v["hypothesis_ok"], true);
    assert_eq!((v["h10"].as_u64(), v["h01"].as_u64()), (Some(3), Some(3)));
}

#[test]
fn named_groups() {
    for (p, g) in [
        (Params::new(1, 4, 2, 1), GroupLabel::Sp(2)),
        (Params::new(1, 6, 2, 1), GroupLabel::Sp(4)),
        (Params::new(1, 6, 3, 1), GroupLabel::SU(3, 1)),
        (Params::new(1, 8, 4, 1), GroupLabel::SU(5, 1)),
        (Params::new(1, 8, 4, 2), GroupLabel::Sp(6)),
    ] {
        assert_eq!(expected_group(&p), g);
    }
    assert!(!expected_group(&Params::new(1, 4, 4, 1)).hypothesis_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn vandermonde(p in params()) {
        let (pp, qq) = signature_formula(&p).unwrap();
        prop_assert_eq!(pp + qq, binom(p.m as i64 - 2, p.n as i64));
    }

    #[test]
    fn conjugate_eigenspace(p in params()) {
        let (pp, qq) = signature_formula(&p).unwrap();
        let conj = signature_formula(&Params { i: p.r - p.i, ..p }).unwrap();
        if p.n % 2 == 1 {
            prop_assert_eq!(conj, (qq, pp));
        } else {
            prop_assert_eq!(conj, (pp, qq));
        }
    }

    #[test]
    fn eigenspace_comparison(p in params(), k in 0usize..12) {
        let divisors: Vec<u32> = (1..p.r).filter(|d| p.r % d == 0).collect();
        let d = divisors[k % divisors.len()];
        prop_assert!(cover_comparison(&p, d).unwrap());
    }

    #[test]
    fn group_dimension_matches(p in params()) {
        let (pp, qq) = signature_formula(&p).unwrap();
        match expected_group(&p) {
            GroupLabel::Sp(d) | GroupLabel::SO(d) => {
                prop_assert_eq!(d, pp + qq);
                prop_assert_eq!(2 * p.i, p.r);
            }
            GroupLabel::SU(a, b) => {
                prop_assert_eq!((a, b), (pp.max(qq), pp.min(qq)));
            }
            GroupLabel::HypothesisNotMet(_) => {
                prop_assert!(2 * p.i > p.r || p.m * (p.i as usize) < 2 * p.r as usize);
            }
        }
    }

    #[test]
    fn label_parses_back(p in params()) {
        let g = expected_group(&p);
        prop_assert_eq!(g.to_string().parse::<GroupLabel>().unwrap(), g);
    }
}
