use super::*;
use crate::algebras::{monogenic, split};
use crate::io::corpus_generate;

const Q: Field = Field::Rational;

#[test]
fn curated_algebras_pass() {
    let tallies = corpus_suite(&curated_rationals(), CheckOptions::default()).unwrap();
    assert_eq!(tallies.len(), 7);
    let sqrt2 = tallies.iter().find(|t| t.name == "Q[x]/(x^2-2)").unwrap();
    assert!(sqrt2.integral && sqrt2.count(8) > 1);
    let dual = tallies.iter().find(|t| t.name == "Q[x]/(x^2)").unwrap();
    assert!(!dual.reduced && !dual.integral && dual.count(8) == 0);
}

#[test]
fn f2_dimension_two_classification() {
    let corpus = corpus_generate(Field::Prime(2), 2).unwrap();
    let tallies = corpus_suite(&corpus, CheckOptions::default()).unwrap();
    let mut seen: Vec<(bool, bool)> = tallies
        .iter()
        .filter(|t| t.dim == 2)
        .map(|t| (t.integral, t.reduced))
        .collect();
    seen.sort();
    // F2[x]/(x²), F2×F2, F4.
    assert_eq!(seen, vec![(false, false), (false, true), (true, true)]);
}

#[test]
fn injected_faults_are_self_test_failures() {
    let a = split(Q, 2);
    for c in 1..=8 {
        let opts = CheckOptions { fault: Some(c) };
        let a = if c == 8 { monogenic(Q, &[2, 0]) } else { a.clone() };
        let err = monoid_suite("probe", &a, opts).unwrap_err();
        assert!(matches!(err, Error::SelfTest(_)), "criterion {c}: {err}");
        assert!(err.to_string().contains(CRITERIA[c - 1]));
    }
}

#[test]
fn quotient_tables_match_hand_computation() {
    let r = classical(&monogenic(Q, &[0, 0, 0])).unwrap();
    let x2 = vec![Q.zero(), Q.zero(), Q.one()];
    let (qr, p) = classical_quotient(&r, &r.ideal(&[x2])).unwrap();
    assert_eq!(qr.dim(), 2);
    assert!(r.is_ring_map(&p, &qr));
}

#[test]
fn presheaves_have_global_sections_as_homs() {
    let n = presheaf_suite(Q, 20, 7, CheckOptions::default()).unwrap();
    assert_eq!(n, 27);
    assert_eq!(presheaf_suite(Field::Prime(3), 6, 1, CheckOptions::default()).unwrap(), 6);
    let err = presheaf_suite(Q, 1, 7, CheckOptions { fault: Some(10) }).unwrap_err();
    assert!(matches!(err, Error::SelfTest(_)));
}
