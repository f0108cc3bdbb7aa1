use proptest::prelude::*;

use super::*;

const Q: Field = Field::Rational;

fn v(f: Field, xs: &[i64]) -> Vector {
    xs.iter().map(|&x| f.from_i64(x)).collect()
}

/// `k[x]/(x^n - Σ c_i x^i)` in the basis `1, x, ..., x^(n-1)`, built by hand.
fn monogenic(f: Field, c: &[i64]) -> ClassicalRing {
    let n = c.len();
    let reduce = |mut coeffs: Vec<Scalar>| {
        for d in (n..coeffs.len()).rev() {
            let top = coeffs[d].clone();
            coeffs[d] = f.zero();
            for (i, ci) in c.iter().enumerate() {
                let add = &top * &f.from_i64(*ci);
                coeffs[d - n + i] = &coeffs[d - n + i] + &add;
            }
        }
        coeffs.truncate(n);
        coeffs
    };
    let table = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut coeffs = vec![f.zero(); 2 * n];
                    coeffs[i + j] = f.one();
                    reduce(coeffs)
                })
                .collect()
        })
        .collect();
    let mut unit = vec![f.zero(); n];
    unit[0] = f.one();
    ClassicalRing::new(f, table, unit).unwrap()
}

fn split(f: Field, n: usize) -> ClassicalRing {
    let table = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = vec![f.zero(); n];
                    if i == j {
                        e[i] = f.one();
                    }
                    e
                })
                .collect()
        })
        .collect();
    ClassicalRing::new(f, table, vec![f.one(); n]).unwrap()
}

fn f(p: u64) -> Field {
    Field::prime(p).unwrap()
}

#[test]
fn rejects_bad_tables() {
    let mut table = vec![vec![v(Q, &[1, 0]), v(Q, &[0, 1])], vec![v(Q, &[0, 1]), v(Q, &[0, 1])]];
    table[0][1] = v(Q, &[1, 1]);
    assert!(ClassicalRing::new(Q, table, v(Q, &[1, 0])).is_err());
}

#[test]
fn localization_examples() {
    let r = monogenic(Q, &[0, 0]);
    let l = oracle_localize(&r, &r.one()).unwrap();
    assert_eq!(l.ring, r);
    assert_eq!(l.map, Matrix::identity(Q, 2));

    let r = split(f(2), 2);
    let l = oracle_localize(&r, &v(f(2), &[1, 0])).unwrap();
    assert_eq!(l.ring.dim(), 1);
    assert_eq!(l.brute_force, Some(true));
    assert_eq!(l.map, Matrix::from_ints(f(2), &[&[1, 0]]));

    let r = monogenic(f(3), &[0, 0]);
    let l = oracle_localize(&r, &v(f(3), &[0, 1])).unwrap();
    assert_eq!(l.ring.dim(), 0);
    assert_eq!(l.brute_force, Some(true));
}

#[test]
fn membership_examples() {
    let r = split(Q, 2);
    let m = oracle_ideal_membership(&r, &[v(Q, &[1, 0])], &r.zero()).unwrap();
    assert!(m.member);
    assert!(m.coefficients.unwrap().iter().flatten().all(Scalar::is_zero));
    assert!(!oracle_ideal_membership(&r, &[v(Q, &[1, 0])], &v(Q, &[0, 1])).unwrap().member);
    assert!(!oracle_ideal_membership(&r, &[], &r.one()).unwrap().member);

    let r = monogenic(f(3), &[0, 0]);
    let m = oracle_ideal_membership(&r, &[v(f(3), &[1, 1])], &r.one()).unwrap();
    assert!(m.member);
    assert_eq!(m.exhaustive, Some(true));
    // (1 + x)(1 - x) = 1.
    assert_eq!(m.coefficients.unwrap()[0], v(f(3), &[1, 2]));
}

#[test]
fn fraction_field_examples() {
    let f4 = monogenic(f(2), &[1, 1]);
    let k = oracle_fraction_field(&f4).unwrap();
    assert_eq!(k.inverses.len(), 3);
    let x = v(f(2), &[0, 1]);
    let inv = k.inverses.iter().find(|(a, _)| a == &x).unwrap();
    assert_eq!(inv.1, v(f(2), &[1, 1]));

    assert_eq!(oracle_fraction_field(&split(Q, 1)).unwrap().ring.dim(), 1);

    let sqrt2 = monogenic(Q, &[2, 0]);
    let k = oracle_fraction_field(&sqrt2).unwrap();
    let (_, inv) = k.inverses.iter().find(|(a, _)| a == &v(Q, &[0, 1])).unwrap();
    assert_eq!(inv, &vec![Q.zero(), Q.from_ratio(1, 2)]);

    for r in [split(Q, 2), monogenic(Q, &[0, 0, 0]), monogenic(Q, &[1, 0]), split(f(3), 3)] {
        assert!(matches!(oracle_fraction_field(&r), Err(Error::Input(_))));
    }
    // x^3 - 2 has no rational root: a field.
    assert!(oracle_fraction_field(&monogenic(Q, &[2, 0, 0])).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn localization_inverts_and_brute_force_agrees(
        p in prop_oneof![Just(2u64), Just(3u64)],
        c in proptest::collection::vec(0i64..3, 1..4),
        t in proptest::collection::vec(0i64..3, 3),
    ) {
        let r = monogenic(f(p), &c);
        let t: Vector = t[..r.dim()].iter().map(|&x| f(p).from_i64(x)).collect();
        let l = oracle_localize(&r, &t).unwrap();
        prop_assert!(r.is_ring_map(&l.map, &l.ring) || l.ring.dim() == 0);
        if l.ring.dim() > 0 {
            prop_assert!(l.ring.inverse(&l.map.mul_vec(&t)).is_some());
        }
        prop_assert_eq!(l.brute_force, Some(true));
    }

    #[test]
    fn membership_solve_matches_search(
        c in proptest::collection::vec(0i64..3, 1..4),
        g in proptest::collection::vec(0i64..3, 3),
        target in proptest::collection::vec(0i64..3, 3),
    ) {
        let r = monogenic(f(3), &c);
        let n = r.dim();
        let g: Vector = g[..n].iter().map(|&x| f(3).from_i64(x)).collect();
        let target: Vector = target[..n].iter().map(|&x| f(3).from_i64(x)).collect();
        let m = oracle_ideal_membership(&r, &[g], &target).unwrap();
        prop_assert_eq!(m.exhaustive, Some(m.member));
    }
}
