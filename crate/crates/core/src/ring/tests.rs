use proptest::prelude::*;

use super::*;

fn q() -> Field {
    Field::Rational
}

fn f(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn elem(field: Field, v: &[i64]) -> Elem {
    v.iter().map(|&x| field.from_i64(x)).collect()
}

/// Monogenic algebra `k[x]/(x^d - Σ c_i x^i)` in the basis `1, x, ..., x^(d-1)`.
fn monogenic(field: Field, c: &[i64]) -> StructureRing {
    let d = c.len();
    let mut powers: Vec<Elem> = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            elem(field, &v)
        })
        .collect();
    // powers[k] = x^k for k < 2d - 1
    for k in d..2 * d - 1 {
        let prev = powers[k - 1].clone();
        let mut next = vec![field.zero(); d];
        for i in 0..d - 1 {
            next[i + 1] = prev[i].clone();
        }
        let top = prev[d - 1].clone();
        for (i, ci) in c.iter().enumerate() {
            next[i] = &next[i] + &(&top * &field.from_i64(*ci));
        }
        powers.push(next);
    }
    let table: Vec<Vec<Elem>> = (0..d)
        .map(|i| (0..d).map(|j| powers[i + j].clone()).collect())
        .collect();
    let mut one = vec![0; d];
    one[0] = 1;
    StructureRing::from_products(field, &table, elem(field, &one)).unwrap()
}

fn product_of_copies(field: Field, n: usize) -> StructureRing {
    let table: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![0; n];
                    if i == j {
                        v[i] = 1;
                    }
                    elem(field, &v)
                })
                .collect()
        })
        .collect();
    StructureRing::from_products(field, &table, elem(field, &vec![1; n])).unwrap()
}

/// Brute-force: a finite ring is a domain iff no two nonzero elements
/// multiply to zero.
fn brute_force_domain(r: &StructureRing) -> bool {
    let all = r.elements().unwrap();
    let nonzero: Vec<_> = all.iter().filter(|x| !StructureRing::is_zero_elem(x)).collect();
    nonzero
        .iter()
        .all(|x| nonzero.iter().all(|y| !StructureRing::is_zero_elem(&r.mul(x, y))))
}

fn check_witness(r: &StructureRing, v: &DomainVerdict) {
    if let DomainVerdict::ZeroDivisors { x, y } = v {
        assert!(!StructureRing::is_zero_elem(x));
        assert!(!StructureRing::is_zero_elem(y));
        assert!(StructureRing::is_zero_elem(&r.mul(x, y)));
    }
}

#[test]
fn rejects_broken_tables() {
    // Unit vector set to x in the dual numbers.
    let d = monogenic(q(), &[0, 0]);
    let table = d.product_table();
    assert!(StructureRing::from_products(q(), &table, elem(q(), &[0, 1])).is_err());
}

#[test]
fn f4_is_a_field() {
    let r = monogenic(f(2), &[1, 1]);
    assert!(r.decide_domain().is_domain());
    assert!(brute_force_domain(&r));
    assert_eq!(r.nilradical().cols(), 0);
    let w = elem(f(2), &[0, 1]);
    let inv = r.inverse(&w).unwrap();
    assert_eq!(inv, elem(f(2), &[1, 1]));
}

#[test]
fn dual_numbers() {
    let r = monogenic(q(), &[0, 0]);
    let nil = r.nilradical();
    assert_eq!(nil.cols(), 1);
    let w = r.nilpotent_witness().unwrap();
    assert_eq!(w.index, 2);
    let v = r.decide_domain();
    assert!(!v.is_domain());
    check_witness(&r, &v);
}

#[test]
fn rational_fields_and_products() {
    let sqrt2 = monogenic(q(), &[2, 0]);
    assert!(sqrt2.decide_domain().is_domain());
    let inv = sqrt2.inverse(&elem(q(), &[0, 1])).unwrap();
    assert_eq!(inv, vec![q().zero(), q().from_ratio(1, 2)]);

    let split = monogenic(q(), &[0, 1]); // x^2 = x
    let v = split.decide_domain();
    check_witness(&split, &v);
    assert!(!v.is_domain());

    // (x^2 + 1)(x^2 - 2) = x^4 - x^2 - 2: reduced, no rational root.
    let quartic = monogenic(q(), &[2, 0, 1, 0]);
    assert_eq!(quartic.nilradical().cols(), 0);
    let v = quartic.decide_domain();
    check_witness(&quartic, &v);
    assert!(!v.is_domain());

    let cubic = monogenic(q(), &[2, 0, 0]);
    assert!(cubic.decide_domain().is_domain());
}

#[test]
fn prime_field_verdicts_match_brute_force() {
    for p in [2, 3] {
        for c0 in 0..p as i64 {
            for c1 in 0..p as i64 {
                let r = monogenic(f(p), &[c0, c1]);
                let v = r.decide_domain();
                check_witness(&r, &v);
                assert_eq!(v.is_domain(), brute_force_domain(&r), "p={p} c=({c0},{c1})");
            }
        }
    }
    let r = product_of_copies(f(2), 3);
    assert!(!r.decide_domain().is_domain());
}

#[test]
fn ideal_membership_and_quotient() {
    let r = product_of_copies(q(), 2);
    let e1 = elem(q(), &[1, 0]);
    let e2 = elem(q(), &[0, 1]);
    let s = r.express(&[e1.clone(), e2.clone()], &r.one()).unwrap();
    assert_eq!(s, vec![e1.clone(), e2.clone()]);
    assert!(r.express(&[e1.clone(), elem(q(), &[2, 0])], &r.one()).is_none());
    let ideal = r.ideal(std::slice::from_ref(&e1));
    assert_eq!(ideal.cols(), 1);
    let (quo, pi) = r.quotient(&ideal);
    assert_eq!(quo.dim(), 1);
    assert!(r.is_ring_map(&pi, &quo));
}

#[test]
fn f3_dual_unit() {
    // x + 1 is a unit in F3[x]/(x^2).
    let r = monogenic(f(3), &[0, 0]);
    let g = elem(f(3), &[1, 1]);
    let s = r.express(std::slice::from_ref(&g), &r.one()).unwrap();
    assert_eq!(r.mul(&s[0], &g), r.one());
}

#[test]
fn local_ring_of_product() {
    // F2 × F4 in the basis (e1, e2, e2 w).
    let field = f(2);
    let table = vec![
        vec![
            elem(field, &[1, 0, 0]),
            elem(field, &[0, 0, 0]),
            elem(field, &[0, 0, 0]),
        ],
        vec![
            elem(field, &[0, 0, 0]),
            elem(field, &[0, 1, 0]),
            elem(field, &[0, 0, 1]),
        ],
        vec![
            elem(field, &[0, 0, 0]),
            elem(field, &[0, 0, 1]),
            elem(field, &[0, 1, 1]),
        ],
    ];
    let r = StructureRing::from_products(field, &table, elem(field, &[1, 1, 0])).unwrap();
    let prime = r.ideal(&[elem(field, &[1, 0, 0])]);
    let local = r.localize_at_prime(&prime);
    assert_eq!(local.ring.dim(), 2);
    assert_eq!(local.maximal.cols(), 0);
    assert!(local.ring.decide_domain().is_domain());
    assert_eq!(local.idempotent, elem(field, &[0, 1, 0]));
}

#[test]
fn local_ring_with_nilpotents() {
    // Q[x]/(x^2) × Q at the prime (x) × Q: local factor is the dual numbers.
    let field = q();
    let table = vec![
        vec![
            elem(field, &[1, 0, 0]),
            elem(field, &[0, 1, 0]),
            elem(field, &[0, 0, 0]),
        ],
        vec![
            elem(field, &[0, 1, 0]),
            elem(field, &[0, 0, 0]),
            elem(field, &[0, 0, 0]),
        ],
        vec![
            elem(field, &[0, 0, 0]),
            elem(field, &[0, 0, 0]),
            elem(field, &[0, 0, 1]),
        ],
    ];
    let r = StructureRing::from_products(field, &table, elem(field, &[1, 0, 1])).unwrap();
    let prime = r.ideal(&[elem(field, &[0, 1, 0]), elem(field, &[0, 0, 1])]);
    let local = r.localize_at_prime(&prime);
    assert_eq!(local.ring.dim(), 2);
    assert_eq!(local.maximal.cols(), 1);
    assert_eq!(local.maximal_nilpotency, 2);
    assert_eq!(local.idempotent, elem(field, &[1, 0, 0]));
}

proptest! {
    #[test]
    fn monogenic_f3_verdicts(c in proptest::collection::vec(0i64..3, 3)) {
        let r = monogenic(f(3), &c);
        let v = r.decide_domain();
        check_witness(&r, &v);
        prop_assert_eq!(v.is_domain(), brute_force_domain(&r));
    }

    #[test]
    fn monogenic_rational_witnesses(c in proptest::collection::vec(-4i64..5, 2..4)) {
        let r = monogenic(q(), &c);
        let v = r.decide_domain();
        check_witness(&r, &v);
        // A field has every nonzero basis element invertible.
        if v.is_domain() {
            for i in 0..r.dim() {
                prop_assert!(r.is_unit(&r.basis_vector(i)));
            }
        }
    }
}
