use proptest::prelude::*;

use super::*;

const Q: Field = Field::Rational;

fn f2() -> Field {
    Field::Prime(2)
}

#[test]
fn rref_examples() {
    let id = Matrix::identity(Q, 2);
    let r = id.rref();
    assert_eq!(r.matrix, id);
    assert_eq!(r.pivots, vec![0, 1]);
    assert_eq!(r.rank, 2);

    let z = Matrix::zeros(Q, 3, 3);
    let r = z.rref();
    assert_eq!(r.matrix, z);
    assert!(r.pivots.is_empty());
    assert_eq!(r.rank, 0);

    let m = Matrix::from_ints(Q, &[&[2, 4], &[1, 2]]);
    let r = m.rref();
    assert_eq!(r.matrix, Matrix::from_ints(Q, &[&[1, 2], &[0, 0]]));
    assert_eq!(r.rank, 1);
}

#[test]
fn solve_examples() {
    let b = Matrix::from_ints(Q, &[&[3, 1], &[-2, 5]]);
    assert_eq!(Matrix::identity(Q, 2).solve(&b).unwrap(), Some(b));

    // Enumerate every x in F_2^2 with [1 1] x = 1; the returned representative
    // must be one of them.
    let a = Matrix::from_ints(f2(), &[&[1, 1]]);
    let rhs = Matrix::from_ints(f2(), &[&[1]]);
    let mut solutions = Vec::new();
    for x0 in 0..2 {
        for x1 in 0..2 {
            let x = Matrix::from_ints(f2(), &[&[x0], &[x1]]);
            if a.mul(&x) == rhs {
                solutions.push(x);
            }
        }
    }
    assert_eq!(solutions.len(), 2);
    let x = a.solve(&rhs).unwrap().unwrap();
    assert_eq!(x, Matrix::from_ints(f2(), &[&[1], &[0]]));
    assert!(solutions.contains(&x));

    let zero = Matrix::zeros(Q, 2, 2);
    let rhs = Matrix::from_ints(Q, &[&[1], &[0]]);
    assert_eq!(zero.solve(&rhs).unwrap(), None);

    assert!(zero.solve(&Matrix::zeros(Q, 3, 1)).is_err());
}

#[test]
fn kernel_examples() {
    assert_eq!(Matrix::identity(Q, 3).kernel_basis().cols(), 0);
    assert_eq!(Matrix::zeros(Q, 3, 3).kernel_basis(), Matrix::identity(Q, 3));
    let k = Matrix::from_ints(Q, &[&[1, 2]]).kernel_basis();
    assert_eq!(k, Matrix::from_ints(Q, &[&[-2], &[1]]));
}

#[test]
fn kron_examples() {
    assert_eq!(
        Matrix::identity(Q, 2).kron(&Matrix::identity(Q, 3)),
        Matrix::identity(Q, 6)
    );
    assert_eq!(
        Matrix::from_ints(Q, &[&[2]]).kron(&Matrix::from_ints(Q, &[&[3]])),
        Matrix::from_ints(Q, &[&[6]])
    );
    // swap (x) swap sends e_i (x) e_j to e_{1-i} (x) e_{1-j}, i.e. index
    // 2i+j to 2(1-i)+(1-j) = 3 - (2i+j).
    let swap = Matrix::from_ints(Q, &[&[0, 1], &[1, 0]]);
    let mut expected = Matrix::zeros(Q, 4, 4);
    for idx in 0..4 {
        expected.set(3 - idx, idx, Q.one());
    }
    assert_eq!(swap.kron(&swap), expected);
    assert!(swap.try_kron(&Matrix::identity(f2(), 1)).is_err());
}

#[test]
fn chain_colimit_examples() {
    let c = Matrix::identity(Q, 2).chain_colimit().unwrap();
    assert_eq!(c.dim, 2);
    assert_eq!(c.projection, Matrix::identity(Q, 2));
    assert_eq!(c.index, 0);

    let nil = Matrix::from_ints(Q, &[&[0, 0], &[1, 0]]);
    let c = nil.chain_colimit().unwrap();
    assert_eq!(c.dim, 0);
    assert_eq!(c.rank_trace, vec![2, 1, 0, 0]);
    assert_eq!(c.index, 2);

    let d = Matrix::from_ints(Q, &[&[1, 0], &[0, 0]]);
    let c = d.chain_colimit().unwrap();
    assert_eq!(c.dim, 1);
    assert_eq!(c.projection, Matrix::from_ints(Q, &[&[1, 0]]));
    assert_eq!(c.index, 1);

    assert!(Matrix::zeros(Q, 2, 3).chain_colimit().is_err());
}

#[test]
fn finite_chain_flags_truncation() {
    let nil = Matrix::from_ints(Q, &[&[0, 0], &[1, 0]]);
    let (_, settled) = Matrix::finite_chain_colimit(std::slice::from_ref(&nil)).unwrap();
    assert!(!settled);
    let (comp, settled) = Matrix::finite_chain_colimit(&[nil, Matrix::identity(Q, 2)]).unwrap();
    assert!(settled);
    assert_eq!(comp.rank(), 1);
}

#[test]
fn quotient_projection_kills_subspace() {
    let w = Matrix::from_ints(Q, &[&[1], &[2], &[3]]);
    let pi = Matrix::quotient_projection(&w);
    assert_eq!(pi.shape(), (2, 3));
    assert!(pi.mul(&w).is_zero());
    assert!(pi.is_surjective());
}

#[test]
fn record_round_trip() {
    let m = Matrix::from_vec(Q, 1, 2, vec![Q.from_ratio(-1, 3), Q.from_i64(4)]);
    let rec = MatrixRecord::from(&m);
    assert_eq!(rec.entries, vec![vec!["-1/3".to_string(), "4/1".to_string()]]);
    assert_eq!(Matrix::try_from(&rec).unwrap(), m);
}

fn small_matrix(field: Field, max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-3i64..=3, r * c).prop_map(move |vals| {
            let data = vals.into_iter().map(|v| field.from_i64(v)).collect();
            Matrix::from_vec(field, r, c, data)
        })
    })
}

fn any_field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::Prime(2)),
        Just(Field::Prime(3)),
        Just(Field::Prime(5))
    ]
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in any_field().prop_flat_map(|f| small_matrix(f, 4))) {
        let once = m.rref().matrix;
        prop_assert_eq!(once.rref().matrix, once);
    }

    #[test]
    fn kron_rank_multiplies(
        (a, b) in any_field().prop_flat_map(|f| (small_matrix(f, 3), small_matrix(f, 3)))
    ) {
        prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
    }

    #[test]
    fn kernel_is_annihilated_and_sized(m in any_field().prop_flat_map(|f| small_matrix(f, 4))) {
        let k = m.kernel_basis();
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols(), m.cols() - m.rank());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn solve_is_exact(
        (a, x) in any_field().prop_flat_map(|f| {
            small_matrix(f, 4).prop_flat_map(move |a| {
                let c = a.cols();
                (Just(a), proptest::collection::vec(-3i64..=3, c).prop_map(move |v| {
                    Matrix::column_vector(f, v.into_iter().map(|x| f.from_i64(x)).collect())
                }))
            })
        })
    ) {
        let b = a.mul(&x);
        let sol = a.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(a.mul(&sol), b);
    }

    #[test]
    fn chain_index_bounded_by_dimension(
        m in any_field().prop_flat_map(|f| (1usize..=4).prop_flat_map(move |n| {
            proptest::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
                Matrix::from_vec(f, n, n, v.into_iter().map(|x| f.from_i64(x)).collect())
            })
        }))
    ) {
        let c = m.chain_colimit().unwrap();
        prop_assert!(c.index <= m.rows());
        prop_assert_eq!(c.dim, m.pow(c.index).rank());
        prop_assert!(c.projection.mul(&c.stable_kernel).is_zero());
    }
}
