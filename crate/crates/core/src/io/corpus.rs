//! Test corpora: every commutative unital algebra of small dimension over
//! `F_2` or `F_3` (up to cheap invariants), and a fixed list over `Q`.

use crate::algebras::{from_products, monogenic, product, split};
use crate::error::{Error, Result};
use crate::linalg::{Field, Scalar};
use crate::monoid::MonoidObject;
use crate::oracle::ClassicalRing;
use crate::ring::Elem;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub monoid: MonoidObject,
}

/// Cheap isomorphism invariants. Up to dimension 3 they separate all
/// classes (the unit count splits everything except `k[x]/(x³)` and
/// `k[x,y]/(x,y)²`, which differ in square-zero elements).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Invariants {
    dim: usize,
    units: usize,
    nilradical: usize,
    square_zero: usize,
    idempotents: usize,
    squares: usize,
}

fn invariants(r: &ClassicalRing) -> Invariants {
    let all = r.elements(u64::MAX).expect("finite field");
    let zero = r.zero();
    let nil = all.iter().filter(|x| r.pow(x, r.dim().max(1)) == zero).count();
    let mut squares: Vec<Elem> = all.iter().map(|x| r.mul(x, x)).collect();
    squares.sort_by_key(|v| format!("{v:?}"));
    squares.dedup();
    Invariants {
        dim: r.dim(),
        units: all.iter().filter(|x| r.inverse(x).is_some()).count(),
        nilradical: nil,
        square_zero: all.iter().filter(|x| r.mul(x, x) == zero).count(),
        idempotents: all.iter().filter(|x| r.mul(x, x) == **x).count(),
        squares: squares.len(),
    }
}

/// Corpus for `field`: exhaustive up to `dim_max ≤ 3` for `F_2`, `F_3`;
/// the curated list (restricted to `dim_max`) for `Q`.
pub fn corpus_generate(field: Field, dim_max: usize) -> Result<Vec<CorpusEntry>> {
    match field {
        Field::Rational => Ok(curated_rationals()
            .into_iter()
            .filter(|e| e.monoid.carrier().total_dim() <= dim_max)
            .collect()),
        Field::Prime(p) if p <= 3 => {
            if dim_max > 3 {
                return Err(Error::input("exhaustive enumeration is limited to dimension 3"));
            }
            Ok((1..=dim_max).flat_map(|d| enumerate(field, d)).collect())
        }
        Field::Prime(p) => Err(Error::input(format!("no corpus over F{p}: use F2, F3 or Q"))),
    }
}

/// Algebras with basis `1 = b_0, b_1, ..., b_{d-1}`: free choice of
/// `b_i b_j` for `1 ≤ i ≤ j`, filtered by associativity.
fn enumerate(field: Field, d: usize) -> Vec<CorpusEntry> {
    let digits = field.elements().expect("finite field");
    let vectors: Vec<Elem> = (0..digits.len().pow(d as u32))
        .map(|mut k| {
            (0..d)
                .map(|_| {
                    let s = digits[k % digits.len()].clone();
                    k /= digits.len();
                    s
                })
                .collect()
        })
        .collect();
    let slots: Vec<(usize, usize)> = (1..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let basis = |i: usize| -> Elem {
        let mut v = vec![field.zero(); d];
        v[i] = field.one();
        v
    };
    let mut seen: Vec<Invariants> = Vec::new();
    let mut out = Vec::new();
    let total = vectors.len().pow(slots.len() as u32);
    for code in 0..total {
        let mut table: Vec<Vec<Elem>> = (0..d)
            .map(|i| (0..d).map(|j| if i == 0 { basis(j) } else if j == 0 { basis(i) } else { Vec::new() }).collect())
            .collect();
        let mut k = code;
        for &(i, j) in &slots {
            let v = vectors[k % vectors.len()].clone();
            k /= vectors.len();
            table[i][j] = v.clone();
            table[j][i] = v;
        }
        let Ok(r) = ClassicalRing::new(field, table.clone(), basis(0)) else {
            continue;
        };
        let inv = invariants(&r);
        if seen.contains(&inv) {
            continue;
        }
        seen.push(inv);
        let monoid = from_products(field, &table, basis(0)).expect("axioms checked by the oracle table");
        out.push(CorpusEntry {
            name: format!("{field}-d{d}-{}", out.len()),
            monoid,
        });
    }
    out
}

pub fn curated_rationals() -> Vec<CorpusEntry> {
    let q = Field::Rational;
    let entry = |name: &str, monoid: MonoidObject| CorpusEntry {
        name: name.to_string(),
        monoid,
    };
    vec![
        entry("Q", split(q, 1)),
        entry("QxQ", split(q, 2)),
        entry("QxQxQ", split(q, 3)),
        entry("Q[x]/(x^2)", monogenic(q, &[0, 0])),
        entry("Q[x]/(x^3)", monogenic(q, &[0, 0, 0])),
        entry("Q[x]/(x^2-2)", monogenic(q, &[2, 0])),
        entry(
            "QxQ[x]/(x^2)",
            product(&split(q, 1), &monogenic(q, &[0, 0])).expect("product of algebras"),
        ),
    ]
}

/// Structure constants of a corpus algebra in its own basis, read through
/// linear algebra only.
pub fn classical(a: &MonoidObject) -> Result<ClassicalRing> {
    if a.instance().is_presheaf() {
        return Err(Error::input("classical rings are read off plain vector-space algebras"));
    }
    let unit: Vec<Scalar> = a.unit().component(0).column(0);
    ClassicalRing::from_mult_matrix(a.mult().component(0), unit)
}
