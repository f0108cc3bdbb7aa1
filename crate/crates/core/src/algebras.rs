//! Constructors for concrete monoids: finite-dimensional algebras given by
//! structure constants, and presheaves of algebras on a finite space.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::{tensor_unchecked, CMorphism, CObject, CatInstance};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::monoid::MonoidObject;
use crate::ring::{Elem, StructureRing};

/// `d × d²` multiplication matrix from products of basis elements.
pub fn mult_matrix(field: Field, products: &[Vec<Elem>]) -> Matrix {
    let d = products.len();
    let cols: Vec<Elem> = products.iter().flat_map(|row| row.iter().cloned()).collect();
    Matrix::from_columns(field, d, &cols)
}

/// A checked commutative algebra in `FinVect(field)`.
pub fn from_products(field: Field, products: &[Vec<Elem>], one: Elem) -> Result<MonoidObject> {
    let m = mult_matrix(field, products);
    let a = MonoidObject::finvect(field, m, one)?;
    let report = a.check();
    if let Some(f) = report.failures.first() {
        return Err(Error::input(format!(
            "{} fails on basis vector {:?}",
            f.axiom, f.basis
        )));
    }
    Ok(a)
}

pub fn from_ring(ring: &StructureRing) -> Result<MonoidObject> {
    from_products(ring.field(), &ring.product_table(), ring.one())
}

/// The structure constants of a `FinVect` algebra (coordinates in its own
/// basis).
pub fn to_ring(a: &MonoidObject) -> Result<StructureRing> {
    if a.instance().is_presheaf() {
        return Err(Error::input(
            "structure constants are read off FinVect algebras only",
        ));
    }
    let d = a.carrier().dim(0);
    let m = a.mult().component(0);
    let products: Vec<Vec<Elem>> = (0..d)
        .map(|i| (0..d).map(|j| m.column(i * d + j)).collect())
        .collect();
    StructureRing::from_products(a.field(), &products, a.unit().component(0).column(0))
}

fn ints(field: Field, v: &[i64]) -> Elem {
    v.iter().map(|&x| field.from_i64(x)).collect()
}

/// `k[x]/(x^d - Σ c_i x^i)` in the basis `1, x, ..., x^(d-1)`.
pub fn monogenic(field: Field, c: &[i64]) -> MonoidObject {
    let d = c.len();
    assert!(d >= 1);
    let mut powers: Vec<Elem> = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            ints(field, &v)
        })
        .collect();
    for k in d..2 * d - 1 {
        let prev = powers[k - 1].clone();
        let mut next = vec![field.zero(); d];
        next[1..d].clone_from_slice(&prev[..d - 1]);
        let top = &prev[d - 1];
        for (i, ci) in c.iter().enumerate() {
            next[i] = &next[i] + &(top * &field.from_i64(*ci));
        }
        powers.push(next);
    }
    let products: Vec<Vec<Elem>> = (0..d)
        .map(|i| (0..d).map(|j| powers[i + j].clone()).collect())
        .collect();
    let mut one = vec![0; d];
    one[0] = 1;
    from_products(field, &products, ints(field, &one)).expect("monogenic algebras are commutative")
}

/// `k^n` with orthogonal idempotent basis.
pub fn split(field: Field, n: usize) -> MonoidObject {
    let products: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![0; n];
                    if i == j {
                        v[i] = 1;
                    }
                    ints(field, &v)
                })
                .collect()
        })
        .collect();
    from_products(field, &products, ints(field, &vec![1; n])).expect("split algebra")
}

/// `A × B` for two `FinVect` algebras, basis of `A` then basis of `B`.
pub fn product(a: &MonoidObject, b: &MonoidObject) -> Result<MonoidObject> {
    let (ra, rb) = (to_ring(a)?, to_ring(b)?);
    let field = ra.field();
    let (da, db) = (ra.dim(), rb.dim());
    let (ta, tb) = (ra.product_table(), rb.product_table());
    let pad = |left: &[Scalar], right: &[Scalar]| -> Elem { left.iter().chain(right).cloned().collect() };
    let za = vec![field.zero(); da];
    let zb = vec![field.zero(); db];
    let mut products = Vec::with_capacity(da + db);
    for i in 0..da + db {
        let row = (0..da + db)
            .map(|j| match (i < da, j < da) {
                (true, true) => pad(&ta[i][j], &zb),
                (false, false) => pad(&za, &tb[i - da][j - da]),
                _ => pad(&za, &zb),
            })
            .collect();
        products.push(row);
    }
    from_products(field, &products, pad(&ra.one(), &rb.one()))
}

/// A presheaf of algebras on a finite space: one `FinVect` algebra per
/// nonempty open and restriction matrices, which must be algebra maps.
pub fn presheaf_algebra(
    inst: &Arc<CatInstance>,
    algebras: &BTreeMap<usize, MonoidObject>,
    restrictions: BTreeMap<(usize, usize), Matrix>,
) -> Result<MonoidObject> {
    let field = inst.field();
    let bottom = inst.bottom();
    let mut dims = Vec::with_capacity(inst.sites());
    let mut mults = Vec::with_capacity(inst.sites());
    let mut units = Vec::with_capacity(inst.sites());
    for s in 0..inst.sites() {
        if Some(s) == bottom {
            dims.push(0);
            mults.push(Matrix::zeros(field, 0, 0));
            units.push(Matrix::zeros(field, 0, 0));
            continue;
        }
        let a = algebras
            .get(&s)
            .ok_or_else(|| Error::input(format!("no algebra given at open `{}`", inst.site_name(s))))?;
        dims.push(a.carrier().dim(0));
        mults.push(a.mult().component(0).clone());
        units.push(a.unit().component(0).clone());
    }
    let carrier = CObject::new(inst.clone(), dims, restrictions)?;
    let aa = tensor_unchecked(&carrier, &carrier);
    let mult = CMorphism::new(aa, carrier.clone(), mults)?;
    let unit = CMorphism::new(CObject::unit(inst), carrier.clone(), units)?;
    MonoidObject::checked(carrier, mult, unit)
}

/// The constant presheaf with value `a` (identity restrictions).
pub fn constant_presheaf(inst: &Arc<CatInstance>, a: &MonoidObject) -> Result<MonoidObject> {
    let d = a.carrier().dim(0);
    let bottom = inst.bottom();
    let algebras = (0..inst.sites())
        .filter(|&s| Some(s) != bottom)
        .map(|s| (s, a.clone()))
        .collect();
    let res = inst
        .pairs()
        .iter()
        .filter(|&&(v, _)| Some(v) != bottom)
        .map(|&p| (p, Matrix::identity(inst.field(), d)))
        .collect();
    presheaf_algebra(inst, &algebras, res)
}
