//! Monoidal structure, finite limits and colimits, and hom spaces.

use std::collections::BTreeMap;

use super::object::{CMorphism, CObject};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

fn same_instance(x: &CObject, y: &CObject) -> Result<()> {
    if x.same_instance(y) {
        Ok(())
    } else {
        Err(Error::input("objects belong to different category instances"))
    }
}

/// Site-wise Kronecker product; restrictions are Kronecker products of the
/// factors' restrictions.
pub fn tensor(x: &CObject, y: &CObject) -> Result<CObject> {
    same_instance(x, y)?;
    Ok(tensor_unchecked(x, y))
}

pub(crate) fn tensor_unchecked(x: &CObject, y: &CObject) -> CObject {
    let inst = x.instance().clone();
    let dims = x.dims().iter().zip(y.dims()).map(|(a, b)| a * b).collect();
    let res: BTreeMap<_, _> = inst
        .pairs()
        .iter()
        .map(|&(v, u)| ((v, u), x.restriction(v, u).kron(&y.restriction(v, u))))
        .collect();
    CObject::from_parts_unchecked(inst, dims, res)
}

pub fn tensor_mor(f: &CMorphism, g: &CMorphism) -> Result<CMorphism> {
    same_instance(f.source(), g.source())?;
    Ok(tensor_mor_unchecked(f, g))
}

pub(crate) fn tensor_mor_unchecked(f: &CMorphism, g: &CMorphism) -> CMorphism {
    let comps = f
        .components()
        .iter()
        .zip(g.components())
        .map(|(a, b)| a.kron(b))
        .collect();
    CMorphism::new_unchecked(
        tensor_unchecked(f.source(), g.source()),
        tensor_unchecked(f.target(), g.target()),
        comps,
    )
}

/// Symmetry `x ⊗ y -> y ⊗ x`, the permutation `(i, j) ↦ (j, i)`.
pub fn symmetry(x: &CObject, y: &CObject) -> CMorphism {
    let field = x.field();
    let comps = x
        .dims()
        .iter()
        .zip(y.dims())
        .map(|(&dx, &dy)| {
            let mut m = Matrix::zeros(field, dx * dy, dx * dy);
            for i in 0..dx {
                for j in 0..dy {
                    m.set(j * dx + i, i * dy + j, field.one());
                }
            }
            m
        })
        .collect();
    CMorphism::new_unchecked(tensor_unchecked(x, y), tensor_unchecked(y, x), comps)
}

/// Associator `(x ⊗ y) ⊗ z -> x ⊗ (y ⊗ z)`. With row-major pairing both
/// sides index `e_i ⊗ e_j ⊗ e_k` as `(i * dy + j) * dz + k`, so it is the
/// identity matrix.
pub fn associator(x: &CObject, y: &CObject, z: &CObject) -> CMorphism {
    let left = tensor_unchecked(&tensor_unchecked(x, y), z);
    let right = tensor_unchecked(x, &tensor_unchecked(y, z));
    let comps = left
        .dims()
        .iter()
        .map(|&d| Matrix::identity(x.field(), d))
        .collect();
    CMorphism::new_unchecked(left, right, comps)
}

/// Left unitor `1 ⊗ x -> x`.
pub fn left_unitor(x: &CObject) -> CMorphism {
    let one = CObject::unit(x.instance());
    let src = tensor_unchecked(&one, x);
    let comps = src
        .dims()
        .iter()
        .map(|&d| Matrix::identity(x.field(), d))
        .collect();
    CMorphism::new_unchecked(src, x.clone(), comps)
}

/// Right unitor `x ⊗ 1 -> x`.
pub fn right_unitor(x: &CObject) -> CMorphism {
    let one = CObject::unit(x.instance());
    let src = tensor_unchecked(x, &one);
    let comps = src
        .dims()
        .iter()
        .map(|&d| Matrix::identity(x.field(), d))
        .collect();
    CMorphism::new_unchecked(src, x.clone(), comps)
}

/// Kernel object with its inclusion. Each component of the inclusion is the
/// canonical kernel basis; restrictions are induced.
pub fn kernel(f: &CMorphism) -> (CObject, CMorphism) {
    let x = f.source();
    let inst = x.instance().clone();
    let incl: Vec<Matrix> = f.components().iter().map(Matrix::kernel_basis).collect();
    let dims: Vec<usize> = incl.iter().map(Matrix::cols).collect();
    let res = inst
        .pairs()
        .iter()
        .map(|&(v, u)| {
            let composite = x.restriction(v, u).mul(&incl[u]);
            let r = Matrix::factor_through_mono(&composite, &incl[v])
                .expect("restriction of a kernel element stays in the kernel");
            ((v, u), r)
        })
        .collect();
    let k = CObject::from_parts_unchecked(inst, dims, res);
    let iota = CMorphism::new_unchecked(k.clone(), x.clone(), incl);
    (k, iota)
}

/// Cokernel object with its projection onto the canonical quotient basis.
pub fn cokernel(f: &CMorphism) -> (CObject, CMorphism) {
    let y = f.target();
    let proj: Vec<Matrix> = f.components().iter().map(Matrix::cokernel_projection).collect();
    quotient_object(y, proj)
}

/// Quotient of `y` by a subobject given as site-wise column spans.
pub fn quotient_by(y: &CObject, sub: &[Matrix]) -> (CObject, CMorphism) {
    let proj = sub.iter().map(Matrix::quotient_projection).collect();
    quotient_object(y, proj)
}

fn quotient_object(y: &CObject, proj: Vec<Matrix>) -> (CObject, CMorphism) {
    let inst = y.instance().clone();
    let dims: Vec<usize> = proj.iter().map(Matrix::rows).collect();
    let res = inst
        .pairs()
        .iter()
        .map(|&(v, u)| {
            let composite = proj[v].mul(&y.restriction(v, u));
            let r = Matrix::factor_through_epi(&composite, &proj[u])
                .expect("restriction preserves the subobject being divided out");
            ((v, u), r)
        })
        .collect();
    let q = CObject::from_parts_unchecked(inst, dims, res);
    let pi = CMorphism::new_unchecked(y.clone(), q.clone(), proj);
    (q, pi)
}

/// Image subobject (column spans of the components) and its inclusion.
pub fn image(f: &CMorphism) -> (CObject, CMorphism) {
    let y = f.target();
    let inst = y.instance().clone();
    let incl: Vec<Matrix> = f.components().iter().map(Matrix::column_space).collect();
    let dims: Vec<usize> = incl.iter().map(Matrix::cols).collect();
    let res = inst
        .pairs()
        .iter()
        .map(|&(v, u)| {
            let composite = y.restriction(v, u).mul(&incl[u]);
            let r = Matrix::factor_through_mono(&composite, &incl[v]).expect("restriction preserves images");
            ((v, u), r)
        })
        .collect();
    let im = CObject::from_parts_unchecked(inst, dims, res);
    let iota = CMorphism::new_unchecked(im.clone(), y.clone(), incl);
    (im, iota)
}

/// Biproduct `x ⊕ y`.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub object: CObject,
    pub inj1: CMorphism,
    pub inj2: CMorphism,
    pub proj1: CMorphism,
    pub proj2: CMorphism,
}

pub fn direct_sum(x: &CObject, y: &CObject) -> Result<DirectSum> {
    same_instance(x, y)?;
    let inst = x.instance().clone();
    let field = x.field();
    let dims: Vec<usize> = x.dims().iter().zip(y.dims()).map(|(a, b)| a + b).collect();
    let res = inst
        .pairs()
        .iter()
        .map(|&(v, u)| ((v, u), x.restriction(v, u).block_diag(&y.restriction(v, u))))
        .collect();
    let object = CObject::from_parts_unchecked(inst, dims, res);
    let mut i1 = Vec::new();
    let mut i2 = Vec::new();
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for (&a, &b) in x.dims().iter().zip(y.dims()) {
        let ia = Matrix::identity(field, a).vstack(&Matrix::zeros(field, b, a));
        let ib = Matrix::zeros(field, a, b).vstack(&Matrix::identity(field, b));
        p1.push(ia.transpose());
        p2.push(ib.transpose());
        i1.push(ia);
        i2.push(ib);
    }
    Ok(DirectSum {
        inj1: CMorphism::new_unchecked(x.clone(), object.clone(), i1),
        inj2: CMorphism::new_unchecked(y.clone(), object.clone(), i2),
        proj1: CMorphism::new_unchecked(object.clone(), x.clone(), p1),
        proj2: CMorphism::new_unchecked(object.clone(), y.clone(), p2),
        object,
    })
}

/// `g` with `g ∘ epi = f`, when `epi` is an epimorphism whose kernel `f`
/// kills. The result is natural because `epi` is epi site-wise.
pub fn factor_through_epi(f: &CMorphism, epi: &CMorphism) -> Option<CMorphism> {
    let comps = f
        .components()
        .iter()
        .zip(epi.components())
        .map(|(a, p)| Matrix::factor_through_epi(a, p))
        .collect::<Option<Vec<_>>>()?;
    let g = CMorphism::new_unchecked(epi.target().clone(), f.target().clone(), comps);
    Some(g)
}

/// `g` with `mono ∘ g = f`, when `f` lands inside the image of `mono`.
pub fn factor_through_mono(f: &CMorphism, mono: &CMorphism) -> Option<CMorphism> {
    let comps = f
        .components()
        .iter()
        .zip(mono.components())
        .map(|(a, i)| Matrix::factor_through_mono(a, i))
        .collect::<Option<Vec<_>>>()?;
    Some(CMorphism::new_unchecked(
        f.source().clone(),
        mono.source().clone(),
        comps,
    ))
}

/// Whether two epimorphisms out of the same object have the same kernel at
/// every site, i.e. present isomorphic quotients compatibly.
pub fn same_quotient(p: &CMorphism, q: &CMorphism) -> bool {
    p.source().dims() == q.source().dims()
        && p.is_epi()
        && q.is_epi()
        && p.components()
            .iter()
            .zip(q.components())
            .all(|(a, b)| a.kernel_basis().same_span(&b.kernel_basis()))
}

/// The isomorphism `h` with `h ∘ p = q`, when [`same_quotient`] holds.
pub fn comparison_iso(p: &CMorphism, q: &CMorphism) -> Option<CMorphism> {
    if !same_quotient(p, q) {
        return None;
    }
    let h = factor_through_epi(q, p)?;
    h.is_iso().then_some(h)
}

/// Basis of the space of all morphisms `x -> y`. For presheaves this is the
/// solution space of the commuting-square equations.
pub fn hom_space(x: &CObject, y: &CObject) -> Result<Vec<CMorphism>> {
    same_instance(x, y)?;
    let inst = x.instance();
    let field = x.field();
    let sites = inst.sites();
    let mut offsets = Vec::with_capacity(sites);
    let mut total = 0;
    for s in 0..sites {
        offsets.push(total);
        total += y.dim(s) * x.dim(s);
    }
    // Unknown (s, a, b) is entry (a, b) of the component at site s.
    let var = |s: usize, a: usize, b: usize| offsets[s] + a * x.dim(s) + b;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for &(v, u) in inst.pairs() {
        let ry = y.restriction(v, u);
        let rx = x.restriction(v, u);
        for a in 0..y.dim(v) {
            for b in 0..x.dim(u) {
                let mut row = vec![field.zero(); total];
                // (ry * F_u)[a][b] - (F_v * rx)[a][b]
                for c in 0..y.dim(u) {
                    let coef = ry.get(a, c);
                    if !coef.is_zero() {
                        let k = var(u, c, b);
                        row[k] = &row[k] + coef;
                    }
                }
                for d in 0..x.dim(v) {
                    let coef = rx.get(d, b);
                    if !coef.is_zero() {
                        let k = var(v, a, d);
                        row[k] = &row[k] - coef;
                    }
                }
                if row.iter().any(|z| !z.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(field, 0, total)
    } else {
        Matrix::from_rows(field, rows)?
    };
    let kernel = system.kernel_basis();
    Ok((0..kernel.cols())
        .map(|j| CMorphism::from_flat(x, y, &kernel.column(j)))
        .collect())
}

/// Linear combination `Σ c_i b_i` of parallel morphisms.
pub fn combine(source: &CObject, target: &CObject, basis: &[CMorphism], coeffs: &[Scalar]) -> CMorphism {
    assert_eq!(basis.len(), coeffs.len());
    let mut acc = CMorphism::zero(source, target);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Coordinates of `m` against a linearly independent family of parallel
/// morphisms, if `m` lies in their span.
pub fn coords_in(basis: &[CMorphism], m: &CMorphism) -> Option<Vec<Scalar>> {
    let field = m.field();
    let len = m.flatten().len();
    if basis.is_empty() {
        return m.is_zero().then(Vec::new);
    }
    let cols: Vec<Vec<Scalar>> = basis.iter().map(CMorphism::flatten).collect();
    let a = Matrix::from_columns(field, len, &cols);
    a.solve_vec(&m.flatten())
}

/// Sub-basis of `span(basis)` cut out by a linear constraint: returns a
/// basis of `{ Σ c_i b_i : constraint(Σ c_i b_i) = 0 }`, where `constraint`
/// maps each morphism to a vector and must be linear.
pub fn cut_by_linear_constraint(
    source: &CObject,
    target: &CObject,
    basis: &[CMorphism],
    constraint: impl Fn(&CMorphism) -> Vec<Scalar>,
) -> Vec<CMorphism> {
    if basis.is_empty() {
        return Vec::new();
    }
    let field = source.field();
    let cols: Vec<Vec<Scalar>> = basis.iter().map(&constraint).collect();
    let len = cols[0].len();
    let a = Matrix::from_columns(field, len, &cols);
    let kernel = a.kernel_basis();
    (0..kernel.cols())
        .map(|j| combine(source, target, basis, &kernel.column(j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{CatInstance, FiniteSpace};
    use crate::linalg::Field;

    const Q: Field = Field::Rational;

    fn sierpinski_obj(dx: usize, du: usize, res_ux: Matrix) -> CObject {
        let inst = CatInstance::presheaf(Q, FiniteSpace::sierpinski());
        let mut res = BTreeMap::new();
        res.insert((1, 2), res_ux);
        CObject::new(inst, vec![0, du, dx], res).unwrap()
    }

    #[test]
    fn tensor_with_unit_is_identity_coherent() {
        let inst = CatInstance::finvect(Q);
        let y = CObject::finvect(inst.clone(), 3);
        let one = CObject::unit(&inst);
        let t = tensor(&one, &y).unwrap();
        assert_eq!(t.dims(), y.dims());
        assert!(left_unitor(&y).is_iso());
        let two = CObject::finvect(inst.clone(), 2);
        assert_eq!(tensor(&two, &y).unwrap().dims(), &[6]);
    }

    #[test]
    fn sierpinski_tensor_multiplies_restrictions() {
        let a = sierpinski_obj(1, 1, Matrix::from_ints(Q, &[&[3]]));
        let t = tensor(&a, &a).unwrap();
        assert_eq!(t.dims(), &[0, 1, 1]);
        assert_eq!(t.restriction(1, 2), Matrix::from_ints(Q, &[&[9]]));
        // The empty open receives the zero map.
        assert_eq!(t.restriction(0, 2).shape(), (0, 1));
    }

    #[test]
    fn kernel_and_cokernel_examples() {
        let inst = CatInstance::finvect(Q);
        let x = CObject::finvect(inst.clone(), 2);
        let (k, _) = kernel(&CMorphism::identity(&x));
        assert!(k.is_zero());
        let y = CObject::finvect(inst, 3);
        let (c, pi) = cokernel(&CMorphism::zero(&x, &y));
        assert_eq!(c.dims(), y.dims());
        assert!(pi.is_iso());

        // f(X) = 0 on a 1-dimensional X-section, f(U) = identity.
        let m = sierpinski_obj(1, 1, Matrix::from_ints(Q, &[&[0]]));
        let target = sierpinski_obj(1, 1, Matrix::from_ints(Q, &[&[1]]));
        let f = CMorphism::new(
            m.clone(),
            target,
            vec![
                Matrix::zeros(Q, 0, 0),
                Matrix::identity(Q, 1),
                Matrix::zeros(Q, 1, 1),
            ],
        )
        .unwrap();
        let (k, iota) = kernel(&f);
        assert_eq!(k.dims(), &[0, 0, 1]);
        assert!(f.compose(&iota).is_zero());
        assert!(iota.is_mono());
    }

    #[test]
    fn unnatural_components_are_rejected() {
        let m = sierpinski_obj(1, 1, Matrix::from_ints(Q, &[&[1]]));
        let bad = CMorphism::new(
            m.clone(),
            m.clone(),
            vec![
                Matrix::zeros(Q, 0, 0),
                Matrix::zeros(Q, 1, 1),
                Matrix::identity(Q, 1),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn hom_space_dimensions() {
        let inst = CatInstance::finvect(Q);
        let one = CObject::unit(&inst);
        assert_eq!(hom_space(&one, &one).unwrap().len(), 1);
        let x = CObject::finvect(inst.clone(), 2);
        let y = CObject::finvect(inst, 3);
        assert_eq!(hom_space(&x, &y).unwrap().len(), 6);

        let pinst = CatInstance::presheaf(Q, FiniteSpace::sierpinski());
        let unit = CObject::unit(&pinst);
        let m = sierpinski_obj(2, 1, Matrix::from_ints(Q, &[&[1, 1]]));
        let homs = hom_space(&unit, &m).unwrap();
        assert_eq!(homs.len(), m.global_dim());
        assert!(homs.iter().all(CMorphism::is_natural));
    }

    #[test]
    fn swap_is_an_involution() {
        let inst = CatInstance::finvect(Q);
        let x = CObject::finvect(inst.clone(), 2);
        let y = CObject::finvect(inst, 3);
        let s = symmetry(&x, &y);
        let back = symmetry(&y, &x);
        assert_eq!(back.compose(&s), CMorphism::identity(&tensor(&x, &y).unwrap()));
    }

    #[test]
    fn biproduct_kernel_recovers_first_factor() {
        let a = sierpinski_obj(2, 1, Matrix::from_ints(Q, &[&[1, 0]]));
        let b = sierpinski_obj(1, 1, Matrix::from_ints(Q, &[&[2]]));
        let sum = direct_sum(&a, &b).unwrap();
        let (k, iota) = kernel(&sum.proj2);
        assert_eq!(k.dims(), a.dims());
        let back = sum.proj1.compose(&iota);
        assert!(back.is_iso());
        assert!(sum.proj1.compose(&sum.inj1).is_iso());
    }
}
