//! Quotient monoids `A/tA`, `A/(t_1, ..., t_k)A` and `A/𝒥` for finitely
//! generated ideals `𝒥 ⊆ ℰ(A)`.

use serde::Serialize;

use crate::category::{cokernel, factor_through_mono, same_quotient, tensor_mor, CMorphism};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::localization::certify_open_immersion;
use crate::monoid::{
    cokernel_module, e_of_morphism, tensor_over_a, unit_into_tensor, EndElement, EndRing, ModuleMorphism,
    ModuleObject, MonoidMorphism, MonoidObject,
};

#[cfg(test)]
mod tests;

/// A finitely generated ideal of `ℰ(A)`. No generators means the zero ideal.
#[derive(Clone, Debug)]
pub struct IdealHandle {
    pub ring: EndRing,
    pub generators: Vec<EndElement>,
    pub proper: bool,
}

impl IdealHandle {
    pub fn new(ring: &EndRing, generators: Vec<EndElement>) -> Result<IdealHandle> {
        for g in &generators {
            ring.element(g.coords().to_vec())?;
        }
        let gens: Vec<_> = generators.iter().map(|g| g.0.clone()).collect();
        let proper = ring.ring().express(&gens, &ring.ring().one()).is_none();
        Ok(IdealHandle {
            ring: ring.clone(),
            generators,
            proper,
        })
    }

    /// Canonical basis of the ideal as a subspace of `ℰ(A)`.
    pub fn span(&self) -> Matrix {
        let gens: Vec<_> = self.generators.iter().map(|g| g.0.clone()).collect();
        self.ring.ring().ideal(&gens)
    }

    pub fn contains(&self, x: &EndElement) -> bool {
        let gens: Vec<_> = self.generators.iter().map(|g| g.0.clone()).collect();
        self.ring.ring().express(&gens, x.coords()).is_some()
    }

    /// Membership of each generator of one in the other, both ways.
    pub fn same_ideal(&self, other: &IdealHandle) -> bool {
        other.generators.iter().all(|g| self.contains(g)) && self.generators.iter().all(|g| other.contains(g))
    }
}

#[derive(Clone, Debug)]
pub struct QuotientResult {
    /// `p: A -> A/𝒥`.
    pub projection: MonoidMorphism,
    pub generators: Vec<EndElement>,
    pub source_ring: EndRing,
    pub target_ring: EndRing,
    /// `ℰ(p)`, surjective with kernel `𝒥`.
    pub ring_map: Matrix,
}

impl QuotientResult {
    pub fn source(&self) -> &MonoidObject {
        self.projection.source()
    }

    pub fn quotient(&self) -> &MonoidObject {
        self.projection.target()
    }

    pub fn image(&self, x: &EndElement) -> EndElement {
        EndElement(self.ring_map.mul_vec(x.coords()))
    }

    /// `A/𝒥` as an `A`-module.
    pub fn as_module(&self) -> ModuleObject {
        ModuleObject::restrict_along(&self.projection, &ModuleObject::regular(self.quotient()))
            .expect("projection targets the quotient")
    }

    fn identity(e: &EndRing) -> QuotientResult {
        QuotientResult {
            projection: MonoidMorphism::identity(e.monoid()),
            generators: Vec::new(),
            source_ring: e.clone(),
            target_ring: e.clone(),
            ring_map: Matrix::identity(e.field(), e.dim()),
        }
    }
}

fn self_test(err: Error) -> Error {
    match err {
        Error::SelfTest(_) => err,
        other => Error::self_test(other.to_string()),
    }
}

/// `ℰ(A/𝒥) ≅ ℰ(A)/𝒥`: `ℰ(p)` is onto with kernel exactly `𝒥`.
fn check_e_compatibility(ring_map: &Matrix, ideal: &Matrix) -> Result<()> {
    if !ring_map.is_surjective() || !ring_map.kernel_basis().same_span(ideal) {
        return Err(Error::self_test("ℰ(A/𝒥) is not ℰ(A)/𝒥"));
    }
    Ok(())
}

fn descend_quotient(e: &EndRing, p: &CMorphism, generators: Vec<EndElement>) -> Result<QuotientResult> {
    let projection = e.monoid().descend(p).map_err(self_test)?;
    if !projection.target().check().pass {
        return Err(Error::self_test("quotient fails the monoid axioms"));
    }
    let target_ring = EndRing::new(projection.target()).map_err(self_test)?;
    let ring_map = e_of_morphism(&projection, e, &target_ring)?;
    Ok(QuotientResult {
        projection,
        generators,
        source_ring: e.clone(),
        target_ring,
        ring_map,
    })
}

/// `A/tA`, the cokernel of `t_A` with the descended monoid structure.
pub fn quotient_element(e: &EndRing, t: &EndElement) -> Result<QuotientResult> {
    let t = e.element(t.coords().to_vec())?;
    let (_, p) = cokernel(&e.endomorphism(&t));
    let q = descend_quotient(e, &p, vec![t.clone()])?;
    check_e_compatibility(&q.ring_map, &e.ring().ideal(&[t.0]))?;
    Ok(q)
}

/// `A/(t_1, ..., t_k)A` by iterated cokernels, checked against
/// `A/t_1A ⊗_A ... ⊗_A A/t_kA`.
pub fn quotient_sequence(e: &EndRing, ts: &[EndElement]) -> Result<QuotientResult> {
    let mut current = QuotientResult::identity(e);
    for t in ts {
        let t = e.element(t.coords().to_vec())?;
        let step = quotient_element(&current.target_ring, &current.image(&t))?;
        current = QuotientResult {
            projection: step.projection.compose(&current.projection)?,
            generators: current.generators.iter().cloned().chain([t]).collect(),
            source_ring: e.clone(),
            target_ring: step.target_ring,
            ring_map: step.ring_map.mul(&current.ring_map),
        };
    }
    let via_tensor = tensor_construction(e, ts)?;
    if !same_quotient(current.projection.map(), &via_tensor) {
        return Err(Error::self_test(
            "iterated quotient differs from the tensor product of the A/t_iA",
        ));
    }
    let gens: Vec<_> = ts.iter().map(|t| t.0.clone()).collect();
    check_e_compatibility(&current.ring_map, &e.ring().ideal(&gens))?;
    Ok(current)
}

/// The map `A -> A/t_1A ⊗_A ... ⊗_A A/t_kA`, `a ↦ a(1 ⊗ ... ⊗ 1)`.
fn tensor_construction(e: &EndRing, ts: &[EndElement]) -> Result<CMorphism> {
    let a = e.monoid();
    let reg = ModuleObject::regular(a);
    let mut module = reg.clone();
    let mut map = CMorphism::identity(a.carrier());
    for t in ts {
        let mul_t = ModuleMorphism::new(reg.clone(), reg.clone(), e.act_on(t, &reg)?)?;
        let (factor, proj) = cokernel_module(&mul_t);
        let one = proj.map().compose(a.unit());
        let rt = tensor_over_a(&module, &factor)?;
        map = unit_into_tensor(&module, &one, &rt).compose(&map);
        module = rt.module;
    }
    Ok(map)
}

/// `A/𝒥` through its generators, optionally cross-checked against a second
/// generating set of the same ideal.
pub fn quotient_ideal(e: &EndRing, j: &IdealHandle, alternative: Option<&IdealHandle>) -> Result<QuotientResult> {
    let q = quotient_sequence(e, &j.generators)?;
    if let Some(alt) = alternative {
        if !j.same_ideal(alt) {
            return Err(Error::input("the two generating sets span different ideals"));
        }
        let other = quotient_sequence(e, &alt.generators)?;
        if !same_quotient(q.projection.map(), other.projection.map()) {
            return Err(Error::self_test("quotient depends on the choice of generators"));
        }
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseChangeReport {
    /// `dim A/𝒥 ⊗_A A'`.
    pub tensor_dim: usize,
    /// `dim A'/𝒥'`.
    pub quotient_dim: usize,
    pub extended_ideal_dim: usize,
    pub iso: bool,
}

/// `A/𝒥 ⊗_A A' ≅ A'/𝒥'` for a certified open immersion `f: A -> A'`, with
/// `𝒥'` the extension of `𝒥` along `ℰ(f)`.
pub fn base_change_quotient(q: &QuotientResult, f: &MonoidMorphism) -> Result<BaseChangeReport> {
    if f.source() != q.source() {
        return Err(Error::input("open immersion does not start at the quotiented monoid"));
    }
    if !certify_open_immersion(f)?.positive {
        return Err(Error::input("morphism is not a certified open immersion"));
    }
    let e_target = EndRing::new(f.target())?;
    let ef = e_of_morphism(f, &q.source_ring, &e_target)?;
    let extended: Vec<EndElement> = q.generators.iter().map(|g| EndElement(ef.mul_vec(g.coords()))).collect();
    let rhs = quotient_sequence(&e_target, &extended)?;

    let a_prime = ModuleObject::restrict_along(f, &ModuleObject::regular(f.target()))?;
    let rt = tensor_over_a(&a_prime, &q.as_module())?;
    let one = q.projection.map().compose(q.source().unit());
    let lhs_map = unit_into_tensor(&a_prime, &one, &rt);
    let iso = same_quotient(&lhs_map, rhs.projection.map());
    if !iso {
        return Err(Error::self_test("A/𝒥 ⊗_A A' is not A'/𝒥'"));
    }
    let gens: Vec<_> = extended.iter().map(|g| g.0.clone()).collect();
    Ok(BaseChangeReport {
        tensor_dim: rt.module.carrier().total_dim(),
        quotient_dim: rhs.quotient().carrier().total_dim(),
        extended_ideal_dim: e_target.ring().ideal(&gens).cols(),
        iso,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub dims: Vec<usize>,
    pub index: usize,
    /// Dimensions of the ideals `Hom_A(A, M_i)` in `ℰ(A)`.
    pub ideal_dims: Vec<usize>,
    pub ideal_index: usize,
}

/// An ascending chain of submodules `M_0 ⊆ M_1 ⊆ ...` of `A`, given by
/// monomorphisms into `A`. Reports where it stabilizes.
pub fn chain_stabilization_check(e: &EndRing, chain: &[CMorphism]) -> Result<StabilizationReport> {
    let a = e.monoid();
    let id_a = CMorphism::identity(a.carrier());
    for (i, m) in chain.iter().enumerate() {
        if m.target().dims() != a.carrier().dims() || !m.is_mono() {
            return Err(Error::input(format!("chain entry {i} is not a monomorphism into A")));
        }
        let through = a.mult().compose(&tensor_mor(&id_a, m)?);
        if factor_through_mono(&through, m).is_none() {
            return Err(Error::input(format!("chain entry {i} is not a submodule of A")));
        }
        if i + 1 < chain.len() && factor_through_mono(m, &chain[i + 1]).is_none() {
            return Err(Error::input(format!("chain entry {i} does not factor through entry {}", i + 1)));
        }
    }
    let dims: Vec<usize> = chain.iter().map(|m| m.source().total_dim()).collect();
    let index = first_stable(&dims);
    if index > a.carrier().total_dim() {
        return Err(Error::self_test("submodule chain of A fails to stabilize by dim A"));
    }
    // t ∈ Hom_A(A, M_i) iff its global section lands in M_i(X).
    let sections = e.section_matrix();
    let top = a.instance().top();
    let ideal_dims: Vec<usize> = chain
        .iter()
        .map(|m| {
            let image = m.component(top).column_space();
            let to_quotient = Matrix::quotient_projection(&image);
            to_quotient.mul(&sections).kernel_basis().cols()
        })
        .collect();
    let ideal_index = first_stable(&ideal_dims);
    if ideal_index > index || ideal_dims.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::self_test("ideal chain in ℰ(A) does not stabilize with the submodules"));
    }
    Ok(StabilizationReport {
        dims,
        index,
        ideal_dims,
        ideal_index,
    })
}

fn first_stable(dims: &[usize]) -> usize {
    match dims.last() {
        None => 0,
        Some(last) => dims.iter().position(|d| d == last).unwrap_or(0),
    }
}
