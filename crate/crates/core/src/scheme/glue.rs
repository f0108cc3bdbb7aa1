//! Schemes glued from affine charts along principal opens, quasi-coherent
//! ideal sheaves, closed subschemes and local rings along them.

use crate::category::{comparison_iso, factor_through_epi, same_quotient, CMorphism};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::localization::{certify_localization, localize_element, localize_multset, LocalizationResult, MultSet};
use crate::monoid::{
    e_of_morphism, tensor_over_a, unit_into_tensor, EndElement, EndRing, ModuleObject, MonoidMorphism,
    MonoidObject,
};
use crate::quotient::{
    base_change_quotient, chain_stabilization_check, quotient_ideal, quotient_sequence, BaseChangeReport,
    IdealHandle, QuotientResult, StabilizationReport,
};
use crate::ring::{Elem, StructureRing};

use super::{is_integral, small_ring_elements, AffineScheme};

/// Gluing data for charts `i < j`: the overlap is `D(t_ij) ⊆ Spec(A_i)`,
/// identified with `D(t_ji) ⊆ Spec(A_j)` by a monoid isomorphism
/// `(A_i)_{t_ij} -> (A_j)_{t_ji}` given in the canonical bases of the two
/// localizations.
#[derive(Clone, Debug)]
pub struct OverlapSpec {
    pub i: usize,
    pub j: usize,
    pub t_ij: EndElement,
    pub t_ji: EndElement,
    pub transition: Vec<Matrix>,
}

#[derive(Clone, Debug)]
pub struct Overlap {
    pub i: usize,
    pub j: usize,
    pub from_i: LocalizationResult,
    pub from_j: LocalizationResult,
    pub phi: MonoidMorphism,
    /// `ℰ(φ)`.
    pub e_phi: Matrix,
}

#[derive(Clone, Debug)]
pub struct GluedScheme {
    pub charts: Vec<AffineScheme>,
    pub overlaps: Vec<Overlap>,
    pub triples_checked: usize,
    /// Dimension of the global functions: compatible families in `∏ ℰ(A_i)`.
    pub global_dim: usize,
}

/// Validates gluing data. `Ok(Err(reason))` means the data was well formed
/// but does not define a scheme (non-isomorphic transition, cocycle
/// failure); `Err` is malformed input.
pub fn glue_check(
    charts: &[MonoidObject],
    overlaps: &[OverlapSpec],
) -> Result<std::result::Result<GluedScheme, String>> {
    let schemes = charts.iter().map(AffineScheme::new).collect::<Result<Vec<_>>>()?;
    let mut built: Vec<Overlap> = Vec::with_capacity(overlaps.len());
    for o in overlaps {
        if o.i >= o.j || o.j >= charts.len() {
            return Err(Error::input(format!("overlap ({}, {}) must name charts i < j", o.i, o.j)));
        }
        if built.iter().any(|b| (b.i, b.j) == (o.i, o.j)) {
            return Err(Error::input(format!("overlap ({}, {}) given twice", o.i, o.j)));
        }
        let (ei, ej) = (&schemes[o.i].ring, &schemes[o.j].ring);
        let from_i = localize_element(ei, &ei.element(o.t_ij.0.clone())?)?;
        let from_j = localize_element(ej, &ej.element(o.t_ji.0.clone())?)?;
        for l in [&from_i, &from_j] {
            certify_localization(l)?;
        }
        let map = CMorphism::new(
            from_i.localized().carrier().clone(),
            from_j.localized().carrier().clone(),
            o.transition.clone(),
        )
        .map_err(|e| Error::input(format!("transition ({}, {}): {e}", o.i, o.j)))?;
        let phi = match MonoidMorphism::new(from_i.localized().clone(), from_j.localized().clone(), map) {
            Ok(phi) => phi,
            Err(e) => return Ok(Err(format!("transition ({}, {}): {e}", o.i, o.j))),
        };
        if !phi.is_iso() {
            return Ok(Err(format!("transition ({}, {}) is not an isomorphism", o.i, o.j)));
        }
        let e_phi = e_of_morphism(&phi, &from_i.target_ring, &from_j.target_ring)?;
        built.push(Overlap {
            i: o.i,
            j: o.j,
            from_i,
            from_j,
            phi,
            e_phi,
        });
    }
    let find = |a: usize, b: usize| built.iter().find(|o| (o.i, o.j) == (a, b));
    let n = charts.len();
    let mut triples = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (Some(ij), Some(jk), Some(ik)) = (find(i, j), find(j, k), find(i, k)) else {
                    continue;
                };
                triples += 1;
                if let Some(reason) = cocycle_failure(&schemes, ij, jk, ik)? {
                    return Ok(Err(format!("triple ({i}, {j}, {k}): {reason}")));
                }
            }
        }
    }
    let global_dim = global_sections_dim(&schemes, &built);
    Ok(Ok(GluedScheme {
        charts: schemes,
        overlaps: built,
        triples_checked: triples,
        global_dim,
    }))
}

/// [`glue_check`] with rejections turned into input errors.
pub fn build_glued(charts: &[MonoidObject], overlaps: &[OverlapSpec]) -> Result<GluedScheme> {
    glue_check(charts, overlaps)?.map_err(Error::input)
}

/// `A_c -> (A_c)_{ab}` through `(A_c)_a`, i.e. the projection from the
/// overlap localization onto the triple overlap.
fn onto_triple(e: &EndRing, pair: &LocalizationResult, other: &EndElement) -> Result<(CMorphism, MonoidObject)> {
    let triple = localize_element(e, &e.mul(&pair.element, other))?;
    let r = factor_through_epi(triple.structure.map(), pair.structure.map())
        .ok_or_else(|| Error::self_test("triple overlap is not a quotient of the overlap"))?;
    Ok((r, triple.localized().clone()))
}

/// The transition `φ` descended to triple overlaps, if it respects them.
fn descend_transition(
    phi: &CMorphism,
    r_source: &CMorphism,
    r_target: &CMorphism,
) -> Option<CMorphism> {
    let psi = factor_through_epi(&r_target.compose(phi), r_source)?;
    psi.is_iso().then_some(psi)
}

fn cocycle_failure(schemes: &[AffineScheme], ij: &Overlap, jk: &Overlap, ik: &Overlap) -> Result<Option<String>> {
    let (i, j, k) = (ij.i, ij.j, jk.j);
    let (ei, ej, ek) = (&schemes[i].ring, &schemes[j].ring, &schemes[k].ring);
    // Triple overlap seen from each chart, as quotients of the pair overlaps.
    let (r_ij, _) = onto_triple(ei, &ij.from_i, &ik.from_i.element)?;
    let (r_ik, _) = onto_triple(ei, &ik.from_i, &ij.from_i.element)?;
    let (r_ji, _) = onto_triple(ej, &ij.from_j, &jk.from_i.element)?;
    let (r_jk, _) = onto_triple(ej, &jk.from_i, &ij.from_j.element)?;
    let (r_ki, _) = onto_triple(ek, &ik.from_j, &jk.from_j.element)?;
    let (r_kj, _) = onto_triple(ek, &jk.from_j, &ik.from_j.element)?;
    let Some(psi_ij) = descend_transition(ij.phi.map(), &r_ij, &r_ji) else {
        return Ok(Some(format!("transition ({i}, {j}) does not match the triple overlaps")));
    };
    let Some(psi_jk) = descend_transition(jk.phi.map(), &r_jk, &r_kj) else {
        return Ok(Some(format!("transition ({j}, {k}) does not match the triple overlaps")));
    };
    let Some(psi_ik) = descend_transition(ik.phi.map(), &r_ik, &r_ki) else {
        return Ok(Some(format!("transition ({i}, {k}) does not match the triple overlaps")));
    };
    // The two presentations of each triple overlap are canonically equal
    // as quotients of the chart, so compare via the chart projections.
    let same = psi_jk.compose(&psi_ij).components() == psi_ik.components();
    Ok((!same).then(|| "cocycle identity fails".to_string()))
}

fn global_sections_dim(schemes: &[AffineScheme], overlaps: &[Overlap]) -> usize {
    let dims: Vec<usize> = schemes.iter().map(|s| s.ring.dim()).collect();
    let total: usize = dims.iter().sum();
    let offset = |c: usize| dims[..c].iter().sum::<usize>();
    let field = schemes
        .first()
        .map(|s| s.ring.field())
        .unwrap_or(crate::linalg::Field::Rational);
    let mut rows: Option<Matrix> = None;
    for o in overlaps {
        let left = o.e_phi.mul(&o.from_i.ring_map);
        let right = o.from_j.ring_map.clone();
        let h = left.rows();
        let mut block = Matrix::zeros(field, h, total);
        for r in 0..h {
            for c in 0..dims[o.i] {
                block.set(r, offset(o.i) + c, left.get(r, c).clone());
            }
            for c in 0..dims[o.j] {
                block.set(r, offset(o.j) + c, -right.get(r, c));
            }
        }
        rows = Some(match rows {
            None => block,
            Some(m) => m.vstack(&block),
        });
    }
    match rows {
        None => total,
        Some(m) => total - m.rank(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapCheck {
    pub i: usize,
    pub j: usize,
    pub pass: bool,
}

/// Ideals `𝒥_i ⊆ ℰ(A_i)` agreeing on overlaps: the extension of `𝒥_i` to
/// `ℰ((A_i)_{t_ij})`, carried across `ℰ(φ)`, equals the extension of `𝒥_j`.
#[derive(Clone, Debug)]
pub struct QcIdealSheaf {
    pub ideals: Vec<IdealHandle>,
    pub checks: Vec<OverlapCheck>,
    pub valid: bool,
}

impl QcIdealSheaf {
    pub fn new(x: &GluedScheme, generators: Vec<Vec<EndElement>>) -> Result<QcIdealSheaf> {
        if generators.len() != x.charts.len() {
            return Err(Error::input("one generator list per chart is required"));
        }
        let ideals = x
            .charts
            .iter()
            .zip(generators)
            .map(|(c, g)| IdealHandle::new(&c.ring, g))
            .collect::<Result<Vec<_>>>()?;
        let checks: Vec<OverlapCheck> = x
            .overlaps
            .iter()
            .map(|o| {
                let ext_i = extend(&o.from_i, &ideals[o.i]);
                let ext_j = extend(&o.from_j, &ideals[o.j]);
                let carried = o.e_phi.mul(&ext_i).column_space();
                OverlapCheck {
                    i: o.i,
                    j: o.j,
                    pass: carried.same_span(&ext_j),
                }
            })
            .collect();
        let valid = checks.iter().all(|c| c.pass);
        Ok(QcIdealSheaf { ideals, checks, valid })
    }
}

fn extended_generators(l: &LocalizationResult, j: &IdealHandle) -> Vec<EndElement> {
    j.generators.iter().map(|g| l.image(g)).collect()
}

/// The ideal of `ℰ(A_t)` generated by the image of `𝒥`.
fn extend(l: &LocalizationResult, j: &IdealHandle) -> Matrix {
    let gens: Vec<Elem> = extended_generators(l, j).into_iter().map(|g| g.0).collect();
    l.target_ring.ring().ideal(&gens)
}

#[derive(Clone, Debug)]
pub struct ClosedSubscheme {
    pub quotients: Vec<QuotientResult>,
    /// `Y` glued from the quotient charts with the induced transitions.
    pub glued: GluedScheme,
    pub base_change: Vec<BaseChangeReport>,
    pub stabilization: Vec<StabilizationReport>,
    pub empty: bool,
}

/// `Y_𝒥`: chart-wise quotients `A_i/𝒥_i` glued along the induced
/// transitions.
pub fn closed_subscheme(x: &GluedScheme, j: &QcIdealSheaf) -> Result<ClosedSubscheme> {
    if !j.valid {
        let bad = j.checks.iter().find(|c| !c.pass).expect("invalid sheaf has a failing overlap");
        return Err(Error::input(format!(
            "ideals disagree on the overlap of charts {} and {}",
            bad.i, bad.j
        )));
    }
    let quotients = x
        .charts
        .iter()
        .zip(&j.ideals)
        .map(|(c, ideal)| quotient_ideal(&c.ring, ideal, None))
        .collect::<Result<Vec<_>>>()?;
    let mut base_change = Vec::new();
    let mut specs = Vec::new();
    for o in &x.overlaps {
        base_change.push(base_change_quotient(&quotients[o.i], &o.from_i.structure)?);
        base_change.push(base_change_quotient(&quotients[o.j], &o.from_j.structure)?);
        let (qi, qj) = (&quotients[o.i], &quotients[o.j]);
        // Overlap of Y from each side, in the canonical basis of (A/𝒥)_t.
        let ti = qi.image(&o.from_i.element);
        let tj = qj.image(&o.from_j.element);
        let (hi, quot_i) = overlap_comparison(qi, &o.from_i, &j.ideals[o.i], &ti)?;
        let (hj, quot_j) = overlap_comparison(qj, &o.from_j, &j.ideals[o.j], &tj)?;
        let phi_bar = factor_through_epi(
            &quot_j.projection.map().compose(o.phi.map()),
            quot_i.projection.map(),
        )
        .ok_or_else(|| Error::self_test("transition does not descend to the closed subscheme"))?;
        let hj_inv = hj
            .inverse()
            .ok_or_else(|| Error::self_test("overlap comparison is not invertible"))?;
        let transition = hj_inv.compose(&phi_bar).compose(&hi);
        specs.push(OverlapSpec {
            i: o.i,
            j: o.j,
            t_ij: ti,
            t_ji: tj,
            transition: transition.components().to_vec(),
        });
    }
    let monoids: Vec<MonoidObject> = quotients.iter().map(|q| q.quotient().clone()).collect();
    let glued = glue_check(&monoids, &specs)?
        .map_err(|reason| Error::self_test(format!("closed subscheme does not glue: {reason}")))?;
    let stabilization = quotients
        .iter()
        .map(|q| chain_stabilization_check(&q.target_ring, &basis_prefix_chain(&q.target_ring)))
        .collect::<Result<Vec<_>>>()?;
    let empty = monoids.iter().all(MonoidObject::is_zero);
    Ok(ClosedSubscheme {
        quotients,
        glued,
        base_change,
        stabilization,
        empty,
    })
}

/// The isomorphism `(A/𝒥)_t -> (A_t)/𝒥'` over `A`, and the quotient
/// `(A_t) -> (A_t)/𝒥'`.
fn overlap_comparison(
    q: &QuotientResult,
    l: &LocalizationResult,
    ideal: &IdealHandle,
    t_bar: &EndElement,
) -> Result<(CMorphism, QuotientResult)> {
    let y_side = localize_element(&q.target_ring, t_bar)?;
    let p1 = y_side.structure.map().compose(q.projection.map());
    let quot = quotient_sequence(&l.target_ring, &extended_generators(l, ideal))?;
    let p2 = quot.projection.map().compose(l.structure.map());
    let h = comparison_iso(&p1, &p2)
        .ok_or_else(|| Error::self_test("(A/𝒥)_t and A_t/𝒥' are different quotients of A"))?;
    Ok((h, quot))
}

/// `b_0 A ⊆ (b_0, b_1) A ⊆ ... ⊆ A` for the basis of `ℰ(A)`.
fn basis_prefix_chain(e: &EndRing) -> Vec<CMorphism> {
    let a = e.monoid().carrier();
    let mut chain = Vec::with_capacity(e.dim() + 1);
    for k in 1..=e.dim() {
        let gens: Vec<Elem> = (0..k).map(|i| e.basis_element(i).0).collect();
        let ideal = e.ring().ideal(&gens);
        let images: Vec<CMorphism> = (0..ideal.cols())
            .map(|c| e.endomorphism(&EndElement(ideal.column(c))))
            .collect();
        // The submodule generated is the joint image of the multiplications.
        let subs: Vec<Matrix> = (0..a.dims().len())
            .map(|s| {
                let mut m = Matrix::zeros(e.field(), a.dim(s), 0);
                for f in &images {
                    m = m.hstack(f.component(s));
                }
                m.column_space()
            })
            .collect();
        chain.push(inclusion_of(a, &subs));
    }
    chain.push(CMorphism::identity(a));
    chain
}

fn inclusion_of(a: &crate::category::CObject, subs: &[Matrix]) -> CMorphism {
    let (_, proj) = crate::category::quotient_by(a, subs);
    crate::category::kernel(&proj).1
}

#[derive(Clone, Debug)]
pub struct QcReport {
    pub overlaps: Vec<OverlapCheck>,
    pub pass: bool,
}

/// Chart-wise algebras `g_i: A_i -> B_i` (quotients of the charts) define
/// a quasi-coherent sheaf of algebras iff `B_i ⊗_{A_i} (A_i)_{t_ij}` and
/// `B_j ⊗_{A_j} (A_j)_{t_ji}` agree across each transition.
pub fn qc_algebra_sheaf_check(x: &GluedScheme, algebras: &[MonoidMorphism]) -> Result<QcReport> {
    if algebras.len() != x.charts.len() {
        return Err(Error::input("one algebra per chart is required"));
    }
    for (c, g) in x.charts.iter().zip(algebras) {
        if g.source() != c.monoid() {
            return Err(Error::input("algebra structure map does not start at its chart"));
        }
        if !g.map().is_epi() {
            return Err(Error::input(
                "only quotient algebras are supported: transitions are derived from the charts",
            ));
        }
    }
    let base_change = |g: &MonoidMorphism, l: &LocalizationResult| -> Result<CMorphism> {
        let b = ModuleObject::restrict_along(g, &ModuleObject::regular(g.target()))?;
        let rt = tensor_over_a(&l.as_module(), &b)?;
        // (A)_t -> A_t ⊗_A B, a ↦ a ⊗ 1, read on the localization.
        let into = unit_into_tensor(&l.as_module(), g.target().unit(), &rt);
        Ok(into)
    };
    let mut checks = Vec::with_capacity(x.overlaps.len());
    for o in &x.overlaps {
        let ui = base_change(&algebras[o.i], &o.from_i)?;
        let uj = base_change(&algebras[o.j], &o.from_j)?;
        let pass = same_quotient(&ui, &uj.compose(o.phi.map()));
        checks.push(OverlapCheck { i: o.i, j: o.j, pass });
    }
    Ok(QcReport {
        pass: checks.iter().all(|c| c.pass),
        overlaps: checks,
    })
}

#[derive(Clone, Debug)]
pub struct LocalRingResult {
    pub chart: usize,
    pub ring: StructureRing,
    /// Basis of `𝔪` (columns).
    pub maximal: Matrix,
    pub maximal_nilpotency: usize,
    pub residue: StructureRing,
    pub residue_map: Matrix,
    /// Elements outside `𝔪` whose inverses were verified.
    pub units_verified: usize,
    /// The germ construction over principal opens `D(s)`, `s ∉ 𝒥`, gave the
    /// same ring.
    pub pairs_agree: bool,
    /// Agreement with the local ring computed on another chart, when an
    /// overlap meets `Y`.
    pub chart_independent: Option<bool>,
}

/// `O_{X,Y}`: `ℰ(A_i)` localized at the prime `𝒥_i` on a chart meeting `Y`.
pub fn local_ring_at(x: &GluedScheme, y: &ClosedSubscheme) -> Result<LocalRingResult> {
    if y.empty {
        return Err(Error::input("Y is empty"));
    }
    for q in &y.quotients {
        if !q.quotient().is_zero() && !is_integral(&q.target_ring)?.integral {
            return Err(Error::input("Y is not integral"));
        }
    }
    // Irreducible: any two charts meeting Y meet inside Y.
    let live: Vec<usize> = (0..y.quotients.len()).filter(|&c| !y.quotients[c].quotient().is_zero()).collect();
    for (a, &c) in live.iter().enumerate() {
        for &d in &live[a + 1..] {
            let meets = y
                .glued
                .overlaps
                .iter()
                .any(|o| (o.i, o.j) == (c, d) && !o.from_i.localized().is_zero());
            if !meets {
                return Err(Error::input(format!(
                    "Y is not integral: its pieces on charts {c} and {d} are disjoint"
                )));
            }
        }
    }
    let chart = y
        .quotients
        .iter()
        .position(|q| !q.quotient().is_zero())
        .expect("nonempty Y meets a chart");
    let r = x.charts[chart].ring.ring();
    let prime = y.quotients[chart].ring_map.kernel_basis();
    let local = r.localize_at_prime(&prime);
    let ring = local.ring.clone();
    let (residue, residue_map) = ring.quotient(&local.maximal);
    if !residue.decide_domain().is_domain() {
        return Err(Error::self_test("residue ring of O_Y is not a field"));
    }
    let units_verified = verify_units(&ring, &local.maximal)?;
    let pairs_agree = pairs_construction_agrees(&x.charts[chart].ring, &prime, &local.projection)?;
    let chart_independent = match x.overlaps.iter().find(|o| {
        (o.i == chart || o.j == chart) && !y.quotients[o.i].quotient().is_zero() && !y.quotients[o.j].quotient().is_zero()
    }) {
        None => None,
        Some(o) => Some(same_local_ring_across(o, y)?),
    };
    if chart_independent == Some(false) {
        return Err(Error::self_test("local ring along Y depends on the chart"));
    }
    Ok(LocalRingResult {
        chart,
        maximal_nilpotency: local.maximal_nilpotency,
        maximal: local.maximal,
        ring,
        residue,
        residue_map,
        units_verified,
        pairs_agree,
        chart_independent,
    })
}

/// Every element outside `𝔪` is a unit: exhaustively when the ring is small
/// and finite, otherwise on the basis and `1 + m` for `m` in a basis of `𝔪`.
fn verify_units(ring: &StructureRing, maximal: &Matrix) -> Result<usize> {
    let candidates: Vec<Elem> = match small_ring_elements(ring) {
        Some(all) => all,
        None => {
            let mut c: Vec<Elem> = (0..ring.dim()).map(|i| ring.basis_vector(i)).collect();
            c.extend((0..maximal.cols()).map(|k| ring.add(&ring.one(), &maximal.column(k))));
            c
        }
    };
    let mut count = 0;
    for x in candidates {
        if StructureRing::ideal_contains(maximal, &x) {
            continue;
        }
        if !ring.is_unit(&x) {
            return Err(Error::self_test("an element outside the maximal ideal of O_Y is not a unit"));
        }
        count += 1;
    }
    Ok(count)
}

/// Germs over principal opens `D(s)` with `s ∉ P`: localize at enough such
/// `s` and compare kernels out of `ℰ(A)`.
fn pairs_construction_agrees(e: &EndRing, prime: &Matrix, projection: &Matrix) -> Result<bool> {
    let r = e.ring();
    let mut family: Vec<Elem> = match small_ring_elements(r) {
        Some(all) => all,
        None => {
            let basis: Vec<Elem> = (0..r.dim()).map(|i| r.basis_vector(i)).collect();
            let mut f = basis.clone();
            for (a, x) in basis.iter().enumerate() {
                for y in &basis[a + 1..] {
                    f.push(r.add(x, y));
                }
            }
            f.push(r.one());
            f
        }
    };
    family.retain(|s| !StructureRing::ideal_contains(prime, s));
    let s = MultSet::new(family.into_iter().map(EndElement).collect());
    let l = localize_multset(e, &s)?;
    Ok(l.ring_map.kernel_basis().same_span(&projection.kernel_basis()))
}

/// Local rings from the two sides of an overlap meeting `Y` have the same
/// dimension, maximal ideal dimension, and correspond under `ℰ(φ)`.
fn same_local_ring_across(o: &Overlap, y: &ClosedSubscheme) -> Result<bool> {
    let side = |l: &LocalizationResult, q: &QuotientResult| -> Result<(Matrix, crate::ring::LocalAtPrime)> {
        let p = q.ring_map.kernel_basis();
        let ext = l.ring_map.mul(&p).column_space();
        let ext = l.target_ring.ring().ideal(&(0..ext.cols()).map(|c| ext.column(c)).collect::<Vec<_>>());
        let global = q.source_ring.ring().localize_at_prime(&p);
        let on_overlap = l.target_ring.ring().localize_at_prime(&ext);
        // Localizing further at t (outside P) does not change R_P.
        let through = on_overlap.projection.mul(&l.ring_map);
        if !through.kernel_basis().same_span(&global.projection.kernel_basis()) {
            return Err(Error::self_test("O_Y changes on a principal open meeting Y"));
        }
        Ok((ext, on_overlap))
    };
    let (ext_i, li) = side(&o.from_i, &y.quotients[o.i])?;
    let (ext_j, lj) = side(&o.from_j, &y.quotients[o.j])?;
    let carried = o.e_phi.mul(&ext_i).column_space();
    Ok(carried.same_span(&ext_j)
        && li.ring.dim() == lj.ring.dim()
        && li.maximal.cols() == lj.maximal.cols())
}
