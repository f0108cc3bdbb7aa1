//! Localization of monoids and modules at elements of `ℰ(A)`: the colimit of
//! `A -t-> A -t-> ...`, with epimorphism, flatness and conservativity checks.

use serde::Serialize;

use crate::category::{endo_chain_colimit, same_quotient, CMorphism};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::monoid::{
    cokernel_module, direct_sum_module, e_of_morphism, kernel_module, tensor_over_a, tensor_over_a_mor,
    unit_into_tensor, EndElement, EndRing, ModuleMorphism, ModuleObject, MonoidMorphism, MonoidObject,
};

#[cfg(test)]
mod tests;

/// A finitely generated multiplicative subset of `ℰ(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSet {
    pub generators: Vec<EndElement>,
    /// After saturation: `1`, the generators and their pairwise products.
    pub elements: Vec<EndElement>,
    pub saturated: bool,
}

impl MultSet {
    pub fn new(generators: Vec<EndElement>) -> MultSet {
        MultSet {
            elements: generators.clone(),
            generators,
            saturated: false,
        }
    }

    pub fn saturate(&self, e: &EndRing) -> MultSet {
        let mut elements = vec![e.one()];
        let mut push = |x: EndElement| {
            if !elements.contains(&x) {
                elements.push(x);
            }
        };
        for g in &self.generators {
            push(g.clone());
        }
        for (i, g) in self.generators.iter().enumerate() {
            for h in &self.generators[i..] {
                push(e.mul(g, h));
            }
        }
        MultSet {
            generators: self.generators.clone(),
            elements,
            saturated: true,
        }
    }

    /// The product of the generators (`1` when there are none).
    pub fn product(&self, e: &EndRing) -> EndElement {
        self.generators.iter().fold(e.one(), |acc, g| e.mul(&acc, g))
    }
}

#[derive(Clone, Debug)]
pub struct LocalizationResult {
    pub element: EndElement,
    /// `I_t : A -> A_t`; source and target are the two monoids.
    pub structure: MonoidMorphism,
    pub index: usize,
    pub source_ring: EndRing,
    pub target_ring: EndRing,
    /// `ℰ(I_t)` in the bases of the two endomorphism rings.
    pub ring_map: Matrix,
}

impl LocalizationResult {
    pub fn source(&self) -> &MonoidObject {
        self.structure.source()
    }

    pub fn localized(&self) -> &MonoidObject {
        self.structure.target()
    }

    /// `A_t` as an `A`-module by restriction of scalars.
    pub fn as_module(&self) -> ModuleObject {
        ModuleObject::restrict_along(&self.structure, &ModuleObject::regular(self.localized()))
            .expect("I_t targets the localized monoid")
    }

    /// `ℰ(I_t)(x)`.
    pub fn image(&self, x: &EndElement) -> EndElement {
        EndElement(self.ring_map.mul_vec(x.coords()))
    }
}

fn largest_site(a: &MonoidObject) -> usize {
    a.carrier().dims().iter().copied().max().unwrap_or(0)
}

/// `A_t`: the colimit of `t_A` with the multiplication and unit descended
/// along the canonical projection.
pub fn localize_element(e: &EndRing, t: &EndElement) -> Result<LocalizationResult> {
    let t = e.element(t.coords().to_vec())?;
    let a = e.monoid();
    let col = endo_chain_colimit(&e.endomorphism(&t))?;
    if col.index > largest_site(a) {
        return Err(Error::self_test(format!(
            "chain stabilized at {} beyond dim {}",
            col.index,
            largest_site(a)
        )));
    }
    let structure = a
        .descend(&col.projection)
        .map_err(|err| Error::self_test(format!("localized multiplication is not well defined: {err}")))?;
    let report = structure.target().check();
    if !report.pass {
        return Err(Error::self_test("localized object fails the monoid axioms"));
    }
    let target_ring = EndRing::new(structure.target()).map_err(as_self_test)?;
    let ring_map = e_of_morphism(&structure, e, &target_ring)?;
    let result = LocalizationResult {
        element: t,
        structure,
        index: col.index,
        source_ring: e.clone(),
        target_ring,
        ring_map,
    };
    let image = result.image(&result.element);
    if !result.target_ring.ring().is_unit(image.coords()) {
        return Err(Error::self_test("ℰ(I_t)(t) is not invertible in ℰ(A_t)"));
    }
    Ok(result)
}

fn as_self_test(err: Error) -> Error {
    match err {
        Error::SelfTest(_) => err,
        other => Error::self_test(other.to_string()),
    }
}

/// `A_S` through the product of the generators, cross-checked against
/// localizing one generator at a time.
pub fn localize_multset(e: &EndRing, s: &MultSet) -> Result<LocalizationResult> {
    let s = if s.saturated { s.clone() } else { s.saturate(e) };
    let direct = localize_element(e, &s.product(e))?;
    for g in &s.generators {
        if !direct.target_ring.ring().is_unit(direct.image(g).coords()) {
            return Err(Error::self_test("a generator is not inverted in A_S"));
        }
    }
    let mut current = localize_element(e, &e.one())?;
    let mut map = current.structure.map().clone();
    let mut on_e = current.ring_map.clone();
    for g in &s.generators {
        let next = localize_element(&current.target_ring, &EndElement(on_e.mul_vec(g.coords())))?;
        map = next.structure.map().compose(&map);
        on_e = next.ring_map.mul(&on_e);
        current = next;
    }
    if !same_quotient(direct.structure.map(), &map) {
        return Err(Error::self_test(
            "iterated localization disagrees with localization at the product",
        ));
    }
    Ok(direct)
}

/// `M_t = M ⊗_A A_t` with the canonical map `M -> M_t`.
#[derive(Clone, Debug)]
pub struct LocalizedModule {
    pub module: ModuleObject,
    pub map: CMorphism,
    pub index: usize,
}

/// `M ⊗_A A_t`, checked against the colimit of `t_M` on `M`.
pub fn localize_module(m: &ModuleObject, loc: &LocalizationResult) -> Result<LocalizedModule> {
    if m.base() != loc.source() {
        return Err(Error::input("module is not over the localized monoid's source"));
    }
    let rt = tensor_over_a(m, &loc.as_module())?;
    let map = unit_into_tensor(m, loc.localized().unit(), &rt);
    let t_m = loc.source_ring.act_on(&loc.element, m)?;
    let col = endo_chain_colimit(&t_m)?;
    if !same_quotient(&map, &col.projection) {
        return Err(Error::self_test(
            "M ⊗_A A_t differs from the colimit of multiplication by t",
        ));
    }
    Ok(LocalizedModule {
        module: rt.module,
        map,
        index: col.index,
    })
}

/// A short exact sequence `0 -> M' -f-> M -g-> M'' -> 0` of `A`-modules.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub first: ModuleMorphism,
    pub second: ModuleMorphism,
}

impl ShortExact {
    pub fn new(first: ModuleMorphism, second: ModuleMorphism) -> Result<ShortExact> {
        if first.target() != second.source() {
            return Err(Error::input("maps of the sequence do not compose"));
        }
        if !is_exact(first.map(), second.map()) {
            return Err(Error::input("sequence is not short exact"));
        }
        Ok(ShortExact { first, second })
    }

    /// `0 -> M' -> M -> coker f -> 0` for a monomorphism `f`.
    pub fn from_mono(f: ModuleMorphism) -> Result<ShortExact> {
        let (_, proj) = cokernel_module(&f);
        ShortExact::new(f, proj)
    }

    /// `0 -> ker g -> M -> M'' -> 0` for an epimorphism `g`.
    pub fn from_epi(g: ModuleMorphism) -> Result<ShortExact> {
        let (_, inc) = kernel_module(&g);
        ShortExact::new(inc, g)
    }

    pub fn dims(&self) -> [usize; 3] {
        [
            self.first.source().carrier().total_dim(),
            self.first.target().carrier().total_dim(),
            self.second.target().carrier().total_dim(),
        ]
    }
}

fn is_exact(f: &CMorphism, g: &CMorphism) -> bool {
    f.is_mono()
        && g.is_epi()
        && g.compose(f).is_zero()
        && (0..f.source().dims().len())
            .all(|s| f.source().dim(s) + g.target().dim(s) == f.target().dim(s))
}

/// `0 -> 0 -> A -> A -> 0`, `0 -> tA -> A -> A/tA -> 0` for each basis
/// element `t`, and `0 -> A -> A ⊕ A -> A -> 0`.
pub fn standard_probes(e: &EndRing) -> Result<Vec<ShortExact>> {
    let a = e.monoid();
    let reg = ModuleObject::regular(a);
    let id = ModuleMorphism::identity(&reg);
    let mut probes = vec![ShortExact::from_epi(id)?];
    for i in 0..e.dim() {
        let t = ModuleMorphism::new(reg.clone(), reg.clone(), e.act_on(&e.basis_element(i), &reg)?)?;
        let (_, proj) = cokernel_module(&t);
        probes.push(ShortExact::from_epi(proj)?);
    }
    let (_, i1, _) = direct_sum_module(&reg, &reg)?;
    probes.push(ShortExact::from_mono(i1)?);
    Ok(probes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    pub before: [usize; 3],
    pub after: [usize; 3],
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatReport {
    pub pass: bool,
    pub probes: Vec<ProbeResult>,
}

/// Applies `- ⊗_A B` (with `B` an `A`-module through `f`) to each probe and
/// checks exactness of the result.
pub fn flat_probe(f: &MonoidMorphism, probes: &[ShortExact]) -> Result<FlatReport> {
    let b = ModuleObject::restrict_along(f, &ModuleObject::regular(f.target()))?;
    let id_b = ModuleMorphism::identity(&b);
    let mut results = Vec::with_capacity(probes.len());
    for p in probes {
        if p.first.source().base() != f.source() {
            return Err(Error::input("probe is over a different monoid"));
        }
        let t0 = tensor_over_a(p.first.source(), &b)?;
        let t1 = tensor_over_a(p.first.target(), &b)?;
        let t2 = tensor_over_a(p.second.target(), &b)?;
        let f_b = tensor_over_a_mor(&p.first, &id_b, &t0, &t1)?;
        let g_b = tensor_over_a_mor(&p.second, &id_b, &t1, &t2)?;
        results.push(ProbeResult {
            before: p.dims(),
            after: [
                t0.module.carrier().total_dim(),
                t1.module.carrier().total_dim(),
                t2.module.carrier().total_dim(),
            ],
            exact: is_exact(f_b.map(), g_b.map()),
        });
    }
    Ok(FlatReport {
        pass: results.iter().all(|r| r.exact),
        probes: results,
    })
}

/// Flatness of a localization on the given probes; a failure contradicts the
/// theorem that localizations are flat.
pub fn verify_flat(l: &LocalizationResult, probes: &[ShortExact]) -> Result<FlatReport> {
    let report = flat_probe(&l.structure, probes)?;
    if !report.pass {
        return Err(Error::self_test("localization fails to preserve an exact sequence"));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpiReport {
    pub pass: bool,
    pub source_dim: usize,
    pub target_dim: usize,
    pub tensor_dim: usize,
}

/// `f: A -> B` is an epimorphism of monoids iff `B -> B ⊗_A B`, `b ↦ b ⊗ 1`,
/// is an isomorphism.
pub fn verify_epi(f: &MonoidMorphism) -> Result<EpiReport> {
    let b = ModuleObject::restrict_along(f, &ModuleObject::regular(f.target()))?;
    let rt = tensor_over_a(&b, &b)?;
    let map = unit_into_tensor(&b, f.target().unit(), &rt);
    Ok(EpiReport {
        pass: map.is_iso(),
        source_dim: f.source().carrier().total_dim(),
        target_dim: f.target().carrier().total_dim(),
        tensor_dim: rt.module.carrier().total_dim(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatnessBasis {
    /// Flat because the map is a localization.
    Structural,
    ProbeVerified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImmersionCertificate {
    pub positive: bool,
    pub epi: EpiReport,
    pub flat: FlatReport,
    pub flatness: FlatnessBasis,
    pub finite_presentation: &'static str,
}

const FINITE_PRESENTATION: &str = "every object of a finite-dimensional instance is finitely presented";

/// Flat epimorphism check for an arbitrary monoid morphism. Flatness is
/// only probe-verified.
pub fn certify_open_immersion(f: &MonoidMorphism) -> Result<ImmersionCertificate> {
    let e = EndRing::new(f.source())?;
    let epi = verify_epi(f)?;
    let flat = flat_probe(f, &standard_probes(&e)?)?;
    Ok(ImmersionCertificate {
        positive: epi.pass && flat.pass,
        epi,
        flat,
        flatness: FlatnessBasis::ProbeVerified,
        finite_presentation: FINITE_PRESENTATION,
    })
}

/// Certificate for `I_t`. Both checks are theorems here, so a negative
/// outcome is a self-test failure.
pub fn certify_localization(l: &LocalizationResult) -> Result<ImmersionCertificate> {
    let epi = verify_epi(&l.structure)?;
    if !epi.pass {
        return Err(Error::self_test("I_t is not an epimorphism"));
    }
    let flat = verify_flat(l, &standard_probes(&l.source_ring)?)?;
    Ok(ImmersionCertificate {
        positive: true,
        epi,
        flat,
        flatness: FlatnessBasis::Structural,
        finite_presentation: FINITE_PRESENTATION,
    })
}

/// Coefficients `s_i` with `Σ s_i t_i = 1` in `ℰ(A)`, if the `t_i`
/// generate the unit ideal.
pub fn partition_of_unity(e: &EndRing, ts: &[EndElement]) -> Option<Vec<EndElement>> {
    let gens: Vec<_> = ts.iter().map(|t| t.coords().to_vec()).collect();
    e.ring()
        .express(&gens, &e.ring().one())
        .map(|s| s.into_iter().map(EndElement).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalIso {
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub iso: bool,
}

impl LocalIso {
    fn of(u: &CMorphism) -> LocalIso {
        let kernel_dim = u.source().total_dim() - u.ranks().iter().sum::<usize>();
        let cokernel_dim = u.target().total_dim() - u.ranks().iter().sum::<usize>();
        LocalIso {
            kernel_dim,
            cokernel_dim,
            iso: kernel_dim == 0 && cokernel_dim == 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConservativityReport {
    pub partition: bool,
    /// Coordinates of the `s_i` with `Σ s_i t_i = 1`.
    pub coefficients: Vec<Vec<String>>,
    pub global: LocalIso,
    pub local: Vec<LocalIso>,
    /// The theorem's biconditional held; `false` only for rejected input.
    pub agrees: bool,
}

/// `u` is an isomorphism iff every `u ⊗_A A_{t_i}` is. Input that is not a
/// partition of unity yields a rejected (negative) report.
pub fn conservativity_check(e: &EndRing, ts: &[EndElement], u: &ModuleMorphism) -> Result<ConservativityReport> {
    if u.source().base() != e.monoid() || u.target().base() != e.monoid() {
        return Err(Error::input("morphism is between modules over a different monoid"));
    }
    let global = LocalIso::of(u.map());
    let Some(s) = partition_of_unity(e, ts) else {
        return Ok(ConservativityReport {
            partition: false,
            coefficients: Vec::new(),
            global,
            local: Vec::new(),
            agrees: false,
        });
    };
    let mut local = Vec::with_capacity(ts.len());
    for t in ts {
        let loc = localize_element(e, t)?;
        let b = loc.as_module();
        let src = tensor_over_a(u.source(), &b)?;
        let tgt = tensor_over_a(u.target(), &b)?;
        let u_t = tensor_over_a_mor(u, &ModuleMorphism::identity(&b), &src, &tgt)?;
        local.push(LocalIso::of(u_t.map()));
    }
    if global.iso != local.iter().all(|l| l.iso) {
        return Err(Error::self_test(
            "isomorphism is not detected by the localizations of a partition of unity",
        ));
    }
    Ok(ConservativityReport {
        partition: true,
        coefficients: s
            .iter()
            .map(|x| x.coords().iter().map(|c| c.to_string()).collect())
            .collect(),
        global,
        local,
        agrees: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroDetection {
    pub module_dim: usize,
    pub local_dims: Vec<usize>,
}

/// `M = 0` iff every `M_{t_i} = 0`, for a partition of unity `{t_i}`.
pub fn zero_detection(e: &EndRing, ts: &[EndElement], m: &ModuleObject) -> Result<ZeroDetection> {
    if partition_of_unity(e, ts).is_none() {
        return Err(Error::input("elements do not generate the unit ideal"));
    }
    let mut local_dims = Vec::with_capacity(ts.len());
    for t in ts {
        let loc = localize_element(e, t)?;
        local_dims.push(localize_module(m, &loc)?.module.carrier().total_dim());
    }
    let module_dim = m.carrier().total_dim();
    if (module_dim == 0) != local_dims.iter().all(|&d| d == 0) {
        return Err(Error::self_test("a nonzero module vanishes on every chart of a cover"));
    }
    Ok(ZeroDetection {
        module_dim,
        local_dims,
    })
}
