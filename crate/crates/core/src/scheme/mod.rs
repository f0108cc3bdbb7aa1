//! Affine schemes `Spec(A)`: covers by principal opens, the integrality
//! hierarchy and function fields. Glued schemes live in [`glue`].

mod glue;

pub use glue::{
    build_glued, closed_subscheme, glue_check, local_ring_at, qc_algebra_sheaf_check, ClosedSubscheme, GluedScheme,
    LocalRingResult, OverlapCheck, OverlapSpec, QcIdealSheaf, QcReport,
};

use crate::category::{endo_chain_colimit, CMorphism};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::localization::{localize_element, localize_multset, partition_of_unity, MultSet};
use crate::monoid::{e_of_morphism, tensor_over_a, EndElement, EndRing, MonoidMorphism, MonoidObject};
use crate::ring::{DomainVerdict, Elem, NilpotentWitness, StructureRing};


/// `Spec(A)`; the zero monoid is the empty scheme.
#[derive(Clone, Debug)]
pub struct AffineScheme {
    pub ring: EndRing,
}

impl AffineScheme {
    pub fn new(a: &MonoidObject) -> Result<AffineScheme> {
        Ok(AffineScheme {
            ring: EndRing::new(a)?,
        })
    }

    pub fn monoid(&self) -> &MonoidObject {
        self.ring.monoid()
    }

    pub fn is_empty(&self) -> bool {
        self.monoid().is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub elements: Vec<EndElement>,
    pub positive: bool,
    /// `s_i` with `Σ s_i t_i = 1`, when positive.
    pub coefficients: Vec<EndElement>,
    /// Basis of the proper ideal generated by the `t_i`, when negative.
    pub proper_ideal: Option<Matrix>,
}

impl CoverCertificate {
    /// Re-checks the witness against `ℰ(A)` in one pass.
    pub fn verify(&self, e: &EndRing) -> bool {
        if self.positive {
            if self.coefficients.len() != self.elements.len() {
                return false;
            }
            let sum = self
                .coefficients
                .iter()
                .zip(&self.elements)
                .fold(e.zero(), |acc, (s, t)| e.add(&acc, &e.mul(s, t)));
            sum == e.one()
        } else {
            let Some(ideal) = &self.proper_ideal else {
                return false;
            };
            let gens: Vec<Elem> = self.elements.iter().map(|t| t.0.clone()).collect();
            ideal.cols() < e.dim() && e.ring().ideal(&gens) == *ideal
        }
    }
}

/// The `Spec(A_{t_i})` cover `Spec(A)` iff the `t_i` form a partition of
/// unity in `ℰ(A)`.
pub fn check_cover(e: &EndRing, ts: &[EndElement]) -> Result<CoverCertificate> {
    for t in ts {
        e.element(t.coords().to_vec())?;
    }
    Ok(match partition_of_unity(e, ts) {
        Some(s) => CoverCertificate {
            elements: ts.to_vec(),
            positive: true,
            coefficients: s,
            proper_ideal: None,
        },
        None => {
            let gens: Vec<Elem> = ts.iter().map(|t| t.0.clone()).collect();
            CoverCertificate {
                elements: ts.to_vec(),
                positive: false,
                coefficients: Vec::new(),
                proper_ideal: Some(e.ring().ideal(&gens)),
            }
        }
    })
}

/// `ℰ(A)` is a domain. The zero monoid yields [`DomainVerdict::ZeroRing`].
pub fn is_weakly_integral(e: &EndRing) -> DomainVerdict {
    e.ring().decide_domain()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedVerdict {
    pub reduced: bool,
    pub nilradical_dim: usize,
    pub witness: Option<NilpotentWitness>,
}

pub fn is_reduced(e: &EndRing) -> ReducedVerdict {
    let nil = e.ring().nilradical();
    let witness = e.ring().nilpotent_witness();
    ReducedVerdict {
        reduced: nil.cols() == 0,
        nilradical_dim: nil.cols(),
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegralFailure {
    ZeroMonoid,
    /// `ℰ(A)` has zero divisors.
    NotDomain { x: Elem, y: Elem },
    /// Multiplication by this element has a nonzero kernel.
    NotMono { element: Elem, kernel_dim: usize },
    /// `K = A_S` has a proper nonzero submodule, e.g. supported away from
    /// the whole space.
    NotSimple { reason: String },
}

#[derive(Clone, Debug)]
pub struct IntegralVerdict {
    pub integral: bool,
    pub failures: Vec<IntegralFailure>,
    /// `K = A_S`, `S` the nonzero elements of `ℰ(A)`, when computed.
    pub fraction: Option<crate::localization::LocalizationResult>,
    /// How condition (1) was decided.
    pub route: &'static str,
}

const MONO_ROUTE: &str = "monomorphism checked on the basis of ℰ(A); a field ℰ(A) makes every nonzero element invertible";

/// Generators standing in for the nonzero elements of `ℰ(A)`: the basis,
/// and every nonzero element when the ring is finite and small.
fn nonzero_sample(e: &EndRing) -> Vec<EndElement> {
    let mut out: Vec<EndElement> = (0..e.dim()).map(|i| e.basis_element(i)).collect();
    if let Some(all) = small_ring_elements(e.ring()) {
        for x in all {
            let x = EndElement(x);
            if !x.is_zero() && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// All elements when the ring has at most 27 of them.
pub(crate) fn small_ring_elements(r: &StructureRing) -> Option<Vec<Elem>> {
    let q = r.field().order()?;
    let size = (q as u128).checked_pow(r.dim() as u32)?;
    if size > 27 {
        return None;
    }
    r.elements()
}

/// `ℰ(A)` a domain, every nonzero element acting monomorphically, and
/// `K = A_S` simple as a module over itself.
pub fn is_integral(e: &EndRing) -> Result<IntegralVerdict> {
    let fail = |failures| IntegralVerdict {
        integral: false,
        failures,
        fraction: None,
        route: MONO_ROUTE,
    };
    if e.monoid().is_zero() {
        return Ok(fail(vec![IntegralFailure::ZeroMonoid]));
    }
    let mut failures = Vec::new();
    // Prefer a nilpotent as the witness for condition (1).
    let mut candidates: Vec<Elem> = e.ring().nilpotent_witness().map(|w| w.element).into_iter().collect();
    candidates.extend((0..e.dim()).map(|i| e.basis_element(i).0));
    for s in candidates {
        let k = kernel_dim(&e.endomorphism(&EndElement(s.clone())));
        if k > 0 {
            failures.push(IntegralFailure::NotMono {
                element: s,
                kernel_dim: k,
            });
            break;
        }
    }
    match e.ring().decide_domain() {
        DomainVerdict::Field { .. } => {}
        DomainVerdict::ZeroDivisors { x, y } => {
            // A zero divisor kills the image of its partner.
            if kernel_dim(&e.endomorphism(&EndElement(x.clone()))) == 0 {
                return Err(Error::self_test("a zero divisor of ℰ(A) acts monomorphically on A"));
            }
            failures.push(IntegralFailure::NotDomain { x, y });
        }
        DomainVerdict::ZeroRing => {
            return Err(Error::self_test("nonzero monoid with zero endomorphism ring"));
        }
    }
    if !failures.is_empty() {
        if !failures.iter().any(|f| matches!(f, IntegralFailure::NotDomain { .. })) {
            return Err(Error::self_test("a domain ℰ(A) has an element that is not a monomorphism"));
        }
        return Ok(fail(failures));
    }
    let k = localize_multset(e, &MultSet::new(nonzero_sample(e)))?;
    let kc = k.localized().carrier();
    let inst = kc.instance();
    let top = inst.top();
    if let Some(s) = (0..inst.sites()).find(|&s| s != top && kc.dim(s) > 0) {
        return Ok(fail(vec![IntegralFailure::NotSimple {
            reason: format!(
                "K is nonzero on the open `{}`, so its sections there form a proper submodule",
                inst.site_name(s)
            ),
        }]));
    }
    if !k.target_ring.ring().decide_domain().is_domain() {
        return Ok(fail(vec![IntegralFailure::NotSimple {
            reason: "K(X) is not a field".into(),
        }]));
    }
    if !orbits_span(&k.localized().clone()) {
        return Err(Error::self_test("a basis vector of a simple K generates a proper submodule"));
    }
    Ok(IntegralVerdict {
        integral: true,
        failures: Vec::new(),
        fraction: Some(k),
        route: MONO_ROUTE,
    })
}

fn kernel_dim(f: &CMorphism) -> usize {
    f.source().total_dim() - f.ranks().iter().sum::<usize>()
}

/// Each basis vector of `K` at each open generates all of `K`.
fn orbits_span(k: &MonoidObject) -> bool {
    let c = k.carrier();
    let inst = c.instance();
    let field = c.field();
    for s in 0..inst.sites() {
        for b in 0..c.dim(s) {
            let mut v = vec![field.zero(); c.dim(s)];
            v[b] = field.one();
            for u in 0..inst.sites() {
                let generated = if inst.leq(u, s) {
                    let w = c.restriction(u, s).mul_vec(&v);
                    let act = k.mult().component(u);
                    let cols: Vec<Elem> = (0..c.dim(u))
                        .map(|a| {
                            let mut ea = vec![field.zero(); c.dim(u)];
                            ea[a] = field.one();
                            act.mul_vec(&kron_vec(&ea, &w))
                        })
                        .collect();
                    Matrix::from_columns(field, c.dim(u), &cols).rank()
                } else {
                    0
                };
                if generated != c.dim(u) {
                    return false;
                }
            }
        }
    }
    true
}

fn kron_vec(a: &[crate::linalg::Scalar], b: &[crate::linalg::Scalar]) -> Elem {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Outcome of one pair in an irreducibility probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairProbe {
    pub s: EndElement,
    pub t: EndElement,
    /// `dim A_{st}`.
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub pairs: Vec<PairProbe>,
    pub all_nonzero: bool,
    /// The monoid is not integral, so failures are informational.
    pub informational: bool,
}

/// `dim A_t`, from the eventual image of `t_A`.
pub fn localized_dim(e: &EndRing, t: &EndElement) -> Result<usize> {
    Ok(endo_chain_colimit(&e.endomorphism(t))?.object.total_dim())
}

/// Checks `A_{st} != 0` for each pair. A zero fibre product on an integral
/// monoid is a self-test failure.
pub fn irreducibility_probe(e: &EndRing, pairs: &[(EndElement, EndElement)]) -> Result<IrreducibilityReport> {
    let integral = is_integral(e)?.integral;
    let mut out = Vec::with_capacity(pairs.len());
    for (s, t) in pairs {
        if s.is_zero() || t.is_zero() {
            return Err(Error::input("irreducibility probes need nonzero elements"));
        }
        out.push(PairProbe {
            s: s.clone(),
            t: t.clone(),
            dim: localized_dim(e, &e.mul(s, t))?,
        });
    }
    let all_nonzero = out.iter().all(|p| p.dim > 0);
    if integral && !all_nonzero {
        return Err(Error::self_test("two nonempty principal opens of an integral scheme are disjoint"));
    }
    Ok(IrreducibilityReport {
        pairs: out,
        all_nonzero,
        informational: !integral,
    })
}

/// Pairs used by default: all nonzero elements when `ℰ(A)` is small and
/// finite, otherwise the basis together with `1` and any zero-divisor
/// witness.
pub fn default_probe_pairs(e: &EndRing) -> Vec<(EndElement, EndElement)> {
    let mut family: Vec<EndElement> = match small_ring_elements(e.ring()) {
        Some(all) => all.into_iter().map(EndElement).filter(|x| !x.is_zero()).collect(),
        None => {
            let mut f: Vec<EndElement> = (0..e.dim()).map(|i| e.basis_element(i)).collect();
            f.push(e.one());
            if let DomainVerdict::ZeroDivisors { x, y } = e.ring().decide_domain() {
                f.push(EndElement(x));
                f.push(EndElement(y));
            }
            f
        }
    };
    family.dedup();
    let mut pairs = Vec::new();
    for (i, s) in family.iter().enumerate() {
        for t in &family[i..] {
            pairs.push((s.clone(), t.clone()));
        }
    }
    pairs
}

/// `k(Spec A) = ℰ(F(A))` with a verified inverse for every nonzero element
/// checked.
#[derive(Clone, Debug)]
pub struct FunctionField {
    pub field: StructureRing,
    /// Pairs `(x, x⁻¹)` for the basis (all nonzero elements when finite and
    /// small).
    pub inverses: Vec<(Elem, Elem)>,
    /// `ℰ(A) -> k`, an isomorphism for integral `A` of finite dimension.
    pub from_ring: Matrix,
    /// Principal opens `t` where `k(A_t) ≅ k(A)` was checked.
    pub stable_under: Vec<EndElement>,
}

fn inverse_table(k: &StructureRing) -> Result<Vec<(Elem, Elem)>> {
    let elems: Vec<Elem> = match small_ring_elements(k) {
        Some(all) => all.into_iter().filter(|x| !StructureRing::is_zero_elem(x)).collect(),
        None => (0..k.dim()).map(|i| k.basis_vector(i)).collect(),
    };
    elems
        .into_iter()
        .map(|x| {
            let y = k
                .inverse(&x)
                .ok_or_else(|| Error::self_test("nonzero element of the function field has no inverse"))?;
            Ok((x, y))
        })
        .collect()
}

pub fn function_field(e: &EndRing) -> Result<FunctionField> {
    let verdict = is_integral(e)?;
    let Some(k) = verdict.fraction else {
        return Err(Error::input(format!(
            "not integral: {}",
            describe_failures(&verdict.failures)
        )));
    };
    let inverses = inverse_table(k.target_ring.ring())?;
    let mut stable_under = Vec::new();
    for i in 0..e.dim() {
        let t = e.basis_element(i);
        let at = localize_element(e, &t)?;
        let inner = is_integral(&at.target_ring)?;
        let Some(kt) = inner.fraction else {
            return Err(Error::self_test("a nonempty principal open of an integral scheme is not integral"));
        };
        // ℰ(A) -> ℰ(A_t) -> ℰ(F(A_t)) against ℰ(A) -> ℰ(F(A)).
        let via_t = kt.ring_map.mul(&at.ring_map);
        let Some(inv) = k.ring_map.inverse() else {
            return Err(Error::self_test("ℰ(A) -> ℰ(F(A)) is not bijective"));
        };
        let compare = via_t.mul(&inv);
        if !k.target_ring.ring().is_iso_via(&compare, kt.target_ring.ring()) {
            return Err(Error::self_test("k(A_t) differs from k(A)"));
        }
        stable_under.push(t);
    }
    Ok(FunctionField {
        field: k.target_ring.ring().clone(),
        inverses,
        from_ring: k.ring_map.clone(),
        stable_under,
    })
}

pub fn describe_failures(failures: &[IntegralFailure]) -> String {
    let show = |v: &Elem| {
        let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(", "))
    };
    let parts: Vec<String> = failures
        .iter()
        .map(|f| match f {
            IntegralFailure::ZeroMonoid => "zero monoid (empty scheme)".into(),
            IntegralFailure::NotDomain { x, y } => {
                format!("ℰ(A) has zero divisors {} * {} = 0", show(x), show(y))
            }
            IntegralFailure::NotMono { element, kernel_dim } => format!(
                "multiplication by {} has a kernel of dimension {kernel_dim}",
                show(element)
            ),
            IntegralFailure::NotSimple { reason } => reason.clone(),
        })
        .collect();
    if parts.is_empty() {
        "integral".into()
    } else {
        parts.join("; ")
    }
}

/// The field map `k(Spec A) -> k(Spec B)` induced by `f: A -> B`.
#[derive(Clone, Debug)]
pub struct FieldMap {
    pub source: FunctionField,
    pub target: FunctionField,
    pub map: Matrix,
}

/// Requires both sides integral and `f` dominant: `B_{ℰ(f)(t)} != 0` for
/// every nonzero probe `t`.
pub fn dominant_pullback(f: &MonoidMorphism) -> Result<FieldMap> {
    let ea = EndRing::new(f.source())?;
    let eb = EndRing::new(f.target())?;
    let ka = function_field(&ea)?;
    let kb = function_field(&eb)?;
    let ef = e_of_morphism(f, &ea, &eb)?;
    for t in nonzero_sample(&ea) {
        let image = EndElement(ef.mul_vec(t.coords()));
        if localized_dim(&eb, &image)? == 0 {
            return Err(Error::input("morphism is not dominant: a nonempty open pulls back to the empty set"));
        }
    }
    let inv = ka
        .from_ring
        .inverse()
        .ok_or_else(|| Error::self_test("ℰ(A) -> k(A) is not bijective"))?;
    let map = kb.from_ring.mul(&ef).mul(&inv);
    if !ka.field.is_ring_map(&map, &kb.field) || !map.is_injective() {
        return Err(Error::self_test("induced map of function fields is not a field embedding"));
    }
    Ok(FieldMap {
        source: ka,
        target: kb,
        map,
    })
}

/// Size of `A ⊗_A` products for a pair, used to cross-check fibre products.
pub fn fibre_product_dim(e: &EndRing, s: &EndElement, t: &EndElement) -> Result<usize> {
    let ls = localize_element(e, s)?;
    let lt = localize_element(e, t)?;
    Ok(tensor_over_a(&ls.as_module(), &lt.as_module())?
        .module
        .carrier()
        .total_dim())
}
