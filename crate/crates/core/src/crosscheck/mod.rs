//! Engine results compared against the classical oracle, one suite per
//! corpus algebra, plus the global-sections check on random presheaves.
//! Every disagreement is a self-test failure.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::constant_presheaf;
use crate::category::{hom_space, CObject, CatInstance, FiniteSpace};
use crate::error::{Error, Result};
use crate::io::{classical, curated_rationals, CorpusEntry};
use crate::linalg::{Field, Matrix, Scalar};
use crate::localization::{certify_localization, localize_element, zero_detection, LocalizationResult};
use crate::monoid::{cokernel_module, EndElement, EndRing, ModuleMorphism, ModuleObject, MonoidObject};
use crate::oracle::{
    oracle_fraction_field, oracle_ideal_membership, oracle_localize, zero_divisor, ClassicalRing,
    OracleLocalization, Vector, SEARCH_LIMIT,
};
use crate::quotient::{base_change_quotient, quotient_ideal, quotient_sequence, IdealHandle, QuotientResult};
use crate::ring::StructureRing;
use crate::scheme::{
    check_cover, default_probe_pairs, function_field, irreducibility_probe, is_integral, is_reduced,
    is_weakly_integral,
};

#[cfg(test)]
mod tests;

/// Short names of the checked properties, numbered from 1.
pub const CRITERIA: [&str; 10] = [
    "cover",
    "localization",
    "quotient",
    "base-change",
    "flat-epi",
    "zero-detection",
    "integrality",
    "function-field",
    "closed-subscheme",
    "presheaf",
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    /// Invert every comparison for this criterion, to exercise the
    /// failure path end to end.
    pub fault: Option<usize>,
}

/// Comparisons made for one algebra, keyed by criterion name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteTally {
    pub name: String,
    pub dim: usize,
    pub counts: BTreeMap<String, usize>,
    pub integral: bool,
    pub reduced: bool,
    pub domain: bool,
}

impl SuiteTally {
    pub fn count(&self, criterion: usize) -> usize {
        self.counts.get(CRITERIA[criterion - 1]).copied().unwrap_or(0)
    }
}

/// `R` as a structure-constant table, with no engine logic attached.
pub fn shadow(r: &StructureRing) -> Result<ClassicalRing> {
    if r.dim() == 0 {
        return Ok(ClassicalRing::zero_ring(r.field()));
    }
    ClassicalRing::new(r.field(), r.product_table(), r.one())
}

/// Two surjections out of the same ring give isomorphic targets: same
/// kernel, and the induced bijection is multiplicative and unital.
pub fn induced_iso(phi_e: &Matrix, ring_e: &ClassicalRing, phi_o: &Matrix, ring_o: &ClassicalRing) -> bool {
    if phi_e.rows() != ring_e.dim() || phi_o.rows() != ring_o.dim() || phi_e.rows() != phi_o.rows() {
        return false;
    }
    if phi_e.rows() == 0 {
        return true;
    }
    if !phi_e.kernel_basis().same_span(&phi_o.kernel_basis()) {
        return false;
    }
    let Some(s) = phi_e.right_inverse() else {
        return false;
    };
    let theta = phi_o.mul(&s);
    theta.is_invertible() && ring_e.is_ring_map(&theta, ring_o)
}

/// `R/I` by structure constants, with the projection.
pub fn classical_quotient(r: &ClassicalRing, ideal: &Matrix) -> Result<(ClassicalRing, Matrix)> {
    let p = Matrix::quotient_projection(ideal);
    if p.rows() == 0 {
        return Ok((ClassicalRing::zero_ring(r.field()), p));
    }
    let s = p.right_inverse().ok_or_else(|| Error::self_test("quotient projection is not onto"))?;
    let table = (0..p.rows())
        .map(|i| (0..p.rows()).map(|j| p.mul_vec(&r.mul(&s.column(i), &s.column(j)))).collect())
        .collect();
    Ok((ClassicalRing::new(r.field(), table, p.mul_vec(&r.one()))?, p))
}

/// Elements used for pair queries: everything when there are at most 27,
/// otherwise the coordinate grid `{-1, 0, 1}^n` (capped at 27 points).
pub fn sample_elements(e: &EndRing) -> Vec<EndElement> {
    let f = e.field();
    if let Some(q) = f.order() {
        if (q as u128).pow(e.dim() as u32) <= 27 {
            if let Some(all) = e.ring().elements() {
                return all.into_iter().map(EndElement).collect();
            }
        }
    }
    let digits = [0i64, 1, -1];
    (0..3usize.pow(e.dim() as u32).min(27))
        .map(|mut k| {
            EndElement(
                (0..e.dim())
                    .map(|_| {
                        let d = digits[k % 3];
                        k /= 3;
                        f.from_i64(d)
                    })
                    .collect(),
            )
        })
        .collect()
}

struct Subject<'a> {
    name: &'a str,
    e: EndRing,
    oracle: ClassicalRing,
    to_a: Matrix,
    from_a: Matrix,
    opts: CheckOptions,
}

impl Subject<'_> {
    fn agree(&self, criterion: usize, ok: bool, what: impl FnOnce() -> String) -> Result<()> {
        if ok != (self.opts.fault == Some(criterion)) {
            return Ok(());
        }
        Err(Error::self_test(format!(
            "{} on {}: {}",
            CRITERIA[criterion - 1],
            self.name,
            what()
        )))
    }

    fn in_a(&self, t: &EndElement) -> Vector {
        self.to_a.mul_vec(t.coords())
    }

    fn basis_subsets(&self, max: usize) -> Vec<Vec<usize>> {
        let n = self.e.dim();
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| s.len() <= max)
            .collect()
    }

    fn elements(&self, idx: &[usize]) -> Vec<EndElement> {
        idx.iter().map(|&i| self.e.basis_element(i)).collect()
    }
}

fn show(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn show_all(ts: &[EndElement]) -> String {
    ts.iter().map(|t| show(t.coords())).collect::<Vec<_>>().join(", ")
}

/// Runs criteria 1 to 8 on one algebra over a field (not a presheaf).
pub fn monoid_suite(name: &str, a: &MonoidObject, opts: CheckOptions) -> Result<SuiteTally> {
    let context = |e: Error| match e {
        Error::SelfTest(_) => e,
        other => Error::self_test(format!("{name}: unexpected error on valid input: {other}")),
    };
    run_suite(name, a, opts).map_err(context)
}

fn run_suite(name: &str, a: &MonoidObject, opts: CheckOptions) -> Result<SuiteTally> {
    let e = EndRing::new(a)?;
    let oracle = classical(a)?;
    let to_a = e.section_matrix();
    let from_a = to_a
        .inverse()
        .ok_or_else(|| Error::self_test(format!("{name}: ℰ(A) -> A(X) is not bijective")))?;
    if !shadow(e.ring())?.is_ring_map(&to_a, &oracle) {
        return Err(Error::self_test(format!("{name}: ℰ(A) -> A(X) is not a ring map")));
    }
    let s = Subject {
        name,
        e,
        oracle,
        to_a,
        from_a,
        opts,
    };
    let mut counts = BTreeMap::new();
    let mut put = |c: usize, n: usize| {
        counts.insert(CRITERIA[c - 1].to_string(), n);
    };
    put(1, covers(&s)?);
    let locs = localizations(&s)?;
    put(2, locs.len());
    put(5, flat_epi(&s, &locs)?);
    let quots = quotients(&s)?;
    put(3, quots.len());
    put(4, base_change(&s, &quots, &locs)?);
    put(6, zero_detections(&s)?);
    let (integral, reduced, domain) = integrality(&s)?;
    put(7, 1);
    put(8, if integral { function_fields(&s)? } else { 0 });
    Ok(SuiteTally {
        name: name.to_string(),
        dim: s.e.dim(),
        counts,
        integral,
        reduced,
        domain,
    })
}

/// Every subset of the basis, and every pair of sample elements.
fn covers(s: &Subject) -> Result<usize> {
    let mut queries: Vec<Vec<EndElement>> = s.basis_subsets(usize::MAX).iter().map(|i| s.elements(i)).collect();
    let elems = sample_elements(&s.e);
    for (i, x) in elems.iter().enumerate() {
        for y in &elems[i..] {
            queries.push(vec![x.clone(), y.clone()]);
        }
    }
    for ts in &queries {
        let cert = check_cover(&s.e, ts)?;
        if !cert.verify(&s.e) {
            return Err(Error::self_test(format!("{}: cover certificate for {} fails", s.name, show_all(ts))));
        }
        let gens: Vec<Vector> = ts.iter().map(|t| s.in_a(t)).collect();
        let m = oracle_ideal_membership(&s.oracle, &gens, &s.oracle.one())?;
        if m.exhaustive.is_some_and(|x| x != m.member) {
            return Err(Error::self_test(format!("{}: oracle solve and search disagree", s.name)));
        }
        s.agree(1, cert.positive == m.member, || {
            format!("{{{}}}: engine {}, oracle {}", show_all(ts), cert.positive, m.member)
        })?;
    }
    Ok(queries.len())
}

fn localizations(s: &Subject) -> Result<Vec<(LocalizationResult, OracleLocalization)>> {
    let mut out = Vec::new();
    for i in 0..s.e.dim() {
        let t = s.e.basis_element(i);
        let l = localize_element(&s.e, &t)?;
        let o = oracle_localize(&s.oracle, &s.in_a(&t))?;
        if o.brute_force == Some(false) {
            return Err(Error::self_test(format!("{}: oracle localization routes disagree", s.name)));
        }
        let ring_e = shadow(l.target_ring.ring())?;
        s.agree(2, induced_iso(&l.ring_map.mul(&s.from_a), &ring_e, &o.map, &o.ring), || {
            format!(
                "t = {}: dim ℰ(A_t) = {}, oracle dim = {}",
                show(t.coords()),
                l.target_ring.dim(),
                o.ring.dim()
            )
        })?;
        out.push((l, o));
    }
    Ok(out)
}

fn flat_epi(s: &Subject, locs: &[(LocalizationResult, OracleLocalization)]) -> Result<usize> {
    for (l, o) in locs {
        let c = certify_localization(l)?;
        let ok = c.positive
            && c.flat.probes.len() >= 3
            && c.epi.tensor_dim == c.epi.target_dim
            && c.epi.target_dim == o.ring.dim();
        s.agree(5, ok, || format!("t = {}: {} probes, epi {:?}", show(l.element.coords()), c.flat.probes.len(), c.epi))?;
    }
    Ok(locs.len())
}

fn quotients(s: &Subject) -> Result<Vec<(Vec<usize>, QuotientResult)>> {
    let mut out = Vec::new();
    for idx in s.basis_subsets(2) {
        let ts = s.elements(&idx);
        let q = quotient_sequence(&s.e, &ts)?;
        if ts.len() == 2 {
            let j = IdealHandle::new(&s.e, ts.clone())?;
            let alt = IdealHandle::new(&s.e, ts.iter().rev().cloned().collect())?;
            quotient_ideal(&s.e, &j, Some(&alt))?;
        }
        let gens: Vec<Vector> = ts.iter().map(|t| s.in_a(t)).collect();
        let (qr, p) = classical_quotient(&s.oracle, &s.oracle.ideal(&gens))?;
        let ring_e = shadow(q.target_ring.ring())?;
        s.agree(3, induced_iso(&q.ring_map.mul(&s.from_a), &ring_e, &p, &qr), || {
            format!("ideal ({}): engine dim {}, oracle dim {}", show_all(&ts), q.target_ring.dim(), qr.dim())
        })?;
        out.push((idx, q));
    }
    Ok(out)
}

fn base_change(
    s: &Subject,
    quots: &[(Vec<usize>, QuotientResult)],
    locs: &[(LocalizationResult, OracleLocalization)],
) -> Result<usize> {
    let mut n = 0;
    for (idx, q) in quots {
        for (l, o) in locs {
            let r = base_change_quotient(q, &l.structure)?;
            let ext: Vec<Vector> = s.elements(idx).iter().map(|g| o.map.mul_vec(&s.in_a(g))).collect();
            let expected = o.ring.dim() - o.ring.ideal(&ext).cols();
            s.agree(4, r.iso && r.tensor_dim == expected && r.quotient_dim == expected, || {
                format!(
                    "ideal ({}), t = {}: tensor {}, quotient {}, oracle {expected}",
                    show_all(&s.elements(idx)),
                    show(l.element.coords()),
                    r.tensor_dim,
                    r.quotient_dim
                )
            })?;
            n += 1;
        }
    }
    Ok(n)
}

enum Probe {
    Zero,
    Regular,
    Quotient(EndElement),
}

fn zero_detections(s: &Subject) -> Result<usize> {
    let a = s.e.monoid();
    let reg = ModuleObject::regular(a);
    let mut modules = vec![(Probe::Zero, ModuleObject::zero(a)), (Probe::Regular, reg.clone())];
    if s.e.dim() > 1 {
        let t = s.e.basis_element(s.e.dim() - 1);
        let mul = ModuleMorphism::new(reg.clone(), reg.clone(), s.e.act_on(&t, &reg)?)?;
        modules.push((Probe::Quotient(t), cokernel_module(&mul).0));
    }
    let covers: Vec<Vec<EndElement>> = s
        .basis_subsets(usize::MAX)
        .iter()
        .map(|i| s.elements(i))
        .filter(|ts| {
            let gens: Vec<Vector> = ts.iter().map(|t| s.in_a(t)).collect();
            oracle_ideal_membership(&s.oracle, &gens, &s.oracle.one()).is_ok_and(|m| m.member)
        })
        .collect();
    let mut n = 0;
    for ts in &covers {
        let locs = ts
            .iter()
            .map(|t| oracle_localize(&s.oracle, &s.in_a(t)))
            .collect::<Result<Vec<_>>>()?;
        for (kind, m) in &modules {
            let z = zero_detection(&s.e, ts, m)?;
            let local_dim = |o: &OracleLocalization| match kind {
                Probe::Zero => 0,
                Probe::Regular => o.ring.dim(),
                Probe::Quotient(u) => o.ring.dim() - o.ring.ideal(&[o.map.mul_vec(&s.in_a(u))]).cols(),
            };
            let expected: Vec<usize> = locs.iter().map(local_dim).collect();
            s.agree(6, z.local_dims == expected && z.module_dim == m.carrier().total_dim(), || {
                format!("cover {{{}}}: engine {:?}, oracle {expected:?}", show_all(ts), z.local_dims)
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn oracle_reduced(r: &ClassicalRing) -> Option<bool> {
    let all = r.elements(SEARCH_LIMIT)?;
    let zero = r.zero();
    Some(all.iter().all(|x| *x == zero || r.pow(x, r.dim().max(1)) != zero))
}

fn integrality(s: &Subject) -> Result<(bool, bool, bool)> {
    let weak = is_weakly_integral(&s.e).is_domain();
    let reduced = is_reduced(&s.e).reduced;
    let integral = is_integral(&s.e)?.integral;
    let probe = irreducibility_probe(&s.e, &default_probe_pairs(&s.e))?.all_nonzero;
    let domain = zero_divisor(&s.oracle)?.is_none();
    s.agree(7, !integral || weak && reduced, || "integral but not a reduced domain".into())?;
    s.agree(7, !(reduced && probe) || weak, || "reduced and irreducible but not a domain".into())?;
    s.agree(7, weak == domain && integral == domain, || {
        format!("engine domain {weak}, integral {integral}; oracle domain {domain}")
    })?;
    if let Some(r) = oracle_reduced(&s.oracle) {
        s.agree(7, r == reduced, || format!("engine reduced {reduced}, oracle {r}"))?;
    }
    Ok((integral, reduced, domain))
}

fn function_fields(s: &Subject) -> Result<usize> {
    let k = function_field(&s.e)?;
    let o = oracle_fraction_field(&s.oracle)?;
    let id = Matrix::identity(s.e.field(), s.e.dim());
    s.agree(8, induced_iso(&k.from_ring.mul(&s.from_a), &shadow(&k.field)?, &id, &o.ring), || {
        format!("k(A) has dim {}, oracle {}", k.field.dim(), o.ring.dim())
    })?;
    let mut n = 1;
    for t in sample_elements(&s.e).into_iter().filter(|t| !t.is_zero()) {
        let l = localize_element(&s.e, &t)?;
        let kt = function_field(&l.target_ring)?;
        let phi = kt.from_ring.mul(&l.ring_map).mul(&s.from_a);
        s.agree(8, induced_iso(&phi, &shadow(&kt.field)?, &id, &o.ring), || {
            format!("k(A_t) differs from k(A) at t = {}", show(t.coords()))
        })?;
        n += 1;
    }
    Ok(n)
}

/// Criteria 1 to 8 on every entry, one worker per algebra.
pub fn corpus_suite(entries: &[CorpusEntry], opts: CheckOptions) -> Result<Vec<SuiteTally>> {
    entries
        .par_iter()
        .map(|c| monoid_suite(&c.name, &c.monoid, opts))
        .collect()
}

/// `Hom(1, M) -> M(X)`, `f ↦ f_X(1)`, is bijective.
pub fn global_sections_check(m: &CObject, opts: CheckOptions) -> Result<usize> {
    let inst = m.instance();
    let homs = hom_space(&CObject::unit(inst), m)?;
    let top = inst.top();
    let cols: Vec<Vec<Scalar>> = homs.iter().map(|f| f.component(top).column(0)).collect();
    let rank = if cols.is_empty() {
        0
    } else {
        Matrix::from_columns(m.field(), m.dim(top), &cols).rank()
    };
    let ok = homs.len() == m.dim(top) && rank == homs.len();
    if ok == (opts.fault == Some(10)) {
        return Err(Error::self_test(format!(
            "presheaf with dims {:?}: dim Hom(1, M) = {}, dim M(X) = {}",
            m.dims(),
            homs.len(),
            m.dim(top)
        )));
    }
    Ok(homs.len())
}

/// A presheaf with random dimensions (at most 3) and random restrictions.
/// Only valid for spaces whose nonempty opens form a chain of length ≤ 2.
pub fn random_presheaf(inst: &std::sync::Arc<CatInstance>, rng: &mut StdRng) -> Result<CObject> {
    let field = inst.field();
    let bottom = inst.bottom();
    let dims: Vec<usize> = (0..inst.sites())
        .map(|s| if Some(s) == bottom { 0 } else { rng.gen_range(0..=3) })
        .collect();
    let res = inst
        .pairs()
        .iter()
        .filter(|&&(v, _)| Some(v) != bottom)
        .map(|&(v, u)| {
            let data = (0..dims[v] * dims[u]).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect();
            ((v, u), Matrix::from_vec(field, dims[v], dims[u], data))
        })
        .collect();
    CObject::new(inst.clone(), dims, res)
}

/// `count` random presheaves on the point and the Sierpiński space, and
/// the constant presheaves of the curated algebras. Returns the number of
/// presheaves checked.
pub fn presheaf_suite(field: Field, count: usize, seed: u64, opts: CheckOptions) -> Result<usize> {
    let mut rng = StdRng::seed_from_u64(seed);
    let spaces = [FiniteSpace::point(), FiniteSpace::sierpinski()];
    let mut n = 0;
    for k in 0..count {
        let inst = CatInstance::presheaf(field, spaces[k % 2].clone());
        global_sections_check(&random_presheaf(&inst, &mut rng)?, opts)?;
        n += 1;
    }
    if field == Field::Rational {
        let inst = CatInstance::presheaf(field, FiniteSpace::sierpinski());
        for c in curated_rationals() {
            let a = constant_presheaf(&inst, &c.monoid)?;
            global_sections_check(ModuleObject::regular(&a).carrier(), opts)?;
            n += 1;
        }
    }
    Ok(n)
}
