use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::category::{
    factor_through_epi, symmetry, tensor, tensor_mor_unchecked, tensor_unchecked, CMorphism, CObject,
    CatInstance,
};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

/// A commutative monoid object `(A, m_A, e_A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidObject {
    carrier: CObject,
    mult: CMorphism,
    unit: CMorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Associativity,
    Commutativity,
    UnitLaw,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Associativity => "associativity",
            Axiom::Commutativity => "commutativity",
            Axiom::UnitLaw => "unit law",
        })
    }
}

/// A violated axiom, located at a site and a source basis vector. The basis
/// vector is given as its tensor factors' indices (`[i, j, k]` for
/// associativity, `[i, j]` for commutativity, `[i]` for the unit law).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub site: String,
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidCheck {
    pub pass: bool,
    pub failures: Vec<AxiomFailure>,
}

impl MonoidObject {
    /// Checks shapes and naturality of the structure maps, not the axioms.
    pub fn new(carrier: CObject, mult: CMorphism, unit: CMorphism) -> Result<MonoidObject> {
        let inst = carrier.instance().clone();
        let aa = tensor(&carrier, &carrier)?;
        if mult.source().dims() != aa.dims() || mult.target().dims() != carrier.dims() {
            return Err(Error::input("multiplication must be a map A ⊗ A -> A"));
        }
        let one = CObject::unit(&inst);
        if unit.source().dims() != one.dims() || unit.target().dims() != carrier.dims() {
            return Err(Error::input("unit must be a map 1 -> A"));
        }
        let mult = CMorphism::new(aa, carrier.clone(), mult.components().to_vec())?;
        let unit = CMorphism::new(one, carrier.clone(), unit.components().to_vec())?;
        Ok(MonoidObject { carrier, mult, unit })
    }

    /// [`MonoidObject::new`] followed by [`MonoidObject::check`]; a failing
    /// axiom is an input error.
    pub fn checked(carrier: CObject, mult: CMorphism, unit: CMorphism) -> Result<MonoidObject> {
        let a = MonoidObject::new(carrier, mult, unit)?;
        let report = a.check();
        match report.failures.first() {
            None => Ok(a),
            Some(f) => Err(Error::input(format!(
                "{} fails at site {} on basis vector {:?}",
                f.axiom, f.site, f.basis
            ))),
        }
    }

    pub(crate) fn from_parts_unchecked(carrier: CObject, mult: CMorphism, unit: CMorphism) -> MonoidObject {
        MonoidObject { carrier, mult, unit }
    }

    /// A finite-dimensional algebra: `mult` is `d × d²` (column `i·d + j`
    /// holds `b_i b_j`), `unit` the coordinates of 1.
    pub fn finvect(field: Field, mult: Matrix, unit: Vec<Scalar>) -> Result<MonoidObject> {
        let inst = CatInstance::finvect(field);
        let d = unit.len();
        let carrier = CObject::finvect(inst.clone(), d);
        let aa = CObject::finvect(inst.clone(), d * d);
        let one = CObject::unit(&inst);
        if mult.shape() != (d, d * d) {
            return Err(Error::input(format!(
                "multiplication table must be {d}x{}, got {}x{}",
                d * d,
                mult.rows(),
                mult.cols()
            )));
        }
        let m = CMorphism::finvect(&aa, &carrier, mult)?;
        let e = CMorphism::finvect(&one, &carrier, Matrix::column_vector(field, unit))?;
        MonoidObject::new(carrier, m, e)
    }

    /// The monoidal unit with its canonical structure.
    pub fn unit_monoid(inst: &Arc<CatInstance>) -> MonoidObject {
        let one = CObject::unit(inst);
        let mult = CMorphism::identity_between(tensor_unchecked(&one, &one), one.clone());
        let unit = CMorphism::identity(&one);
        MonoidObject {
            carrier: one,
            mult,
            unit,
        }
    }

    /// The zero monoid (the empty scheme).
    pub fn zero_monoid(inst: &Arc<CatInstance>) -> MonoidObject {
        let z = CObject::zero(inst);
        let mult = CMorphism::zero(&tensor_unchecked(&z, &z), &z);
        let unit = CMorphism::zero(&CObject::unit(inst), &z);
        MonoidObject {
            carrier: z,
            mult,
            unit,
        }
    }

    pub fn carrier(&self) -> &CObject {
        &self.carrier
    }

    pub fn mult(&self) -> &CMorphism {
        &self.mult
    }

    pub fn unit(&self) -> &CMorphism {
        &self.unit
    }

    pub fn instance(&self) -> &Arc<CatInstance> {
        self.carrier.instance()
    }

    pub fn field(&self) -> Field {
        self.carrier.field()
    }

    pub fn is_zero(&self) -> bool {
        self.carrier.is_zero()
    }

    /// Checks associativity, commutativity and the unit law as exact matrix
    /// identities, reporting each violated axiom with a witness.
    pub fn check(&self) -> MonoidCheck {
        let a = &self.carrier;
        let id = CMorphism::identity(a);
        let inst = self.instance();
        let mut failures = Vec::new();

        // m ∘ (m ⊗ id) = m ∘ (id ⊗ m) ∘ assoc, with assoc the identity matrix.
        let lhs = self.mult.compose(&tensor_mor_unchecked(&self.mult, &id));
        let rhs = self.mult.compose(&tensor_mor_unchecked(&id, &self.mult));
        if let Some((s, c)) = lhs.first_difference(&rhs) {
            let d = a.dim(s);
            failures.push(AxiomFailure {
                axiom: Axiom::Associativity,
                site: inst.site_name(s),
                basis: vec![c / (d * d), (c / d) % d, c % d],
            });
        }

        let swapped = self.mult.compose(&symmetry(a, a));
        if let Some((s, c)) = swapped.first_difference(&self.mult) {
            let d = a.dim(s);
            failures.push(AxiomFailure {
                axiom: Axiom::Commutativity,
                site: inst.site_name(s),
                basis: vec![c / d, c % d],
            });
        }

        // m ∘ (e ⊗ id) = λ, where λ: 1 ⊗ A -> A has identity components.
        let left = self.mult.compose(&tensor_mor_unchecked(&self.unit, &id));
        let unitor = CMorphism::identity_between(left.source().clone(), a.clone());
        if let Some((s, c)) = left.first_difference(&unitor) {
            failures.push(AxiomFailure {
                axiom: Axiom::UnitLaw,
                site: inst.site_name(s),
                basis: vec![c],
            });
        }
        MonoidCheck {
            pass: failures.is_empty(),
            failures,
        }
    }

    /// Descends the structure along an epimorphism `p: A -> Q` whose kernel
    /// is an ideal, returning `Q` with the induced structure and `p` as a
    /// monoid morphism. Fails if the kernel is not an ideal.
    pub fn descend(&self, p: &CMorphism) -> Result<MonoidMorphism> {
        if !p.is_epi() {
            return Err(Error::input("descent needs an epimorphism"));
        }
        let pp = tensor_mor_unchecked(p, p);
        let mult = factor_through_epi(&p.compose(&self.mult), &pp)
            .ok_or_else(|| Error::input("multiplication does not descend: kernel is not an ideal"))?;
        let unit = p.compose(&self.unit);
        let q = MonoidObject::from_parts_unchecked(p.target().clone(), mult, unit);
        MonoidMorphism::new(self.clone(), q, p.clone())
    }
}

/// A morphism of monoids, verified on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidMorphism {
    source: MonoidObject,
    target: MonoidObject,
    map: CMorphism,
}

impl MonoidMorphism {
    /// Checks `g ∘ m_A = m_B ∘ (g ⊗ g)` and `g ∘ e_A = e_B` exactly.
    pub fn new(source: MonoidObject, target: MonoidObject, map: CMorphism) -> Result<MonoidMorphism> {
        if !source.carrier.same_instance(&target.carrier) {
            return Err(Error::input("monoids live in different instances"));
        }
        let map = CMorphism::new(
            source.carrier.clone(),
            target.carrier.clone(),
            map.components().to_vec(),
        )?;
        let lhs = map.compose(&source.mult);
        let rhs = target.mult.compose(&tensor_mor_unchecked(&map, &map));
        if let Some((s, c)) = lhs.first_difference(&rhs) {
            return Err(Error::input(format!(
                "not a monoid morphism: multiplication is not preserved at site {} (basis vector {c})",
                source.instance().site_name(s)
            )));
        }
        if map.compose(&source.unit) != target.unit {
            return Err(Error::input("not a monoid morphism: unit is not preserved"));
        }
        Ok(MonoidMorphism { source, target, map })
    }

    pub fn identity(a: &MonoidObject) -> MonoidMorphism {
        MonoidMorphism {
            source: a.clone(),
            target: a.clone(),
            map: CMorphism::identity(&a.carrier),
        }
    }

    /// The unique morphism to the zero monoid.
    pub fn to_zero(a: &MonoidObject) -> MonoidMorphism {
        let z = MonoidObject::zero_monoid(a.instance());
        let map = CMorphism::zero(&a.carrier, &z.carrier);
        MonoidMorphism {
            source: a.clone(),
            target: z,
            map,
        }
    }

    pub fn source(&self) -> &MonoidObject {
        &self.source
    }

    pub fn target(&self) -> &MonoidObject {
        &self.target
    }

    pub fn map(&self) -> &CMorphism {
        &self.map
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MonoidMorphism) -> Result<MonoidMorphism> {
        if other.target != self.source {
            return Err(Error::input("monoid morphisms do not compose"));
        }
        Ok(MonoidMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&other.map),
        })
    }

    pub fn is_iso(&self) -> bool {
        self.map.is_iso()
    }
}
