use crate::category::{combine, coords_in, hom_space, tensor_mor_unchecked, CMorphism, CObject};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::ring::{Elem, StructureRing};

use super::module::{hom_a, ModuleObject};
use super::object::{MonoidMorphism, MonoidObject};

/// An element of `ℰ(A)`, as coordinates in the ring's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EndElement(pub Vec<Scalar>);

impl EndElement {
    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }
}

/// `ℰ(A) = Hom_{A-Mod}(A, A)` as a commutative ring.
///
/// The basis is transported from `Hom(1, A)`: a global element `φ` gives the
/// endomorphism `m ∘ (φ ⊗ id) ∘ λ⁻¹`. Coordinates of an endomorphism `t`
/// are those of `t ∘ e_A`.
#[derive(Clone, Debug)]
pub struct EndRing {
    monoid: MonoidObject,
    globals: Vec<CMorphism>,
    basis: Vec<CMorphism>,
    ring: StructureRing,
}

impl EndRing {
    pub fn new(a: &MonoidObject) -> Result<EndRing> {
        let check = a.check();
        if let Some(f) = check.failures.first() {
            return Err(Error::input(format!(
                "not a commutative monoid: {} fails at site {} on basis vector {:?}",
                f.axiom, f.site, f.basis
            )));
        }
        let carrier = a.carrier();
        let one = CObject::unit(a.instance());
        let globals = hom_space(&one, carrier)?;
        let basis: Vec<CMorphism> = globals
            .iter()
            .map(|phi| multiplication_by(a, phi, carrier))
            .collect();

        let regular = ModuleObject::regular(a);
        let linear = hom_a(&regular, &regular)?;
        if linear.len() != globals.len() {
            return Err(Error::self_test(format!(
                "Hom_A(A, A) has dimension {} but Hom(1, A) has {}",
                linear.len(),
                globals.len()
            )));
        }
        for (i, t) in basis.iter().enumerate() {
            if coords_in(&linear, t).is_none() {
                return Err(Error::self_test(format!(
                    "transported basis element {i} is not A-linear"
                )));
            }
        }

        let field = a.field();
        let d = globals.len();
        let mut left = Vec::with_capacity(d);
        for ti in &basis {
            let mut cols = Vec::with_capacity(d);
            for tj in &basis {
                let comp = ti.compose(tj);
                let c = coords_in(&globals, &comp.compose(a.unit()))
                    .ok_or_else(|| Error::self_test("composite is not a global element"))?;
                if combine(carrier, carrier, &basis, &c) != comp {
                    return Err(Error::self_test(
                        "composite of basis endomorphisms leaves their span",
                    ));
                }
                cols.push(c);
            }
            left.push(Matrix::from_columns(field, d, &cols));
        }
        let one_coords =
            coords_in(&globals, a.unit()).ok_or_else(|| Error::self_test("unit is not a global element"))?;
        let ring = StructureRing::new_unchecked(field, left, one_coords);
        if let Some(msg) = ring.axiom_failure() {
            return Err(Error::self_test(format!("ℰ(A) is not a commutative ring: {msg}")));
        }
        Ok(EndRing {
            monoid: a.clone(),
            globals,
            basis,
            ring,
        })
    }

    pub fn monoid(&self) -> &MonoidObject {
        &self.monoid
    }

    pub fn ring(&self) -> &StructureRing {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.monoid.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis endomorphisms of `A`.
    pub fn basis(&self) -> &[CMorphism] {
        &self.basis
    }

    /// The corresponding basis of `Hom(1, A)`.
    pub fn globals(&self) -> &[CMorphism] {
        &self.globals
    }

    pub fn one(&self) -> EndElement {
        EndElement(self.ring.one())
    }

    pub fn zero(&self) -> EndElement {
        EndElement(self.ring.zero())
    }

    pub fn basis_element(&self, i: usize) -> EndElement {
        EndElement(self.ring.basis_vector(i))
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<EndElement> {
        if coords.len() != self.dim() {
            return Err(Error::input(format!(
                "element has {} coordinates, ℰ(A) has dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        if coords.iter().any(|c| c.field() != self.field()) {
            return Err(Error::input("element coordinates are over another field"));
        }
        Ok(EndElement(coords))
    }

    pub fn mul(&self, x: &EndElement, y: &EndElement) -> EndElement {
        EndElement(self.ring.mul(&x.0, &y.0))
    }

    pub fn add(&self, x: &EndElement, y: &EndElement) -> EndElement {
        EndElement(self.ring.add(&x.0, &y.0))
    }

    /// The endomorphism `t_A: A -> A`.
    pub fn endomorphism(&self, t: &EndElement) -> CMorphism {
        let c = self.monoid.carrier();
        combine(c, c, &self.basis, &t.0)
    }

    /// The global element `t ∘ e_A: 1 -> A`.
    pub fn global(&self, t: &EndElement) -> CMorphism {
        let one = CObject::unit(self.monoid.instance());
        combine(&one, self.monoid.carrier(), &self.globals, &t.0)
    }

    /// Coordinates of a global element `1 -> A`.
    pub fn from_global(&self, phi: &CMorphism) -> Option<EndElement> {
        coords_in(&self.globals, phi).map(EndElement)
    }

    /// Coordinates of an `A`-linear endomorphism of `A`, read off at the unit.
    pub fn from_endomorphism(&self, t: &CMorphism) -> Option<EndElement> {
        let e = self.from_global(&t.compose(self.monoid.unit()))?;
        (self.endomorphism(&e) == *t).then_some(e)
    }

    /// The section of `A` over the whole space that `t` corresponds to.
    pub fn section(&self, t: &EndElement) -> Vec<Scalar> {
        let top = self.monoid.instance().top();
        self.global(t).component(top).column(0)
    }

    /// Element with a given section over the whole space.
    pub fn from_section(&self, v: &[Scalar]) -> Result<EndElement> {
        let a = self.monoid.carrier();
        let inst = a.instance();
        let top = inst.top();
        if v.len() != a.dim(top) {
            return Err(Error::input(format!(
                "section must have {} coordinates",
                a.dim(top)
            )));
        }
        let field = a.field();
        let col = Matrix::column_vector(field, v.to_vec());
        let one = CObject::unit(inst);
        let comps = (0..inst.sites())
            .map(|s| {
                if one.dim(s) == 0 {
                    Matrix::zeros(field, a.dim(s), 0)
                } else {
                    a.restriction(s, top).mul(&col)
                }
            })
            .collect();
        let phi = CMorphism::new(one, a.clone(), comps)?;
        self.from_global(&phi)
            .ok_or_else(|| Error::self_test("global element outside the span of Hom(1, A)"))
    }

    /// Matrix whose columns are the sections of the basis elements: the
    /// linear isomorphism `ℰ(A) -> A(X)`.
    pub fn section_matrix(&self) -> Matrix {
        let a = self.monoid.carrier();
        let cols: Vec<Elem> = (0..self.dim())
            .map(|i| self.section(&self.basis_element(i)))
            .collect();
        Matrix::from_columns(self.field(), a.global_dim(), &cols)
    }

    /// `t_M = act ∘ (t ∘ e_A ⊗ id_M) ∘ λ⁻¹ : M -> M`.
    pub fn act_on(&self, t: &EndElement, m: &ModuleObject) -> Result<CMorphism> {
        if *m.base() != self.monoid {
            return Err(Error::input("module is over a different monoid"));
        }
        Ok(multiplication_by_action(m.action(), &self.global(t), m.carrier()))
    }
}

/// `m ∘ (φ ⊗ id) ∘ λ⁻¹` for a global element `φ: 1 -> A`.
fn multiplication_by(a: &MonoidObject, phi: &CMorphism, carrier: &CObject) -> CMorphism {
    multiplication_by_action(a.mult(), phi, carrier)
}

fn multiplication_by_action(action: &CMorphism, phi: &CMorphism, m: &CObject) -> CMorphism {
    let id = CMorphism::identity(m);
    let through = action.compose(&tensor_mor_unchecked(phi, &id));
    // λ⁻¹: M -> 1 ⊗ M has identity components.
    through.compose(&CMorphism::identity_between(m.clone(), through.source().clone()))
}

/// The ring map `ℰ(g): ℰ(A) -> ℰ(B)`, `t ↦ coordinates of g ∘ t ∘ e_A`,
/// verified to be unital and multiplicative.
pub fn e_of_morphism(g: &MonoidMorphism, ea: &EndRing, eb: &EndRing) -> Result<Matrix> {
    if ea.monoid() != g.source() || eb.monoid() != g.target() {
        return Err(Error::input("ℰ-rings do not match the morphism's monoids"));
    }
    let cols = ea
        .globals()
        .iter()
        .map(|phi| {
            eb.from_global(&g.map().compose(phi))
                .map(|e| e.0)
                .ok_or_else(|| Error::self_test("image of a global element is not global"))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_columns(ea.field(), eb.dim(), &cols);
    if !ea.ring().is_ring_map(&m, eb.ring()) {
        return Err(Error::self_test("ℰ(g) is not a unital ring homomorphism"));
    }
    Ok(m)
}
