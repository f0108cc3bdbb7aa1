use crate::category::{
    cokernel, cut_by_linear_constraint, direct_sum, factor_through_epi, factor_through_mono, hom_space,
    kernel, symmetry, tensor_mor_unchecked, tensor_unchecked, CMorphism, CObject,
};
use crate::error::{Error, Result};

use super::object::{MonoidMorphism, MonoidObject};

/// A module `(M, act: A ⊗ M -> M)` over a commutative monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleObject {
    base: MonoidObject,
    carrier: CObject,
    action: CMorphism,
}

impl ModuleObject {
    /// Checks `act ∘ (m ⊗ id) = act ∘ (id ⊗ act)` and `act ∘ (e ⊗ id) = λ`.
    pub fn new(base: MonoidObject, carrier: CObject, action: CMorphism) -> Result<ModuleObject> {
        let a = base.carrier();
        if !a.same_instance(&carrier) {
            return Err(Error::input("module and monoid live in different instances"));
        }
        let am = tensor_unchecked(a, &carrier);
        let action = CMorphism::new(am, carrier.clone(), action.components().to_vec())?;
        let m = ModuleObject {
            base,
            carrier,
            action,
        };
        if let Some(msg) = m.axiom_failure() {
            return Err(Error::input(msg));
        }
        Ok(m)
    }

    pub(crate) fn from_parts_unchecked(
        base: MonoidObject,
        carrier: CObject,
        action: CMorphism,
    ) -> ModuleObject {
        ModuleObject {
            base,
            carrier,
            action,
        }
    }

    fn axiom_failure(&self) -> Option<String> {
        let a = self.base.carrier();
        let id_m = CMorphism::identity(&self.carrier);
        let id_a = CMorphism::identity(a);
        let lhs = self
            .action
            .compose(&tensor_mor_unchecked(self.base.mult(), &id_m));
        let rhs = self.action.compose(&tensor_mor_unchecked(&id_a, &self.action));
        if let Some((s, c)) = lhs.first_difference(&rhs) {
            return Some(format!(
                "action is not associative at site {} (basis vector {c})",
                self.carrier.instance().site_name(s)
            ));
        }
        let unital = self
            .action
            .compose(&tensor_mor_unchecked(self.base.unit(), &id_m));
        if let Some((s, c)) = unital.first_difference(&CMorphism::identity_between(
            unital.source().clone(),
            self.carrier.clone(),
        )) {
            return Some(format!(
                "unit does not act as the identity at site {} (basis vector {c})",
                self.carrier.instance().site_name(s)
            ));
        }
        None
    }

    /// `A` as a module over itself.
    pub fn regular(base: &MonoidObject) -> ModuleObject {
        ModuleObject {
            base: base.clone(),
            carrier: base.carrier().clone(),
            action: base.mult().clone(),
        }
    }

    pub fn zero(base: &MonoidObject) -> ModuleObject {
        let z = CObject::zero(base.instance());
        let action = CMorphism::zero(&tensor_unchecked(base.carrier(), &z), &z);
        ModuleObject {
            base: base.clone(),
            carrier: z,
            action,
        }
    }

    /// Restriction of scalars along `f: A -> B` of a `B`-module.
    pub fn restrict_along(f: &MonoidMorphism, m: &ModuleObject) -> Result<ModuleObject> {
        if m.base != *f.target() {
            return Err(Error::input(
                "module is not over the target of the monoid morphism",
            ));
        }
        let id = CMorphism::identity(&m.carrier);
        let action = m.action.compose(&tensor_mor_unchecked(f.map(), &id));
        Ok(ModuleObject {
            base: f.source().clone(),
            carrier: m.carrier.clone(),
            action,
        })
    }

    pub fn base(&self) -> &MonoidObject {
        &self.base
    }

    pub fn carrier(&self) -> &CObject {
        &self.carrier
    }

    pub fn action(&self) -> &CMorphism {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.carrier.is_zero()
    }

    pub(crate) fn same_base(&self, other: &ModuleObject) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(Error::input("modules are over different monoids"))
        }
    }
}

/// Whether `f: M -> N` commutes with the actions.
pub fn is_a_linear(f: &CMorphism, m: &ModuleObject, n: &ModuleObject) -> bool {
    let id_a = CMorphism::identity(m.base.carrier());
    let lhs = f.compose(&m.action);
    let rhs = n.action.compose(&tensor_mor_unchecked(&id_a, f));
    lhs == rhs
}

/// An `A`-linear morphism, checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    source: ModuleObject,
    target: ModuleObject,
    map: CMorphism,
}

impl ModuleMorphism {
    pub fn new(source: ModuleObject, target: ModuleObject, map: CMorphism) -> Result<ModuleMorphism> {
        source.same_base(&target)?;
        let map = CMorphism::new(
            source.carrier.clone(),
            target.carrier.clone(),
            map.components().to_vec(),
        )?;
        if !is_a_linear(&map, &source, &target) {
            return Err(Error::input("morphism is not A-linear"));
        }
        Ok(ModuleMorphism { source, target, map })
    }

    pub(crate) fn new_unchecked(
        source: ModuleObject,
        target: ModuleObject,
        map: CMorphism,
    ) -> ModuleMorphism {
        ModuleMorphism { source, target, map }
    }

    pub fn identity(m: &ModuleObject) -> ModuleMorphism {
        ModuleMorphism::new_unchecked(m.clone(), m.clone(), CMorphism::identity(&m.carrier))
    }

    pub fn zero(m: &ModuleObject, n: &ModuleObject) -> ModuleMorphism {
        ModuleMorphism::new_unchecked(m.clone(), n.clone(), CMorphism::zero(&m.carrier, &n.carrier))
    }

    pub fn source(&self) -> &ModuleObject {
        &self.source
    }

    pub fn target(&self) -> &ModuleObject {
        &self.target
    }

    pub fn map(&self) -> &CMorphism {
        &self.map
    }

    pub fn compose(&self, other: &ModuleMorphism) -> ModuleMorphism {
        ModuleMorphism::new_unchecked(
            other.source.clone(),
            self.target.clone(),
            self.map.compose(&other.map),
        )
    }
}

/// Basis of `Hom_A(M, N)`: morphisms `f` with `f ∘ act = act ∘ (id ⊗ f)`.
pub fn hom_a(m: &ModuleObject, n: &ModuleObject) -> Result<Vec<CMorphism>> {
    m.same_base(n)?;
    let all = hom_space(&m.carrier, &n.carrier)?;
    let id_a = CMorphism::identity(m.base.carrier());
    Ok(cut_by_linear_constraint(&m.carrier, &n.carrier, &all, |f| {
        let lhs = f.compose(&m.action);
        let rhs = n.action.compose(&tensor_mor_unchecked(&id_a, f));
        lhs.sub(&rhs).flatten()
    }))
}

/// Kernel of an `A`-linear map with its induced module structure.
pub fn kernel_module(f: &ModuleMorphism) -> (ModuleObject, ModuleMorphism) {
    let (k, iota) = kernel(&f.map);
    let id_a = CMorphism::identity(f.source.base.carrier());
    let through = f.source.action.compose(&tensor_mor_unchecked(&id_a, &iota));
    let action = factor_through_mono(&through, &iota).expect("kernel of an A-linear map is a submodule");
    let action = action_on(&f.source.base, &k, action);
    let km = ModuleObject::from_parts_unchecked(f.source.base.clone(), k, action);
    let inc = ModuleMorphism::new_unchecked(km.clone(), f.source.clone(), iota);
    (km, inc)
}

/// Cokernel of an `A`-linear map with its induced module structure.
pub fn cokernel_module(f: &ModuleMorphism) -> (ModuleObject, ModuleMorphism) {
    let (_, pi) = cokernel(&f.map);
    let qm = quotient_module(&f.target, &pi);
    let proj = ModuleMorphism::new_unchecked(f.target.clone(), qm.clone(), pi);
    (qm, proj)
}

/// The module structure on the target of an epimorphism `p: M -> Q` whose
/// kernel is a submodule.
pub(crate) fn quotient_module(m: &ModuleObject, p: &CMorphism) -> ModuleObject {
    let id_a = CMorphism::identity(m.base.carrier());
    let down = tensor_mor_unchecked(&id_a, p);
    let action = factor_through_epi(&p.compose(&m.action), &down).expect("kernel is a submodule");
    ModuleObject::from_parts_unchecked(m.base.clone(), p.target().clone(), action)
}

fn action_on(base: &MonoidObject, carrier: &CObject, act: CMorphism) -> CMorphism {
    CMorphism::new_unchecked(
        tensor_unchecked(base.carrier(), carrier),
        carrier.clone(),
        act.components().to_vec(),
    )
}

/// `M ⊕ N` with the componentwise action, and its injections.
pub fn direct_sum_module(
    m: &ModuleObject,
    n: &ModuleObject,
) -> Result<(ModuleObject, ModuleMorphism, ModuleMorphism)> {
    m.same_base(n)?;
    let ds = direct_sum(&m.carrier, &n.carrier)?;
    let id_a = CMorphism::identity(m.base.carrier());
    let first = ds
        .inj1
        .compose(&m.action)
        .compose(&tensor_mor_unchecked(&id_a, &ds.proj1));
    let second = ds
        .inj2
        .compose(&n.action)
        .compose(&tensor_mor_unchecked(&id_a, &ds.proj2));
    let sum = ModuleObject::from_parts_unchecked(m.base.clone(), ds.object.clone(), first.add(&second));
    let i1 = ModuleMorphism::new_unchecked(m.clone(), sum.clone(), ds.inj1);
    let i2 = ModuleMorphism::new_unchecked(n.clone(), sum.clone(), ds.inj2);
    Ok((sum, i1, i2))
}

/// `M ⊗_A N` as the coequalizer of the two actions on `M ⊗ A ⊗ N`, with the
/// projection `M ⊗ N -> M ⊗_A N`.
#[derive(Clone, Debug)]
pub struct RelativeTensor {
    pub module: ModuleObject,
    pub projection: CMorphism,
}

pub fn tensor_over_a(m: &ModuleObject, n: &ModuleObject) -> Result<RelativeTensor> {
    m.same_base(n)?;
    let a = m.base.carrier();
    let id_m = CMorphism::identity(&m.carrier);
    let id_n = CMorphism::identity(&n.carrier);
    // (M ⊗ A) ⊗ N and M ⊗ (A ⊗ N) share indices, the associator being the identity.
    let right_act_m = m.action.compose(&symmetry(&m.carrier, a));
    let via_m = tensor_mor_unchecked(&right_act_m, &id_n);
    let via_n = tensor_mor_unchecked(&id_m, &n.action);
    let via_n = CMorphism::new_unchecked(
        via_m.source().clone(),
        via_n.target().clone(),
        via_n.components().to_vec(),
    );
    let (_, projection) = cokernel(&via_m.sub(&via_n));
    // A acts through M: A ⊗ M ⊗ N -> M ⊗ N, then descend along id ⊗ π.
    let act_mn = tensor_mor_unchecked(&m.action, &id_n);
    let act_mn = CMorphism::new_unchecked(
        tensor_unchecked(a, projection.source()),
        projection.source().clone(),
        act_mn.components().to_vec(),
    );
    let id_a = CMorphism::identity(a);
    let down = tensor_mor_unchecked(&id_a, &projection);
    let action = factor_through_epi(&projection.compose(&act_mn), &down)
        .ok_or_else(|| Error::self_test("action does not descend to the relative tensor product"))?;
    let module = ModuleObject::from_parts_unchecked(m.base.clone(), projection.target().clone(), action);
    Ok(RelativeTensor { module, projection })
}

/// `f ⊗_A g` between relative tensor products already computed.
pub fn tensor_over_a_mor(
    f: &ModuleMorphism,
    g: &ModuleMorphism,
    source: &RelativeTensor,
    target: &RelativeTensor,
) -> Result<ModuleMorphism> {
    let fg = tensor_mor_unchecked(&f.map, &g.map);
    let down = target.projection.compose(&fg);
    let map = factor_through_epi(&down, &source.projection)
        .ok_or_else(|| Error::self_test("tensor of A-linear maps does not descend"))?;
    Ok(ModuleMorphism::new_unchecked(
        source.module.clone(),
        target.module.clone(),
        map,
    ))
}

/// The canonical map `M -> M ⊗_A B` for an `A`-algebra `B` presented as an
/// `A`-module `b` with unit `e_b: 1 -> B`: `m ↦ m ⊗ 1`.
pub fn unit_into_tensor(m: &ModuleObject, e_b: &CMorphism, t: &RelativeTensor) -> CMorphism {
    let id_m = CMorphism::identity(&m.carrier);
    let m_one = tensor_mor_unchecked(&id_m, e_b);
    let m_one = CMorphism::new_unchecked(
        m.carrier.clone(),
        m_one.target().clone(),
        m_one.components().to_vec(),
    );
    t.projection.compose(&m_one)
}
