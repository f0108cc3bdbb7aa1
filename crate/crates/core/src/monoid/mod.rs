//! Commutative monoid objects, their modules, relative tensor products and
//! the endomorphism ring `ℰ(A)`.

mod end_ring;
mod module;
mod object;

pub use end_ring::{e_of_morphism, EndElement, EndRing};
pub use module::{
    cokernel_module, direct_sum_module, hom_a, is_a_linear, kernel_module, tensor_over_a, tensor_over_a_mor,
    unit_into_tensor, ModuleMorphism, ModuleObject, RelativeTensor,
};
pub use object::{Axiom, AxiomFailure, MonoidCheck, MonoidMorphism, MonoidObject};

#[cfg(test)]
mod tests;
