//! Abelian symmetric monoidal categories with computable structure:
//! finite-dimensional vector spaces and presheaves of them on a finite space.

mod conditions;
mod object;
mod ops;
mod space;

pub use conditions::{
    compare_repeated, endo_chain_colimit, verify_instance_conditions, ChainProbe, ConditionsReport,
    EndoColimit, ProbeOutcome,
};
pub use object::{CMorphism, CObject, CatInstance, InstanceKind};
pub use ops::{
    associator, cokernel, combine, comparison_iso, coords_in, cut_by_linear_constraint, direct_sum,
    factor_through_epi, factor_through_mono, hom_space, image, kernel, left_unitor, quotient_by,
    right_unitor, same_quotient, symmetry, tensor, tensor_mor, DirectSum,
};
pub(crate) use ops::{tensor_mor_unchecked, tensor_unchecked};
pub use space::FiniteSpace;
