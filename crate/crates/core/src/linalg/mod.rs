//! Exact dense linear algebra over the rationals and prime fields.

mod matrix;
mod scalar;

pub use matrix::{ChainColimit, Matrix, MatrixRecord, Rref};
pub use scalar::{Field, Scalar, MAX_PRIME};

#[cfg(test)]
mod tests;
