//! Exact linear algebra over Q(ζ_N).

mod closure;
mod echelon;
mod hermitian;
mod matrix;
pub mod modular;
mod poly;
mod wedge;

pub use closure::algebra_closure;
pub use echelon::{
    determinant, image, inverse, kernel, left_inverse, rank, rref_kernel_rank, Echelon, RowReduction, Subspace,
};
pub use hermitian::{invariant_hermitian_forms, signature, HermitianForm, Signature};
pub use matrix::{FieldMatrix, FieldVector, MatrixKey};
pub use poly::{minimal_polynomial, CycloPoly};
pub use wedge::{binomial, combinations, wedge_power};
