//! Exact linear algebra over the integers, the rationals and prime fields.

pub mod fgab;
pub mod field;
pub mod matrix;
pub mod snf;

use thiserror::Error;

pub use fgab::{
    check_hom, cokernel_presented, exterior_square_fgab, fgab_from_presentation, hom_kernel, is_surjective, map_cokernel,
    tensor_element, tensor_fgab, tensor_hom, Cokernel, FgAbGroup, Lattice, Subgroup, Witness,
};
pub use field::{field_quotient, q, qi, Field, FieldQuotient, QMatrix, Q};
pub use matrix::{kron_vec, unit_vector, IntMatrix, Matrix};
pub use snf::{int_determinant, int_kernel, smith_normal_form, solve_int, SnfResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("map is not well defined on the domain: {0}")]
    DomainMismatch(String),
    #[error("invalid invariant factors: {0}")]
    InvalidFactors(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} has no image in {1}")]
    NotInField(String, String),
    #[error("subspace is not contained in the ambient space")]
    NotSubspace,
    #[error("matrix is singular")]
    Singular,
}
