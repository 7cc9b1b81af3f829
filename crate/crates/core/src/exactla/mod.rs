//! Exact linear algebra over ℤ and 𝔽₂.
//!
//! Everything here works on arbitrary-precision integers; Hermite and Smith
//! forms are computed with plain Euclidean elimination, which is fast enough
//! for the matrix sizes this crate deals with (n ≤ ~50).

mod f2;
mod lattice;
mod matrix;
mod normal_form;

pub use f2::{f2_complement, f2_rank, f2_row_reduce, F2Matrix};
pub(crate) use f2::{residues, rref_mod_p};
pub use lattice::{
    complete_to_basis, is_primitive, kernel_basis, lattice_contains, lattice_index, solve,
    solve_matrix, span_basis,
};
pub use matrix::{big_ints, IntMatrix};
pub use normal_form::{hnf, rank, smith_diagonal, snf};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("columns are not part of a basis (Smith form has a diagonal entry other than 1)")]
    NotPrimitive,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("matrix is not unimodular")]
    NotUnimodular,
}
