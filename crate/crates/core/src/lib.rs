//! Exact algebra for ℤ[ℤ/2]-modules and for the word algebra of `M_r ⊗ O_n`.
//!
//! * [`exactla`]: integer and 𝔽₂ linear algebra (Hermite/Smith forms,
//!   kernels, solving, basis completion).
//! * [`z2mod`]: decomposition of integer involutions into the three
//!   indecomposable summands (trivial, sign, regular).
//! * [`resolve`]: free ℤ[ℤ/2]-covers of finitely presented abelian groups
//!   with an order-two automorphism, and certificates for their kernels.
//! * [`staralg`]: normal forms, parsing, and homomorphism checks for
//!   integer combinations of `e_{jk} ⊗ s_μ s_ν*`.

pub mod exactla;
pub mod gen;
pub mod report;
pub mod resolve;
pub mod staralg;
pub mod z2mod;

pub use exactla::{F2Matrix, IntMatrix};
