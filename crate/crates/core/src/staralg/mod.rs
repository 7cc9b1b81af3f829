//! Integer combinations of `e_{j,k} ⊗ s_μ s_ν*` in `M_r ⊗ O_n`.
//!
//! `O_n` is generated by isometries `s₁ … s_n` with `s_i* s_j = δ_ij` and
//! `Σ s_i s_i* = 1`. Words `s_μ s_ν*` span a dense subalgebra; equality of
//! integer combinations is decided by a normal form (see
//! [`StarAlgebra::normalize`]). On top of that sit a small expression
//! language and checks for homomorphisms given on generators.

mod hom;
mod parse;
mod poly;
mod word;

pub use hom::{
    apply_hom, example5, generator_element, generator_keys, verify_involutive, verify_relations,
    GeneratorMap, GeneratorMapFile, EXAMPLE5,
};
pub use parse::is_blank;
pub use poly::{StarAlgebra, StarPoly, DEFAULT_TERM_CAP};
pub use word::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StarError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("index error at column {column}: {message}")]
    Index { column: usize, message: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("normal form needs more than {0} terms")]
    TermCap(usize),
    #[error("generator map: {0}")]
    Map(String),
}
