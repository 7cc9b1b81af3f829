//! ℤ[ℤ/2]-modules that are free over ℤ, presented as integer involutions.
//!
//! A rank-n module is `ℤⁿ` with the generator of ℤ/2 acting by a matrix `S`
//! with `S² = I`. Every such module splits into copies of
//!
//! * `T1`: ℤ with trivial action,
//! * `T2`: ℤ with action by −1,
//! * `T3`: ℤ[ℤ/2], rank two with the generator swapping a basis pair,
//!
//! and the multiplicities are isomorphism invariants. [`multiplicities`]
//! computes them from 𝔽₂-dimensions; [`decompose`] produces an explicit
//! change of basis into block form.

mod decompose;
mod lemmas;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exactla::IntMatrix;

pub use decompose::{decompose, decompose_with_seed, multiplicities};
pub use lemmas::{lift_subspace_to_summand, split_relative};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Z2Error {
    #[error("not an involution: S·S ≠ I")]
    NotInvolution,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("p·ℤⁿ is not contained in the given lattice")]
    ChainViolation,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("repair search exhausted without a verified basis")]
    RepairExhausted,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// An order-two automorphism of `ℤⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    s: IntMatrix,
}

impl Involution {
    pub fn new(s: IntMatrix) -> Result<Self, Z2Error> {
        if !s.is_square() {
            return Err(Z2Error::NotSquare(s.rows(), s.cols()));
        }
        if !(&s * &s).is_identity() {
            return Err(Z2Error::NotInvolution);
        }
        Ok(Involution { s })
    }

    pub fn rank(&self) -> usize {
        self.s.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SummandType {
    T1,
    T2,
    T3,
}

impl SummandType {
    pub fn rank(self) -> usize {
        match self {
            SummandType::T1 | SummandType::T2 => 1,
            SummandType::T3 => 2,
        }
    }
}

impl fmt::Display for SummandType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SummandType::T1 => "T1",
            SummandType::T2 => "T2",
            SummandType::T3 => "T3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Multiplicities {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl Multiplicities {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Self {
        Multiplicities { n1, n2, n3 }
    }

    pub fn rank(&self) -> usize {
        self.n1 + self.n2 + 2 * self.n3
    }

    /// Trace of the involution in any basis: `n1 − n2`.
    pub fn trace(&self) -> i64 {
        self.n1 as i64 - self.n2 as i64
    }
}

impl fmt::Display for Multiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n1={} n2={} n3={}", self.n1, self.n2, self.n3)
    }
}

/// Multiplicities together with a change of basis `P` (columns are the new
/// basis: `n1` fixed vectors, `n2` negated vectors, then `n3` pairs
/// `(x, Sx)`), so that `P⁻¹·S·P = canonical_form(mult)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(flatten)]
    pub mult: Multiplicities,
    #[serde(rename = "P")]
    pub p: IntMatrix,
}

impl Decomposition {
    /// Type of each column of `P`, in order.
    pub fn column_types(&self) -> Vec<SummandType> {
        let m = &self.mult;
        let mut out = vec![SummandType::T1; m.n1];
        out.extend(std::iter::repeat(SummandType::T2).take(m.n2));
        out.extend(std::iter::repeat(SummandType::T3).take(2 * m.n3));
        out
    }

    /// Generator of each summand: one column per `T1`/`T2` summand, the first
    /// column of each `T3` pair.
    pub fn summand_generators(&self) -> Vec<(SummandType, Vec<BigInt>)> {
        let m = &self.mult;
        let mut out = Vec::new();
        for j in 0..m.n1 {
            out.push((SummandType::T1, self.p.column(j)));
        }
        for j in m.n1..m.n1 + m.n2 {
            out.push((SummandType::T2, self.p.column(j)));
        }
        for t in 0..m.n3 {
            out.push((SummandType::T3, self.p.column(m.n1 + m.n2 + 2 * t)));
        }
        out
    }
}

/// Block diagonal `I_{n1} ⊕ (−I_{n2}) ⊕ n3 × [[0,1],[1,0]]`.
pub fn canonical_form(mult: Multiplicities) -> IntMatrix {
    let n = mult.rank();
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate().take(mult.n1) {
        row[i] = 1;
    }
    for i in mult.n1..mult.n1 + mult.n2 {
        rows[i][i] = -1;
    }
    for t in 0..mult.n3 {
        let a = mult.n1 + mult.n2 + 2 * t;
        rows[a][a + 1] = 1;
        rows[a + 1][a] = 1;
    }
    IntMatrix::from_rows(&rows)
}

/// True iff `P` is unimodular and `P⁻¹·S·P` equals the canonical form of the
/// claimed multiplicities.
pub fn verify_decomposition(inv: &Involution, dec: &Decomposition) -> bool {
    let n = inv.rank();
    if dec.mult.rank() != n || dec.p.rows() != n || dec.p.cols() != n {
        return false;
    }
    if !dec.p.is_unimodular() {
        return false;
    }
    // P invertible, so P⁻¹SP = C  ⇔  SP = PC
    let c = canonical_form(dec.mult);
    &inv.s * &dec.p == &dec.p * &c
}
