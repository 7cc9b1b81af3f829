//! Free ℤ[ℤ/2]-covers of finitely presented abelian groups with an
//! order-two automorphism.
//!
//! A group `G = ℤ^g / R·ℤ^r` with automorphism `γ` (given on generators by
//! `Gamma`) is covered by `N = ℤ[ℤ/2]^g`, the generator `bᵢ` going to the
//! i-th generator of `G` and `s·bᵢ` to its image under `γ`. The kernel
//! `M = ker(N → G)` is free over ℤ and stable under `s`, so it decomposes
//! into trivial, sign and regular summands. The certificate records that
//! decomposition together with the coordinates `kⱼ + lⱼ·s` of each summand
//! generator in `N`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactla::{
    big_ints, kernel_basis, lattice_contains, lattice_index, rank, smith_diagonal, solve_matrix,
    span_basis, IntMatrix,
};
use crate::report::Report;
use crate::z2mod::{
    decompose_with_seed, verify_decomposition, Decomposition, Involution, SummandType, Z2Error,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error(transparent)]
    Module(#[from] Z2Error),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// `G = ℤ^g / span(columns of relations)` with `γ` acting on generators by
/// `gamma`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Presentation {
    pub generators: usize,
    pub relations: IntMatrix,
    pub gamma: IntMatrix,
}

impl Presentation {
    pub fn new(relations: IntMatrix, gamma: IntMatrix) -> Self {
        Presentation { generators: relations.rows(), relations, gamma }
    }

    /// Shape and automorphism checks, with a reason on failure.
    pub fn check(&self) -> Result<(), ResolveError> {
        let g = self.generators;
        let bad = |msg: String| Err(ResolveError::InvalidPresentation(msg));
        if self.relations.rows() != g {
            return bad(format!("relations have {} rows, expected {g}", self.relations.rows()));
        }
        if (self.gamma.rows(), self.gamma.cols()) != (g, g) {
            return bad(format!("gamma is {}x{}, expected {g}x{g}", self.gamma.rows(), self.gamma.cols()));
        }
        let r = &self.relations;
        if !lattice_contains(r, &(&self.gamma * r)) {
            return bad("gamma does not preserve the relations".into());
        }
        let sq = &(&self.gamma * &self.gamma) - &IntMatrix::identity(g);
        if !lattice_contains(r, &sq) {
            return bad("gamma does not have order two on the quotient".into());
        }
        Ok(())
    }

    /// Invariant factors of `G`: the Smith divisors greater than one,
    /// followed by the free rank.
    pub fn invariants(&self) -> (Vec<BigInt>, usize) {
        cokernel_invariants(&self.relations)
    }
}

/// True iff both automorphism conditions hold: `Gamma` preserves the
/// relation lattice and squares to the identity modulo it.
pub fn validate_presentation(p: &Presentation) -> bool {
    p.check().is_ok()
}

/// Equivariant surjection `τ : ℤ[ℤ/2]^rank → G`; column `2i` is the image of
/// `bᵢ`, column `2i+1` the image of `s·bᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeCover {
    pub rank: usize,
    pub tau: IntMatrix,
}

pub fn free_cover(p: &Presentation) -> Result<FreeCover, ResolveError> {
    p.check()?;
    let g = p.generators;
    let mut cols = Vec::with_capacity(2 * g);
    for i in 0..g {
        let mut e = vec![BigInt::zero(); g];
        e[i] = BigInt::one();
        cols.push(e);
        cols.push(p.gamma.column(i));
    }
    Ok(FreeCover { rank: g, tau: IntMatrix::from_columns(g, &cols) })
}

/// The action of `s` on `N` in the basis `b₁, s·b₁, b₂, s·b₂, …`.
pub fn swap_action(rank: usize) -> IntMatrix {
    let mut rows = vec![vec![0i64; 2 * rank]; 2 * rank];
    for i in 0..rank {
        rows[2 * i][2 * i + 1] = 1;
        rows[2 * i + 1][2 * i] = 1;
    }
    IntMatrix::from_rows(&rows)
}

/// `M = ker τ` with the induced involution, plus its basis inside `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelModule {
    pub involution: Involution,
    pub embedding: IntMatrix,
}

/// Kernel of the composite `N → ℤ^g → G`.
///
/// `x ∈ M` iff `τx` lies in the relation lattice, i.e. iff `(x, z)` is in the
/// kernel of `[τ | R]` for some `z`; `M` is the projection of that kernel to
/// the first `2·rank` coordinates. Its basis is kept in Hermite form.
pub fn kernel_module(p: &Presentation, c: &FreeCover) -> Result<KernelModule, ResolveError> {
    let n = 2 * c.rank;
    let system = c
        .tau
        .hstack(&p.relations)
        .map_err(|e| ResolveError::InvalidPresentation(e.to_string()))?;
    let k = kernel_basis(&system);
    let embedding = span_basis(&k.select_rows(0..n));
    let moved = &swap_action(c.rank) * &embedding;
    let s_m = solve_matrix(&embedding, &moved)
        .ok_or_else(|| ResolveError::Internal("kernel is not stable under s".into()))?;
    Ok(KernelModule { involution: Involution::new(s_m)?, embedding })
}

/// Coordinates of a summand generator `m = (k₁ + l₁s, k₂ + l₂s, …)` in `N`.
/// For `T1` and `T2` only the `kⱼ` are recorded (`lⱼ = kⱼ` resp. `−kⱼ`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandTuple {
    #[serde(rename = "type")]
    pub kind: SummandType,
    #[serde(with = "big_ints")]
    pub k: Vec<BigInt>,
    #[serde(with = "big_ints", default, skip_serializing_if = "Vec::is_empty")]
    pub l: Vec<BigInt>,
}

impl SummandTuple {
    fn from_coordinates(kind: SummandType, v: &[BigInt]) -> Self {
        let k: Vec<BigInt> = v.iter().step_by(2).cloned().collect();
        let l = match kind {
            SummandType::T3 => v.iter().skip(1).step_by(2).cloned().collect(),
            _ => Vec::new(),
        };
        SummandTuple { kind, k, l }
    }

    /// The generator in `N`-coordinates.
    pub fn coordinates(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(2 * self.k.len());
        for (j, k) in self.k.iter().enumerate() {
            let l = match self.kind {
                SummandType::T1 => k.clone(),
                SummandType::T2 => -k,
                SummandType::T3 => self.l.get(j).cloned().unwrap_or_default(),
            };
            out.push(k.clone());
            out.push(l);
        }
        out
    }

    /// Human-readable form of the generator and of the homomorphism on
    /// `u − 1` that realizes it.
    pub fn render(&self) -> String {
        let v = self.coordinates();
        let m: Vec<String> = v.chunks(2).map(|c| group_ring_element(&c[0], &c[1])).collect();
        let pair = |a: &BigInt, b: &BigInt| format!("({}, {})", unitary_minus_one(a), unitary_minus_one(b));
        let map = |swap: bool| -> String {
            let parts: Vec<String> = v
                .chunks(2)
                .map(|c| {
                    let (k, l) = (&c[0], &c[1]);
                    // T1 and T2 coordinates already carry l = ±k
                    if swap {
                        pair(l, k)
                    } else {
                        pair(k, l)
                    }
                })
                .collect();
            format!("({})", parts.join(", "))
        };
        let mut out = format!("{}: m = ({})", self.kind, m.join(", "));
        match self.kind {
            SummandType::T1 | SummandType::T2 => {
                let _ = write!(out, "; phi(u - 1) = {}", map(false));
            }
            SummandType::T3 => {
                let _ = write!(out, "; psi1(u - 1) = {}; psi2(u - 1) = {}", map(false), map(true));
            }
        }
        out
    }
}

fn group_ring_element(k: &BigInt, l: &BigInt) -> String {
    let mut out = String::new();
    if !k.is_zero() {
        out.push_str(&k.to_string());
    }
    if !l.is_zero() {
        let (neg, mag) = (l < &BigInt::zero(), l.magnitude().clone());
        let coeff = if mag.is_one() { String::new() } else { mag.to_string() };
        match (out.is_empty(), neg) {
            (true, false) => out = format!("{coeff}s"),
            (true, true) => out = format!("-{coeff}s"),
            (false, false) => out.push_str(&format!(" + {coeff}s")),
            (false, true) => out.push_str(&format!(" - {coeff}s")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn unitary_minus_one(e: &BigInt) -> String {
    if e.is_zero() {
        "0".into()
    } else if e.is_one() {
        "u - 1".into()
    } else {
        format!("u^{e} - 1")
    }
}

/// Everything needed to rebuild the kernel of the cover and its summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionCertificate {
    pub cover: FreeCover,
    /// basis of `M` in `N`-coordinates (columns)
    pub embedding: IntMatrix,
    /// the involution `s` on `M` in that basis
    pub kernel: IntMatrix,
    pub decomposition: Decomposition,
    pub tuples: Vec<SummandTuple>,
    pub render: Vec<String>,
}

/// Builds the cover, its kernel and the kernel's decomposition. `seed` feeds
/// the fallback search of the decomposition.
pub fn certificate(p: &Presentation, seed: u64) -> Result<ResolutionCertificate, ResolveError> {
    let cover = free_cover(p)?;
    let km = kernel_module(p, &cover)?;
    let dec = decompose_with_seed(&km.involution, seed)?;
    let tuples: Vec<SummandTuple> = dec
        .summand_generators()
        .into_iter()
        .map(|(kind, v)| SummandTuple::from_coordinates(kind, &km.embedding.mul_vec(&v)))
        .collect();
    let render = tuples.iter().map(SummandTuple::render).collect();
    Ok(ResolutionCertificate {
        cover,
        embedding: km.embedding,
        kernel: km.involution.matrix().clone(),
        decomposition: dec,
        tuples,
        render,
    })
}

/// Smith divisors greater than one and free rank of `ℤ^rows / span(a)`.
pub fn cokernel_invariants(a: &IntMatrix) -> (Vec<BigInt>, usize) {
    let diag = smith_diagonal(a);
    let torsion = diag.iter().filter(|d| *d > &BigInt::one()).cloned().collect();
    (torsion, a.rows() - rank(a))
}

/// Checks the certificate against the presentation:
///
/// * the embedding is injective and `s`-equivariant;
/// * `τ` induces an isomorphism `N/M → G` intertwining `s` with `γ`
///   (well defined, onto, and with kernel exactly `M`);
/// * the decomposition and every summand tuple are consistent.
pub fn verify_certificate(p: &Presentation, cert: &ResolutionCertificate) -> Report {
    let mut rep = Report::new();
    let valid = p.check();
    rep.push("presentation valid", valid.is_ok(), valid.err().map(|e| e.to_string()).unwrap_or_default());
    if rep.checks.last().is_some_and(|c| !c.passed) {
        return rep;
    }

    let g = p.generators;
    let r = cert.cover.rank;
    let n = 2 * r;
    let tau = &cert.cover.tau;
    let e = &cert.embedding;
    let s_m = &cert.kernel;
    let sigma = swap_action(r);
    let rel = &p.relations;

    let shapes_ok = (tau.rows(), tau.cols()) == (g, n)
        && e.rows() == n
        && (s_m.rows(), s_m.cols()) == (e.cols(), e.cols());
    rep.push(
        "shapes",
        shapes_ok,
        format!("tau {}x{}, embedding {}x{}, kernel {}x{}", tau.rows(), tau.cols(), e.rows(), e.cols(), s_m.rows(), s_m.cols()),
    );
    if (tau.rows(), tau.cols()) != (g, n) || e.rows() != n {
        return rep;
    }

    // (a) M ↪ N
    rep.push("embedding injective", rank(e) == e.cols(), "");
    rep.push("embedding equivariant", shapes_ok && &sigma * e == e * s_m, "s·E = E·S_M");
    rep.push("kernel involution", shapes_ok && (s_m * s_m).is_identity(), "S_M·S_M = I");

    // (b) N/M ≅ G through τ
    let twisted = &(tau * &sigma) - &(&p.gamma * tau);
    rep.push("tau intertwines s with gamma", lattice_contains(rel, &twisted), "");
    let stacked = tau.hstack(rel).expect("same row count");
    rep.push("tau onto G", lattice_index(&stacked).is_some_and(|i| i.is_one()), "");
    rep.push("M maps to zero in G", lattice_contains(rel, &(tau * e)), "");
    let full_kernel = kernel_basis(&stacked).select_rows(0..n);
    rep.push("kernel of tau inside M", lattice_contains(e, &full_kernel), "");
    let coker = cokernel_invariants(e);
    let target = p.invariants();
    rep.push("cokernel invariants match G", coker == target, describe_invariants(&smith_diagonal(e), n));

    // (c) decomposition and tuples
    let dec_ok = shapes_ok
        && Involution::new(s_m.clone()).is_ok_and(|inv| verify_decomposition(&inv, &cert.decomposition));
    rep.push("decomposition verified", dec_ok, cert.decomposition.mult.to_string());
    let gens: Vec<(SummandType, Vec<BigInt>)> = if dec_ok {
        cert.decomposition
            .summand_generators()
            .into_iter()
            .map(|(t, v)| (t, e.mul_vec(&v)))
            .collect()
    } else {
        Vec::new()
    };
    let tuples_match = dec_ok
        && gens.len() == cert.tuples.len()
        && gens.iter().zip(&cert.tuples).all(|((t, v), tup)| {
            *t == tup.kind && tup.k.len() == r && tup.coordinates() == *v
        });
    rep.push("tuples match decomposition", tuples_match, format!("{} summands", cert.tuples.len()));

    let mut fixed = true;
    let mut negated = true;
    let mut independent = true;
    for tup in &cert.tuples {
        let m = tup.coordinates();
        if m.len() != n {
            fixed = false;
            continue;
        }
        let sm = sigma.mul_vec(&m);
        match tup.kind {
            SummandType::T1 => fixed &= sm == m,
            SummandType::T2 => negated &= sm.iter().zip(&m).all(|(a, b)| *a == -b),
            SummandType::T3 => independent &= rank(&IntMatrix::from_columns(n, &[m, sm])) == 2,
        }
    }
    rep.push("T1 generators fixed by s", fixed, "");
    rep.push("T2 generators negated by s", negated, "");
    rep.push("T3 generators independent of their s-images", independent, "");
    rep
}

fn describe_invariants(diag: &[BigInt], rows: usize) -> String {
    let mut parts: Vec<String> = diag.iter().map(|d| d.to_string()).collect();
    parts.extend(std::iter::repeat("0".to_string()).take(rows.saturating_sub(diag.len())));
    format!("coker SNF = diag({})", parts.join(", "))
}
