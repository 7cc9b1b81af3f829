use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{StarError, Word};

/// Default bound on the number of terms produced while normalizing.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// Integer combination of words in `M_r ⊗ O_n`.
///
/// Values handed out by [`StarAlgebra`] are always in normal form, so `==`
/// on them is equality in the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarPoly {
    r: usize,
    n: usize,
    terms: BTreeMap<Word, BigInt>,
}

impl StarPoly {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Word, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    fn is_identity(&self) -> bool {
        self.terms.len() == self.r
            && self.terms.iter().enumerate().all(|(i, (w, c))| *w == Word::unit(i + 1, i + 1) && c.is_one())
    }
}

impl fmt::Display for StarPoly {
    /// Output parses back to the same element (for the same `r`, `n`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.is_identity() {
            return f.write_str("1");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            if self.r > 1 {
                factors.push(format!("e[{},{}]", w.j, w.k));
            }
            factors.extend(w.mu.iter().map(|m| format!("s[{m}]")));
            factors.extend(w.nu.iter().rev().map(|m| format!("s[{m}]*")));
            let body = factors.join(" ");
            let mag = c.abs();
            let text = match (body.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => body,
                (false, false) => format!("{mag} {body}"),
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{text}")?,
                (0, true) => write!(f, "-{text}")?,
                (_, false) => write!(f, " + {text}")?,
                (_, true) => write!(f, " - {text}")?,
            }
        }
        Ok(())
    }
}

/// `M_r ⊗ O_n` together with the term cap used by normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarAlgebra {
    pub r: usize,
    pub n: usize,
    pub term_cap: usize,
}

impl StarAlgebra {
    pub fn new(r: usize, n: usize) -> Self {
        assert!(r >= 1 && n >= 2, "need r ≥ 1 and n ≥ 2");
        StarAlgebra { r, n, term_cap: DEFAULT_TERM_CAP }
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn zero(&self) -> StarPoly {
        StarPoly { r: self.r, n: self.n, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> StarPoly {
        self.integer(BigInt::one())
    }

    /// `c · 1`
    pub fn integer(&self, c: BigInt) -> StarPoly {
        let mut p = self.zero();
        if !c.is_zero() {
            for j in 1..=self.r {
                p.terms.insert(Word::unit(j, j), c.clone());
            }
        }
        p
    }

    /// `e_{j,k} ⊗ 1`
    pub fn e(&self, j: usize, k: usize) -> Result<StarPoly, StarError> {
        self.check_matrix_index(j)?;
        self.check_matrix_index(k)?;
        Ok(self.monomial(Word::unit(j, k), BigInt::one()))
    }

    /// `1 ⊗ s_m`
    pub fn s(&self, m: usize) -> Result<StarPoly, StarError> {
        self.check_isometry_index(m)?;
        let mut p = self.zero();
        for j in 1..=self.r {
            p.terms.insert(Word::new(j, j, vec![m], Vec::new()), BigInt::one());
        }
        Ok(p)
    }

    /// A single word with coefficient `c`, normalized.
    pub fn word(&self, w: Word, c: BigInt) -> Result<StarPoly, StarError> {
        self.check_matrix_index(w.j)?;
        self.check_matrix_index(w.k)?;
        for &m in w.mu.iter().chain(&w.nu) {
            self.check_isometry_index(m)?;
        }
        self.normalize(&self.monomial(w, c))
    }

    /// Builds a polynomial from raw terms and normalizes it.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Word, BigInt)>) -> Result<StarPoly, StarError> {
        let mut p = self.zero();
        for (w, c) in terms {
            self.check_matrix_index(w.j)?;
            self.check_matrix_index(w.k)?;
            for &m in w.mu.iter().chain(&w.nu) {
                self.check_isometry_index(m)?;
            }
            add_term(&mut p.terms, w, c);
        }
        self.normalize(&p)
    }

    fn monomial(&self, w: Word, c: BigInt) -> StarPoly {
        let mut p = self.zero();
        add_term(&mut p.terms, w, c);
        p
    }

    fn check_matrix_index(&self, j: usize) -> Result<(), StarError> {
        if (1..=self.r).contains(&j) {
            Ok(())
        } else {
            Err(StarError::Index { column: 0, message: format!("matrix index {j} outside 1..={}", self.r) })
        }
    }

    fn check_isometry_index(&self, m: usize) -> Result<(), StarError> {
        if (1..=self.n).contains(&m) {
            Ok(())
        } else {
            Err(StarError::Index { column: 0, message: format!("isometry index {m} outside 1..={}", self.n) })
        }
    }

    fn check(&self, p: &StarPoly) -> Result<(), StarError> {
        if (p.r, p.n) == (self.r, self.n) {
            Ok(())
        } else {
            Err(StarError::DimensionMismatch(format!(
                "element of M_{} ⊗ O_{} used in M_{} ⊗ O_{}",
                p.r, p.n, self.r, self.n
            )))
        }
    }

    pub fn add(&self, p: &StarPoly, q: &StarPoly) -> Result<StarPoly, StarError> {
        self.check(p)?;
        self.check(q)?;
        let mut out = p.clone();
        for (w, c) in &q.terms {
            add_term(&mut out.terms, w.clone(), c.clone());
        }
        self.normalize(&out)
    }

    pub fn sub(&self, p: &StarPoly, q: &StarPoly) -> Result<StarPoly, StarError> {
        self.add(p, &self.neg(q))
    }

    pub fn neg(&self, p: &StarPoly) -> StarPoly {
        self.scale(p, &BigInt::from(-1))
    }

    pub fn scale(&self, p: &StarPoly, c: &BigInt) -> StarPoly {
        if c.is_zero() {
            return StarPoly { r: p.r, n: p.n, terms: BTreeMap::new() };
        }
        let terms = p.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        StarPoly { r: p.r, n: p.n, terms }
    }

    pub fn mul(&self, p: &StarPoly, q: &StarPoly) -> Result<StarPoly, StarError> {
        self.check(p)?;
        self.check(q)?;
        let mut out = self.zero();
        for (a, x) in &p.terms {
            for (b, y) in &q.terms {
                if let Some(w) = a.mul(b) {
                    add_term(&mut out.terms, w, x * y);
                    if out.terms.len() > self.term_cap {
                        return Err(StarError::TermCap(self.term_cap));
                    }
                }
            }
        }
        self.normalize(&out)
    }

    /// Product of a sequence; the empty product is `1`.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a StarPoly>) -> Result<StarPoly, StarError> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn adjoint(&self, p: &StarPoly) -> Result<StarPoly, StarError> {
        self.check(p)?;
        let mut out = self.zero();
        for (w, c) in &p.terms {
            add_term(&mut out.terms, w.adjoint(), c.clone());
        }
        self.normalize(&out)
    }

    pub fn equal(&self, p: &StarPoly, q: &StarPoly) -> Result<bool, StarError> {
        Ok(self.sub(p, q)?.is_zero())
    }

    /// Canonical form.
    ///
    /// Words with the same `(j, k, |μ| − |ν|)` are expanded to a common
    /// length of `μ` with `s_μ s_ν* = Σᵢ s_{μi} s_{νi}*`; at a fixed length
    /// such words are linearly independent. The common length is then
    /// lowered while the expansion can be undone, which makes the result the
    /// unique shortest representation.
    pub fn normalize(&self, p: &StarPoly) -> Result<StarPoly, StarError> {
        self.check(p)?;
        let n = self.n;
        let mut groups: BTreeMap<(usize, usize, isize), Vec<(&Word, &BigInt)>> = BTreeMap::new();
        for (w, c) in &p.terms {
            if !c.is_zero() {
                groups.entry((w.j, w.k, w.degree())).or_default().push((w, c));
            }
        }

        let mut out = self.zero();
        let mut budget = self.term_cap;
        for ((j, k, d), terms) in groups {
            let level = terms.iter().map(|(w, _)| w.mu.len()).max().unwrap_or(0);
            // expanded size, checked before any allocation
            let mut size: usize = 0;
            for (w, _) in &terms {
                let gap = (level - w.mu.len()) as u32;
                let count = n.checked_pow(gap).ok_or(StarError::TermCap(self.term_cap))?;
                size = size.saturating_add(count);
            }
            if size > budget {
                return Err(StarError::TermCap(self.term_cap));
            }

            let mut block: BTreeMap<(Vec<usize>, Vec<usize>), BigInt> = BTreeMap::new();
            for (w, c) in &terms {
                let gap = level - w.mu.len();
                for suffix in suffixes(n, gap) {
                    let mut mu = w.mu.clone();
                    mu.extend_from_slice(&suffix);
                    let mut nu = w.nu.clone();
                    nu.extend_from_slice(&suffix);
                    *block.entry((mu, nu)).or_insert_with(BigInt::zero) += *c;
                }
            }
            block.retain(|_, c| !c.is_zero());
            while let Some(smaller) = contract(&block, n) {
                block = smaller;
            }
            budget -= block.len().min(budget);
            for ((mu, nu), c) in block {
                debug_assert_eq!(mu.len() as isize - nu.len() as isize, d);
                out.terms.insert(Word::new(j, k, mu, nu), c);
            }
        }
        Ok(out)
    }
}

fn add_term(terms: &mut BTreeMap<Word, BigInt>, w: Word, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let entry = terms.entry(w);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// All words of length `len` over `1..=n`, in lexicographic order.
fn suffixes(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=n).map(move |a| {
                    let mut x = w.clone();
                    x.push(a);
                    x
                })
            })
            .collect();
    }
    out
}

/// Undoes one expansion step if every `(μ', ν')` block consists of exactly
/// the `n` words `(μ'a, ν'a)` with a common coefficient.
fn contract(
    block: &BTreeMap<(Vec<usize>, Vec<usize>), BigInt>,
    n: usize,
) -> Option<BTreeMap<(Vec<usize>, Vec<usize>), BigInt>> {
    if block.is_empty() {
        return None;
    }
    let mut parents: BTreeMap<(Vec<usize>, Vec<usize>), (BigInt, usize)> = BTreeMap::new();
    for ((mu, nu), c) in block {
        let (&a, mu0) = mu.split_last()?;
        let (&b, nu0) = nu.split_last()?;
        if a != b {
            return None;
        }
        match parents.entry((mu0.to_vec(), nu0.to_vec())) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert((c.clone(), 1));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let (c0, count) = o.get_mut();
                if c0 != c {
                    return None;
                }
                *count += 1;
            }
        }
    }
    if parents.values().any(|(_, count)| *count != n) {
        return None;
    }
    Some(parents.into_iter().map(|(key, (c, _))| (key, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(j: usize, k: usize, mu: &[usize], nu: &[usize]) -> Word {
        Word::new(j, k, mu.to_vec(), nu.to_vec())
    }

    #[test]
    fn unit_relation() {
        let alg = StarAlgebra::new(1, 2);
        let sum = alg
            .from_terms([(w(1, 1, &[1], &[1]), 1.into()), (w(1, 1, &[2], &[2]), 1.into())])
            .unwrap();
        assert_eq!(sum, alg.one());
        assert_eq!(sum.to_string(), "1");
    }

    #[test]
    fn isometry_and_orthogonality() {
        let alg = StarAlgebra::new(1, 3);
        let s1 = alg.s(1).unwrap();
        let s2 = alg.s(2).unwrap();
        let p1 = alg.mul(&s1, &alg.adjoint(&s1).unwrap()).unwrap();
        assert_eq!(alg.mul(&p1, &s1).unwrap(), s1);
        assert!(alg.mul(&alg.adjoint(&s1).unwrap(), &s2).unwrap().is_zero());
        assert!(!alg.equal(&s1, &s2).unwrap());
    }

    #[test]
    fn partial_expansion_does_not_contract() {
        let alg = StarAlgebra::new(1, 2);
        // s₁s₁* alone is not contractible; 1 − s₁s₁* = s₂s₂*
        let p1 = alg.word(w(1, 1, &[1], &[1]), 1.into()).unwrap();
        assert_eq!(p1.len(), 1);
        let q = alg.sub(&alg.one(), &p1).unwrap();
        assert_eq!(q, alg.word(w(1, 1, &[2], &[2]), 1.into()).unwrap());
        assert_eq!(q.to_string(), "s[2] s[2]*");
    }

    #[test]
    fn mismatched_matrix_units_vanish() {
        let alg = StarAlgebra::new(3, 2);
        let a = alg.e(1, 2).unwrap();
        let b = alg.e(3, 1).unwrap();
        assert!(alg.mul(&a, &b).unwrap().is_zero());
        assert_eq!(alg.mul(&a, &alg.e(2, 3).unwrap()).unwrap(), alg.e(1, 3).unwrap());
    }

    #[test]
    fn adjoint_of_word() {
        let alg = StarAlgebra::new(2, 2);
        let x = alg.word(w(1, 2, &[1], &[]), 1.into()).unwrap();
        assert_eq!(alg.adjoint(&x).unwrap(), alg.word(w(2, 1, &[], &[1]), 1.into()).unwrap());
        assert_eq!(alg.adjoint(&x).unwrap().to_string(), "e[2,1] s[1]*");
    }

    #[test]
    fn dimension_and_index_errors() {
        let a = StarAlgebra::new(2, 2);
        let b = StarAlgebra::new(3, 2);
        assert!(matches!(a.add(&a.one(), &b.one()), Err(StarError::DimensionMismatch(_))));
        assert!(matches!(a.e(3, 1), Err(StarError::Index { .. })));
        assert!(matches!(a.s(0), Err(StarError::Index { .. })));
    }

    #[test]
    fn term_cap_is_enforced() {
        let alg = StarAlgebra::new(1, 4).with_term_cap(100);
        // 1 + s₁⁵s₁⁵* forces 4⁵ terms for the unit at level 5
        let long = alg.zero();
        let mut long = long;
        long.terms.insert(Word::unit(1, 1), BigInt::one());
        long.terms.insert(w(1, 1, &[1; 5], &[1; 5]), BigInt::one());
        assert!(matches!(alg.normalize(&long), Err(StarError::TermCap(100))));
        let alg = alg.with_term_cap(DEFAULT_TERM_CAP);
        assert_eq!(alg.normalize(&long).unwrap().len(), 1024);
    }

    #[test]
    fn display_signs_and_coefficients() {
        let alg = StarAlgebra::new(2, 2);
        let p = alg
            .from_terms([(w(1, 2, &[1], &[2]), (-3).into()), (w(2, 2, &[], &[]), 1.into())])
            .unwrap();
        assert_eq!(p.to_string(), "-3 e[1,2] s[1] s[2]* + e[2,2]");
        assert_eq!(alg.integer(2.into()).to_string(), "2 e[1,1] + 2 e[2,2]");
        assert_eq!(alg.zero().to_string(), "0");
    }
}
