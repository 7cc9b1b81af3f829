use std::cmp::Ordering;

/// The basis element `e_{j,k} ⊗ s_μ s_ν*` (indices 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub j: usize,
    pub k: usize,
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
}

impl Word {
    pub fn new(j: usize, k: usize, mu: Vec<usize>, nu: Vec<usize>) -> Self {
        Word { j, k, mu, nu }
    }

    /// `e_{j,k} ⊗ 1`
    pub fn unit(j: usize, k: usize) -> Self {
        Word::new(j, k, Vec::new(), Vec::new())
    }

    /// `|μ| − |ν|`, the gauge degree.
    pub fn degree(&self) -> isize {
        self.mu.len() as isize - self.nu.len() as isize
    }

    pub fn adjoint(&self) -> Word {
        Word::new(self.k, self.j, self.nu.clone(), self.mu.clone())
    }

    /// Product of two words: zero unless the matrix indices chain and one of
    /// `ν`, `μ'` is a prefix of the other (`s_a* s_b = δ_ab`).
    pub fn mul(&self, other: &Word) -> Option<Word> {
        if self.k != other.j {
            return None;
        }
        let (nu, mu2) = (&self.nu, &other.mu);
        let common = nu.len().min(mu2.len());
        if nu[..common] != mu2[..common] {
            return None;
        }
        let (mu, nu) = if nu.len() <= mu2.len() {
            // s_ν* s_{νw} = s_w
            let mut mu = self.mu.clone();
            mu.extend_from_slice(&mu2[common..]);
            (mu, other.nu.clone())
        } else {
            // s_{μ'w}* s_μ' = s_w*, and s_w* s_ν'* = s_{ν'w}*
            let mut nu2 = other.nu.clone();
            nu2.extend_from_slice(&nu[common..]);
            (self.mu.clone(), nu2)
        };
        Some(Word::new(self.j, other.k, mu, nu))
    }
}

// Order: matrix indices, then degree, then shorter words first, then
// lexicographic. Grouping by (j, k, degree) is contiguous in this order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.j, self.k, self.degree(), self.mu.len())
            .cmp(&(other.j, other.k, other.degree(), other.mu.len()))
            .then_with(|| self.mu.cmp(&other.mu))
            .then_with(|| self.nu.cmp(&other.nu))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
