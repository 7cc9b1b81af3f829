use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{ExactError, IntMatrix};

/// Matrix over 𝔽₂.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), ncols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b % 2 == 1);
            }
        }
        m
    }

    /// Entrywise reduction mod 2.
    pub fn reduce(a: &IntMatrix) -> Self {
        let mut m = Self::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m.set(i, j, a.get(i, j).is_odd());
            }
        }
        m
    }

    /// Lift to an integer matrix with entries in {0, 1}.
    pub fn lift(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| BigInt::from(self.get(i, j) as u8)).collect())
            .collect();
        IntMatrix::from_big_rows(rows, self.cols).expect("shape preserved")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.bits[i * self.cols + j] = b;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn column(&self, j: usize) -> Vec<bool> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<bool>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &b) in c.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    fn to_residues(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u64).collect())
            .collect()
    }

    fn from_residues(rows: &[Vec<u64>], ncols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x == 1);
            }
        }
        m
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, " ")?;
            }
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form over 𝔽ₚ. Returns the reduced rows and the pivot
/// columns.
pub(crate) fn rref_mod_p(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] % p != 0) else { continue };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (rows, pivots)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(p as i128));
    e.x.rem_euclid(p as i128) as u64
}

/// Entrywise residues in `[0, p)`.
pub(crate) fn residues(a: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let pb = BigInt::from(p);
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| a.get(i, j).mod_floor(&pb).to_u64().expect("residue fits"))
                .collect()
        })
        .collect()
}

pub fn f2_rank(a: &F2Matrix) -> usize {
    rref_mod_p(a.to_residues(), a.cols, 2).1.len()
}

/// Reduced row echelon form (zero rows kept at the bottom).
pub fn f2_row_reduce(a: &F2Matrix) -> F2Matrix {
    let (rows, _) = rref_mod_p(a.to_residues(), a.cols, 2);
    F2Matrix::from_residues(&rows, a.cols)
}

/// Complement of the subspace spanned by the (independent) columns of `v`:
/// columns `W` with `span(V) ⊕ span(W) = 𝔽₂ⁿ`. The complement is spanned by
/// standard basis vectors at the non-pivot positions.
pub fn f2_complement(v: &F2Matrix) -> Result<F2Matrix, ExactError> {
    let n = v.rows;
    let (_, pivots) = rref_mod_p(v.transpose().to_residues(), n, 2);
    if pivots.len() < v.cols {
        return Err(ExactError::DependentGenerators);
    }
    let cols: Vec<Vec<bool>> = (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|j| (0..n).map(|i| i == j).collect())
        .collect();
    Ok(F2Matrix::from_columns(n, &cols))
}
