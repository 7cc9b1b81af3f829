use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{hnf, snf, ExactError, IntMatrix};

/// ℤ-basis of `{x : A·x = 0}`, one vector per column.
///
/// The basis is returned in a canonical form (its transpose is in Hermite
/// form), and the lattice it spans is saturated.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    // U·Aᵀ = H; rows of U opposite the zero rows of H span the kernel.
    let (h, u) = hnf(&a.transpose());
    let zero_rows: Vec<usize> = (0..h.rows())
        .filter(|&i| (0..h.cols()).all(|j| h.get(i, j).is_zero()))
        .collect();
    if zero_rows.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    let basis_rows = u.select_rows(zero_rows);
    let (canon, _) = hnf(&basis_rows);
    canon.transpose()
}

/// Some integer solution of `A·x = b`, or `None` when none exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows(), "right-hand side length must equal A.rows");
    // U·A·V = D, so A·x = b  ⇔  D·(V⁻¹x) = U·b
    let (d, u, v) = snf(a);
    let c = u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        let di = if i < d.cols() { d.get(i, i).clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(v.mul_vec(&y))
}

/// Solves `A·X = B` column by column; `None` if any column is unsolvable.
pub fn solve_matrix(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let cols: Option<Vec<Vec<BigInt>>> = b.columns().iter().map(|c| solve(a, c)).collect();
    cols.map(|c| IntMatrix::from_columns(a.cols(), &c))
}

/// True iff the columns of `w` are part of a ℤ-basis of ℤⁿ.
pub fn is_primitive(w: &IntMatrix) -> bool {
    if w.cols() > w.rows() {
        return false;
    }
    let (d, _, _) = snf(w);
    (0..w.cols()).all(|i| d.get(i, i).is_one())
}

/// Extends the columns of `w` (n×k) to a unimodular n×n matrix whose first
/// `k` columns are exactly `w`.
pub fn complete_to_basis(w: &IntMatrix) -> Result<IntMatrix, ExactError> {
    if !is_primitive(w) {
        return Err(ExactError::NotPrimitive);
    }
    // U·W = [I_k; 0] for a primitive W, hence W is the first k columns of U⁻¹.
    let (h, u) = hnf(w);
    debug_assert!((0..w.cols()).all(|i| h.get(i, i).is_one()));
    let full = u.inverse_unimodular()?;
    let mut cols = w.columns();
    cols.extend((w.cols()..w.rows()).map(|j| full.column(j)));
    let out = IntMatrix::from_columns(w.rows(), &cols);
    debug_assert!(out.is_unimodular());
    Ok(out)
}

/// Index `[ℤⁿ : span(columns)]`, or `None` when the columns do not have full
/// rank `n`.
pub fn lattice_index(gens: &IntMatrix) -> Option<BigInt> {
    let n = gens.rows();
    if n == 0 {
        return Some(BigInt::one());
    }
    if gens.cols() < n {
        return None;
    }
    let (d, _, _) = snf(gens);
    let mut idx = BigInt::one();
    for i in 0..n {
        let x = d.get(i, i);
        if x.is_zero() {
            return None;
        }
        idx *= x;
    }
    Some(idx)
}

/// A ℤ-basis (columns) of the lattice spanned by the columns of `gens`, in
/// the same canonical form `kernel_basis` uses.
pub fn span_basis(gens: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(&gens.transpose());
    let nonzero: Vec<usize> = (0..h.rows())
        .filter(|&i| (0..h.cols()).any(|j| !h.get(i, j).is_zero()))
        .collect();
    if nonzero.is_empty() {
        return IntMatrix::zeros(gens.rows(), 0);
    }
    h.select_rows(nonzero).transpose()
}

/// True iff every column of `sub` lies in the lattice spanned by `gens`.
pub fn lattice_contains(gens: &IntMatrix, sub: &IntMatrix) -> bool {
    sub.columns().iter().all(|c| solve(gens, c).is_some())
}
