use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lemmas::split_relative;
use super::{verify_decomposition, Decomposition, Involution, Multiplicities, Z2Error};
use crate::exactla::{f2_rank, kernel_basis, solve, solve_matrix, F2Matrix, IntMatrix};

const REPAIR_ATTEMPTS: usize = 4096;

/// Fixed and anti-fixed sublattices together with the images of `I ± S`
/// written in their coordinates.
struct EigenData {
    /// basis of ker(S − I)
    plus: IntMatrix,
    /// basis of ker(S + I)
    minus: IntMatrix,
    /// (I + S) columns in `plus` coordinates
    plus_image: IntMatrix,
    /// (I − S) columns in `minus` coordinates
    minus_image: IntMatrix,
    one_plus_s: IntMatrix,
    one_minus_s: IntMatrix,
}

impl EigenData {
    fn new(inv: &Involution) -> Self {
        let n = inv.rank();
        let id = IntMatrix::identity(n);
        let one_plus_s = &id + inv.matrix();
        let one_minus_s = &id - inv.matrix();
        let plus = kernel_basis(&one_minus_s);
        let minus = kernel_basis(&one_plus_s);
        // (I+S)ℤⁿ ⊆ ker(S−I) and (I−S)ℤⁿ ⊆ ker(S+I)
        let plus_image = solve_matrix(&plus, &one_plus_s).expect("(I+S)x is S-fixed");
        let minus_image = solve_matrix(&minus, &one_minus_s).expect("(I-S)x is S-negated");
        EigenData { plus, minus, plus_image, minus_image, one_plus_s, one_minus_s }
    }
}

/// Multiplicities `(n1, n2, n3)` of the trivial, sign and regular summands:
///
/// * `n1 = dim_𝔽₂ ker(S−I) / (I+S)ℤⁿ`
/// * `n2 = dim_𝔽₂ ker(S+I) / (I−S)ℤⁿ`
/// * `n3 = rank_𝔽₂ (I+S)`
pub fn multiplicities(inv: &Involution) -> Multiplicities {
    let data = EigenData::new(inv);
    multiplicities_from(&data)
}

fn multiplicities_from(data: &EigenData) -> Multiplicities {
    // the quotients are elementary abelian 2-groups (2·ker ⊆ image), so their
    // 𝔽₂-dimension is the corank of the coordinate matrix mod 2
    let n1 = data.plus.cols() - f2_rank(&F2Matrix::reduce(&data.plus_image));
    let n2 = data.minus.cols() - f2_rank(&F2Matrix::reduce(&data.minus_image));
    let n3 = f2_rank(&F2Matrix::reduce(&data.one_plus_s));
    Multiplicities { n1, n2, n3 }
}

/// [`decompose_with_seed`] with seed 0.
pub fn decompose(inv: &Involution) -> Result<Decomposition, Z2Error> {
    decompose_with_seed(inv, 0)
}

/// Explicit basis change to canonical block form.
///
/// The fixed lattice `K₊ = ker(S−I)` sits in the chain
/// `2K₊ ⊆ (I+S)ℤⁿ ⊆ K₊`; splitting it gives `K₊ = A₀ ⊕ A₁` with
/// `(I+S)ℤⁿ = 2A₀ ⊕ A₁`, and likewise `K₋ = B₀ ⊕ B₁`. `A₀` and `B₀` are the
/// `T1` and `T2` parts. Each basis vector `a` of `A₁` is `(I+S)y` for some
/// `y`, and the pairs `(y, Sy)` span the regular part once the `y` are
/// corrected by elements of `B₁` so that the `(I−S)y` form a basis of `B₁`
/// (the uncorrected index is odd, and the correction is a lift of an
/// invertible 𝔽₂ matrix to a unimodular one).
///
/// `seed` only drives a verified fallback search that is used if the direct
/// construction ever fails its own check.
pub fn decompose_with_seed(inv: &Involution, seed: u64) -> Result<Decomposition, Z2Error> {
    let n = inv.rank();
    if n == 0 {
        return Ok(Decomposition { mult: Multiplicities::default(), p: IntMatrix::zeros(0, 0) });
    }
    let data = EigenData::new(inv);
    let mult = multiplicities_from(&data);

    let (a0c, a1c) = split_relative(data.plus.cols(), 2, &data.plus_image)?;
    let (b0c, b1c) = split_relative(data.minus.cols(), 2, &data.minus_image)?;
    let a0 = &data.plus * &a0c;
    let a1 = &data.plus * &a1c;
    let b0 = &data.minus * &b0c;
    let b1 = &data.minus * &b1c;
    if (a0.cols(), b0.cols(), a1.cols(), b1.cols()) != (mult.n1, mult.n2, mult.n3, mult.n3) {
        return Err(Z2Error::Internal(format!(
            "split ranks {}/{}/{}/{} disagree with multiplicities {mult}",
            a0.cols(),
            b0.cols(),
            a1.cols(),
            b1.cols()
        )));
    }

    // y_i with (I+S)·y_i = a_i
    let mut ys: Vec<Vec<BigInt>> = Vec::with_capacity(mult.n3);
    for a in a1.columns() {
        let y = solve(&data.one_plus_s, &a)
            .ok_or_else(|| Z2Error::Internal("A₁ is not inside (I+S)ℤⁿ".into()))?;
        ys.push(y);
    }

    if mult.n3 > 0 {
        let k_minus = b0.hstack(&b1).expect("same row count");
        let gamma = b1_coordinates(&k_minus, &data.one_minus_s, &ys, mult.n2)?;
        if let Some(target) = unimodular_lift_mod2(&gamma) {
            let two = BigInt::from(2);
            let diff = &target - &gamma;
            let correction = IntMatrix::from_columns(
                mult.n3,
                &diff
                    .columns()
                    .iter()
                    .map(|c| c.iter().map(|x| x.div_floor(&two)).collect())
                    .collect::<Vec<_>>(),
            );
            let shift = &b1 * &correction;
            for (i, y) in ys.iter_mut().enumerate() {
                for (yi, d) in y.iter_mut().zip(shift.column(i)) {
                    *yi += d;
                }
            }
        }
    }

    let dec = assemble(inv, mult, &a0, &b0, &ys);
    if verify_decomposition(inv, &dec) {
        return Ok(dec);
    }
    repair_search(inv, mult, &a0, &b0, &data.minus, ys, seed)
}

/// Coordinates along `B₁` of `(I−S)·y_i`, one column per `y_i`.
fn b1_coordinates(
    k_minus: &IntMatrix,
    one_minus_s: &IntMatrix,
    ys: &[Vec<BigInt>],
    n2: usize,
) -> Result<IntMatrix, Z2Error> {
    let mut cols = Vec::with_capacity(ys.len());
    for y in ys {
        let w = one_minus_s.mul_vec(y);
        let c = solve(k_minus, &w)
            .ok_or_else(|| Z2Error::Internal("(I−S)y is not in ker(S+I)".into()))?;
        cols.push(c[n2..].to_vec());
    }
    Ok(IntMatrix::from_columns(ys.len(), &cols))
}

fn assemble(
    inv: &Involution,
    mult: Multiplicities,
    a0: &IntMatrix,
    b0: &IntMatrix,
    ys: &[Vec<BigInt>],
) -> Decomposition {
    let n = inv.rank();
    let mut cols = a0.columns();
    cols.extend(b0.columns());
    for y in ys {
        let sy = inv.matrix().mul_vec(y);
        cols.push(y.clone());
        cols.push(sy);
    }
    Decomposition { mult, p: IntMatrix::from_columns(n, &cols) }
}

/// Unimodular integer matrix congruent to `g` mod 2, or `None` when `g` is
/// singular mod 2.
///
/// Gauss–Jordan over 𝔽₂ uses only row swaps and row additions; replaying the
/// same operations over ℤ on the identity yields a unimodular `T` with
/// `T ≡ ḡ⁻¹`, so `T⁻¹ ≡ ḡ`.
pub(crate) fn unimodular_lift_mod2(g: &IntMatrix) -> Option<IntMatrix> {
    let n = g.rows();
    let mut a = F2Matrix::reduce(g);
    let mut t = IntMatrix::identity(n);
    let one = BigInt::from(1);
    for c in 0..n {
        let pr = (c..n).find(|&i| a.get(i, c))?;
        if pr != c {
            for j in 0..n {
                let (x, y) = (a.get(pr, j), a.get(c, j));
                a.set(pr, j, y);
                a.set(c, j, x);
            }
            t.swap_rows(pr, c);
        }
        for i in 0..n {
            if i != c && a.get(i, c) {
                for j in 0..n {
                    let v = a.get(i, j) ^ a.get(c, j);
                    a.set(i, j, v);
                }
                t.add_row_multiple(i, c, &one);
            }
        }
    }
    t.inverse_unimodular().ok()
}

fn repair_search(
    inv: &Involution,
    mult: Multiplicities,
    a0: &IntMatrix,
    b0: &IntMatrix,
    minus: &IntMatrix,
    ys: Vec<Vec<BigInt>>,
    seed: u64,
) -> Result<Decomposition, Z2Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REPAIR_ATTEMPTS {
        let trial: Vec<Vec<BigInt>> = ys
            .iter()
            .map(|y| {
                let mut y = y.clone();
                for k in minus.columns() {
                    let c: i64 = rng.gen_range(-2..=2);
                    if c != 0 {
                        for (yi, ki) in y.iter_mut().zip(&k) {
                            *yi += ki * c;
                        }
                    }
                }
                y
            })
            .collect();
        let dec = assemble(inv, mult, a0, b0, &trial);
        if verify_decomposition(inv, &dec) {
            return Ok(dec);
        }
    }
    Err(Z2Error::RepairExhausted)
}
