use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `U·A = H`. `H` is in row echelon
/// form, every pivot is positive, and the entries above a pivot lie in
/// `[0, pivot)`. Zero rows sit at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == m {
            break;
        }
        let Some(first) = (pivot_row..m).find(|&i| !h.get(i, col).is_zero()) else { continue };
        h.swap_rows(pivot_row, first);
        u.swap_rows(pivot_row, first);
        for i in pivot_row + 1..m {
            if !h.get(i, col).is_zero() {
                let (x, y) = (h.get(pivot_row, col).clone(), h.get(i, col).clone());
                let t = Bezout::new(&x, &y);
                t.apply_rows(&mut h, pivot_row, i);
                t.apply_rows(&mut u, pivot_row, i);
            }
        }
        if h.get(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h.get(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = -h.get(i, col).div_floor(&p);
            h.add_row_multiple(i, pivot_row, &q);
            u.add_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Unimodular 2×2 transform `[[x, y], [-b/g, a/g]]` sending `(a, b)` to
/// `(g, 0)` with `g = gcd(a, b)`.
struct Bezout {
    x: BigInt,
    y: BigInt,
    u: BigInt,
    v: BigInt,
}

impl Bezout {
    fn new(a: &BigInt, b: &BigInt) -> Self {
        let e = a.extended_gcd(b);
        // when b is a multiple of a, prefer the plain elimination step
        if !a.is_zero() && b.is_multiple_of(a) {
            return Bezout { x: BigInt::one(), y: BigInt::zero(), u: -(b / a), v: BigInt::one() };
        }
        Bezout { u: -(b / &e.gcd), v: a / &e.gcd, x: e.x, y: e.y }
    }

    /// (row_i, row_j) ← (x·row_i + y·row_j, u·row_i + v·row_j)
    fn apply_rows(&self, m: &mut IntMatrix, i: usize, j: usize) {
        for c in 0..m.cols() {
            let (p, q) = (m.get(i, c).clone(), m.get(j, c).clone());
            *m.get_mut(i, c) = &self.x * &p + &self.y * &q;
            *m.get_mut(j, c) = &self.u * &p + &self.v * &q;
        }
    }

    /// (col_i, col_j) ← (x·col_i + y·col_j, u·col_i + v·col_j)
    fn apply_cols(&self, m: &mut IntMatrix, i: usize, j: usize) {
        for r in 0..m.rows() {
            let (p, q) = (m.get(r, i).clone(), m.get(r, j).clone());
            *m.get_mut(r, i) = &self.x * &p + &self.y * &q;
            *m.get_mut(r, j) = &self.u * &p + &self.v * &q;
        }
    }
}

/// Smith normal form.
///
/// Returns `(D, U, V)` with `U`, `V` unimodular and `U·A·V = D`, where `D`
/// is diagonal with non-negative entries `d₁ | d₂ | …` (zeros last).
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);

        loop {
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let b = Bezout::new(d.get(t, t), d.get(i, t));
                    b.apply_rows(&mut d, t, i);
                    b.apply_rows(&mut u, t, i);
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let b = Bezout::new(d.get(t, t), d.get(t, j));
                    b.apply_cols(&mut d, t, j);
                    b.apply_cols(&mut v, t, j);
                }
            }
            // column operations can refill the pivot column
            if (t + 1..m).any(|i| !d.get(i, t).is_zero()) {
                continue;
            }
            let p = d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    (d, u, v)
}

/// Diagonal of a Smith form (length `min(rows, cols)`).
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let (d, _, _) = snf(a);
    (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect()
}

/// Rank over ℚ, read off the Hermite form.
pub fn rank(a: &IntMatrix) -> usize {
    smith_diagonal(a).iter().filter(|x| !x.is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for i in 0..h.rows() {
            let lead = (0..h.cols()).find(|&j| !h.get(i, j).is_zero());
            match lead {
                None => seen_zero_row = true,
                Some(j) => {
                    if seen_zero_row || last_pivot.is_some_and(|p| j <= p) {
                        return false;
                    }
                    let p = h.get(i, j);
                    if !p.is_positive() {
                        return false;
                    }
                    for r in 0..i {
                        let x = h.get(r, j);
                        if x.is_negative() || x >= p {
                            return false;
                        }
                    }
                    last_pivot = Some(j);
                }
            }
        }
        true
    }

    fn is_snf(d: &IntMatrix) -> bool {
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j && !d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        diag.iter().all(|x| !x.is_negative())
            && diag.windows(2).all(|w| {
                if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    w[1].is_multiple_of(&w[0])
                }
            })
    }

    #[test]
    fn hnf_permutation() {
        let a = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::from_rows(&[[0, 1], [1, 0]]));
    }

    #[test]
    fn hnf_already_reduced() {
        let a = IntMatrix::from_rows(&[[2, 0], [0, 3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, a);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_gcd_pivot() {
        let a = IntMatrix::from_rows(&[[2, 4], [1, 3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h.get(0, 0), &BigInt::one());
        assert_eq!(&u * &a, h);
        assert!(u.det().unwrap().abs().is_one());
        assert!(is_hnf(&h));
        // det 2 forces the second pivot
        assert_eq!(h, IntMatrix::from_rows(&[[1, 1], [0, 2]]));
    }

    #[test]
    fn snf_examples() {
        let (d, _, _) = snf(&IntMatrix::identity(3));
        assert_eq!(d, IntMatrix::identity(3));

        for (a, want) in [
            (IntMatrix::from_rows(&[[2, 0], [0, 3]]), [1, 6]),
            (IntMatrix::from_rows(&[[3, 0], [1, 1]]), [1, 3]),
        ] {
            let (d, u, v) = snf(&a);
            assert_eq!(&(&u * &a) * &v, d);
            assert!(u.is_unimodular() && v.is_unimodular());
            assert_eq!(d, IntMatrix::from_rows(&[[want[0], 0], [0, want[1]]]));
        }
    }

    #[test]
    fn snf_rectangular_and_degenerate() {
        let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let (d, u, v) = snf(&a);
        assert_eq!(&(&u * &a) * &v, d);
        assert!(is_snf(&d));
        assert_eq!(smith_diagonal(&a), vec![2.into(), 6.into(), 12.into()]);

        let z = IntMatrix::zeros(2, 3);
        let (d, u, v) = snf(&z);
        assert!(d.is_zero() && u.is_identity() && v.is_identity());

        let e = IntMatrix::zeros(0, 3);
        let (d, _, v) = snf(&e);
        assert_eq!((d.rows(), d.cols(), v.rows()), (0, 3, 3));
    }

    #[test]
    fn rank_counts_nonzero_invariants() {
        assert_eq!(rank(&IntMatrix::from_rows(&[[1, 1], [1, 1]])), 1);
        assert_eq!(rank(&IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6], [7, 8, 9]])), 2);
        assert_eq!(rank(&IntMatrix::zeros(4, 0)), 0);
    }

    pub(super) fn check_hnf(a: &IntMatrix) {
        let (h, u) = hnf(a);
        assert!(u.is_unimodular(), "U not unimodular for {a}");
        assert_eq!(&u * a, h);
        assert!(is_hnf(&h), "not in HNF: {h}");
    }

    pub(super) fn check_snf(a: &IntMatrix) {
        let (d, u, v) = snf(a);
        assert!(u.is_unimodular() && v.is_unimodular());
        assert_eq!(&(&u * a) * &v, d);
        assert!(is_snf(&d), "not in SNF: {d}");
        // reconstruct A = U⁻¹ D V⁻¹
        let back = &(&u.inverse_unimodular().unwrap() * &d) * &v.inverse_unimodular().unwrap();
        assert_eq!(&back, a);
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        fn small_matrix() -> impl Strategy<Value = IntMatrix> {
            (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
                prop::collection::vec(-9i64..=9, r * c).prop_map(move |v| {
                    let rows: Vec<Vec<i64>> = v.chunks(c).map(|ch| ch.to_vec()).collect();
                    IntMatrix::from_rows(&rows)
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn hnf_postconditions(a in small_matrix()) {
                check_hnf(&a);
            }

            #[test]
            fn snf_postconditions_and_round_trip(a in small_matrix()) {
                check_snf(&a);
            }
        }
    }
}
