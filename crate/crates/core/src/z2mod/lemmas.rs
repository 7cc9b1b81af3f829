//! Summand lifting and relative splitting modulo a prime.

use num_bigint::BigInt;
use num_traits::One;

use super::Z2Error;
use crate::exactla::{
    complete_to_basis, lattice_contains, lattice_index, residues, rref_mod_p, snf, IntMatrix,
};

/// Direct summand `L ⊆ ℤⁿ` whose reduction mod `p` is exactly the subspace
/// spanned by the columns of `v` (read mod `p`).
///
/// Returns a basis of `L` as columns; `rank(L) = dim V`.
pub fn lift_subspace_to_summand(n: usize, p: u64, v: &IntMatrix) -> Result<IntMatrix, Z2Error> {
    check_prime(p)?;
    if v.rows() != n {
        return Err(Z2Error::Shape(format!("subspace vectors have length {}, expected {n}", v.rows())));
    }
    // independent residues spanning V
    let (reduced, pivots) = rref_mod_p(residues(&v.transpose(), p), n, p);
    let k = pivots.len();
    let lifts: Vec<Vec<BigInt>> =
        reduced[..k].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();

    // Λ = span(lifts) + pℤⁿ has Smith form diag(1,…,1, p,…,p) with k ones.
    // Writing Λ = U⁻¹·D·ℤⁿ, the first k columns of U⁻¹ span a summand
    // contained in Λ, and a rank-k summand inside Λ reduces onto V.
    let pb = BigInt::from(p);
    let mut gens = IntMatrix::from_columns(n, &lifts);
    gens = gens.hstack(&IntMatrix::identity(n).scale(&pb)).expect("same row count");
    let (d, u, _) = snf(&gens);
    debug_assert!((0..n).all(|i| if i < k { d.get(i, i).is_one() } else { d.get(i, i) == &pb }));
    let uinv = u.inverse_unimodular().expect("snf transform is unimodular");
    Ok(uinv.select_columns(0..k))
}

/// Splits a lattice `N` with `pℤⁿ ⊆ N ⊆ ℤⁿ` (columns of `gens` generate
/// `N`) as `ℤⁿ = N₀ ⊕ N₁` with `N = p·N₀ ⊕ N₁`. Returns `(N₀, N₁)` as
/// column bases.
pub fn split_relative(n: usize, p: u64, gens: &IntMatrix) -> Result<(IntMatrix, IntMatrix), Z2Error> {
    check_prime(p)?;
    if gens.rows() != n {
        return Err(Z2Error::Shape(format!("generators have length {}, expected {n}", gens.rows())));
    }
    let pb = BigInt::from(p);
    let p_lattice = IntMatrix::identity(n).scale(&pb);
    if !lattice_contains(gens, &p_lattice) {
        return Err(Z2Error::ChainViolation);
    }
    // N₁: summand lifting the image of N mod p; N₀: any complement.
    let n1 = lift_subspace_to_summand(n, p, gens)?;
    let full = complete_to_basis(&n1).expect("lifted summand is primitive");
    let n0 = full.select_columns(n1.cols()..n);

    // N₁ ⊆ N and pN₀ ⊆ N, and both sides have index p^{rank N₀}.
    let candidate = n0.scale(&pb).hstack(&n1).expect("same row count");
    let mut expected = BigInt::one();
    for _ in 0..n0.cols() {
        expected *= &pb;
    }
    let ok = lattice_contains(gens, &candidate)
        && lattice_index(&candidate) == Some(expected.clone())
        && lattice_index(gens) == Some(expected);
    if !ok {
        return Err(Z2Error::Internal("relative splitting failed its index check".into()));
    }
    Ok((n0, n1))
}

fn check_prime(p: u64) -> Result<(), Z2Error> {
    let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if is_prime {
        Ok(())
    } else {
        Err(Z2Error::NotPrime(p))
    }
}

/// Column span of `l` reduced mod `p`, as a sorted list of reduced rows
/// (echelon basis). Used to compare subspaces.
#[cfg(test)]
pub(crate) fn reduced_span(l: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    if l.cols() == 0 {
        return Vec::new();
    }
    let (rows, pivots) = rref_mod_p(residues(&l.transpose(), p), l.rows(), p);
    rows.into_iter().take(pivots.len()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::is_primitive;

    #[test]
    fn lift_trivial_cases() {
        let l = lift_subspace_to_summand(3, 2, &IntMatrix::zeros(3, 0)).unwrap();
        assert_eq!(l.cols(), 0);
        let l = lift_subspace_to_summand(3, 2, &IntMatrix::identity(3)).unwrap();
        assert_eq!(l.cols(), 3);
        assert!(l.is_unimodular());
    }

    // Enumerating primitive vectors of height ≤ 1 that reduce into span{(1,1)}
    // gives ±(1,1) and ±(1,-1); the lift must be one of them.
    #[test]
    fn lift_line_in_plane() {
        let v = IntMatrix::from_rows(&[[1], [1]]);
        let l = lift_subspace_to_summand(2, 2, &v).unwrap();
        assert_eq!(l.cols(), 1);
        assert!(is_primitive(&l));
        assert_eq!(reduced_span(&l, 2), vec![vec![1, 1]]);
        let c: Vec<i64> = l.column(0).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert!([[1, 1], [-1, -1], [1, -1], [-1, 1]].iter().any(|w| w[..] == c[..]), "{c:?}");
    }

    #[test]
    fn lift_mod_three() {
        let v = IntMatrix::from_rows(&[[1, 2], [2, 1], [0, 0]]);
        let l = lift_subspace_to_summand(3, 3, &v).unwrap();
        assert_eq!(l.cols(), 1);
        assert!(is_primitive(&l));
        assert_eq!(reduced_span(&l, 3), reduced_span(&v, 3));
    }

    #[test]
    fn split_examples() {
        let (n0, n1) = split_relative(3, 2, &IntMatrix::identity(3)).unwrap();
        assert_eq!((n0.cols(), n1.cols()), (0, 3));

        let (n0, n1) = split_relative(3, 5, &IntMatrix::identity(3).scale(&5.into())).unwrap();
        assert_eq!((n0.cols(), n1.cols()), (3, 0));

        let n = IntMatrix::from_rows(&[[2, 0], [0, 1]]);
        let (n0, n1) = split_relative(2, 2, &n).unwrap();
        assert_eq!((n0.cols(), n1.cols()), (1, 1));
        // N₁ must lie in N and reduce to span{(0,1)}; N₀ reduces to the other line
        assert!(lattice_contains(&n, &n1));
        assert_eq!(reduced_span(&n1, 2), vec![vec![0, 1]]);
        assert!(n0.hstack(&n1).unwrap().is_unimodular());
    }

    #[test]
    fn split_rejects_broken_chain() {
        let n = IntMatrix::from_rows(&[[4, 0], [0, 1]]);
        assert!(matches!(split_relative(2, 2, &n), Err(Z2Error::ChainViolation)));
        assert!(matches!(split_relative(2, 4, &IntMatrix::identity(2)), Err(Z2Error::NotPrime(4))));
    }

    mod props {
        use proptest::prelude::*;

        use super::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn lift_is_summand_reducing_onto_v(
                n in 1usize..=5,
                p in prop::sample::select(vec![2u64, 3, 5]),
                raw in prop::collection::vec(0u64..5, 0..=15),
            ) {
                let k = raw.len() / n;
                let cols: Vec<Vec<BigInt>> = (0..k)
                    .map(|j| (0..n).map(|i| BigInt::from(raw[j * n + i] % p)).collect())
                    .collect();
                let v = IntMatrix::from_columns(n, &cols);
                let l = lift_subspace_to_summand(n, p, &v).unwrap();
                prop_assert!(is_primitive(&l));
                prop_assert_eq!(reduced_span(&l, p), reduced_span(&v, p));
            }

            #[test]
            fn split_reassembles(
                n in 1usize..=4,
                raw in prop::collection::vec(-3i64..=3, 0..=12),
            ) {
                let k = raw.len() / n;
                let mut cols: Vec<Vec<BigInt>> = (0..k)
                    .map(|j| (0..n).map(|i| BigInt::from(raw[j * n + i])).collect())
                    .collect();
                cols.extend((0..n).map(|i| (0..n).map(|r| BigInt::from(if r == i { 2 } else { 0 })).collect()));
                let gens = IntMatrix::from_columns(n, &cols);
                let (n0, n1) = split_relative(n, 2, &gens).unwrap();
                prop_assert!(n0.hstack(&n1).unwrap().is_unimodular());
                let recon = n0.scale(&2.into()).hstack(&n1).unwrap();
                prop_assert!(lattice_contains(&gens, &recon));
                prop_assert!(lattice_contains(&recon, &gens));
            }
        }
    }
}
