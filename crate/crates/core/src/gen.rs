//! Seeded random instances: unimodular matrices, involutions with known
//! multiplicities, and presentations with a valid order-two automorphism.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactla::{snf, IntMatrix};
use crate::resolve::Presentation;
use crate::z2mod::{canonical_form, Multiplicities};

/// Product of at most `max_steps` elementary matrices `I + c·E_ij` with
/// `0 < |c| ≤ bound`, plus row swaps. Always unimodular.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, max_steps: usize, bound: i64) -> IntMatrix {
    let mut q = IntMatrix::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            q.negate_row(0);
        }
        return q;
    }
    let steps = rng.gen_range(0..=max_steps);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.gen_ratio(1, 8) {
            q.swap_rows(i, j);
        } else {
            let mut c = rng.gen_range(1..=bound);
            if rng.gen_bool(0.5) {
                c = -c;
            }
            q.add_row_multiple(i, j, &BigInt::from(c));
        }
    }
    q
}

/// Multiplicities with `1 ≤ n1 + n2 + 2·n3 ≤ max_rank`.
pub fn random_multiplicities<R: Rng>(rng: &mut R, max_rank: usize) -> Multiplicities {
    assert!(max_rank >= 1);
    let n = rng.gen_range(1..=max_rank);
    let n3 = rng.gen_range(0..=n / 2);
    let rest = n - 2 * n3;
    let n1 = rng.gen_range(0..=rest);
    Multiplicities::new(n1, rest - n1, n3)
}

/// `Q·C·Q⁻¹` for `C = canonical_form(mult)` and a random unimodular `Q`
/// (at most 30 elementary steps, multipliers bounded by 5). Returns the
/// involution and `Q`.
pub fn random_involution<R: Rng>(rng: &mut R, mult: Multiplicities) -> (IntMatrix, IntMatrix) {
    let n = mult.rank();
    let q = random_unimodular(rng, n, 30, 5);
    let qinv = q.inverse_unimodular().expect("unimodular by construction");
    (&(&q * &canonical_form(mult)) * &qinv, q)
}

/// A presentation with at most `max_gens` generators, relation entries in
/// `[-max_entry, max_entry]`, and a random automorphism of order two.
///
/// The automorphism is built on the Smith coordinates of the group
/// `⊕ ℤ/dᵢ ⊕ ℤ^f`: a unit `uᵢ` with `uᵢ² ≡ 1` on each cyclic factor,
/// swaps of factors of equal order, a conjugated canonical involution on
/// the free part, and a free-to-torsion term landing only in factors with
/// `uᵢ = 1` and leaving only from `−1` eigenvectors (which keeps the square
/// trivial). It is then carried back to the original generators.
pub fn random_presentation<R: Rng>(rng: &mut R, max_gens: usize, max_entry: i64) -> Presentation {
    let g = rng.gen_range(1..=max_gens);
    let r = rng.gen_range(0..=g + 1);
    let rows: Vec<Vec<i64>> =
        (0..g).map(|_| (0..r).map(|_| rng.gen_range(-max_entry..=max_entry)).collect()).collect();
    let relations = if r == 0 { IntMatrix::zeros(g, 0) } else { IntMatrix::from_rows(&rows) };

    // U·R·V = D; in the coordinates y = U·x the relations are the columns of D
    let (d, u, _) = snf(&relations);
    let divisors: Vec<BigInt> =
        (0..g).map(|i| if i < d.cols() { d.get(i, i).clone() } else { BigInt::zero() }).collect();
    let torsion: Vec<usize> = (0..g).filter(|&i| !divisors[i].is_zero()).collect();
    let free: Vec<usize> = (0..g).filter(|&i| divisors[i].is_zero()).collect();

    let mut gamma_rows = vec![vec![BigInt::zero(); g]; g];

    // cyclic factors: units squaring to one, then random swaps of equal orders
    let mut units = vec![BigInt::one(); g];
    for &i in &torsion {
        let di = &divisors[i];
        if di > &BigInt::one() {
            let candidates = square_roots_of_one(di);
            units[i] = candidates.choose(rng).expect("1 is always a root").clone();
        }
    }
    let mut perm: Vec<usize> = (0..g).collect();
    let mut unpaired = torsion.clone();
    unpaired.shuffle(rng);
    while let Some(i) = unpaired.pop() {
        if let Some(pos) = unpaired.iter().position(|&j| divisors[j] == divisors[i]) {
            if rng.gen_bool(0.5) {
                let j = unpaired.remove(pos);
                perm[i] = j;
                perm[j] = i;
                // the pair is swapped outright; units are not needed
                units[i] = BigInt::one();
                units[j] = BigInt::one();
            }
        }
    }
    for &i in &torsion {
        gamma_rows[perm[i]][i] = units[i].clone();
    }

    // free part: Q·C·Q⁻¹ plus a free-to-torsion term B·Q⁻¹
    let f = free.len();
    if f > 0 {
        let n3 = rng.gen_range(0..=f / 2);
        let n1 = rng.gen_range(0..=f - 2 * n3);
        let mult = Multiplicities::new(n1, f - 2 * n3 - n1, n3);
        let c = canonical_form(mult);
        let q = random_unimodular(rng, f, 6, 2);
        let qinv = q.inverse_unimodular().expect("unimodular by construction");
        let block = &(&q * &c) * &qinv;

        let trivial_targets: Vec<usize> =
            torsion.iter().copied().filter(|&i| perm[i] == i && units[i].is_one()).collect();
        let mut b = IntMatrix::zeros(g, f);
        for col in mult.n1..mult.n1 + mult.n2 {
            for &i in &trivial_targets {
                if rng.gen_bool(0.5) {
                    *b.get_mut(i, col) = BigInt::from(rng.gen_range(-3i64..=3));
                }
            }
        }
        let b = &b * &qinv;
        for (a, &fa) in free.iter().enumerate() {
            for (bcol, &fb) in free.iter().enumerate() {
                gamma_rows[fa][fb] = block.get(a, bcol).clone();
            }
            for &i in &torsion {
                gamma_rows[i][fa] = b.get(i, a).clone();
            }
        }
    }

    let gamma_y = IntMatrix::from_big_rows(gamma_rows, g).expect("square");
    let uinv = u.inverse_unimodular().expect("unimodular by construction");
    let gamma = &(&uinv * &gamma_y) * &u;
    let p = Presentation::new(relations, gamma);
    debug_assert!(p.check().is_ok(), "generated presentation is invalid");
    p
}

/// All `u` in `[1, d)` with `u² ≡ 1 (mod d)`.
fn square_roots_of_one(d: &BigInt) -> Vec<BigInt> {
    let dd: u64 = d.try_into().expect("small modulus");
    (1..dd)
        .filter(|&u| (u * u).mod_floor(&dd) == 1 % dd)
        .map(BigInt::from)
        .collect()
}
