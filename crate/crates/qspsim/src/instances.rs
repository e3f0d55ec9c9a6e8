//! Seeded random sparse Hermitian instances.

use num_complex::Complex64;
use qspsim_core::SparseHamiltonian;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform sample from the closed unit disk.
fn unit_disk(rng: &mut impl Rng) -> Complex64 {
    let r = rng.random::<f64>().sqrt();
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex64::from_polar(r, angle)
}

/// Random `d`-sparse Hermitian matrix on `n` qubits.
///
/// The sparsity pattern is the union of the diagonal and `d - 1` random
/// perfect matchings of the basis states, so no row exceeds `d` nonzeros.
/// Off-diagonal values are uniform in the unit disk and mirrored as complex
/// conjugates; diagonal values are the real part of such a sample.
pub fn random_hamiltonian(n: usize, d: usize, rng: &mut impl Rng) -> SparseHamiltonian {
    let dim = 1usize << n;
    let d = d.clamp(1, dim);
    let mut entries = Vec::with_capacity(dim * d);
    let mut taken = std::collections::BTreeSet::new();
    for j in 0..dim {
        entries.push((j, j, Complex64::new(unit_disk(rng).re, 0.0)));
    }
    let mut order: Vec<usize> = (0..dim).collect();
    for _ in 1..d {
        order.shuffle(rng);
        for pair in order.chunks_exact(2) {
            let (j, k) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            let v = unit_disk(rng);
            if taken.insert((j, k)) {
                entries.push((j, k, v));
            }
        }
    }
    SparseHamiltonian::from_entries(n, d, &entries, true).expect("generated instance is valid")
}

/// Instance `index` of the stream selected by `seed`.
pub fn seeded_instance(n: usize, d: usize, seed: u64, index: u64) -> SparseHamiltonian {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    random_hamiltonian(n, d, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_sparsity_and_hermiticity() {
        for n in 1..=3 {
            for d in 1..=3 {
                for index in 0..5 {
                    let h = seeded_instance(n, d, 7, index);
                    let m = h.to_dense();
                    assert!((&m - m.adjoint()).camax() == 0.0);
                    for j in 0..h.dim() {
                        assert!(h.row(j).len() <= d.min(h.dim()));
                        for &(_, v) in h.row(j) {
                            assert!(v.norm() <= 1.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_per_seed_and_index() {
        assert_eq!(seeded_instance(2, 3, 1, 4), seeded_instance(2, 3, 1, 4));
        assert_ne!(seeded_instance(2, 3, 1, 4), seeded_instance(2, 3, 1, 5));
        assert_ne!(seeded_instance(2, 3, 1, 4), seeded_instance(2, 3, 2, 4));
    }

    #[test]
    fn fills_the_pattern() {
        let h = seeded_instance(3, 3, 11, 0);
        // Diagonal plus two matchings, minus any repeated pair.
        assert!(h.nnz() > 8 + 8);
    }
}
