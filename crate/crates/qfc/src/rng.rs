//! Deterministic random streams and random channel constructors.
//!
//! Every randomized routine in this crate derives an independent ChaCha12
//! stream from a user seed plus a list of integer tags (restart index, shot
//! index, history hash, ...). The derivation is a splitmix64 chain over
//! (seed, tags), so identical inputs give identical streams on every
//! platform and for any thread count.

use crate::matlin::ComplexMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive an independent stream from a seed and a tag path.
pub fn derive_rng(seed: u64, tags: &[u64]) -> ChaCha12Rng {
    let mut state = seed ^ 0x6a09e667f3bcc908;
    splitmix64(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(0x2545f4914f6cdd1d);
        splitmix64(&mut state);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Order-insensitive-free hash of an outcome prefix for stream derivation.
pub fn record_tag(prefix: &[usize]) -> u64 {
    let mut state = 0x452821e638d01377u64 ^ (prefix.len() as u64);
    for &x in prefix {
        state ^= (x as u64).wrapping_add(0x9e3779b97f4a7c15);
        splitmix64(&mut state);
    }
    splitmix64(&mut state)
}

pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Gaussian matrix with iid standard complex normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Orthonormalize the columns of a tall matrix by modified Gram-Schmidt with
/// a positive-diagonal convention. Columns must be linearly independent,
/// which holds almost surely for Gaussian input; degenerate columns are
/// re-drawn by the callers that sample randomly.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q = m.clone();
    for j in 0..cols {
        for k in 0..j {
            let mut overlap = Complex64::new(0.0, 0.0);
            for i in 0..rows {
                overlap += q[(i, k)].conj() * q[(i, j)];
            }
            for i in 0..rows {
                let qik = q[(i, k)];
                q[(i, j)] -= overlap * qik;
            }
        }
        let norm: f64 = (0..rows).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-12, "rank-deficient matrix in orthonormalization");
        // Positive-diagonal convention: make the j-th entry real nonnegative.
        let pivot = q[(j.min(rows - 1), j)];
        let phase = if pivot.norm() > 1e-300 {
            pivot / pivot.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let fix = phase.conj() / norm;
        for i in 0..rows {
            q[(i, j)] *= fix;
        }
    }
    q
}

/// Haar-like random unitary: Gaussian matrix, orthonormalized.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    orthonormalize_columns(&gaussian_matrix(n, n, rng))
}

/// Random isometry with `rows` ≥ `cols`: Gaussian matrix, orthonormalized.
pub fn random_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert!(rows >= cols);
    orthonormalize_columns(&gaussian_matrix(rows, cols, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs_identical_streams() {
        let mut a = derive_rng(7, &[1, 2]);
        let mut b = derive_rng(7, &[1, 2]);
        let mut c = derive_rng(7, &[2, 1]);
        let xa: u64 = a.random();
        let xb: u64 = b.random();
        let xc: u64 = c.random();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = derive_rng(3, &[]);
        for n in [2usize, 3, 5] {
            let u = random_unitary(n, &mut rng);
            let d = u.adjoint().mul(&u).frobenius_distance(&ComplexMatrix::identity(n));
            assert!(d < 1e-12, "defect {d}");
        }
    }

    #[test]
    fn isometry_columns_orthonormal() {
        let mut rng = derive_rng(11, &[4]);
        let v = random_isometry(12, 3, &mut rng);
        let g = v.adjoint().mul(&v);
        assert!(g.frobenius_distance(&ComplexMatrix::identity(3)) < 1e-12);
    }
}
