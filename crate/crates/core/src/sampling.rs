//! Seeded random instances.
//!
//! All randomness goes through [`rng`], a ChaCha8 stream keyed by a `u64` seed,
//! so sampled instances and residual tables reproduce across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{lowdin, sym_sqrt, Mat};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

pub fn random_orthogonal(rng: &mut SeededRng, n: usize) -> Mat {
    let g = gaussian_matrix(rng, n, n);
    lowdin(&g).expect("Gaussian matrix is almost surely invertible")
}

/// Symmetric positive definite with spectrum in `[lo, hi]`.
pub fn random_spd(rng: &mut SeededRng, n: usize, lo: f64, hi: f64) -> Mat {
    let o = random_orthogonal(rng, n);
    let d = Mat::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| {
        lo + (hi - lo) * rng.random::<f64>()
    }));
    let m = &o * d * o.transpose();
    (&m + m.transpose()) * 0.5
}

pub fn random_symmetric(rng: &mut SeededRng, n: usize, scale: f64) -> Mat {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.transpose()) * (0.5 * scale)
}

/// Skew matrix `O diag(σ_k R) Oᵀ` with `R = [[0,1],[-1,0]]`; singular values `σ_k`
/// are drawn uniformly from `[lo, hi]`. `n` must be even.
pub fn random_polariser(rng: &mut SeededRng, n: usize, lo: f64, hi: f64) -> Mat {
    assert!(n.is_multiple_of(2), "polariser dimension must be even");
    let o = random_orthogonal(rng, n);
    let mut core = Mat::zeros(n, n);
    for p in 0..n / 2 {
        let s = lo + (hi - lo) * rng.random::<f64>();
        core[(2 * p, 2 * p + 1)] = s;
        core[(2 * p + 1, 2 * p)] = -s;
    }
    &o * core * o.transpose()
}

/// Gram pair `(A, B)` of a factorial separating abstract subspace of even dimension `n`.
pub fn random_gram_pair(rng: &mut SeededRng, n: usize) -> (Mat, Mat) {
    let a = random_spd(rng, n, 0.5, 2.0);
    let d = random_polariser(rng, n, 0.1, 0.9);
    let ah = sym_sqrt(&a);
    let b = &ah * d * &ah;
    (a, (&b - b.transpose()) * 0.5)
}

pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
