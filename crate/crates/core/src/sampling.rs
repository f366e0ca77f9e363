//! Seeded random draws for test problems and graph sampling.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg;
use crate::scalar::Real;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<T> {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DMatrix<T> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `GGᵀ/n + (K − Kᵀ)/2`: a monotone matrix whose symmetric part is almost surely definite.
pub fn monotone_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<T> {
    let g: DMatrix<T> = gaussian_matrix(rng, n, n);
    let k: DMatrix<T> = gaussian_matrix(rng, n, n);
    &g * g.transpose() / T::lit(n as f64) + (&k - k.transpose()) * T::lit(0.5)
}

/// `GGᵀ/n` with `G` Gaussian: symmetric positive semidefinite.
pub fn psd_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<T> {
    let g: DMatrix<T> = gaussian_matrix(rng, n, n);
    &g * g.transpose() / T::lit(n as f64)
}

/// Gaussian `n × m` matrix with `m ≥ n`, redrawn until it has full row rank at relative tolerance `1e-8`.
pub fn surjective_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> DMatrix<T> {
    assert!(m >= n, "a surjection onto R^{n} needs at least {n} columns");
    loop {
        let p = gaussian_matrix(rng, n, m);
        if linalg::rank(&p, T::lit(1e-8)) == n {
            return p;
        }
    }
}
