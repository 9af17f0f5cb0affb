#![allow(dead_code)]

use num_complex::Complex64;
use qdoeblin::hermlin::{ComplexMatrix, HermitianMatrix};
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian(n: usize, rng: &mut SplitMix64) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, rng);
    HermitianMatrix::symmetrized(&g + &g.adjoint())
}

/// Random full-rank density matrix `GG†/Tr(GG†)`.
pub fn random_state(n: usize, rng: &mut SplitMix64) -> HermitianMatrix {
    let g = gaussian_matrix(n, n, rng);
    let m = HermitianMatrix::symmetrized(g.matmul(&g.adjoint()));
    m.scale(1.0 / m.trace())
}

pub fn random_qubit_state(rng: &mut SplitMix64) -> HermitianMatrix {
    random_state(2, rng)
}

pub fn uniform(rng: &mut SplitMix64) -> f64 {
    rng.random_range(0.0..1.0)
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: got {actual}, expected {expected} within {tol}"
    );
}
