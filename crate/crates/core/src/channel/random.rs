use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::SplitMix64;

use super::QuantumChannel;
use crate::hermlin::ComplexMatrix;
use crate::tol::MAX_DIM;
use crate::{Error, Result};

/// Random channel from a Stinespring isometry `V: A → B ⊗ E`.
///
/// `V` is the Q factor of a complex Gaussian `(d_out·env_dim) × d_in`
/// matrix drawn from a SplitMix64 stream, so a fixed seed reproduces the
/// channel bit for bit.
pub fn random_channel(d_in: usize, d_out: usize, env_dim: usize, seed: u64) -> Result<QuantumChannel> {
    if d_in == 0 || d_out == 0 || env_dim == 0 {
        return Err(Error::InvalidInput("dimensions must be positive".into()));
    }
    if d_in * d_out > MAX_DIM {
        return Err(Error::Size(format!("Choi dimension {} exceeds {MAX_DIM}", d_in * d_out)));
    }
    let rows = d_out * env_dim;
    if rows < d_in {
        return Err(Error::InvalidInput(format!(
            "d_out·env_dim = {rows} is smaller than d_in = {d_in}; no isometry exists"
        )));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut data = Vec::with_capacity(rows * d_in);
    for _ in 0..rows * d_in {
        data.push(Complex64::new(normal(), normal()));
    }
    let g = DMatrix::from_row_slice(rows, d_in, &data);
    let q = g.qr().q();

    let kraus = (0..env_dim)
        .map(|e| ComplexMatrix::from_fn(d_out, d_in, |o, i| q[(o * env_dim + e, i)]))
        .collect();
    QuantumChannel::from_kraus(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = random_channel(2, 3, 2, 7).unwrap();
        let b = random_channel(2, 3, 2, 7).unwrap();
        assert_eq!(a.kraus(), b.kraus());
        let c = random_channel(2, 3, 2, 8).unwrap();
        assert_ne!(a.kraus(), c.kraus());
    }

    #[test]
    fn isometry_must_exist() {
        assert!(random_channel(4, 1, 2, 0).is_err());
    }
}
