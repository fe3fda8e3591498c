//! Test-matrix families: Hilbert, synthetic low-rank products, and seeded
//! uniform noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CurError, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Hilbert matrix `H(i, j) = 1 / (i + j + 1)` with 0-based indices.
pub fn hilbert<T: Scalar>(n: usize) -> Result<Matrix<T>> {
    if n == 0 {
        return Err(CurError::InvalidDimension(
            "hilbert matrix of order 0".into(),
        ));
    }
    Matrix::from_fn(n, n, |i, j| T::one() / T::of_count(i + j + 1))
}

/// Rank-`r` product `H = F · Fᵀ` where `F` is `n × r` with
/// `F(i, j) = 1 / (i + j)` over 1-based indices.
///
/// Writing the right factor as `B(i, j) = 1 / (i + j)` (`r × n`) gives
/// `B = Fᵀ`, so `H` is symmetric; each entry is summed in the same order
/// from commuting products, which keeps the symmetry exact.
pub fn synthetic_lowrank<T: Scalar>(n: usize, r: usize) -> Result<Matrix<T>> {
    if r == 0 || r > n {
        return Err(CurError::InvalidRank(format!(
            "generator rank {r} must lie in 1..={n}"
        )));
    }
    let left = Matrix::from_fn(n, r, |i, j| T::one() / T::of_count(i + j + 2))?;
    let right = Matrix::from_fn(r, n, |i, j| T::one() / T::of_count(i + j + 2))?;
    left.matmul(&right)
}

/// Entries drawn uniformly from `[-1, 1)` with a ChaCha8 stream seeded by
/// `seed`.
pub fn random_uniform<T: Scalar>(rows: usize, cols: usize, seed: u64) -> Result<Matrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(rows, cols, |_, _| T::of(rng.gen_range(-1.0..1.0)))
}
