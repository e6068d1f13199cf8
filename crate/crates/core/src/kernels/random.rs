//! Seeded random matrices.
//!
//! The generator is ChaCha8 (`rand_chacha`), seeded with
//! `ChaCha8Rng::seed_from_u64(seed)` and split into independent substreams
//! with `set_stream`. Normal variates come from `rand_distr::StandardNormal`
//! (ziggurat). Matrices are filled in column-major order. Together these fix
//! the exact stream, so outputs are reproducible for a given seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{householder_qr, DenseMatrix};

pub type SeedRng = ChaCha8Rng;

/// Generator for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> SeedRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `rows × cols` matrix of i.i.d. standard normal entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut SeedRng) -> DenseMatrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| StandardNormal.sample(rng)).collect();
    DenseMatrix::from_col_major(rows, cols, data).expect("normal samples are finite")
}

/// Haar-distributed `m × n` matrix with orthonormal columns: the Q factor of
/// a Gaussian matrix, with the sign fixed by the non-negative diagonal of R.
pub fn haar_orthogonal_with(m: usize, n: usize, rng: &mut SeedRng) -> DenseMatrix {
    assert!(m >= n && n >= 1);
    let g = gaussian_matrix(m, n, rng);
    householder_qr(&g).0
}

/// Haar-distributed `m × m` orthogonal matrix, deterministic in `seed`.
pub fn haar_orthogonal(m: usize, seed: u64) -> DenseMatrix {
    haar_orthogonal_with(m, m, &mut substream(seed, 0))
}
