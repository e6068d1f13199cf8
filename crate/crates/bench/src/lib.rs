//! Benchmark inputs shared by the criterion suites.

use oblique_qr::harness::{perf_operator, InnerKind};
use oblique_qr::kernels::{gaussian_matrix, substream};
use oblique_qr::{DenseMatrix, InnerProduct};

/// The performance-mode operator of size `m` and a Gaussian `m×n` block.
pub fn problem(inner: InnerKind, m: usize, n: usize) -> (InnerProduct, DenseMatrix) {
    (perf_operator(inner, m), gaussian_matrix(m, n, &mut substream(1, 0)))
}
