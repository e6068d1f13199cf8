//! Dense linear-algebra kernels shared by the factorizations and the
//! error-analysis code: Cholesky, Householder QR, a Jacobi symmetric
//! eigensolver, triangular solves, norms, Haar-random orthogonal matrices and
//! the SPD inner-product operator.
//!
//! Every routine here is a pure function of its arguments.

mod cholesky;
mod eigen;
mod householder;
mod inner_product;
mod matrix;
mod norms;
mod random;
mod triangular;

use thiserror::Error;

pub use cholesky::{cholesky_tridiagonal, cholesky_upper, BidiagonalFactor};
pub use eigen::{sym_eig, SymEig, JACOBI_SWEEP_CAP};
pub use householder::householder_qr;
pub use inner_product::{ip_apply, EigenFactorization, InnerProduct, InnerProductKind};
pub use matrix::{axpy, dot, vec_norm, DenseMatrix};
pub use norms::{singular_values, singular_values_jacobi, two_norm};
pub use random::{gaussian_matrix, haar_orthogonal, haar_orthogonal_with, substream, SeedRng};
pub use triangular::{invert_upper, tri_solve_left, tri_solve_right, Triangle};

/// Unit roundoff of IEEE double precision, 2⁻⁵³.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Floating-point context for bound evaluation.
///
/// `constant` multiplies every bound; it stands in for the unspecified
/// small constants and the polynomial factors in `m` and `n`, all of which
/// are taken as 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineContext {
    pub unit_roundoff: f64,
    pub constant: f64,
}

impl MachineContext {
    pub const DOUBLE: MachineContext = MachineContext { unit_roundoff: UNIT_ROUNDOFF, constant: 1.0 };

    /// `constant · u`, the prefactor shared by every bound.
    pub fn eps(&self) -> f64 {
        self.constant * self.unit_roundoff
    }
}

impl Default for MachineContext {
    fn default() -> Self {
        Self::DOUBLE
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("matrix is not positive definite: pivot {pivot} is {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("triangular matrix is singular: zero diagonal at index {index}")]
    SingularTriangular { index: usize },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix has a zero dimension")]
    Empty,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigenvalues must be positive; entry {index} is {value:e}")]
    NonPositiveEigenvalue { index: usize, value: f64 },
    #[error("eigen-factorization does not reproduce the operator (deviation {deviation:e})")]
    InconsistentEigen { deviation: f64 },
}
