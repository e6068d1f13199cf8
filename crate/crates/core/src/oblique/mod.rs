//! QR factorization `Z = Q·R` in the inner product defined by an SPD
//! operator `A`, so that `QᵀAQ = I` and `R` is upper triangular with a
//! positive diagonal.
//!
//! Seven algorithms are provided (MGS in two loop orders):
//!
//! | name         | method                                                   |
//! |--------------|----------------------------------------------------------|
//! | `cholqr`     | Cholesky of the normal matrix `ZᵀAZ`, then `Q = Z/R`     |
//! | `pre-cholqr` | Householder QR of `Z` first, then `cholqr` on the basis  |
//! | `chol-eqr`   | `A = CᵀC`, Euclidean QR of `CZ`, then `C·Q = Y`           |
//! | `syev-eqr`   | `A = VDVᵀ`, Euclidean QR of `D^{1/2}VᵀZ`, then unscale   |
//! | `cgs`        | classical Gram-Schmidt in the `A` inner product          |
//! | `mgs-col`    | modified Gram-Schmidt, `R` computed column by column     |
//! | `mgs-row`    | modified Gram-Schmidt, `R` computed row by row           |
//! | `cgs2`       | classical Gram-Schmidt with one full reorthogonalization |
//!
//! Numerical breakdown (a non-positive Cholesky pivot or `A`-norm) is an
//! ordinary outcome, returned as [`Breakdown`].

mod cholqr;
mod factored;
mod gls;
mod gram_schmidt;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernels::{DenseMatrix, InnerProduct};

pub use cholqr::{cholqr, pre_cholqr};
pub use factored::{chol_eqr, syev_eqr};
pub use gls::gls_solve;
pub use gram_schmidt::{cgs, cgs2, mgs, mgs_with, MgsOrder};

/// Algorithm-specific by-products of a factorization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// `max_{j≤i} ‖z_i^{(j-1)}‖₂ / ‖z_i^{(j-1)}‖_A` over the intermediate
    /// columns of MGS. `None` for other algorithms or when not tracked.
    pub mgs_norm_ratio: Option<f64>,
}

/// Computed factors `Q` (`m × n`, `A`-orthonormal up to rounding) and `R`
/// (`n × n` upper triangular, positive diagonal).
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
    pub diagnostics: Diagnostics,
}

/// Where a factorization broke down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BreakdownStage {
    /// Cholesky of `ZᵀAZ` hit a non-positive pivot.
    CholeskyOfNormal,
    /// Cholesky of `A` itself failed.
    CholeskyOfA,
    /// The eigensolver returned a non-positive eigenvalue of `A`.
    NonpositiveEigenvalue,
    /// The eigensolver did not converge.
    EigenNoConvergence,
    /// A residual column had a non-positive squared `A`-norm.
    ANormNonpositive,
    /// The triangular factor has a zero diagonal entry.
    SingularR,
    /// Overflow produced non-finite factors.
    NonFinite,
}

impl BreakdownStage {
    pub fn name(self) -> &'static str {
        match self {
            BreakdownStage::CholeskyOfNormal => "cholesky-of-normal",
            BreakdownStage::CholeskyOfA => "cholesky-of-a",
            BreakdownStage::NonpositiveEigenvalue => "nonpositive-eigenvalue",
            BreakdownStage::EigenNoConvergence => "eigen-no-convergence",
            BreakdownStage::ANormNonpositive => "a-norm-nonpositive",
            BreakdownStage::SingularR => "singular-r",
            BreakdownStage::NonFinite => "non-finite",
        }
    }
}

impl fmt::Display for BreakdownStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("breakdown ({stage}): {detail}")]
pub struct Breakdown {
    pub stage: BreakdownStage,
    pub detail: String,
}

impl Breakdown {
    pub(crate) fn new(stage: BreakdownStage, detail: impl fmt::Display) -> Self {
        Self { stage, detail: detail.to_string() }
    }
}

/// Either the factors or the point of breakdown.
pub type FactorizationOutcome = Result<QrFactors, Breakdown>;

/// The eight algorithm variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    CholQr,
    PreCholQr,
    CholEqr,
    SyevEqr,
    Cgs,
    MgsCol,
    MgsRow,
    Cgs2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::CholQr,
        Algorithm::PreCholQr,
        Algorithm::CholEqr,
        Algorithm::SyevEqr,
        Algorithm::Cgs,
        Algorithm::MgsCol,
        Algorithm::MgsRow,
        Algorithm::Cgs2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::CholQr => "cholqr",
            Algorithm::PreCholQr => "pre-cholqr",
            Algorithm::CholEqr => "chol-eqr",
            Algorithm::SyevEqr => "syev-eqr",
            Algorithm::Cgs => "cgs",
            Algorithm::MgsCol => "mgs-col",
            Algorithm::MgsRow => "mgs-row",
            Algorithm::Cgs2 => "cgs2",
        }
    }

    pub fn is_mgs(self) -> bool {
        matches!(self, Algorithm::MgsCol | Algorithm::MgsRow)
    }

    /// Runs the algorithm on `(A, Z)`.
    pub fn run(self, a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
        match self {
            Algorithm::CholQr => cholqr(a, z),
            Algorithm::PreCholQr => pre_cholqr(a, z),
            Algorithm::CholEqr => chol_eqr(a, z),
            Algorithm::SyevEqr => syev_eqr(a, z),
            Algorithm::Cgs => cgs(a, z),
            Algorithm::MgsCol => mgs(a, z, MgsOrder::ColumnOriented),
            Algorithm::MgsRow => mgs(a, z, MgsOrder::RowOriented),
            Algorithm::Cgs2 => cgs2(a, z),
        }
    }

    /// Like [`run`](Self::run) but skips diagnostics that cost extra work
    /// (the MGS norm ratio). Used for timing.
    pub fn run_untracked(self, a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
        match self {
            Algorithm::MgsCol => mgs_with(a, z, MgsOrder::ColumnOriented, false),
            Algorithm::MgsRow => mgs_with(a, z, MgsOrder::RowOriented, false),
            other => other.run(a, z),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "unknown algorithm '{0}' (expected one of cholqr, pre-cholqr, chol-eqr, syev-eqr, cgs, mgs-col, mgs-row, cgs2)"
)]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s.trim()).ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

fn check_shape(a: &InnerProduct, z: &DenseMatrix) {
    assert_eq!(a.dim(), z.rows(), "inner product dimension must match rows of Z");
    assert!(z.rows() >= z.cols(), "oblique QR requires m >= n");
}

/// Final validation shared by all algorithms: positive diagonal, finite.
fn finish(q: DenseMatrix, r: DenseMatrix, diagnostics: Diagnostics) -> FactorizationOutcome {
    if let Some(k) = (0..r.rows()).find(|&k| !(r[(k, k)] > 0.0)) {
        return Err(Breakdown::new(BreakdownStage::SingularR, format_args!("R[{k},{k}] = {:e}", r[(k, k)])));
    }
    if !q.is_finite() || !r.is_finite() {
        return Err(Breakdown::new(BreakdownStage::NonFinite, "factors contain non-finite entries"));
    }
    Ok(QrFactors { q, r, diagnostics })
}

/// Product of two upper-triangular matrices, computed on the triangle only.
fn upper_product(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    DenseMatrix::from_fn(n, n, |i, j| if i <= j { (i..=j).map(|k| a[(i, k)] * b[(k, j)]).sum() } else { 0.0 })
}
