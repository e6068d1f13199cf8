use super::cholqr::singular_r;
use super::{check_shape, finish, Breakdown, BreakdownStage, Diagnostics, FactorizationOutcome};
use crate::kernels::{
    cholesky_tridiagonal, cholesky_upper, householder_qr, sym_eig, tri_solve_left, BidiagonalFactor, DenseMatrix,
    InnerProduct, InnerProductKind, KernelError, Triangle,
};

/// Upper Cholesky factor `C` of `A = CᵀC`, stored according to the form of `A`.
enum CholFactor {
    Identity,
    Dense(DenseMatrix),
    Bidiagonal(BidiagonalFactor),
}

impl CholFactor {
    fn of(a: &InnerProduct) -> Result<Self, KernelError> {
        Ok(match a.kind() {
            InnerProductKind::Identity => CholFactor::Identity,
            InnerProductKind::Dense(s) => CholFactor::Dense(cholesky_upper(s)?),
            InnerProductKind::Tridiagonal { diag, offdiag } => {
                CholFactor::Bidiagonal(cholesky_tridiagonal(diag, offdiag)?)
            }
        })
    }

    fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        match self {
            CholFactor::Identity => x.clone(),
            CholFactor::Dense(c) => upper_times(c, x),
            CholFactor::Bidiagonal(c) => c.apply(x),
        }
    }

    fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix, KernelError> {
        match self {
            CholFactor::Identity => Ok(b.clone()),
            CholFactor::Dense(c) => tri_solve_left(c, b, Triangle::Upper),
            CholFactor::Bidiagonal(c) => Ok(c.solve(b)),
        }
    }
}

/// `C·X` for upper-triangular `C`, skipping the zero triangle.
fn upper_times(c: &DenseMatrix, x: &DenseMatrix) -> DenseMatrix {
    let m = c.rows();
    let mut out = DenseMatrix::zeros(m, x.cols());
    for j in 0..x.cols() {
        let xj = x.col(j);
        let oj = out.col_mut(j);
        for (k, &xkj) in xj.iter().enumerate() {
            if xkj != 0.0 {
                crate::kernels::axpy(xkj, &c.col(k)[..=k], &mut oj[..=k]);
            }
        }
    }
    out
}

/// QR through the Cholesky factor of `A`: `A = CᵀC`, `W = CZ`,
/// `[Y, R] = qr(W)`, then `Q` from `C·Q = Y`.
///
/// Tridiagonal `A` uses the bidiagonal Cholesky factor, so the whole
/// factorization is O(mn²).
pub fn chol_eqr(a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
    check_shape(a, z);
    let c = CholFactor::of(a).map_err(|e| Breakdown::new(BreakdownStage::CholeskyOfA, e))?;
    let w = c.apply(z);
    let (y, r) = householder_qr(&w);
    let q = c.solve(&y).map_err(singular_r)?;
    finish(q, r, Diagnostics::default())
}

/// QR through a computed eigendecomposition `A = V·D·Vᵀ`:
/// `X = VᵀZ`, `W = D^{1/2}X`, `[Y, R] = qr(W)`, `U = D^{-1/2}Y`, `Q = VU`.
///
/// The eigendecomposition is always computed from `A` (never taken from an
/// attached exact one), so its rounding errors are part of the result.
pub fn syev_eqr(a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
    check_shape(a, z);
    let eig = sym_eig(&a.to_dense()).map_err(|e| match e {
        KernelError::NoConvergence { .. } => Breakdown::new(BreakdownStage::EigenNoConvergence, e),
        other => Breakdown::new(BreakdownStage::NonFinite, other),
    })?;
    if let Some((i, &d)) = eig.values.iter().enumerate().find(|(_, &d)| !(d > 0.0)) {
        return Err(Breakdown::new(BreakdownStage::NonpositiveEigenvalue, format_args!("eigenvalue {i} is {d:e}")));
    }
    let sqrt_d: Vec<f64> = eig.values.iter().map(|d| d.sqrt()).collect();
    let inv_sqrt_d: Vec<f64> = sqrt_d.iter().map(|s| 1.0 / s).collect();
    let w = eig.vectors.t_matmul(z).scale_rows(&sqrt_d);
    let (y, r) = householder_qr(&w);
    let q = eig.vectors.matmul(&y.scale_rows(&inv_sqrt_d));
    finish(q, r, Diagnostics::default())
}
