use super::{check_shape, finish, upper_product, Breakdown, BreakdownStage, Diagnostics, FactorizationOutcome};
use crate::kernels::{cholesky_upper, householder_qr, tri_solve_right, DenseMatrix, InnerProduct, KernelError};

/// Cholesky QR: `B = AZ`, `C = ZᵀB`, `R = chol(C)`, `Q = Z/R`.
///
/// Breaks down with [`BreakdownStage::CholeskyOfNormal`] once `ZᵀAZ` is
/// numerically indefinite, roughly when `κ(A^{1/2}Z)² ≳ 1/u`.
pub fn cholqr(a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
    check_shape(a, z);
    let b = a.apply(z);
    let c = z.t_matmul_upper(&b);
    let r = cholesky_upper(&c).map_err(|e| Breakdown::new(BreakdownStage::CholeskyOfNormal, e))?;
    let q = tri_solve_right(z, &r).map_err(singular_r)?;
    finish(q, r, Diagnostics::default())
}

/// Cholesky QR preceded by a Euclidean Householder QR:
/// `[Y, S] = qr(Z)`, `[Q, U] = cholqr(A, Y)`, `R = U·S`.
pub fn pre_cholqr(a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
    check_shape(a, z);
    let (y, s) = householder_qr(z);
    if let Some(k) = (0..s.rows()).find(|&k| s[(k, k)] == 0.0) {
        return Err(Breakdown::new(BreakdownStage::SingularR, format_args!("Z is rank deficient at column {k}")));
    }
    let inner = cholqr(a, &y)?;
    let r = upper_product(&inner.r, &s);
    finish(inner.q, r, Diagnostics::default())
}

pub(super) fn singular_r(e: KernelError) -> Breakdown {
    Breakdown::new(BreakdownStage::SingularR, e)
}
