use super::QrFactors;
use crate::kernels::{tri_solve_left, DenseMatrix, InnerProduct, KernelError, Triangle};

/// Generalized least-squares estimate `x = R⁻¹·Qᵀ·(A·b)`, the minimizer of
/// `‖Z·x − b‖_A` given `Z = QR`.
pub fn gls_solve(factors: &QrFactors, a: &InnerProduct, b: &[f64]) -> Result<Vec<f64>, KernelError> {
    let m = factors.q.rows();
    let b = DenseMatrix::from_col_major(m, 1, b.to_vec())?;
    let y = factors.q.t_matmul(&a.apply(&b));
    Ok(tri_solve_left(&factors.r, &y, Triangle::Upper)?.as_slice().to_vec())
}
