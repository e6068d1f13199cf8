//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use super::{DenseMatrix, KernelError};

/// Maximum number of full cyclic sweeps before giving up.
pub const JACOBI_SWEEP_CAP: usize = 30;

/// Eigen-decomposition `S = V·diag(values)·Vᵀ`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub vectors: DenseMatrix,
    pub values: Vec<f64>,
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
///
/// The input is symmetrized first. A rotation is skipped when the
/// off-diagonal entry is negligible relative to its diagonal pair; the sweep
/// loop stops once a full sweep performs no rotation.
pub fn sym_eig(s: &DenseMatrix) -> Result<SymEig, KernelError> {
    let n = s.rows();
    if s.cols() != n {
        return Err(KernelError::NotSquare { rows: n, cols: s.cols() });
    }
    if !s.is_finite() {
        return Err(KernelError::NonFinite);
    }
    let mut a = s.symmetrized();
    let mut v = DenseMatrix::identity(n);
    let eps = f64::EPSILON;
    let scale = a.max_abs();

    let mut converged = n == 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == JACOBI_SWEEP_CAP {
            return Err(KernelError::NoConvergence { sweeps: JACOBI_SWEEP_CAP });
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let negligible =
                    apq.abs() <= eps * (app.abs() * aqq.abs()).sqrt() || apq.abs() <= f64::MIN_POSITIVE * scale;
                if negligible {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let sn = t * c;
                rotate(&mut a, &mut v, p, q, c, sn, t, apq);
            }
        }
        converged = !rotated;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = v.select_cols(&order);
    Ok(SymEig { vectors, values })
}

#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64, t: f64, apq: f64) {
    let n = a.rows();
    let tau = s / (1.0 + c);
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let np = akp - s * (akq + tau * akp);
        let nq = akq + s * (akp - tau * akq);
        a[(k, p)] = np;
        a[(p, k)] = np;
        a[(k, q)] = nq;
        a[(q, k)] = nq;
    }
    let (vp, vq) = v.two_cols_mut(p, q);
    for k in 0..n {
        let x = vp[k];
        let y = vq[k];
        vp[k] = x - s * (y + tau * x);
        vq[k] = y + s * (x - tau * y);
    }
}
