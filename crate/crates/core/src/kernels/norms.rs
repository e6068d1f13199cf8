use super::{dot, householder_qr, sym_eig, vec_norm, DenseMatrix};

/// Gram matrix of the smaller side of `m / scale`.
fn scaled_gram(m: &DenseMatrix, scale: f64) -> DenseMatrix {
    let s = m.scaled(1.0 / scale);
    if s.rows() >= s.cols() {
        s.t_matmul(&s)
    } else {
        let t = s.transpose();
        t.t_matmul(&t)
    }
}

/// Spectral norm `σ_max(M)`.
///
/// Computed from the largest eigenvalue of the smaller Gram matrix, after
/// scaling by `max|M|` to keep the squares in range. The largest singular
/// value is recovered to working accuracy; small singular values are not,
/// which is why condition numbers never come from here.
pub fn two_norm(m: &DenseMatrix) -> f64 {
    let scale = m.max_abs();
    if scale == 0.0 || !scale.is_finite() {
        return if scale.is_finite() { 0.0 } else { f64::NAN };
    }
    let g = scaled_gram(m, scale);
    match sym_eig(&g) {
        Ok(e) => scale * e.values.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => f64::NAN,
    }
}

/// Singular values of `M`, descending, via the Gram eigenvalues.
///
/// Relative accuracy of `σ_i` degrades like `u·(σ_max/σ_i)²`.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let k = m.rows().min(m.cols());
    let scale = m.max_abs();
    if scale == 0.0 {
        return vec![0.0; k];
    }
    let g = scaled_gram(m, scale);
    let e = sym_eig(&g).expect("Gram matrix of a finite matrix is symmetric and finite");
    e.values.iter().rev().map(|&l| scale * l.max(0.0).sqrt()).collect()
}

/// Singular values of a tall matrix `M`, descending, by Householder QR
/// followed by one-sided (Hestenes) Jacobi on the triangular factor.
///
/// Small singular values are accurate to about `u·σ_max` in absolute terms,
/// instead of the `√u·σ_max` floor of [`singular_values`].
pub fn singular_values_jacobi(m: &DenseMatrix) -> Vec<f64> {
    assert!(m.rows() >= m.cols(), "singular_values_jacobi requires a tall matrix");
    let (_, mut s) = householder_qr(m);
    let n = s.cols();
    let eps = f64::EPSILON;
    for _ in 0..super::JACOBI_SWEEP_CAP {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(s.col(p), s.col(p));
                let beta = dot(s.col(q), s.col(q));
                let gamma = dot(s.col(p), s.col(q));
                if gamma == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                let (sp, sq) = s.two_cols_mut(p, q);
                for (x, y) in sp.iter_mut().zip(sq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - sn * xq;
                    *y = sn * xp + c * xq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| vec_norm(s.col(j))).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
