use super::{axpy, dot, vec_norm, DenseMatrix};

/// Householder QR of a tall matrix `W` (m ≥ n).
///
/// Returns the explicit `m × n` orthonormal factor `Y` and the `n × n` upper
/// triangular `S` with `W = Y·S`. The diagonal of `S` is made non-negative by
/// flipping signs of matching columns of `Y` and rows of `S`. A zero column
/// of the trailing submatrix yields a zero diagonal entry; no error is
/// raised for rank deficiency.
pub fn householder_qr(w: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let (m, n) = w.shape();
    assert!(m >= n, "householder_qr requires m >= n (got {m}x{n})");

    let mut work = w.clone();
    // Reflector k is I - tau_k v_k v_kᵀ with v_k[k] = 1 stored implicitly.
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut taus = Vec::with_capacity(n);
    let mut s = DenseMatrix::zeros(n, n);

    for k in 0..n {
        let x = &work.col(k)[k..];
        let alpha = x[0];
        let norm = vec_norm(x);
        let (v, tau, beta) = if norm == 0.0 {
            (vec![0.0; m - k], 0.0, 0.0)
        } else {
            let beta = if alpha >= 0.0 { -norm } else { norm };
            let v0 = alpha - beta;
            let mut v: Vec<f64> = x.iter().map(|&xi| xi / v0).collect();
            v[0] = 1.0;
            let tau = (beta - alpha) / beta;
            (v, tau, beta)
        };
        s[(k, k)] = beta;
        for j in k + 1..n {
            let cj = &mut work.col_mut(j)[k..];
            let t = tau * dot(&v, cj);
            axpy(-t, &v, cj);
            s[(k, j)] = cj[0];
        }
        vs.push(v);
        taus.push(tau);
    }

    // Y = H_0 H_1 ... H_{n-1} [I_n; 0], accumulated backwards.
    let mut y = DenseMatrix::zeros(m, n);
    for j in 0..n {
        y[(j, j)] = 1.0;
    }
    for k in (0..n).rev() {
        let (v, tau) = (&vs[k], taus[k]);
        if tau == 0.0 {
            continue;
        }
        for j in k..n {
            let cj = &mut y.col_mut(j)[k..];
            let t = tau * dot(v, cj);
            axpy(-t, v, cj);
        }
    }

    for k in 0..n {
        if s[(k, k)] < 0.0 {
            for j in k..n {
                s[(k, j)] = -s[(k, j)];
            }
            for yi in y.col_mut(k) {
                *yi = -*yi;
            }
        }
    }
    (y, s)
}
