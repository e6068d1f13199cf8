use super::{dot, DenseMatrix, KernelError};

/// Upper Cholesky factor `R` with `RᵀR = S` and a positive diagonal.
///
/// Only the upper triangle of `S` is read. A pivot that is not strictly
/// positive is reported as [`KernelError::NotPositiveDefinite`].
pub fn cholesky_upper(s: &DenseMatrix) -> Result<DenseMatrix, KernelError> {
    let n = s.rows();
    if s.cols() != n {
        return Err(KernelError::NotSquare { rows: n, cols: s.cols() });
    }
    let mut r = DenseMatrix::zeros(n, n);
    for j in 0..n {
        // Off-diagonal entries of column j: r_ij = (s_ij - r_{:i,i}·r_{:i,j}) / r_ii.
        for i in 0..j {
            let (rj, ri) = r.col_pair_mut(j, i);
            let v = (s[(i, j)] - dot(&ri[..i], &rj[..i])) / ri[i];
            rj[i] = v;
        }
        let col = r.col(j);
        let pivot = s[(j, j)] - dot(&col[..j], &col[..j]);
        if !(pivot > 0.0) {
            return Err(KernelError::NotPositiveDefinite { pivot: j, value: pivot });
        }
        r[(j, j)] = pivot.sqrt();
    }
    Ok(r)
}

/// Upper bidiagonal Cholesky factor of a tridiagonal SPD matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BidiagonalFactor {
    /// `c_ii`, all positive.
    pub diag: Vec<f64>,
    /// `c_{i,i+1}`.
    pub superdiag: Vec<f64>,
}

impl BidiagonalFactor {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `C · X`.
    pub fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        let m = self.dim();
        assert_eq!(x.rows(), m);
        let mut out = DenseMatrix::zeros(m, x.cols());
        for j in 0..x.cols() {
            let xj = x.col(j);
            let oj = out.col_mut(j);
            for i in 0..m - 1 {
                oj[i] = self.diag[i] * xj[i] + self.superdiag[i] * xj[i + 1];
            }
            oj[m - 1] = self.diag[m - 1] * xj[m - 1];
        }
        out
    }

    /// Solves `C · X = B` by back substitution.
    pub fn solve(&self, b: &DenseMatrix) -> DenseMatrix {
        let m = self.dim();
        assert_eq!(b.rows(), m);
        let mut x = b.clone();
        for j in 0..b.cols() {
            let xj = x.col_mut(j);
            xj[m - 1] /= self.diag[m - 1];
            for i in (0..m - 1).rev() {
                xj[i] = (xj[i] - self.superdiag[i] * xj[i + 1]) / self.diag[i];
            }
        }
        x
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let m = self.dim();
        let mut c = DenseMatrix::from_diagonal(&self.diag);
        for (i, &e) in self.superdiag.iter().enumerate() {
            c[(i, i + 1)] = e;
        }
        debug_assert_eq!(c.rows(), m);
        c
    }
}

/// Cholesky factor of the tridiagonal matrix with the given diagonal and
/// off-diagonal, in O(m).
pub fn cholesky_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Result<BidiagonalFactor, KernelError> {
    let m = diag.len();
    if m == 0 {
        return Err(KernelError::Empty);
    }
    if offdiag.len() + 1 != m {
        return Err(KernelError::DimensionMismatch {
            op: "cholesky_tridiagonal",
            left: (m, 1),
            right: (offdiag.len(), 1),
        });
    }
    let mut c = vec![0.0; m];
    let mut e = vec![0.0; m - 1];
    for i in 0..m {
        let prev = if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 };
        let pivot = diag[i] - prev;
        if !(pivot > 0.0) {
            return Err(KernelError::NotPositiveDefinite { pivot: i, value: pivot });
        }
        c[i] = pivot.sqrt();
        if i + 1 < m {
            e[i] = offdiag[i] / c[i];
        }
    }
    Ok(BidiagonalFactor { diag: c, superdiag: e })
}
