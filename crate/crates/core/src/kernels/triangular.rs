use super::{axpy, DenseMatrix, KernelError};

/// Which triangle of a triangular matrix holds the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Upper,
    Lower,
}

fn check_diagonal(t: &DenseMatrix) -> Result<(), KernelError> {
    if t.rows() != t.cols() {
        return Err(KernelError::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    match (0..t.rows()).find(|&i| t[(i, i)] == 0.0) {
        Some(index) => Err(KernelError::SingularTriangular { index }),
        None => Ok(()),
    }
}

/// Solves `X·R = B` for upper-triangular `R` (MATLAB's `B / R`).
///
/// Each row of `X` is obtained by forward substitution against the columns
/// of `R`, so the computed rows satisfy `x_i (R + ΔR_i) = b_i` with
/// `|ΔR_i| ≤ c·n·u·|R|`.
pub fn tri_solve_right(b: &DenseMatrix, r: &DenseMatrix) -> Result<DenseMatrix, KernelError> {
    check_diagonal(r)?;
    let n = r.rows();
    if b.cols() != n {
        return Err(KernelError::DimensionMismatch { op: "tri_solve_right", left: b.shape(), right: r.shape() });
    }
    let mut x = b.clone();
    for j in 0..n {
        for k in 0..j {
            let rkj = r[(k, j)];
            if rkj != 0.0 {
                let (xj, xk) = x.col_pair_mut(j, k);
                axpy(-rkj, xk, xj);
            }
        }
        let d = r[(j, j)];
        for v in x.col_mut(j) {
            *v /= d;
        }
    }
    Ok(x)
}

/// Solves `C·X = B` for triangular `C` (MATLAB's `C \ B`).
pub fn tri_solve_left(c: &DenseMatrix, b: &DenseMatrix, triangle: Triangle) -> Result<DenseMatrix, KernelError> {
    check_diagonal(c)?;
    let n = c.rows();
    if b.rows() != n {
        return Err(KernelError::DimensionMismatch { op: "tri_solve_left", left: c.shape(), right: b.shape() });
    }
    let mut x = b.clone();
    for j in 0..b.cols() {
        let xj = x.col_mut(j);
        match triangle {
            Triangle::Upper => {
                for i in (0..n).rev() {
                    xj[i] /= c[(i, i)];
                    let xi = xj[i];
                    if xi != 0.0 {
                        axpy(-xi, &c.col(i)[..i], &mut xj[..i]);
                    }
                }
            }
            Triangle::Lower => {
                for i in 0..n {
                    xj[i] /= c[(i, i)];
                    let xi = xj[i];
                    if xi != 0.0 {
                        axpy(-xi, &c.col(i)[i + 1..], &mut xj[i + 1..]);
                    }
                }
            }
        }
    }
    Ok(x)
}

/// Explicit inverse of an upper-triangular matrix.
pub fn invert_upper(r: &DenseMatrix) -> Result<DenseMatrix, KernelError> {
    tri_solve_left(r, &DenseMatrix::identity(r.rows()), Triangle::Upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_solve_identity_is_noop() {
        let b = DenseMatrix::from_fn(4, 3, |i, j| (i * 7 + j) as f64 * 0.3);
        assert_eq!(tri_solve_right(&b, &DenseMatrix::identity(3)).unwrap(), b);
    }

    #[test]
    fn right_solve_hand_example() {
        // x·[[2,1],[0,3]] = [2,3]  ⇒  x = [1, (3 - 1)/3] = [1, 2/3]
        let b = DenseMatrix::from_rows(&[&[2.0, 3.0]]).unwrap();
        let r = DenseMatrix::from_rows(&[&[2.0, 1.0], &[0.0, 3.0]]).unwrap();
        let x = tri_solve_right(&b, &r).unwrap();
        assert_eq!(x[(0, 0)], 1.0);
        assert!((x[(0, 1)] - 2.0 / 3.0).abs() < 1e-16);
        assert!(x.matmul(&r).sub(&b).max_abs() < 1e-15);
    }

    #[test]
    fn right_solve_zero_diagonal() {
        let r = DenseMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        let b = DenseMatrix::zeros(2, 2);
        assert_eq!(tri_solve_right(&b, &r), Err(KernelError::SingularTriangular { index: 1 }));
    }

    #[test]
    fn left_solve_identity_is_noop() {
        let b = DenseMatrix::from_fn(3, 2, |i, j| i as f64 - j as f64);
        assert_eq!(tri_solve_left(&DenseMatrix::identity(3), &b, Triangle::Lower).unwrap(), b);
        assert_eq!(tri_solve_left(&DenseMatrix::identity(3), &b, Triangle::Upper).unwrap(), b);
    }

    #[test]
    fn left_solve_lower_hand_example() {
        // [[2,0],[1,3]]·x = [2,7]  ⇒  x1 = 1, x2 = (7-1)/3 = 2
        let c = DenseMatrix::from_rows(&[&[2.0, 0.0], &[1.0, 3.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[&[2.0], &[7.0]]).unwrap();
        let x = tri_solve_left(&c, &b, Triangle::Lower).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0]);
    }

    #[test]
    fn left_solve_zero_diagonal() {
        let c = DenseMatrix::from_rows(&[&[0.0, 0.0], &[1.0, 3.0]]).unwrap();
        let b = DenseMatrix::zeros(2, 1);
        assert_eq!(tri_solve_left(&c, &b, Triangle::Lower), Err(KernelError::SingularTriangular { index: 0 }));
    }

    #[test]
    fn upper_inverse() {
        let r = DenseMatrix::from_rows(&[&[2.0, 1.0, -1.0], &[0.0, 4.0, 0.5], &[0.0, 0.0, 0.25]]).unwrap();
        let inv = invert_upper(&r).unwrap();
        assert!(r.matmul(&inv).sub(&DenseMatrix::identity(3)).max_abs() < 1e-15);
        assert!(inv.is_upper_triangular());
    }

    #[test]
    fn right_solve_rowwise_backward_error() {
        let r = DenseMatrix::from_fn(6, 6, |i, j| if i <= j { 1.0 + (i * 6 + j) as f64 * 0.1 } else { 0.0 });
        let b = DenseMatrix::from_fn(9, 6, |i, j| ((i + 2 * j) as f64).sin());
        let x = tri_solve_right(&b, &r).unwrap();
        let resid = x.matmul(&r).sub(&b).abs();
        let scale = x.abs().matmul(&r.abs());
        let u = crate::kernels::UNIT_ROUNDOFF;
        for j in 0..6 {
            for i in 0..9 {
                assert!(resid[(i, j)] <= 4.0 * 6.0 * u * scale[(i, j)]);
            }
        }
    }
}
