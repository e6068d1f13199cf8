use super::{check_shape, finish, upper_product, Breakdown, BreakdownStage, Diagnostics, FactorizationOutcome};
use crate::kernels::{axpy, dot, vec_norm, DenseMatrix, InnerProduct};

/// Loop order of modified Gram-Schmidt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MgsOrder {
    /// `R` one column at a time; every projection needs its own `A`-apply.
    ColumnOriented,
    /// `R` one row at a time; one `A`-apply per column.
    RowOriented,
}

fn a_norm_breakdown(col: usize, value: f64) -> Breakdown {
    Breakdown::new(BreakdownStage::ANormNonpositive, format_args!("squared A-norm of column {col} is {value:e}"))
}

/// `r = √(vᵀ t)` with `t = A·v`, or breakdown if that is not positive.
fn a_norm(v: &[f64], t: &[f64], col: usize) -> Result<f64, Breakdown> {
    let s = dot(v, t);
    if s > 0.0 {
        Ok(s.sqrt())
    } else {
        Err(a_norm_breakdown(col, s))
    }
}

fn normalize(v: &mut [f64], r: f64) {
    for x in v {
        *x /= r;
    }
}

/// `‖v‖₂ / ‖v‖_A` given `t = A·v`; infinite when the `A`-norm vanishes.
fn norm_ratio(v: &[f64], t: &[f64]) -> f64 {
    let s = dot(v, t);
    if s > 0.0 {
        vec_norm(v) / s.sqrt()
    } else {
        f64::INFINITY
    }
}

/// Classical Gram-Schmidt in the `A` inner product.
///
/// For column `j`: `w = A·z_j`, `r_{1:j-1,j} = Qᵀw`, `q̂ = z_j − Q·r`,
/// `r_jj = ‖q̂‖_A`, `q_j = q̂/r_jj`.
pub fn cgs(a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
    check_shape(a, z);
    let (m, n) = z.shape();
    let mut q = z.clone();
    let mut r = DenseMatrix::zeros(n, n);
    let mut w = vec![0.0; m];
    for j in 0..n {
        a.apply_vec(z.col(j), &mut w);
        for i in 0..j {
            r[(i, j)] = dot(q.col(i), &w);
        }
        for i in 0..j {
            let rij = r[(i, j)];
            let (qj, qi) = q.col_pair_mut(j, i);
            axpy(-rij, qi, qj);
        }
        a.apply_vec(q.col(j), &mut w);
        let rjj = a_norm(q.col(j), &w, j)?;
        r[(j, j)] = rjj;
        normalize(q.col_mut(j), rjj);
    }
    finish(q, r, Diagnostics::default())
}

/// Classical Gram-Schmidt run twice: `[Q₁, R₁] = cgs(A, Z)`,
/// `[Q, R₂] = cgs(A, Q₁)`, `R = R₂·R₁`.
pub fn cgs2(a: &InnerProduct, z: &DenseMatrix) -> FactorizationOutcome {
    let first = cgs(a, z)?;
    let second = cgs(a, &first.q)?;
    let r = upper_product(&second.r, &first.r);
    finish(second.q, r, Diagnostics::default())
}

/// Modified Gram-Schmidt, recording the norm-ratio diagnostic.
pub fn mgs(a: &InnerProduct, z: &DenseMatrix, order: MgsOrder) -> FactorizationOutcome {
    mgs_with(a, z, order, true)
}

/// Modified Gram-Schmidt in either loop order.
///
/// Both orders perform the same arithmetic on `Q` and `R`; with `A = I`
/// the results are bitwise identical. When `track_ratio` is set,
/// `diagnostics.mgs_norm_ratio` receives `max ‖z_i^{(j)}‖₂/‖z_i^{(j)}‖_A`
/// over every intermediate column. For the column order this is free; for
/// the row order it costs an extra `A·Z` and its updates.
pub fn mgs_with(a: &InnerProduct, z: &DenseMatrix, order: MgsOrder, track_ratio: bool) -> FactorizationOutcome {
    check_shape(a, z);
    match order {
        MgsOrder::ColumnOriented => mgs_col(a, z, track_ratio),
        MgsOrder::RowOriented => mgs_row(a, z, track_ratio),
    }
}

fn mgs_col(a: &InnerProduct, z: &DenseMatrix, track: bool) -> FactorizationOutcome {
    let (m, n) = z.shape();
    let mut q = z.clone();
    let mut r = DenseMatrix::zeros(n, n);
    let mut t = vec![0.0; m];
    let mut ratio: f64 = 0.0;
    for i in 0..n {
        for j in 0..i {
            a.apply_vec(q.col(i), &mut t);
            if track {
                ratio = ratio.max(norm_ratio(q.col(i), &t));
            }
            let rji = dot(q.col(j), &t);
            r[(j, i)] = rji;
            let (qi, qj) = q.col_pair_mut(i, j);
            axpy(-rji, qj, qi);
        }
        a.apply_vec(q.col(i), &mut t);
        if track {
            ratio = ratio.max(norm_ratio(q.col(i), &t));
        }
        let rii = a_norm(q.col(i), &t, i)?;
        r[(i, i)] = rii;
        normalize(q.col_mut(i), rii);
    }
    finish(q, r, Diagnostics { mgs_norm_ratio: track.then_some(ratio) })
}

fn mgs_row(a: &InnerProduct, z: &DenseMatrix, track: bool) -> FactorizationOutcome {
    let (m, n) = z.shape();
    let mut q = z.clone();
    let mut r = DenseMatrix::zeros(n, n);
    let mut w = vec![0.0; m];
    // A times the current (partially orthogonalized) columns, for the ratio.
    let mut b = track.then(|| a.apply(z));
    let mut ratio: f64 = 0.0;
    for i in 0..n {
        if let Some(b) = &b {
            for k in i..n {
                ratio = ratio.max(norm_ratio(q.col(k), b.col(k)));
            }
        }
        a.apply_vec(q.col(i), &mut w);
        let rii = a_norm(q.col(i), &w, i)?;
        r[(i, i)] = rii;
        normalize(q.col_mut(i), rii);
        normalize(&mut w, rii);
        for k in i + 1..n {
            let rik = dot(&w, q.col(k));
            r[(i, k)] = rik;
            let (qk, qi) = q.col_pair_mut(k, i);
            axpy(-rik, qi, qk);
            if let Some(b) = &mut b {
                axpy(-rik, &w, b.col_mut(k));
            }
        }
    }
    finish(q, r, Diagnostics { mgs_norm_ratio: track.then_some(ratio) })
}
