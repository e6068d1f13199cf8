//! The SPD operator `A` that defines the oblique inner product `xᵀAy`.

use std::borrow::Cow;

use super::{dot, sym_eig, DenseMatrix, KernelError};

/// Storage form of the operator.
#[derive(Debug, Clone, PartialEq)]
pub enum InnerProductKind {
    Identity,
    /// Dense symmetric matrix; exactly symmetric by construction.
    Dense(DenseMatrix),
    Tridiagonal {
        diag: Vec<f64>,
        offdiag: Vec<f64>,
    },
}

/// Exact factorization `A = V·diag(values)·Vᵀ` known from construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFactorization {
    pub vectors: DenseMatrix,
    /// Positive, in the order matching the columns of `vectors`.
    pub values: Vec<f64>,
}

impl EigenFactorization {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::MAX, f64::min)
    }

    /// `V·diag(f(values))·Vᵀ·X`.
    pub fn apply_fn(&self, x: &DenseMatrix, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let scale: Vec<f64> = self.values.iter().map(|&d| f(d)).collect();
        self.vectors.matmul(&self.vectors.t_matmul(x).scale_rows(&scale))
    }
}

/// SPD operator `A` of dimension `m`, optionally carrying its exact
/// eigen-factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    dim: usize,
    kind: InnerProductKind,
    eig: Option<EigenFactorization>,
}

impl InnerProduct {
    /// The Euclidean inner product on `R^m`.
    pub fn identity(m: usize) -> Self {
        assert!(m >= 1);
        Self { dim: m, kind: InnerProductKind::Identity, eig: None }
    }

    /// Dense operator; `S` is replaced by `(S + Sᵀ)/2`.
    pub fn dense(s: &DenseMatrix) -> Result<Self, KernelError> {
        if s.rows() != s.cols() {
            return Err(KernelError::NotSquare { rows: s.rows(), cols: s.cols() });
        }
        if !s.is_finite() {
            return Err(KernelError::NonFinite);
        }
        Ok(Self { dim: s.rows(), kind: InnerProductKind::Dense(s.symmetrized()), eig: None })
    }

    pub fn tridiagonal(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, KernelError> {
        let m = diag.len();
        if m == 0 {
            return Err(KernelError::Empty);
        }
        if offdiag.len() + 1 != m {
            return Err(KernelError::DimensionMismatch { op: "tridiagonal", left: (m, 1), right: (offdiag.len(), 1) });
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(KernelError::NonFinite);
        }
        Ok(Self { dim: m, kind: InnerProductKind::Tridiagonal { diag, offdiag }, eig: None })
    }

    /// Dense operator `V·diag(d)·Vᵀ` with the factorization attached.
    pub fn from_eigen(vectors: DenseMatrix, values: Vec<f64>) -> Result<Self, KernelError> {
        let m = vectors.rows();
        if vectors.cols() != m || values.len() != m {
            return Err(KernelError::DimensionMismatch {
                op: "from_eigen",
                left: vectors.shape(),
                right: (values.len(), 1),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &d)| !(d > 0.0)) {
            return Err(KernelError::NonPositiveEigenvalue { index, value });
        }
        let s = vectors.scale_cols(&values).matmul(&vectors.transpose());
        let mut ip = Self::dense(&s)?;
        ip.eig = Some(EigenFactorization { vectors, values });
        Ok(ip)
    }

    /// Attaches an eigen-factorization after checking that it reproduces
    /// the operator entrywise within `1e-13·max(d)`.
    pub fn with_eig(mut self, eig: EigenFactorization) -> Result<Self, KernelError> {
        if eig.vectors.shape() != (self.dim, self.dim) || eig.values.len() != self.dim {
            return Err(KernelError::DimensionMismatch {
                op: "with_eig",
                left: eig.vectors.shape(),
                right: (self.dim, self.dim),
            });
        }
        if let Some((index, &value)) = eig.values.iter().enumerate().find(|(_, &d)| !(d > 0.0)) {
            return Err(KernelError::NonPositiveEigenvalue { index, value });
        }
        let rec = eig.vectors.scale_cols(&eig.values).matmul(&eig.vectors.transpose());
        let deviation = rec.sub(&self.to_dense()).max_abs();
        if deviation > 1e-13 * eig.max_value() {
            return Err(KernelError::InconsistentEigen { deviation });
        }
        self.eig = Some(eig);
        Ok(self)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &InnerProductKind {
        &self.kind
    }

    pub fn eig(&self) -> Option<&EigenFactorization> {
        self.eig.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, InnerProductKind::Identity)
    }

    /// `A·X`.
    pub fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        assert_eq!(x.rows(), self.dim, "inner product dimension mismatch");
        match &self.kind {
            InnerProductKind::Identity => x.clone(),
            InnerProductKind::Dense(s) => s.matmul(x),
            InnerProductKind::Tridiagonal { .. } => {
                let mut out = DenseMatrix::zeros(x.rows(), x.cols());
                for j in 0..x.cols() {
                    self.apply_vec(x.col(j), out.col_mut(j));
                }
                out
            }
        }
    }

    /// `out = A·x` for a single vector.
    pub fn apply_vec(&self, x: &[f64], out: &mut [f64]) {
        let m = self.dim;
        assert!(x.len() == m && out.len() == m);
        match &self.kind {
            InnerProductKind::Identity => out.copy_from_slice(x),
            // S is symmetric, so row i of S is column i.
            InnerProductKind::Dense(s) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = dot(s.col(i), x);
                }
            }
            InnerProductKind::Tridiagonal { diag, offdiag } => {
                if m == 1 {
                    out[0] = diag[0] * x[0];
                    return;
                }
                out[0] = diag[0] * x[0] + offdiag[0] * x[1];
                for i in 1..m - 1 {
                    out[i] = offdiag[i - 1] * x[i - 1] + diag[i] * x[i] + offdiag[i] * x[i + 1];
                }
                out[m - 1] = offdiag[m - 2] * x[m - 2] + diag[m - 1] * x[m - 1];
            }
        }
    }

    /// Flop count of [`apply`](Self::apply) on `n` columns.
    pub fn apply_flops(&self, n: usize) -> u64 {
        let (m, n) = (self.dim as u64, n as u64);
        match self.kind {
            InnerProductKind::Identity => 0,
            InnerProductKind::Dense(_) => 2 * m * m * n,
            InnerProductKind::Tridiagonal { .. } => 5 * m * n,
        }
    }

    /// Dense form of the operator.
    pub fn to_dense(&self) -> Cow<'_, DenseMatrix> {
        match &self.kind {
            InnerProductKind::Identity => Cow::Owned(DenseMatrix::identity(self.dim)),
            InnerProductKind::Dense(s) => Cow::Borrowed(s),
            InnerProductKind::Tridiagonal { diag, offdiag } => {
                let mut s = DenseMatrix::from_diagonal(diag);
                for (i, &e) in offdiag.iter().enumerate() {
                    s[(i, i + 1)] = e;
                    s[(i + 1, i)] = e;
                }
                Cow::Owned(s)
            }
        }
    }

    /// The attached eigen-factorization, or a freshly computed one.
    pub fn eigen(&self) -> Result<Cow<'_, EigenFactorization>, KernelError> {
        if let Some(e) = &self.eig {
            return Ok(Cow::Borrowed(e));
        }
        let e = match &self.kind {
            InnerProductKind::Identity => {
                EigenFactorization { vectors: DenseMatrix::identity(self.dim), values: vec![1.0; self.dim] }
            }
            _ => {
                let e = sym_eig(&self.to_dense())?;
                EigenFactorization { vectors: e.vectors, values: e.values }
            }
        };
        Ok(Cow::Owned(e))
    }

    /// `A^{1/2}·X` with `A^{1/2} = V·diag(√d)·Vᵀ`.
    pub fn sqrt_apply(&self, x: &DenseMatrix) -> Result<DenseMatrix, KernelError> {
        if self.is_identity() {
            return Ok(x.clone());
        }
        Ok(self.eigen()?.apply_fn(x, f64::sqrt))
    }
}

/// `A·X`; free-function form of [`InnerProduct::apply`].
pub fn ip_apply(a: &InnerProduct, x: &DenseMatrix) -> DenseMatrix {
    a.apply(x)
}
