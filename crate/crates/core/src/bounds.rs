//! Error measurements for computed oblique QR factors and the theoretical
//! bounds they are compared against.
//!
//! Every bound is evaluated with its constant and its polynomial factors in
//! `m` and `n` set to 1, and is normalized the same way as the error it
//! bounds (for example, representativity bounds are divided by `‖Z‖₂`).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::kernels::{
    householder_qr, invert_upper, singular_values_jacobi, two_norm, DenseMatrix, InnerProduct, KernelError,
    MachineContext, UNIT_ROUNDOFF,
};
use crate::oblique::{Algorithm, BreakdownStage, FactorizationOutcome, QrFactors};
use crate::testgen::TestInstance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("bound {0} needs the MGS norm-ratio diagnostic, which is absent")]
    MissingDiagnostic(Bound),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Measured errors of one factorization. All fields are NaN when the
/// factorization broke down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `‖QᵀAQ − I‖₂`.
    pub orth_error: f64,
    /// `‖Z − QR‖₂ / ‖Z‖₂`.
    pub repr_2norm: f64,
    /// `‖Z − QR‖_A / ‖Z‖_A`.
    pub repr_anorm: f64,
    /// See [`componentwise_ratio`].
    pub repr_componentwise: f64,
    pub breakdown: Option<BreakdownStage>,
}

impl ErrorReport {
    pub fn broken(stage: BreakdownStage) -> Self {
        Self {
            orth_error: f64::NAN,
            repr_2norm: f64::NAN,
            repr_anorm: f64::NAN,
            repr_componentwise: f64::NAN,
            breakdown: Some(stage),
        }
    }

    pub fn value(&self, field: ErrorField) -> f64 {
        match field {
            ErrorField::Orth => self.orth_error,
            ErrorField::Repr2 => self.repr_2norm,
            ErrorField::ReprA => self.repr_anorm,
            ErrorField::Componentwise => self.repr_componentwise,
        }
    }
}

/// One of the measured error quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorField {
    Orth,
    Repr2,
    ReprA,
    Componentwise,
}

impl ErrorField {
    pub const ALL: [ErrorField; 4] =
        [ErrorField::Orth, ErrorField::Repr2, ErrorField::ReprA, ErrorField::Componentwise];

    /// Column name used in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            ErrorField::Orth => "orth_error",
            ErrorField::Repr2 => "repr_2norm",
            ErrorField::ReprA => "repr_anorm",
            ErrorField::Componentwise => "repr_componentwise",
        }
    }
}

impl fmt::Display for ErrorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ErrorField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ErrorField::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown error field '{s}'"))
    }
}

/// `max_{ij} |Z − QR|_{ij} / (|Q||R| + |Z|)_{ij}`, skipping entries whose
/// denominator is below `u·max|Z|`.
pub fn componentwise_ratio(z: &DenseMatrix, q: &DenseMatrix, r: &DenseMatrix) -> f64 {
    let resid = z.sub(&q.matmul(r));
    let denom = q.abs().matmul(&r.abs()).add(&z.abs());
    let floor = UNIT_ROUNDOFF * z.max_abs();
    resid
        .as_slice()
        .iter()
        .zip(denom.as_slice())
        .filter(|(_, &d)| d >= floor && d > 0.0)
        .map(|(&e, &d)| e.abs() / d)
        .fold(0.0, f64::max)
}

/// Measures orthogonality and representativity of `outcome`.
///
/// The `A`-norm uses `A^{1/2} = V·diag(√d)·Vᵀ` from the attached
/// eigendata when present (computed otherwise).
pub fn measure_errors(a: &InnerProduct, z: &DenseMatrix, outcome: &FactorizationOutcome) -> ErrorReport {
    let f = match outcome {
        Ok(f) => f,
        Err(b) => return ErrorReport::broken(b.stage),
    };
    let n = f.q.cols();
    let gram = f.q.t_matmul(&a.apply(&f.q));
    let orth_error = two_norm(&gram.sub(&DenseMatrix::identity(n)));
    let resid = z.sub(&f.q.matmul(&f.r));
    let repr_2norm = two_norm(&resid) / two_norm(z);
    let repr_anorm = match (a.sqrt_apply(&resid), a.sqrt_apply(z)) {
        (Ok(num), Ok(den)) => two_norm(&num) / two_norm(&den),
        _ => f64::NAN,
    };
    ErrorReport {
        orth_error,
        repr_2norm,
        repr_anorm,
        repr_componentwise: componentwise_ratio(z, &f.q, &f.r),
        breakdown: None,
    }
}

/// Every bound, by the quantity it bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    /// `u‖Q‖‖R‖ / ‖Z‖`.
    CholqrReprNormwise,
    /// `u‖|Q||R|‖ / ‖Z‖`, the normwise size of the componentwise bound.
    CholqrReprComponentwise,
    /// `u‖R⁻¹‖‖Z‖(‖R⁻¹‖‖AZ‖ + ‖Q‖‖A‖)`.
    CholqrOrthDetailed,
    /// `u·κ(Z)²κ(A)`.
    CholqrOrthWorstcase,
    /// `u‖Q‖²‖A‖`.
    PreCholqrOrth,
    /// `u·κ(A)^{1/2}‖Q‖‖R‖ / ‖Z‖`.
    CholEqrRepr2norm,
    /// `u‖A‖^{1/2}‖|Q||R|‖ / ‖Z‖_A`.
    CholEqrReprAnorm,
    /// `u‖A‖‖Q‖²`.
    CholEqrOrth,
    /// `u‖A^{-1/2}‖‖R‖ / ‖Z‖`.
    SyevRepr,
    /// `u·κ(A)^{1/2}`.
    SyevReprSqrtKappa,
    /// `u‖A‖‖Q‖²`.
    SyevOrth,
    /// `u(‖Z‖ + ‖Q‖‖R‖) / ‖Z‖`.
    GsReprNorm,
    /// `u‖|Z| + |Q||R|‖ / ‖Z‖`.
    GsReprComponentwise,
    /// `u‖A‖‖Z‖‖Q‖‖R⁻¹‖κ(A^{1/2}Z)`.
    CgsOrthImproved,
    /// `u‖A‖^{1/2}‖Q‖κ(A^{1/2}Z)κ(A)^{1/2}κ(Z)`.
    CgsOrthClassic,
    /// `u‖A‖‖Q‖·ratio·κ(A^{1/2}Z)`, with the MGS norm ratio.
    MgsOrth,
    /// `u‖A‖‖Q‖²`.
    Cgs2Orth,
    /// `u‖A‖^{1/2}‖Q‖‖R‖ / ‖Z‖_A`.
    Cgs2Repr,
}

impl Bound {
    pub const ALL: [Bound; 18] = [
        Bound::CholqrReprNormwise,
        Bound::CholqrReprComponentwise,
        Bound::CholqrOrthDetailed,
        Bound::CholqrOrthWorstcase,
        Bound::PreCholqrOrth,
        Bound::CholEqrRepr2norm,
        Bound::CholEqrReprAnorm,
        Bound::CholEqrOrth,
        Bound::SyevRepr,
        Bound::SyevReprSqrtKappa,
        Bound::SyevOrth,
        Bound::GsReprNorm,
        Bound::GsReprComponentwise,
        Bound::CgsOrthImproved,
        Bound::CgsOrthClassic,
        Bound::MgsOrth,
        Bound::Cgs2Orth,
        Bound::Cgs2Repr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Bound::CholqrReprNormwise => "cholqr_repr_normwise",
            Bound::CholqrReprComponentwise => "cholqr_repr_componentwise",
            Bound::CholqrOrthDetailed => "cholqr_orth_detailed",
            Bound::CholqrOrthWorstcase => "cholqr_orth_worstcase",
            Bound::PreCholqrOrth => "pre_cholqr_orth",
            Bound::CholEqrRepr2norm => "chol_eqr_repr_2norm",
            Bound::CholEqrReprAnorm => "chol_eqr_repr_anorm",
            Bound::CholEqrOrth => "chol_eqr_orth",
            Bound::SyevRepr => "syev_repr",
            Bound::SyevReprSqrtKappa => "syev_repr_sqrt_kappa",
            Bound::SyevOrth => "syev_orth",
            Bound::GsReprNorm => "gs_repr_norm",
            Bound::GsReprComponentwise => "gs_repr_componentwise",
            Bound::CgsOrthImproved => "cgs_orth_improved",
            Bound::CgsOrthClassic => "cgs_orth_classic",
            Bound::MgsOrth => "mgs_orth",
            Bound::Cgs2Orth => "cgs2_orth",
            Bound::Cgs2Repr => "cgs2_repr",
        }
    }

    /// The measured error this bound is compared with.
    pub fn measured_field(self) -> ErrorField {
        use Bound::*;
        match self {
            CholqrOrthDetailed | CholqrOrthWorstcase | PreCholqrOrth | CholEqrOrth | SyevOrth | CgsOrthImproved
            | CgsOrthClassic | MgsOrth | Cgs2Orth => ErrorField::Orth,
            CholqrReprNormwise
            | CholqrReprComponentwise
            | CholEqrRepr2norm
            | SyevRepr
            | SyevReprSqrtKappa
            | GsReprNorm
            | GsReprComponentwise => ErrorField::Repr2,
            CholEqrReprAnorm | Cgs2Repr => ErrorField::ReprA,
        }
    }

    /// Bounds that apply to `alg`.
    pub fn for_algorithm(alg: Algorithm) -> &'static [Bound] {
        use Bound::*;
        match alg {
            Algorithm::CholQr => {
                &[CholqrReprNormwise, CholqrReprComponentwise, CholqrOrthDetailed, CholqrOrthWorstcase]
            }
            Algorithm::PreCholQr => &[PreCholqrOrth],
            Algorithm::CholEqr => &[CholEqrRepr2norm, CholEqrReprAnorm, CholEqrOrth],
            Algorithm::SyevEqr => &[SyevRepr, SyevReprSqrtKappa, SyevOrth],
            Algorithm::Cgs => &[GsReprNorm, GsReprComponentwise, CgsOrthImproved, CgsOrthClassic],
            Algorithm::MgsCol | Algorithm::MgsRow => &[GsReprNorm, GsReprComponentwise, MgsOrth],
            Algorithm::Cgs2 => &[Cgs2Orth, Cgs2Repr],
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Bound::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| format!("unknown bound '{s}'"))
    }
}

/// Evaluated bounds for one factorization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundSet {
    pub values: BTreeMap<Bound, f64>,
}

impl BoundSet {
    pub fn get(&self, bound: Bound) -> Option<f64> {
        self.values.get(&bound).copied()
    }
}

/// Norms of `A` and `Z` that the bounds need, from ground truth where
/// available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceData {
    pub norm_a: f64,
    /// `‖A^{-1/2}‖₂ = d_min^{-1/2}`.
    pub norm_a_inv_half: f64,
    pub kappa_a: f64,
    pub norm_z: f64,
    pub kappa_z: f64,
    /// `‖Z‖_A = ‖A^{1/2}Z‖₂`.
    pub norm_z_a: f64,
    pub kappa_a_half_z: f64,
    /// `‖AZ‖₂`.
    pub norm_az: f64,
}

impl ReferenceData {
    /// Exact spectral data from the construction of `inst`.
    pub fn from_instance(inst: &TestInstance) -> Self {
        let d = inst.eigenvalues();
        let (dmin, dmax) = (d.iter().copied().fold(f64::MAX, f64::min), d.iter().copied().fold(0.0, f64::max));
        Self {
            norm_a: dmax,
            norm_a_inv_half: 1.0 / dmin.sqrt(),
            kappa_a: dmax / dmin,
            norm_z: inst.truth.sigma_z[0],
            kappa_z: inst.truth.kappa_z(),
            norm_z_a: inst.truth.sigma_a_half_z[0],
            kappa_a_half_z: inst.truth.kappa_a_half_z,
            norm_az: two_norm(&inst.a.apply(&inst.z)),
        }
    }

    /// Computes the same data numerically for an arbitrary problem.
    pub fn compute(a: &InnerProduct, z: &DenseMatrix) -> Result<Self, KernelError> {
        let eig = a.eigen()?;
        let (dmin, dmax) = (eig.min_value(), eig.max_value());
        let sz = singular_values_jacobi(z);
        let saz = singular_values_jacobi(&a.sqrt_apply(z)?);
        Ok(Self {
            norm_a: dmax,
            norm_a_inv_half: 1.0 / dmin.sqrt(),
            kappa_a: dmax / dmin,
            norm_z: sz[0],
            kappa_z: sz[0] / sz[sz.len() - 1],
            norm_z_a: saz[0],
            kappa_a_half_z: saz[0] / saz[saz.len() - 1],
            norm_az: two_norm(&a.apply(z)),
        })
    }
}

/// Norms of the computed factors.
struct FactorNorms {
    q: f64,
    r: f64,
    r_inv: f64,
    abs_qr: f64,
    abs_z_plus_qr: f64,
}

impl FactorNorms {
    fn of(z: &DenseMatrix, f: &QrFactors) -> Result<Self, KernelError> {
        let abs_qr = f.q.abs().matmul(&f.r.abs());
        Ok(Self {
            q: two_norm(&f.q),
            r: two_norm(&f.r),
            r_inv: two_norm(&invert_upper(&f.r)?),
            abs_z_plus_qr: two_norm(&abs_qr.add(&z.abs())),
            abs_qr: two_norm(&abs_qr),
        })
    }
}

/// Evaluates every bound that applies to `alg` for the computed `factors`.
pub fn evaluate_bounds(
    reference: &ReferenceData,
    z: &DenseMatrix,
    alg: Algorithm,
    factors: &QrFactors,
    ctx: MachineContext,
) -> Result<BoundSet, BoundsError> {
    let nf = FactorNorms::of(z, factors)?;
    let rf = reference;
    let u = ctx.eps();
    let mut values = BTreeMap::new();
    for &bound in Bound::for_algorithm(alg) {
        let v = match bound {
            Bound::CholqrReprNormwise => u * nf.q * nf.r / rf.norm_z,
            Bound::CholqrReprComponentwise => u * nf.abs_qr / rf.norm_z,
            Bound::CholqrOrthDetailed => u * nf.r_inv * rf.norm_z * (nf.r_inv * rf.norm_az + nf.q * rf.norm_a),
            Bound::CholqrOrthWorstcase => u * rf.kappa_z * rf.kappa_z * rf.kappa_a,
            Bound::PreCholqrOrth | Bound::CholEqrOrth | Bound::SyevOrth | Bound::Cgs2Orth => {
                u * rf.norm_a * nf.q * nf.q
            }
            Bound::CholEqrRepr2norm => u * rf.kappa_a.sqrt() * nf.q * nf.r / rf.norm_z,
            Bound::CholEqrReprAnorm => u * rf.norm_a.sqrt() * nf.abs_qr / rf.norm_z_a,
            Bound::SyevRepr => u * rf.norm_a_inv_half * nf.r / rf.norm_z,
            Bound::SyevReprSqrtKappa => u * rf.kappa_a.sqrt(),
            Bound::GsReprNorm => u * (rf.norm_z + nf.q * nf.r) / rf.norm_z,
            Bound::GsReprComponentwise => u * nf.abs_z_plus_qr / rf.norm_z,
            Bound::CgsOrthImproved => u * rf.norm_a * rf.norm_z * nf.q * nf.r_inv * rf.kappa_a_half_z,
            Bound::CgsOrthClassic => u * rf.norm_a.sqrt() * nf.q * rf.kappa_a_half_z * rf.kappa_a.sqrt() * rf.kappa_z,
            Bound::MgsOrth => {
                let ratio = factors.diagnostics.mgs_norm_ratio.ok_or(BoundsError::MissingDiagnostic(bound))?;
                u * rf.norm_a * nf.q * ratio * rf.kappa_a_half_z
            }
            Bound::Cgs2Repr => u * rf.norm_a.sqrt() * nf.q * nf.r / rf.norm_z_a,
        };
        values.insert(bound, v);
    }
    Ok(BoundSet { values })
}

/// Deviations from the exact singular-value identities of an oblique QR
/// factorization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityDeviations {
    /// `max_i |σ_i(R) − σ_i(A^{1/2}Z)| / σ_i(A^{1/2}Z)`.
    pub sigma_r: f64,
    /// `|‖Q‖₂·σ_n(A^{1/2}Ẑ) − 1|` with `Ẑ` an orthonormal basis of `Z`.
    pub q_norm: f64,
}

/// Checks `σ_i(R) = σ_i(A^{1/2}Z)` and `‖Q‖₂ = σ_n(A^{1/2}Ẑ)^{-1}`.
pub fn singular_value_identities(
    a: &InnerProduct,
    z: &DenseMatrix,
    factors: &QrFactors,
) -> Result<IdentityDeviations, KernelError> {
    let exact = singular_values_jacobi(&a.sqrt_apply(z)?);
    let computed = singular_values_jacobi(&factors.r);
    let sigma_r = exact.iter().zip(&computed).map(|(e, c)| (c - e).abs() / e).fold(0.0, f64::max);
    let (zhat, _) = householder_qr(z);
    let s = singular_values_jacobi(&a.sqrt_apply(&zhat)?);
    let q_norm = (two_norm(&factors.q) * s[s.len() - 1] - 1.0).abs();
    Ok(IdentityDeviations { sigma_r, q_norm })
}
