//! Constructed test problems with known spectral data.
//!
//! `A = V·diag(d)·Vᵀ` with Haar-random `V` and eigenvalues log-spaced from 1
//! to `κ(A)`; `Z = U·Σ·Wᵀ` with singular values log-spaced from 1 to `κ(Z)`
//! and left singular vectors chosen relative to the eigenvectors of `A`:
//!
//! | case | left singular vectors of `Z`                              |
//! |------|-----------------------------------------------------------|
//! | 1    | eigenvectors of the `n` smallest eigenvalues              |
//! | 2    | eigenvectors of the `n` largest eigenvalues               |
//! | 3    | `⌈n/2⌉` smallest and `⌊n/2⌋` largest                      |
//! | 4    | Haar-random, unrelated to `A`                             |
//! | 5    | as case 3, with `σ = d^{-1/2}` so that `ZᵀAZ = I`          |
//!
//! Random streams are derived from the seed: stream 1 for `V`, 2 for the
//! case-4 `U`, 3 for `W`. Changing the case leaves `V` and `W` unchanged.

use std::fmt;

use thiserror::Error;

use crate::kernels::{haar_orthogonal_with, singular_values_jacobi, substream, DenseMatrix, InnerProduct};

const STREAM_V: u64 = 1;
const STREAM_U: u64 = 2;
const STREAM_W: u64 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TestgenError {
    #[error("invalid case id {0} (expected 1..=5)")]
    InvalidCase(u32),
    #[error("invalid dimensions m={m}, n={n} (need m >= n >= 1)")]
    InvalidDimensions { m: usize, n: usize },
    #[error("condition numbers must be finite and >= 1 (got kappa_a={kappa_a}, kappa_z={kappa_z})")]
    InvalidKappa { kappa_a: f64, kappa_z: f64 },
    #[error("invalid sweep range [{min}, {max}] with {points} points")]
    InvalidRange { min: f64, max: f64, points: usize },
}

/// The five test-matrix constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    SmallestEigenvectors = 1,
    LargestEigenvectors = 2,
    SplitEigenvectors = 3,
    RandomLeftVectors = 4,
    AOrthonormal = 5,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [
        CaseId::SmallestEigenvectors,
        CaseId::LargestEigenvectors,
        CaseId::SplitEigenvectors,
        CaseId::RandomLeftVectors,
        CaseId::AOrthonormal,
    ];

    pub fn number(self) -> u32 {
        self as u32
    }

    /// Zero-based indices (into ascending eigenvalues) of the eigenvectors
    /// used as left singular vectors; `None` for the random case.
    pub fn selected_eigenvectors(self, m: usize, n: usize) -> Option<Vec<usize>> {
        match self {
            CaseId::SmallestEigenvectors => Some((0..n).collect()),
            CaseId::LargestEigenvectors => Some((m - n..m).collect()),
            CaseId::SplitEigenvectors | CaseId::AOrthonormal => {
                let low = n.div_ceil(2);
                Some((0..low).chain(m - n / 2..m).collect())
            }
            CaseId::RandomLeftVectors => None,
        }
    }
}

impl TryFrom<u32> for CaseId {
    type Error = TestgenError;

    fn try_from(v: u32) -> Result<Self, Self::Error> {
        CaseId::ALL.into_iter().find(|c| c.number() == v).ok_or(TestgenError::InvalidCase(v))
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Quantities known exactly from the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Singular values of `Z`, descending.
    pub sigma_z: Vec<f64>,
    /// Eigen-index (ascending order of `d`) of the left singular vector
    /// paired with `sigma_z[k]`; `None` for case 4.
    pub u_cols: Option<Vec<usize>>,
    /// Singular values of `A^{1/2}Z`, descending. Exact for cases 1–3 and
    /// 5; computed numerically for case 4.
    pub sigma_a_half_z: Vec<f64>,
    pub kappa_a_half_z: f64,
}

impl GroundTruth {
    pub fn kappa_z(&self) -> f64 {
        self.sigma_z[0] / self.sigma_z[self.sigma_z.len() - 1]
    }
}

#[derive(Debug, Clone)]
pub struct TestInstance {
    pub case: CaseId,
    pub m: usize,
    pub n: usize,
    pub kappa_a: f64,
    /// Requested `κ(Z)`; ignored by case 5 (see `truth.sigma_z`).
    pub kappa_z: f64,
    pub seed: u64,
    /// Carries the exact eigen-factorization.
    pub a: InnerProduct,
    pub z: DenseMatrix,
    pub truth: GroundTruth,
}

impl TestInstance {
    /// Prescribed eigenvalues of `A`, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.a.eig().expect("test instances carry their eigendata").values
    }
}

/// `d_i = 10^{α(i−1)}`, `α = log10(κ)/(m−1)`, ascending.
pub fn log_spaced_eigenvalues(m: usize, kappa: f64) -> Vec<f64> {
    if m == 1 {
        return vec![1.0];
    }
    let alpha = kappa.log10() / (m - 1) as f64;
    (0..m).map(|i| 10f64.powf(alpha * i as f64)).collect()
}

/// `n` singular values log-spaced from `κ` down to 1, descending.
pub fn log_spaced_singular_values(n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![kappa];
    }
    let beta = kappa.log10() / (n - 1) as f64;
    (0..n).map(|k| 10f64.powf(beta * (n - 1 - k) as f64)).collect()
}

/// Assigns singular values to selected eigenvectors.
///
/// `sigma_z` is descending and `selected_d` holds the selected eigenvalues
/// in ascending order. Returns `p` with `sigma_z[k]` paired to
/// `selected_d[p[k]]`. Cases 1–3 pair descending `σ` with descending `d`, so
/// `σ₁(Z)` sits on the largest selected eigenvalue. Case 5 pairs descending
/// `σ = d^{-1/2}` with ascending `d`. Case 4 has no eigenvector pairing and
/// returns the identity order.
pub fn pairing_policy(case: CaseId, sigma_z: &[f64], selected_d: &[f64]) -> Vec<usize> {
    assert_eq!(sigma_z.len(), selected_d.len(), "pairing_policy: lengths differ");
    let n = sigma_z.len();
    match case {
        CaseId::SmallestEigenvectors | CaseId::LargestEigenvectors | CaseId::SplitEigenvectors => {
            (0..n).rev().collect()
        }
        CaseId::AOrthonormal | CaseId::RandomLeftVectors => (0..n).collect(),
    }
}

/// Builds one test problem. Deterministic in all arguments.
pub fn build_instance(
    case_id: u32,
    m: usize,
    n: usize,
    kappa_a: f64,
    kappa_z: f64,
    seed: u64,
) -> Result<TestInstance, TestgenError> {
    let case = CaseId::try_from(case_id)?;
    if n == 0 || m < n {
        return Err(TestgenError::InvalidDimensions { m, n });
    }
    if !(kappa_a >= 1.0 && kappa_a.is_finite() && kappa_z >= 1.0 && kappa_z.is_finite()) {
        return Err(TestgenError::InvalidKappa { kappa_a, kappa_z });
    }

    let v = haar_orthogonal_with(m, m, &mut substream(seed, STREAM_V));
    let d = log_spaced_eigenvalues(m, kappa_a);
    let w = haar_orthogonal_with(n, n, &mut substream(seed, STREAM_W));

    let (u, sigma_z, u_cols, exact_sigma_a_half_z) = match case.selected_eigenvectors(m, n) {
        Some(selected) => {
            let selected_d: Vec<f64> = selected.iter().map(|&j| d[j]).collect();
            let sigma_z = match case {
                CaseId::AOrthonormal => selected_d.iter().map(|x| 1.0 / x.sqrt()).collect(),
                _ => log_spaced_singular_values(n, kappa_z),
            };
            let pairing = pairing_policy(case, &sigma_z, &selected_d);
            let cols: Vec<usize> = pairing.iter().map(|&p| selected[p]).collect();
            let mut sah: Vec<f64> = cols.iter().zip(&sigma_z).map(|(&j, s)| d[j].sqrt() * s).collect();
            if case == CaseId::AOrthonormal {
                sah.fill(1.0);
            }
            sah.sort_by(|a, b| b.total_cmp(a));
            (v.select_cols(&cols), sigma_z, Some(cols), Some(sah))
        }
        None => {
            let u = haar_orthogonal_with(m, n, &mut substream(seed, STREAM_U));
            (u, log_spaced_singular_values(n, kappa_z), None, None)
        }
    };

    let z = u.scale_cols(&sigma_z).matmul(&w.transpose());
    let a = InnerProduct::from_eigen(v, d).expect("log-spaced eigenvalues are positive");
    let sigma_a_half_z = exact_sigma_a_half_z.unwrap_or_else(|| {
        // D^{1/2}·(VᵀU)·Σ has the singular values of A^{1/2}Z, and every
        // entry is formed to full relative accuracy.
        let eig = a.eig().expect("attached above");
        let sqrt_d: Vec<f64> = eig.values.iter().map(|x| x.sqrt()).collect();
        let b = eig.vectors.t_matmul(&u).scale_rows(&sqrt_d).scale_cols(&sigma_z);
        // Reverse rows so the largest-scaled rows come first for Householder.
        let b = DenseMatrix::from_fn(m, n, |i, j| b[(m - 1 - i, j)]);
        singular_values_jacobi(&b)
    });
    let kappa_a_half_z = sigma_a_half_z[0] / sigma_a_half_z[n - 1];
    Ok(TestInstance {
        case,
        m,
        n,
        kappa_a,
        kappa_z,
        seed,
        a,
        z,
        truth: GroundTruth { sigma_z, u_cols, sigma_a_half_z, kappa_a_half_z },
    })
}

/// How `κ(Z)` follows `κ(A)` along a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaZRule {
    /// `κ(Z) = κ(A)^{1/2}`.
    SqrtOfKappaA,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub kappa_a: f64,
    pub kappa_z: f64,
}

/// `10^e`, exact when `e` is an integer in range.
fn pow10(e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() <= 22.0 {
        10f64.powi(e as i32)
    } else {
        10f64.powf(e)
    }
}

/// `points` values of `κ(A)` log-spaced over `[kappa_min, kappa_max]`.
pub fn sweep_plan(
    kappa_min: f64,
    kappa_max: f64,
    points: usize,
    rule: KappaZRule,
) -> Result<Vec<SweepPoint>, TestgenError> {
    let valid = kappa_min >= 1.0 && kappa_min <= kappa_max && kappa_max.is_finite() && points >= 2;
    let valid = valid && !matches!(rule, KappaZRule::Fixed(v) if !(v >= 1.0 && v.is_finite()));
    if !valid {
        return Err(TestgenError::InvalidRange { min: kappa_min, max: kappa_max, points });
    }
    let (lo, hi) = (kappa_min.log10(), kappa_max.log10());
    Ok((0..points)
        .map(|i| {
            let e = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let e = if (e - e.round()).abs() < 1e-12 { e.round() } else { e };
            let kappa_a = pow10(e);
            let kappa_z = match rule {
                KappaZRule::SqrtOfKappaA => pow10(e / 2.0),
                KappaZRule::Fixed(v) => v,
            };
            SweepPoint { kappa_a, kappa_z }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::two_norm;

    #[test]
    fn case_selection_indices() {
        assert_eq!(CaseId::SmallestEigenvectors.selected_eigenvectors(10, 3), Some(vec![0, 1, 2]));
        assert_eq!(CaseId::LargestEigenvectors.selected_eigenvectors(10, 3), Some(vec![7, 8, 9]));
        assert_eq!(CaseId::SplitEigenvectors.selected_eigenvectors(10, 3), Some(vec![0, 1, 9]));
        assert_eq!(CaseId::AOrthonormal.selected_eigenvectors(10, 4), Some(vec![0, 1, 8, 9]));
        assert_eq!(CaseId::RandomLeftVectors.selected_eigenvectors(10, 4), None);
        assert_eq!(CaseId::try_from(6), Err(TestgenError::InvalidCase(6)));
    }

    #[test]
    fn eigenvalues_are_log_spaced() {
        let d = log_spaced_eigenvalues(5, 1e4);
        for (i, x) in d.iter().enumerate() {
            assert!((x / 10f64.powi(i as i32) - 1.0).abs() < 1e-15);
        }
        assert_eq!(log_spaced_eigenvalues(1, 1e6), vec![1.0]);
    }

    #[test]
    fn singular_values_are_log_spaced() {
        let s = log_spaced_singular_values(3, 100.0);
        assert_eq!(s, vec![100.0, 10.0, 1.0]);
        assert_eq!(log_spaced_singular_values(1, 7.0), vec![7.0]);
    }

    #[test]
    fn pairing_orders() {
        let sigma = [3.0, 2.0, 1.0];
        let d = [1.0, 5.0, 9.0];
        assert_eq!(pairing_policy(CaseId::SplitEigenvectors, &sigma, &d), vec![2, 1, 0]);
        assert_eq!(pairing_policy(CaseId::AOrthonormal, &sigma, &d), vec![0, 1, 2]);
        assert_eq!(pairing_policy(CaseId::SmallestEigenvectors, &[4.0], &[2.0]), vec![0]);
    }

    #[test]
    fn case_two_norm_of_q() {
        let inst = build_instance(2, 80, 10, 1e6, 1e3, 7).unwrap();
        let d = inst.eigenvalues();
        // ‖Q‖₂ = d_{m-n+1}^{-1/2} for the exact factorization
        let q_norm = 1.0 / d[70].sqrt();
        let value = d[79] * q_norm * q_norm;
        assert!((value.log10() - 6.0 * 9.0 / 79.0).abs() < 1e-12);
    }

    #[test]
    fn case_five_is_a_orthonormal() {
        let inst = build_instance(5, 80, 10, 1e4, 1.0, 3).unwrap();
        let g = inst.z.t_matmul(&inst.a.apply(&inst.z));
        assert!(two_norm(&g.sub(&DenseMatrix::identity(10))) <= 1e-12);
        assert_eq!(inst.truth.kappa_a_half_z, 1.0);
    }

    #[test]
    fn split_case_norm_product() {
        let inst = build_instance(3, 40, 6, 1e6, 1e2, 11).unwrap();
        // ‖Q‖₂‖R‖₂ = κ(A)^{1/2}‖Z‖₂ when both extreme eigenvectors are used
        let d = inst.eigenvalues();
        let q_norm = 1.0 / d[0].sqrt();
        let r_norm = inst.truth.sigma_a_half_z[0];
        let expected = (d[39] / d[0]).sqrt() * inst.truth.sigma_z[0];
        assert!((q_norm * r_norm / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn instances_are_deterministic() {
        let a = build_instance(4, 30, 5, 1e5, 1e2, 99).unwrap();
        let b = build_instance(4, 30, 5, 1e5, 1e2, 99).unwrap();
        assert_eq!(a.z, b.z);
        assert_eq!(a.a, b.a);
        let c = build_instance(4, 30, 5, 1e5, 1e2, 100).unwrap();
        assert_ne!(a.z, c.z);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(build_instance(0, 4, 2, 10.0, 10.0, 1).unwrap_err(), TestgenError::InvalidCase(0));
        assert!(matches!(build_instance(1, 2, 4, 10.0, 10.0, 1), Err(TestgenError::InvalidDimensions { .. })));
        assert!(matches!(build_instance(1, 4, 2, 0.5, 10.0, 1), Err(TestgenError::InvalidKappa { .. })));
    }

    #[test]
    fn sweep_plan_examples() {
        let plan = sweep_plan(10.0, 1e15, 15, KappaZRule::SqrtOfKappaA).unwrap();
        assert_eq!(plan.len(), 15);
        for (i, p) in plan.iter().enumerate() {
            assert_eq!(p.kappa_a, 10f64.powi(i as i32 + 1));
            assert!((p.kappa_z.log10() - (i as f64 + 1.0) / 2.0).abs() < 1e-14);
        }
        let plan = sweep_plan(100.0, 100.0, 2, KappaZRule::Fixed(10.0)).unwrap();
        assert_eq!(plan, vec![SweepPoint { kappa_a: 100.0, kappa_z: 10.0 }; 2]);
        assert!(sweep_plan(1e3, 10.0, 4, KappaZRule::SqrtOfKappaA).is_err());
        assert!(sweep_plan(10.0, 1e3, 1, KappaZRule::SqrtOfKappaA).is_err());
        assert!(sweep_plan(0.5, 1e3, 3, KappaZRule::SqrtOfKappaA).is_err());
    }
}
