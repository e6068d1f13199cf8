//! Test-problem construction checked against an independent SVD and
//! eigensolver.

use nalgebra::DMatrix;
use oblique_qr::kernels::{householder_qr, two_norm};
use oblique_qr::{build_instance, sweep_plan, DenseMatrix, KappaZRule, TestInstance};
use proptest::prelude::*;

fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_column_slice(m.rows(), m.cols(), m.as_slice())
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn prescribed(inst: &TestInstance) -> Vec<f64> {
    let (m, k) = (inst.m, inst.kappa_a);
    (0..m).map(|i| 10f64.powf(k.log10() * i as f64 / (m - 1) as f64)).collect()
}

#[test]
fn spectral_fidelity() {
    for kappa in [1e2, 1e6, 1e12] {
        let inst = build_instance(3, 60, 8, kappa, 10.0, 5).unwrap();
        let dense = inst.a.to_dense().into_owned();
        let mut measured: Vec<f64> = to_na(&dense).symmetric_eigen().eigenvalues.iter().copied().collect();
        measured.sort_by(f64::total_cmp);
        let max_d = kappa;
        for (got, want) in measured.iter().zip(prescribed(&inst)) {
            assert!((got - want).abs() <= 1e-12 * max_d, "κ={kappa:e}: {got:e} vs {want:e}");
        }
        for (got, want) in inst.eigenvalues().iter().zip(prescribed(&inst)) {
            assert!((got / want - 1.0).abs() <= 1e-14);
        }
    }
}

#[test]
fn kappa_z_fidelity() {
    for case in 1..=4 {
        for kappa_z in [1.0, 1e3, 1e6] {
            let inst = build_instance(case, 80, 10, 1e8, kappa_z, 9).unwrap();
            let sv = to_na(&inst.z).singular_values();
            let measured = sv.max() / sv.min();
            assert!((measured / kappa_z - 1.0).abs() <= 1e-6, "case {case}: {measured:e} vs {kappa_z:e}");
            assert_eq!(inst.truth.kappa_z(), kappa_z);
            assert_eq!(inst.truth.sigma_z[0], kappa_z);
        }
    }
}

#[test]
fn sigma_a_half_z_matches_oracle() {
    for case in 1..=5 {
        let inst = build_instance(case, 40, 6, 1e6, 1e2, 3).unwrap();
        let w = to_na(&inst.a.sqrt_apply(&inst.z).unwrap());
        let oracle = sorted_desc(w.singular_values().iter().copied().collect());
        for (got, want) in inst.truth.sigma_a_half_z.iter().zip(&oracle) {
            assert!((got - want).abs() <= 1e-9 * want, "case {case}: {got:e} vs {want:e}");
        }
    }
}

#[test]
fn closed_form_norms_of_exact_q() {
    // Q = Z R⁻¹ with R from the exact A^{1/2}Z; ‖Q‖₂ = 1/σ_n(A^{1/2}Ẑ).
    let q_norm = |inst: &TestInstance| {
        let (zhat, _) = householder_qr(&inst.z);
        let s = to_na(&inst.a.sqrt_apply(&zhat).unwrap()).singular_values();
        1.0 / s.min()
    };
    let case2 = build_instance(2, 80, 10, 1e6, 10.0, 1).unwrap();
    let lhs = 1e6 * q_norm(&case2).powi(2);
    let rhs = 10f64.powf(6.0 * 9.0 / 79.0);
    assert!((lhs / rhs - 1.0).abs() < 1e-8, "{lhs} vs {rhs}");

    let case1 = build_instance(1, 80, 10, 1e6, 10.0, 1).unwrap();
    assert!((1e6 * q_norm(&case1).powi(2) / 1e6 - 1.0).abs() < 1e-8);
}

#[test]
fn case_3_pairing_gives_extreme_representativity() {
    // ‖Q‖‖R‖ = κ(A)^{1/2}‖Z‖ when σ₁(Z) sits on the top eigenvector and the
    // bottom eigenvector is in range(Z).
    let inst = build_instance(3, 80, 10, 1e8, 10.0, 1).unwrap();
    let w = inst.a.sqrt_apply(&inst.z).unwrap();
    let norm_r = two_norm(&w);
    let (zhat, _) = householder_qr(&inst.z);
    let norm_q = 1.0 / to_na(&inst.a.sqrt_apply(&zhat).unwrap()).singular_values().min();
    let ratio = norm_q * norm_r / (1e4 * two_norm(&inst.z));
    assert!((ratio - 1.0).abs() < 1e-8, "{ratio}");
}

#[test]
fn case_5_is_a_orthonormal() {
    let inst = build_instance(5, 80, 10, 1e4, 1.0, 1).unwrap();
    let g = inst.z.t_matmul(&inst.a.apply(&inst.z));
    assert!(two_norm(&g.sub(&DenseMatrix::identity(10))) <= 1e-12);
}

#[test]
fn determinism_and_substream_independence() {
    let a = build_instance(4, 30, 5, 1e5, 1e2, 11).unwrap();
    let b = build_instance(4, 30, 5, 1e5, 1e2, 11).unwrap();
    assert_eq!(a.z, b.z);
    assert_eq!(a.a.to_dense().as_slice(), b.a.to_dense().as_slice());
    // V does not depend on the case or on κ(Z).
    let c = build_instance(1, 30, 5, 1e5, 1e3, 11).unwrap();
    assert_eq!(a.a.to_dense().as_slice(), c.a.to_dense().as_slice());
    let d = build_instance(4, 30, 5, 1e5, 1e2, 12).unwrap();
    assert_ne!(a.z, d.z);
}

#[test]
fn desk_sweep_plan() {
    let plan = sweep_plan(10.0, 1e15, 15, KappaZRule::SqrtOfKappaA).unwrap();
    assert_eq!(plan.len(), 15);
    for (k, p) in plan.iter().enumerate() {
        assert_eq!(p.kappa_a, 10f64.powi(k as i32 + 1));
        assert!((p.kappa_z / p.kappa_a.sqrt() - 1.0).abs() < 1e-15);
    }
    let fixed = sweep_plan(100.0, 100.0, 2, KappaZRule::Fixed(10.0)).unwrap();
    assert!(fixed.iter().all(|p| p.kappa_a == 100.0 && p.kappa_z == 10.0));
    assert!(sweep_plan(1e3, 1e2, 3, KappaZRule::SqrtOfKappaA).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_instance_is_well_formed(
        case in 1u32..=5,
        m in 4usize..40,
        n_frac in 0.1f64..1.0,
        log_ka in 0.0f64..10.0,
        log_kz in 0.0f64..5.0,
        seed in any::<u64>(),
    ) {
        let n = ((m as f64 * n_frac) as usize).clamp(1, m);
        let inst = build_instance(case, m, n, 10f64.powf(log_ka), 10f64.powf(log_kz), seed).unwrap();
        prop_assert_eq!(inst.z.shape(), (m, n));
        prop_assert!(inst.z.is_finite());
        prop_assert_eq!(inst.truth.sigma_z.len(), n);
        prop_assert!(inst.truth.sigma_z.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(inst.truth.kappa_a_half_z >= 1.0);
        if case <= 4 && n > 1 {
            prop_assert!((inst.truth.kappa_z() / 10f64.powf(log_kz) - 1.0).abs() < 1e-12);
        }
    }
}
