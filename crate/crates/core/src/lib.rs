//! QR factorization in an oblique inner product `⟨x, y⟩ = xᵀAy` for SPD `A`.
//!
//! [`oblique`] holds the factorization algorithms, [`bounds`] the error
//! measures and theoretical bounds, [`testgen`] constructed test problems
//! with known spectra, and [`harness`] the sweep and timing drivers. Dense
//! building blocks live in [`kernels`].

// `!(x > 0.0)` style tests are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod harness;
pub mod kernels;
pub mod oblique;
pub mod testgen;

pub use bounds::{
    componentwise_ratio, evaluate_bounds, measure_errors, singular_value_identities, Bound, BoundSet, BoundsError,
    ErrorField, ErrorReport, IdentityDeviations, ReferenceData,
};
pub use kernels::{DenseMatrix, InnerProduct, InnerProductKind, KernelError, MachineContext, UNIT_ROUNDOFF};
pub use oblique::{
    cgs, cgs2, chol_eqr, cholqr, gls_solve, mgs, mgs_with, pre_cholqr, syev_eqr, Algorithm, Breakdown, BreakdownStage,
    Diagnostics, FactorizationOutcome, MgsOrder, QrFactors,
};
pub use testgen::{build_instance, pairing_policy, sweep_plan, CaseId, KappaZRule, SweepPoint, TestInstance};
