use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::HarnessError;
use crate::kernels::{gaussian_matrix, substream, DenseMatrix, InnerProduct};
use crate::oblique::Algorithm;

/// Largest dimension for which the dense eigensolve of `syev-eqr` is
/// accepted in performance mode.
pub const SYEV_MAX_DIM: usize = 2048;

/// Form of `A` in performance runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InnerKind {
    /// Dense `A_ij = 0.5^{|i−j|}`.
    Dense,
    /// `tridiag(−1, 4, −1)`.
    Tridiag,
}

impl InnerKind {
    pub fn name(self) -> &'static str {
        match self {
            InnerKind::Dense => "dense",
            InnerKind::Tridiag => "tridiag",
        }
    }

    pub fn default_m(self) -> usize {
        match self {
            InnerKind::Dense => 10_000,
            InnerKind::Tridiag => 100_000,
        }
    }
}

impl fmt::Display for InnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InnerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(InnerKind::Dense),
            "tridiag" => Ok(InnerKind::Tridiag),
            _ => Err(format!("unknown inner product kind '{s}' (expected dense or tridiag)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerfConfig {
    pub inner: InnerKind,
    pub m: usize,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
}

impl PerfConfig {
    /// Defaults for `inner`: its default `m`, `n = 4, 8, …, 256`, 10
    /// repetitions, every algorithm except `syev-eqr`.
    pub fn new(inner: InnerKind) -> Self {
        Self {
            inner,
            m: inner.default_m(),
            n_list: (2..=8).map(|k| 1 << k).collect(),
            reps: 10,
            algorithms: Algorithm::ALL.into_iter().filter(|&a| a != Algorithm::SyevEqr).collect(),
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::InvalidConfig(msg));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.algorithms.is_empty() || self.n_list.is_empty() {
            return bad("no algorithms or no n values selected".into());
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n == 0 || n > self.m) {
            return bad(format!("n = {n} is outside 1..={}", self.m));
        }
        if self.algorithms.contains(&Algorithm::SyevEqr) && self.m > SYEV_MAX_DIM {
            return bad(format!("syev-eqr needs a dense m×m eigensolve; m = {} exceeds {SYEV_MAX_DIM}", self.m));
        }
        Ok(())
    }
}

/// Human-readable warnings about expensive configurations.
pub fn perf_warnings(cfg: &PerfConfig) -> Vec<String> {
    let mut w = Vec::new();
    if cfg.inner == InnerKind::Dense && cfg.algorithms.contains(&Algorithm::CholEqr) {
        w.push(format!("chol-eqr with dense A factors the full {0}×{0} matrix, an O(m³) cost", cfg.m));
    }
    if cfg.inner == InnerKind::Dense && cfg.algorithms.contains(&Algorithm::MgsCol) {
        w.push("mgs-col with dense A costs O(m²n²)".to_string());
    }
    w
}

/// The `A` used in performance runs.
pub fn perf_operator(inner: InnerKind, m: usize) -> InnerProduct {
    match inner {
        InnerKind::Dense => {
            let s = DenseMatrix::from_fn(m, m, |i, j| 0.5f64.powi(i.abs_diff(j).min(i32::MAX as usize) as i32));
            InnerProduct::dense(&s).expect("finite square matrix")
        }
        InnerKind::Tridiag => InnerProduct::tridiagonal(vec![4.0; m], vec![-1.0; m.saturating_sub(1)]).expect("m >= 1"),
    }
}

/// Normalized FLOP count: `2m²n + 2mn²` for dense `A`, `2mn²` for
/// tridiagonal `A`, whatever the algorithm.
pub fn normalized_flops(inner: InnerKind, m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    match inner {
        InnerKind::Dense => 2.0 * m * m * n + 2.0 * m * n * n,
        InnerKind::Tridiag => 2.0 * m * n * n,
    }
}

/// Timing of one (n, algorithm) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfRecord {
    pub inner_kind: InnerKind,
    pub m: usize,
    pub n: usize,
    pub algorithm: Algorithm,
    /// Minimum wall time over the repetitions.
    pub min_time_ns: u64,
    /// Normalized FLOPs divided by `min_time_ns`, i.e. GFLOP/s.
    pub normalized_gflops: f64,
}

/// Times every (n, algorithm) pair sequentially, calling `on_record` as
/// each result becomes available. MGS runs without its norm-ratio
/// diagnostic so that only the factorization is timed.
pub fn run_perf(cfg: &PerfConfig, mut on_record: impl FnMut(&PerfRecord)) -> Result<Vec<PerfRecord>, HarnessError> {
    cfg.validate()?;
    let a = perf_operator(cfg.inner, cfg.m);
    let n_max = cfg.n_list.iter().copied().max().unwrap_or(1);
    let z_all = gaussian_matrix(cfg.m, n_max, &mut substream(cfg.seed, 0));
    let mut records = Vec::new();
    for &n in &cfg.n_list {
        let z = z_all.leading_cols(n);
        for &alg in &cfg.algorithms {
            let mut best = u64::MAX;
            for _ in 0..cfg.reps {
                let start = Instant::now();
                let outcome = alg.run_untracked(&a, &z);
                let t = start.elapsed().as_nanos() as u64;
                std::hint::black_box(&outcome);
                best = best.min(t.max(1));
            }
            let rec = PerfRecord {
                inner_kind: cfg.inner,
                m: cfg.m,
                n,
                algorithm: alg,
                min_time_ns: best,
                normalized_gflops: normalized_flops(cfg.inner, cfg.m, n) / best as f64,
            };
            on_record(&rec);
            records.push(rec);
        }
    }
    Ok(records)
}
