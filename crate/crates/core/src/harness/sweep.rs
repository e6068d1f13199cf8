use std::time::Instant;

use rayon::prelude::*;

use super::HarnessError;
use crate::bounds::{evaluate_bounds, measure_errors, BoundSet, ErrorReport, ReferenceData};
use crate::kernels::MachineContext;
use crate::oblique::Algorithm;
use crate::testgen::{build_instance, sweep_plan, CaseId, KappaZRule, SweepPoint};

/// Environment variable capping the number of concurrently evaluated
/// sweep points.
pub const THREADS_ENV: &str = "OBLIQUE_QR_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub cases: Vec<CaseId>,
    pub m: usize,
    pub n: usize,
    pub kappa_a_min: f64,
    pub kappa_a_max: f64,
    pub points: usize,
    pub kappa_z_rule: KappaZRule,
    pub algorithms: Vec<Algorithm>,
    /// One seed for the whole sweep, so `V` is the same at every point.
    pub seed: u64,
    /// Overrides the environment / core-count default.
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            cases: CaseId::ALL.to_vec(),
            m: 80,
            n: 10,
            kappa_a_min: 10.0,
            kappa_a_max: 1e15,
            points: 15,
            kappa_z_rule: KappaZRule::SqrtOfKappaA,
            algorithms: Algorithm::ALL.to_vec(),
            seed: 1,
            threads: None,
        }
    }
}

/// One row of sweep output: a (point, algorithm) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub case_id: u32,
    pub m: usize,
    pub n: usize,
    pub kappa_a: f64,
    pub kappa_z: f64,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub errors: ErrorReport,
    /// Empty when the factorization broke down.
    pub bounds: BoundSet,
    pub wall_time_ns: u64,
}

impl SweepRecord {
    pub fn is_breakdown(&self) -> bool {
        self.errors.breakdown.is_some()
    }
}

/// Number of worker threads: explicit value, else `OBLIQUE_QR_THREADS`,
/// else the number of cores.
pub fn thread_count(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Builds one test instance and runs every algorithm on it.
pub fn run_point(
    case: CaseId,
    m: usize,
    n: usize,
    point: SweepPoint,
    seed: u64,
    algorithms: &[Algorithm],
) -> Result<Vec<SweepRecord>, HarnessError> {
    let inst = build_instance(case.number(), m, n, point.kappa_a, point.kappa_z, seed)?;
    let reference = ReferenceData::from_instance(&inst);
    let kappa_z = if case == CaseId::AOrthonormal { inst.truth.kappa_z() } else { point.kappa_z };
    algorithms
        .iter()
        .map(|&alg| {
            let start = Instant::now();
            let outcome = alg.run(&inst.a, &inst.z);
            let wall_time_ns = start.elapsed().as_nanos() as u64;
            let errors = measure_errors(&inst.a, &inst.z, &outcome);
            let bounds = match &outcome {
                Ok(f) => evaluate_bounds(&reference, &inst.z, alg, f, MachineContext::DOUBLE)?,
                Err(_) => BoundSet::default(),
            };
            Ok(SweepRecord {
                case_id: case.number(),
                m,
                n,
                kappa_a: point.kappa_a,
                kappa_z,
                seed,
                algorithm: alg,
                errors,
                bounds,
                wall_time_ns,
            })
        })
        .collect()
}

/// Runs the full sweep. Rows are ordered by case, then point, then
/// algorithm, independent of thread scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>, HarnessError> {
    if cfg.cases.is_empty() || cfg.algorithms.is_empty() {
        return Err(HarnessError::InvalidConfig("no cases or no algorithms selected".into()));
    }
    if cfg.n == 0 || cfg.m < cfg.n {
        return Err(HarnessError::InvalidConfig(format!("need m >= n >= 1 (got m={}, n={})", cfg.m, cfg.n)));
    }
    let plan = sweep_plan(cfg.kappa_a_min, cfg.kappa_a_max, cfg.points, cfg.kappa_z_rule)?;
    let jobs: Vec<(CaseId, SweepPoint)> = cfg.cases.iter().flat_map(|&c| plan.iter().map(move |&p| (c, p))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(cfg.threads))
        .build()
        .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    let rows: Vec<Vec<SweepRecord>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(case, point)| run_point(case, cfg.m, cfg.n, point, cfg.seed, &cfg.algorithms))
            .collect::<Result<_, _>>()
    })?;
    Ok(rows.into_iter().flatten().collect())
}
