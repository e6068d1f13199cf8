//! Experiment drivers behind the command-line tool: stability sweeps over
//! constructed test problems, performance timing, CSV output and the
//! analyses run on sweep results (slope fits, bound tightness, self-check).

mod analysis;
mod output;
mod perf;
mod sweep;

use thiserror::Error;

use crate::bounds::BoundsError;
use crate::testgen::TestgenError;

pub use analysis::{
    check_records, fit_slope, least_squares_slope, median, tightness, tightness_summary, BoundViolation, TightnessRow,
    DEFAULT_SATURATION_CAP,
};
pub use output::{format_float, perf_header, sweep_header, write_perf_csv, write_sweep_csv};
pub use perf::{normalized_flops, perf_operator, perf_warnings, run_perf, InnerKind, PerfConfig, PerfRecord};
pub use sweep::{run_point, run_sweep, thread_count, SweepConfig, SweepRecord, THREADS_ENV};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Testgen(#[from] TestgenError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("slope fit needs at least 3 qualifying points, found {found}")]
    InsufficientPoints { found: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
