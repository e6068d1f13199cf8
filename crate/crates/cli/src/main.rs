//! `oblique-qr`: stability sweeps and performance runs.
//!
//! Exit codes: 0 success, 1 a `--check` bound violation, 2 usage error,
//! 3 I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oblique_qr::harness::{
    check_records, perf_warnings, run_perf, run_sweep, tightness_summary, write_perf_csv, write_sweep_csv,
    HarnessError, InnerKind, PerfConfig, SweepConfig,
};
use oblique_qr::testgen::{sweep_plan, CaseId, KappaZRule};
use oblique_qr::Algorithm;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

/// Default slack for `--check`: measured error may exceed its bound by
/// this factor before it counts as a violation.
const CHECK_SLACK: f64 = 1e4;

#[derive(Parser, Debug)]
#[command(name = "oblique-qr", version, about = "QR factorizations in an oblique (SPD) inner product")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep κ(A) over constructed test problems and record errors and bounds.
    Stability(StabilityArgs),
    /// Time the factorizations on a dense or tridiagonal inner product.
    Perf(PerfArgs),
}

#[derive(Args, Debug)]
struct StabilityArgs {
    /// Test case 1..5, or "all".
    #[arg(long, default_value = "all", value_parser = parse_cases)]
    case: CaseSelection,
    #[arg(long, default_value_t = 80)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 10.0)]
    kappa_a_min: f64,
    #[arg(long, default_value_t = 1e15)]
    kappa_a_max: f64,
    #[arg(long, default_value_t = 15)]
    points: usize,
    /// "sqrt" for κ(Z) = κ(A)^{1/2}, or "fixed:F".
    #[arg(long, default_value = "sqrt", value_parser = parse_kappa_z_rule)]
    kappa_z_rule: KappaZRule,
    /// "all" or a comma-separated list of algorithm names.
    #[arg(long, default_value = "all")]
    algorithms: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 1 if any error exceeds 1e4 times its bound.
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct PerfArgs {
    #[arg(long, value_parser = |s: &str| s.parse::<InnerKind>())]
    inner: InnerKind,
    /// Defaults to 10000 for dense and 100000 for tridiag.
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated column counts; defaults to 4,8,...,256.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// "all" (every algorithm except syev-eqr) or a comma-separated list.
    #[arg(long, default_value = "all")]
    algorithms: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct CaseSelection(Vec<CaseId>);

fn parse_cases(s: &str) -> Result<CaseSelection, String> {
    if s == "all" {
        return Ok(CaseSelection(CaseId::ALL.to_vec()));
    }
    let v: u32 = s.parse().map_err(|_| format!("expected 1..5 or all, got '{s}'"))?;
    CaseId::try_from(v).map(|c| CaseSelection(vec![c])).map_err(|e| e.to_string())
}

fn parse_kappa_z_rule(s: &str) -> Result<KappaZRule, String> {
    if s == "sqrt" {
        return Ok(KappaZRule::SqrtOfKappaA);
    }
    let v = s.strip_prefix("fixed:").ok_or_else(|| format!("expected sqrt or fixed:F, got '{s}'"))?;
    v.parse().map(KappaZRule::Fixed).map_err(|_| format!("invalid fixed κ(Z) value '{v}'"))
}

/// `None` for "all"; otherwise the listed algorithms in order.
fn parse_algorithms(s: &str) -> Result<Option<Vec<Algorithm>>, String> {
    if s == "all" {
        return Ok(None);
    }
    s.split(',').map(|a| a.parse::<Algorithm>().map_err(|e| e.to_string())).collect::<Result<_, _>>().map(Some)
}

enum Failure {
    Usage(String),
    Io(String),
    Check(usize),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Io(_) | HarnessError::Csv(_) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn stability(args: StabilityArgs) -> Result<(), Failure> {
    let algorithms = parse_algorithms(&args.algorithms).map_err(Failure::Usage)?.unwrap_or(Algorithm::ALL.to_vec());
    sweep_plan(args.kappa_a_min, args.kappa_a_max, args.points, args.kappa_z_rule)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    if args.n == 0 || args.m < args.n {
        return Err(Failure::Usage(format!("need m >= n >= 1 (got m={}, n={})", args.m, args.n)));
    }
    let out = open_output(&args.out)?;
    let cfg = SweepConfig {
        cases: args.case.0,
        m: args.m,
        n: args.n,
        kappa_a_min: args.kappa_a_min,
        kappa_a_max: args.kappa_a_max,
        points: args.points,
        kappa_z_rule: args.kappa_z_rule,
        algorithms,
        seed: args.seed,
        threads: None,
    };
    let records = run_sweep(&cfg)?;
    write_sweep_csv(&records, out)?;

    // The CSV owns stdout unless it went to a file.
    let mut log: Box<dyn Write> =
        if args.out.is_some() { Box::new(io::stdout().lock()) } else { Box::new(io::stderr().lock()) };
    let _ =
        writeln!(log, "{:<11} {:<26} {:>14} {:>5} {:>10}", "algorithm", "bound", "median log10", "rows", "breakdowns");
    for row in tightness_summary(&records) {
        let _ = writeln!(
            log,
            "{:<11} {:<26} {:>14.2} {:>5} {:>10}",
            row.algorithm.name(),
            row.bound.name(),
            row.median_log_ratio,
            row.rows,
            row.breakdowns
        );
    }
    if args.check {
        let violations = check_records(&records, CHECK_SLACK);
        for v in &violations {
            let _ = writeln!(
                io::stderr(),
                "check failed: case {} kappa_a {:e} {} {}: error {:e} > 1e4 x bound {:e}",
                v.case_id,
                v.kappa_a,
                v.algorithm,
                v.bound,
                v.error,
                v.bound_value
            );
        }
        if !violations.is_empty() {
            return Err(Failure::Check(violations.len()));
        }
        let _ = writeln!(log, "check passed: every error is within 1e4 x its bound");
    }
    Ok(())
}

fn perf(args: PerfArgs) -> Result<(), Failure> {
    let mut cfg = PerfConfig::new(args.inner);
    if let Some(algs) = parse_algorithms(&args.algorithms).map_err(Failure::Usage)? {
        cfg.algorithms = algs;
    }
    if let Some(m) = args.m {
        cfg.m = m;
    }
    if let Some(n_list) = args.n_list {
        cfg.n_list = n_list;
    }
    cfg.reps = args.reps;
    cfg.seed = args.seed;
    cfg.validate()?;
    let out = open_output(&args.out)?;
    let mut log = io::stderr().lock();
    for w in perf_warnings(&cfg) {
        let _ = writeln!(log, "warning: {w}");
    }
    let records = run_perf(&cfg, |r| {
        let _ = writeln!(
            io::stderr(),
            "{} m={} n={} {}: {} ns, {:.3} GFLOP/s",
            r.inner_kind,
            r.m,
            r.n,
            r.algorithm,
            r.min_time_ns,
            r.normalized_gflops
        );
    })?;
    write_perf_csv(&records, out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Stability(args) => stability(args),
        Command::Perf(args) => perf(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Check(count)) => {
            eprintln!("{count} bound check(s) failed");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}
