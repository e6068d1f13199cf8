use std::io::Write;

use super::{HarnessError, PerfRecord, SweepRecord};
use crate::bounds::{Bound, ErrorField};

/// 17 significant digits, `nan` for NaN.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Column names of the sweep CSV, in order.
pub fn sweep_header() -> Vec<&'static str> {
    let mut h = vec!["case_id", "m", "n", "kappa_a", "kappa_z", "seed", "algorithm"];
    h.extend(ErrorField::ALL.iter().map(|f| f.name()));
    h.extend(Bound::ALL.iter().map(|b| b.name()));
    h.extend(["breakdown", "breakdown_stage", "wall_time_ns"]);
    h
}

fn sweep_row(r: &SweepRecord) -> Vec<String> {
    let mut row = vec![
        r.case_id.to_string(),
        r.m.to_string(),
        r.n.to_string(),
        format_float(r.kappa_a),
        format_float(r.kappa_z),
        r.seed.to_string(),
        r.algorithm.name().to_string(),
    ];
    row.extend(ErrorField::ALL.iter().map(|&f| format_float(r.errors.value(f))));
    row.extend(Bound::ALL.iter().map(|&b| format_float(r.bounds.get(b).unwrap_or(f64::NAN))));
    row.push(r.is_breakdown().to_string());
    row.push(r.errors.breakdown.map_or(String::new(), |s| s.name().to_string()));
    row.push(r.wall_time_ns.to_string());
    row
}

/// Writes a header and one row per record.
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_header())?;
    for r in records {
        w.write_record(sweep_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn perf_header() -> Vec<&'static str> {
    vec!["inner_kind", "m", "n", "algorithm", "min_time_ns", "normalized_gflops"]
}

pub fn write_perf_csv<W: Write>(records: &[PerfRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(perf_header())?;
    for r in records {
        w.write_record([
            r.inner_kind.name().to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.algorithm.name().to_string(),
            r.min_time_ns.to_string(),
            format_float(r.normalized_gflops),
        ])?;
    }
    w.flush()?;
    Ok(())
}
