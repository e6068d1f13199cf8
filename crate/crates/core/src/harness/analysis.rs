use std::collections::BTreeMap;

use super::{HarnessError, SweepRecord};
use crate::bounds::{Bound, ErrorField};
use crate::oblique::Algorithm;

/// Errors at or above this value are treated as saturated and left out of
/// slope fits.
pub const DEFAULT_SATURATION_CAP: f64 = 1e-2;

/// Least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slope of `log10(field)` against `log10(κ(A))` over the non-breakdown
/// rows of `algorithm` on `case_id` whose error is positive and below
/// `saturation_cap`.
pub fn fit_slope(
    records: &[SweepRecord],
    algorithm: Algorithm,
    case_id: u32,
    field: ErrorField,
    saturation_cap: f64,
) -> Result<f64, HarnessError> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter(|r| r.algorithm == algorithm && r.case_id == case_id && !r.is_breakdown())
        .map(|r| (r.kappa_a, r.errors.value(field)))
        .filter(|&(_, e)| e > 0.0 && e < saturation_cap)
        .map(|(k, e)| (k.log10(), e.log10()))
        .unzip();
    let distinct = xs.iter().any(|&x| x != xs[0]);
    if xs.len() < 3 || !distinct {
        return Err(HarnessError::InsufficientPoints { found: xs.len() });
    }
    Ok(least_squares_slope(&xs, &ys))
}

/// Median of a non-empty slice (NaN for an empty one).
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

/// `log10(bound / error)` for every non-breakdown row of `algorithm` on
/// `case_id` that carries `bound`.
pub fn tightness(records: &[SweepRecord], algorithm: Algorithm, case_id: u32, bound: Bound) -> Vec<f64> {
    records
        .iter()
        .filter(|r| r.algorithm == algorithm && r.case_id == case_id && !r.is_breakdown())
        .filter_map(|r| Some((r.bounds.get(bound)?, r.errors.value(bound.measured_field()))))
        .map(|(b, e)| (b / e).log10())
        .collect()
}

/// Median tightness of one bound for one algorithm over all cases.
#[derive(Debug, Clone, PartialEq)]
pub struct TightnessRow {
    pub algorithm: Algorithm,
    pub bound: Bound,
    /// Median of `log10(bound / error)`.
    pub median_log_ratio: f64,
    pub rows: usize,
    pub breakdowns: usize,
}

/// Per (algorithm, bound) median tightness, in algorithm order.
pub fn tightness_summary(records: &[SweepRecord]) -> Vec<TightnessRow> {
    let mut ratios: BTreeMap<(Algorithm, Bound), Vec<f64>> = BTreeMap::new();
    let mut breakdowns: BTreeMap<Algorithm, usize> = BTreeMap::new();
    let mut seen: BTreeMap<Algorithm, usize> = BTreeMap::new();
    for r in records {
        *seen.entry(r.algorithm).or_default() += 1;
        if r.is_breakdown() {
            *breakdowns.entry(r.algorithm).or_default() += 1;
            continue;
        }
        for (&b, &v) in &r.bounds.values {
            let e = r.errors.value(b.measured_field());
            ratios.entry((r.algorithm, b)).or_default().push((v / e).log10());
        }
    }
    let mut out = Vec::new();
    for (&alg, &rows) in &seen {
        for &bound in Bound::for_algorithm(alg) {
            let vals = ratios.get(&(alg, bound)).map(Vec::as_slice).unwrap_or(&[]);
            out.push(TightnessRow {
                algorithm: alg,
                bound,
                median_log_ratio: median(vals),
                rows,
                breakdowns: breakdowns.get(&alg).copied().unwrap_or(0),
            });
        }
    }
    out
}

/// A row whose measured error exceeds `slack × bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundViolation {
    pub case_id: u32,
    pub kappa_a: f64,
    pub algorithm: Algorithm,
    pub bound: Bound,
    pub error: f64,
    pub bound_value: f64,
}

/// Every (row, bound) pair with `error > slack·bound` among non-breakdown rows.
pub fn check_records(records: &[SweepRecord], slack: f64) -> Vec<BoundViolation> {
    records
        .iter()
        .filter(|r| !r.is_breakdown())
        .flat_map(|r| {
            r.bounds.values.iter().filter_map(move |(&bound, &bound_value)| {
                let error = r.errors.value(bound.measured_field());
                (!(error <= slack * bound_value)).then_some(BoundViolation {
                    case_id: r.case_id,
                    kappa_a: r.kappa_a,
                    algorithm: r.algorithm,
                    bound,
                    error,
                    bound_value,
                })
            })
        })
        .collect()
}
