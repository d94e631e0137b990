//! Empirical coverage, interval width, and the MAE-of-coverage metric.

use alloc::collections::BTreeMap;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::interval::ConfidenceLevel;
use crate::table::IntervalTable;

/// Fraction of rows whose true outcome lies in the prediction set.
///
/// Empty-flagged rows count as misses.
pub fn interval_coverage(truth: &[f64], table: &IntervalTable) -> Result<f64> {
    if truth.len() != table.len() {
        return Err(Error::LengthMismatch {
            what: "truth vs intervals",
            left: truth.len(),
            right: table.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::EmptyCalibration);
    }
    let covered = truth
        .iter()
        .zip(&table.rows)
        .filter(|(&t, row)| row.set.contains(t))
        .count();
    Ok(covered as f64 / truth.len() as f64)
}

/// Mean interval width, tracking unbounded rows separately.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthSummary {
    /// Mean width over all rows; `+inf` if any row is unbounded.
    pub mean: f64,
    /// Mean over the bounded rows only, when any exist.
    pub finite_mean: Option<f64>,
    pub n_unbounded: usize,
}

/// Mean width over the table's rows.
///
/// Interval-set rows contribute the sum of their component widths. A
/// single unbounded row poisons the overall mean to `+inf`; the mean of
/// the bounded rows is reported alongside.
pub fn mean_width(table: &IntervalTable) -> WidthSummary {
    let mut finite_sum = 0.0;
    let mut finite_n = 0usize;
    let mut n_unbounded = 0usize;
    for row in &table.rows {
        if row.set.is_bounded() {
            finite_sum += row.set.width();
            finite_n += 1;
        } else {
            n_unbounded += 1;
        }
    }
    let finite_mean = (finite_n > 0).then(|| finite_sum / finite_n as f64);
    let mean = if n_unbounded > 0 {
        f64::INFINITY
    } else {
        finite_mean.unwrap_or(0.0)
    };
    WidthSummary {
        mean,
        finite_mean,
        n_unbounded,
    }
}

/// Mean absolute deviation of per-key coverage from the nominal level:
/// `(1/G) * sum_g |c_g - (1 - alpha)|`.
pub fn mae_coverage(coverages: &BTreeMap<String, f64>, alpha: ConfidenceLevel) -> Result<f64> {
    if coverages.is_empty() {
        return Err(Error::Domain("mae_coverage needs at least one group".into()));
    }
    let nominal = alpha.coverage();
    let total: f64 = coverages.values().map(|c| (c - nominal).abs()).sum();
    Ok(total / coverages.len() as f64)
}

/// Per-key coverage statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyStats {
    pub coverage: f64,
    pub n: usize,
    pub mean_width: WidthSummary,
}

/// Coverage report over a table, optionally broken out by key.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub coverage: f64,
    pub n: usize,
    pub mean_width: WidthSummary,
    pub by_key: Option<BTreeMap<String, KeyStats>>,
}

/// Builds a coverage report; `keys` (one label per row) adds a per-key
/// breakdown whose weighted average reproduces the overall coverage.
pub fn coverage_report(
    truth: &[f64],
    table: &IntervalTable,
    keys: Option<&[String]>,
) -> Result<CoverageReport> {
    let coverage = interval_coverage(truth, table)?;
    let by_key = match keys {
        None => None,
        Some(keys) => {
            if keys.len() != table.len() {
                return Err(Error::LengthMismatch {
                    what: "keys vs intervals",
                    left: keys.len(),
                    right: table.len(),
                });
            }
            let mut grouped: BTreeMap<String, (usize, usize, IntervalTable)> = BTreeMap::new();
            for ((key, &t), row) in keys.iter().zip(truth).zip(&table.rows) {
                let entry = grouped
                    .entry(key.clone())
                    .or_insert_with(|| (0, 0, IntervalTable::new(alloc::vec::Vec::new())));
                entry.0 += 1;
                if row.set.contains(t) {
                    entry.1 += 1;
                }
                entry.2.rows.push(row.clone());
            }
            let mut stats = BTreeMap::new();
            for (key, (n, covered, sub)) in grouped {
                stats.insert(
                    key,
                    KeyStats {
                        coverage: covered as f64 / n as f64,
                        n,
                        mean_width: mean_width(&sub),
                    },
                );
            }
            Some(stats)
        }
    };
    Ok(CoverageReport {
        coverage,
        n: truth.len(),
        mean_width: mean_width(table),
        by_key,
    })
}
