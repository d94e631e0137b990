//! Bin-conditional conformal prediction over user-defined outcome bins.
//!
//! Calibration runs separately inside each bin of the outcome space; a
//! test point's prediction set is the union, over bins, of the inverted
//! score region intersected with that bin's range. Bins whose candidate
//! region comes up empty are exactly the bins rejected at level alpha.

use alloc::vec::Vec;

use crate::calibration::{CalibrationSet, Matrix};
use crate::conformal::{calibrate_quantile, resolve_weights, CalibratedQuantile};
use crate::error::{Error, Result};
use crate::interval::{contiguize, ConfidenceLevel, Interval, IntervalSet};
use crate::math;
use crate::score::ScoreFunction;
use crate::table::{IntervalRow, IntervalTable, PredictionSet, Warning};
use crate::weighting::DistanceWeightConfig;

/// Outcome-space bins defined by strictly increasing break points.
///
/// Breaks `b_0 < b_1 < ... < b_B` define bins `[b_{t-1}, b_t)` with ids
/// `1..=B`; the outer breaks may be infinite. Membership is half-open on
/// the right (a finite last break closes the final bin from above), but
/// emitted intervals treat bin edges as closed endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct BinSpec {
    breaks: Vec<f64>,
}

impl BinSpec {
    /// Builds a spec from break points. At least one bin (two breaks)
    /// is required; a single bin spanning the whole line reduces the
    /// method to standard conformal prediction.
    pub fn new(breaks: Vec<f64>) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::InvalidBreaks);
        }
        if breaks.iter().any(|b| b.is_nan()) {
            return Err(Error::InvalidBreaks);
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidBreaks);
        }
        Ok(Self { breaks })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// Number of bins `B`.
    pub fn n_bins(&self) -> usize {
        self.breaks.len() - 1
    }

    /// Bin id (1-based) for a value, or an error when the value falls
    /// outside finite outer breaks.
    pub fn bin_of(&self, value: f64, index: usize) -> Result<usize> {
        if value < self.breaks[0] {
            return Err(Error::OutOfBinRange { value, index });
        }
        for t in 1..self.breaks.len() {
            if value < self.breaks[t] {
                return Ok(t);
            }
        }
        // last bin is closed above when its break is finite
        if value == *self.breaks.last().unwrap() {
            return Ok(self.n_bins());
        }
        Err(Error::OutOfBinRange { value, index })
    }

    /// The numeric range of bin `t` as a closed interval.
    pub fn range(&self, t: usize) -> Interval {
        Interval::new(self.breaks[t - 1], self.breaks[t]).expect("breaks increasing")
    }

    /// Break points that split `values` into `n_bins` bins of roughly
    /// equal counts, with infinite outer breaks.
    pub fn equal_count(values: &[f64], n_bins: usize) -> Result<Self> {
        if n_bins < 2 || values.len() < n_bins {
            return Err(Error::InvalidBreaks);
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut breaks = Vec::with_capacity(n_bins + 1);
        breaks.push(f64::NEG_INFINITY);
        for t in 1..n_bins {
            let idx = (t * sorted.len()) / n_bins;
            let cut = sorted[idx.min(sorted.len() - 1)];
            if *breaks.last().unwrap() < cut {
                breaks.push(cut);
            }
        }
        breaks.push(f64::INFINITY);
        Self::new(breaks)
    }
}

/// Assigns each value to its bin; `values[i]` maps to ids `1..=B`.
pub fn assign_bins(values: &[f64], spec: &BinSpec) -> Result<Vec<usize>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| spec.bin_of(v, i))
        .collect()
}

/// Bin-conditional conformal prediction.
///
/// Bin labels come from `calib.bins()` when present (validated against
/// the spec's bin count) and are otherwise derived from the calibration
/// truths. With `contiguize` the per-bin candidates collapse to the
/// single spanning interval; otherwise each row carries the disjoint
/// union, and rows whose every bin is rejected are flagged empty.
pub fn pinterval_bccp(
    pred: &[f64],
    calib: &CalibrationSet,
    spec: &BinSpec,
    alpha: ConfidenceLevel,
    score_fn: &ScoreFunction,
    contiguize_output: bool,
    dw: &DistanceWeightConfig,
    features_pred: Option<&Matrix>,
) -> Result<IntervalTable> {
    let bins = match calib.bins() {
        Some(labels) => {
            for (i, &b) in labels.iter().enumerate() {
                if b < 1 || b > spec.n_bins() {
                    return Err(Error::InvalidBinLabel {
                        label: b,
                        index: i,
                        bins: spec.n_bins(),
                    });
                }
            }
            labels.to_vec()
        }
        None => assign_bins(calib.truths(), spec)?,
    };

    // every bin needs calibration points; below 1/alpha - 1 the
    // guarantee is void, which is worth a warning but not an error
    let mut warnings = Vec::new();
    let mut bin_rows: Vec<Vec<usize>> = alloc::vec![Vec::new(); spec.n_bins()];
    for (i, &b) in bins.iter().enumerate() {
        bin_rows[b - 1].push(i);
    }
    let needed = math::ceil(1.0 / alpha.alpha() - 1.0) as usize;
    for (t, rows) in bin_rows.iter().enumerate() {
        if rows.is_empty() {
            return Err(Error::EmptyBin(t + 1));
        }
        if rows.len() < needed {
            warnings.push(Warning::SparseBin {
                bin: t + 1,
                n: rows.len(),
                needed,
            });
        }
    }

    let scores = score_fn.scores(calib.preds(), calib.truths())?;
    let weights = resolve_weights(dw, calib, features_pred, pred.len())?;
    let bin_scores: Vec<Vec<f64>> = bin_rows
        .iter()
        .map(|rows| rows.iter().map(|&i| scores[i]).collect())
        .collect();

    // unweighted quantiles are shared by all test points
    let shared: Option<Vec<CalibratedQuantile>> = match &weights {
        None => Some(
            bin_scores
                .iter()
                .map(|s| calibrate_quantile(score_fn, s, alpha, None))
                .collect::<Result<_>>()?,
        ),
        Some(_) => None,
    };

    let mut unbounded_bins: Vec<usize> = Vec::new();
    let mut rows = Vec::with_capacity(pred.len());
    for (j, &p) in pred.iter().enumerate() {
        let mut candidates: Vec<Interval> = Vec::new();
        for t in 1..=spec.n_bins() {
            let q = match &shared {
                Some(qs) => qs[t - 1],
                None => {
                    let w = weights.as_ref().unwrap().row(j);
                    let bw: Vec<f64> = bin_rows[t - 1].iter().map(|&i| w[i]).collect();
                    calibrate_quantile(score_fn, &bin_scores[t - 1], alpha, Some(&bw))?
                }
            };
            if q.is_unbounded() && !unbounded_bins.contains(&t) {
                unbounded_bins.push(t);
                warnings.push(Warning::UnboundedInterval {
                    group: Some(alloc::format!("bin {t}")),
                });
            }
            let region = q.invert_at(score_fn, p)?;
            if let Some(candidate) = region.intersect(&spec.range(t)) {
                candidates.push(candidate);
            }
        }

        if candidates.is_empty() {
            warnings.push(Warning::EmptyPredictionSet { row: j });
            rows.push(IntervalRow::new(p, PredictionSet::Empty));
            continue;
        }
        let set = IntervalSet::from_candidates(candidates)?;
        let prediction = if contiguize_output {
            PredictionSet::Interval(contiguize(&set))
        } else {
            PredictionSet::Set(set)
        };
        rows.push(IntervalRow::new(p, prediction));
    }

    let mut table = IntervalTable::new(rows);
    table.warnings = warnings;
    Ok(table)
}
