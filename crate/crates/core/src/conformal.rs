//! Split conformal prediction intervals, unweighted or distance-weighted.

use alloc::vec::Vec;

use crate::calibration::{CalibrationSet, Matrix};
use crate::error::{Error, Result};
use crate::interval::{ConfidenceLevel, Interval};
use crate::quantile::{conformal_quantile, weighted_quantile};
use crate::score::{invert_raw, ScoreFunction};
use crate::table::{IntervalRow, IntervalTable, PredictionSet, Warning};
use crate::weighting::DistanceWeightConfig;

/// Calibrated quantile(s) ready to be inverted at a prediction.
///
/// Symmetric scores need one quantile; raw scores need a signed pair.
#[derive(Debug, Clone, Copy)]
pub(crate) enum CalibratedQuantile {
    Symmetric(f64),
    TwoSided { lo: f64, hi: f64 },
}

impl CalibratedQuantile {
    pub(crate) fn is_unbounded(&self) -> bool {
        match self {
            CalibratedQuantile::Symmetric(q) => q.is_infinite(),
            CalibratedQuantile::TwoSided { lo, hi } => lo.is_infinite() || hi.is_infinite(),
        }
    }

    pub(crate) fn invert_at(&self, score_fn: &ScoreFunction, pred: f64) -> Result<Interval> {
        match self {
            CalibratedQuantile::Symmetric(q) => score_fn.invert(pred, *q),
            CalibratedQuantile::TwoSided { lo, hi } => Ok(invert_raw(pred, *lo, *hi)),
        }
    }
}

/// Computes the calibrated quantile(s) from scores, optionally weighted.
///
/// Raw scores take one-sided quantiles at `alpha / 2` from each tail of
/// the signed scores; everything else takes the `1 - alpha` quantile.
pub(crate) fn calibrate_quantile(
    score_fn: &ScoreFunction,
    scores: &[f64],
    alpha: ConfidenceLevel,
    weights: Option<&[f64]>,
) -> Result<CalibratedQuantile> {
    let one_sided = |xs: &[f64], level: ConfidenceLevel| -> Result<f64> {
        match weights {
            Some(w) => weighted_quantile(xs, w, level),
            None => conformal_quantile(xs, level),
        }
    };
    if score_fn.is_raw() {
        let half = alpha.halved();
        let hi = one_sided(scores, half)?;
        let negated: Vec<f64> = scores.iter().map(|s| -s).collect();
        let lo_mag = one_sided(&negated, half)?;
        let lo = if lo_mag.is_infinite() {
            f64::NEG_INFINITY
        } else {
            -lo_mag
        };
        Ok(CalibratedQuantile::TwoSided { lo, hi })
    } else {
        Ok(CalibratedQuantile::Symmetric(one_sided(scores, alpha)?))
    }
}

/// Resolves the per-test-point weight matrix for a distance-weighted run.
pub(crate) fn resolve_weights(
    dw: &DistanceWeightConfig,
    calib: &CalibrationSet,
    features_pred: Option<&Matrix>,
    n_pred: usize,
) -> Result<Option<Matrix>> {
    if !dw.enabled {
        return Ok(None);
    }
    let fc = calib
        .features()
        .ok_or(Error::MissingFeatures("the calibration set"))?;
    let fp = features_pred.ok_or(Error::MissingFeatures("the test predictions"))?;
    if fp.n_rows() != n_pred {
        return Err(Error::LengthMismatch {
            what: "prediction features vs predictions",
            left: fp.n_rows(),
            right: n_pred,
        });
    }
    dw.weights(fc, fp).map(Some)
}

/// Standard split conformal prediction intervals.
///
/// Scores the calibration pairs, takes the conformal quantile (weighted
/// per test point when `dw.enabled`), and inverts the score at each
/// prediction. When the quantile rank exceeds the calibration size the
/// affected rows are `[-inf, +inf]` and a warning is attached.
pub fn pinterval_conformal(
    pred: &[f64],
    calib: &CalibrationSet,
    alpha: ConfidenceLevel,
    score_fn: &ScoreFunction,
    dw: &DistanceWeightConfig,
    features_pred: Option<&Matrix>,
) -> Result<IntervalTable> {
    let scores = score_fn.scores(calib.preds(), calib.truths())?;
    let weights = resolve_weights(dw, calib, features_pred, pred.len())?;

    let mut rows = Vec::with_capacity(pred.len());
    let mut unbounded = false;

    match weights {
        None => {
            let q = calibrate_quantile(score_fn, &scores, alpha, None)?;
            unbounded = q.is_unbounded();
            for &p in pred {
                rows.push(IntervalRow::new(
                    p,
                    PredictionSet::Interval(q.invert_at(score_fn, p)?),
                ));
            }
        }
        Some(w) => {
            for (j, &p) in pred.iter().enumerate() {
                let q = calibrate_quantile(score_fn, &scores, alpha, Some(w.row(j)))?;
                unbounded |= q.is_unbounded();
                rows.push(IntervalRow::new(
                    p,
                    PredictionSet::Interval(q.invert_at(score_fn, p)?),
                ));
            }
        }
    }

    let mut table = IntervalTable::new(rows);
    if unbounded {
        table.warnings.push(Warning::UnboundedInterval { group: None });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weighting::{DistanceType, Kernel, Normalization};
    use alloc::vec;

    fn level(alpha: f64) -> ConfidenceLevel {
        ConfidenceLevel::new(alpha).unwrap()
    }

    /// Calibration with absolute scores {0.1, ..., 1.0}.
    fn tenths_calib() -> CalibrationSet {
        let truths: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        CalibrationSet::new(vec![0.0; 10], truths).unwrap()
    }

    fn bounds(table: &IntervalTable) -> Vec<(f64, f64)> {
        table
            .rows
            .iter()
            .map(|r| match &r.set {
                PredictionSet::Interval(iv) => (iv.lower(), iv.upper()),
                _ => panic!("expected plain intervals"),
            })
            .collect()
    }

    #[test]
    fn composes_quantile_and_inversion() {
        // q-hat = 1.0 at alpha=0.1; pred 10 -> [9, 11]
        let table = pinterval_conformal(
            &[10.0],
            &tenths_calib(),
            level(0.1),
            &ScoreFunction::Absolute,
            &DistanceWeightConfig::disabled(),
            None,
        )
        .unwrap();
        assert_eq!(bounds(&table), vec![(9.0, 11.0)]);
        assert!(table.warnings.is_empty());
    }

    #[test]
    fn unbounded_rank_yields_infinite_rows_and_warning() {
        let table = pinterval_conformal(
            &[0.0],
            &tenths_calib(),
            level(0.01),
            &ScoreFunction::Absolute,
            &DistanceWeightConfig::disabled(),
            None,
        )
        .unwrap();
        let (lo, hi) = bounds(&table)[0];
        assert!(lo.is_infinite() && hi.is_infinite());
        assert_eq!(
            table.warnings,
            vec![Warning::UnboundedInterval { group: None }]
        );
    }

    #[test]
    fn raw_scores_give_asymmetric_intervals() {
        // signed errors {-2, -1, 1, 2, 3}; alpha=0.4 -> alpha/2=0.2
        // k = ceil(0.8 * 6) = 5 -> hi = 3, lo = -(5th smallest of negated) = -2
        let calib =
            CalibrationSet::new(vec![0.0; 5], vec![-2.0, -1.0, 1.0, 2.0, 3.0]).unwrap();
        let table = pinterval_conformal(
            &[10.0],
            &calib,
            level(0.4),
            &ScoreFunction::Raw,
            &DistanceWeightConfig::disabled(),
            None,
        )
        .unwrap();
        assert_eq!(bounds(&table), vec![(8.0, 13.0)]);
    }

    #[test]
    fn identical_features_reduce_to_unweighted() {
        let calib = tenths_calib()
            .with_features(Matrix::from_rows(vec![vec![1.0, 2.0]; 10]).unwrap())
            .unwrap();
        let features_pred = Matrix::from_rows(vec![vec![1.0, 2.0]; 3]).unwrap();
        let dw = DistanceWeightConfig {
            enabled: true,
            distance_type: DistanceType::Euclidean,
            normalize: Normalization::MinMax,
            kernel: Kernel::Gaussian,
            ridge: 1e-8,
        };
        let preds = [5.0, 6.0, 7.0];
        let weighted = pinterval_conformal(
            &preds,
            &calib,
            level(0.1),
            &ScoreFunction::Absolute,
            &dw,
            Some(&features_pred),
        )
        .unwrap();
        let plain = pinterval_conformal(
            &preds,
            &calib,
            level(0.1),
            &ScoreFunction::Absolute,
            &DistanceWeightConfig::disabled(),
            None,
        )
        .unwrap();
        assert_eq!(bounds(&weighted), bounds(&plain));
    }

    #[test]
    fn constant_custom_kernel_reduces_to_unweighted() {
        let features: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, -(i as f64)]).collect();
        let calib = tenths_calib()
            .with_features(Matrix::from_rows(features).unwrap())
            .unwrap();
        let features_pred = Matrix::from_rows(vec![vec![3.5, 2.0]]).unwrap();
        let dw = DistanceWeightConfig {
            enabled: true,
            distance_type: DistanceType::Euclidean,
            normalize: Normalization::None,
            kernel: Kernel::Custom(|d| d.iter().map(|_| 0.7).collect()),
            ridge: 1e-8,
        };
        let weighted = pinterval_conformal(
            &[5.0],
            &calib,
            level(0.2),
            &ScoreFunction::Absolute,
            &dw,
            Some(&features_pred),
        )
        .unwrap();
        let plain = pinterval_conformal(
            &[5.0],
            &calib,
            level(0.2),
            &ScoreFunction::Absolute,
            &DistanceWeightConfig::disabled(),
            None,
        )
        .unwrap();
        assert_eq!(bounds(&weighted), bounds(&plain));
    }

    #[test]
    fn weighted_path_requires_features() {
        let err = pinterval_conformal(
            &[1.0],
            &tenths_calib(),
            level(0.1),
            &ScoreFunction::Absolute,
            &DistanceWeightConfig::enabled(),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingFeatures(_)));
    }

    #[test]
    fn width_non_increasing_in_alpha() {
        let calib = tenths_calib();
        let mut prev = f64::INFINITY;
        for a in [0.05, 0.1, 0.2, 0.3, 0.5, 0.8] {
            let table = pinterval_conformal(
                &[0.0],
                &calib,
                level(a),
                &ScoreFunction::Absolute,
                &DistanceWeightConfig::disabled(),
                None,
            )
            .unwrap();
            let (lo, hi) = bounds(&table)[0];
            let width = hi - lo;
            assert!(width <= prev);
            prev = width;
        }
    }

    #[test]
    fn custom_score_without_inversion_errors() {
        let err = pinterval_conformal(
            &[1.0],
            &tenths_calib(),
            level(0.1),
            &ScoreFunction::Custom(|p, t| (t - p).abs()),
            &DistanceWeightConfig::disabled(),
            None,
        )
        .unwrap_err();
        assert_eq!(err, Error::UnsupportedInversion);
    }
}
