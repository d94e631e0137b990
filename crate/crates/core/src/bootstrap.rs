//! Bootstrapped prediction intervals from resampled calibration errors.

use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::calibration::{CalibrationSet, Matrix};
use crate::conformal::resolve_weights;
use crate::error::{Error, Result};
use crate::interval::{ConfidenceLevel, Interval};
use crate::math;
use crate::rng::stream_rng;
use crate::table::{IntervalRow, IntervalTable, PredictionSet};
use crate::weighting::DistanceWeightConfig;

/// Which calibration errors are resampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorType {
    /// Signed errors `truth - pred` as observed.
    #[default]
    Raw,
    /// Absolute errors with a random sign per draw.
    Absolute,
}

/// Bootstrap settings.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub n_bootstrap: usize,
    pub error_type: ErrorType,
    pub seed: u64,
    pub dw: DistanceWeightConfig,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            n_bootstrap: 1000,
            error_type: ErrorType::Raw,
            seed: 0,
            dw: DistanceWeightConfig::disabled(),
        }
    }
}

/// Bootstrapped prediction intervals.
///
/// Calibration errors are resampled with replacement `n_bootstrap`
/// times per test point (uniformly, or proportionally to the kernel
/// weights when `dw.enabled`), added to the point prediction, and the
/// interval takes the `ceil((alpha/2) B)`-th and `ceil((1-alpha/2) B)`-th
/// order statistics of the simulated outcomes.
///
/// Each test point draws from its own RNG stream derived from the seed,
/// so results do not depend on evaluation order.
pub fn pinterval_bootstrap(
    pred: &[f64],
    calib: &CalibrationSet,
    alpha: ConfidenceLevel,
    cfg: &BootstrapConfig,
    features_pred: Option<&Matrix>,
) -> Result<IntervalTable> {
    if cfg.n_bootstrap < 1 {
        return Err(Error::InvalidBootstrapCount);
    }
    let errors = calib.errors();
    let weights = resolve_weights(&cfg.dw, calib, features_pred, pred.len())?;

    let b = cfg.n_bootstrap;
    let k_lo = order_rank(alpha.alpha() / 2.0, b);
    let k_hi = order_rank(1.0 - alpha.alpha() / 2.0, b);

    let mut rows = Vec::with_capacity(pred.len());
    let mut outcomes = Vec::with_capacity(b);
    for (j, &p) in pred.iter().enumerate() {
        let mut rng = stream_rng(cfg.seed, j as u64);
        let sampler = match &weights {
            Some(w) => {
                let row = w.row(j);
                if row.iter().all(|&x| x == 0.0) {
                    return Err(Error::DegenerateWeights);
                }
                Some(WeightedIndex::new(row).map_err(|_| Error::DegenerateWeights)?)
            }
            None => None,
        };

        outcomes.clear();
        for _ in 0..b {
            let idx = match &sampler {
                Some(s) => s.sample(&mut rng),
                None => rng.gen_range(0..errors.len()),
            };
            let e = match cfg.error_type {
                ErrorType::Raw => errors[idx],
                ErrorType::Absolute => {
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    math::abs(errors[idx]) * sign
                }
            };
            outcomes.push(p + e);
        }
        outcomes.sort_by(f64::total_cmp);
        let interval = Interval::new(outcomes[k_lo - 1], outcomes[k_hi - 1])?;
        rows.push(IntervalRow::new(p, PredictionSet::Interval(interval)));
    }
    Ok(IntervalTable::new(rows))
}

/// `ceil(p * b)` clamped to `1..=b`.
fn order_rank(p: f64, b: usize) -> usize {
    (math::ceil(p * b as f64) as usize).clamp(1, b)
}
