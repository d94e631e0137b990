//! Non-conformity score families and their inversions.
//!
//! Every built-in score is invertible: given a quantile `q` of
//! calibration scores, the set `{y : score(pred, y) <= q}` is a closed
//! interval around the prediction. Raw (signed) errors are asymmetric
//! and are handled two-sidedly by callers via [`invert_raw`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::math;

/// Denominator guard for the relative and heterogeneous scores.
pub const SCORE_EPSILON: f64 = 1e-8;

/// The non-conformity score family.
#[derive(Debug, Clone, Copy)]
pub enum ScoreFunction {
    /// `|truth - pred|`
    Absolute,
    /// `truth - pred` (signed; two-sided quantiles at interval time)
    Raw,
    /// `|truth - pred| / max(|pred|, epsilon)`
    Relative,
    /// `|truth - pred| / (|pred| + 1)`
    ZeroAdjustedRelative,
    /// `|truth - pred| / sqrt(max(|pred|, epsilon))`
    Heterogeneous,
    /// User-supplied score; not invertible by this crate.
    Custom(fn(f64, f64) -> f64),
}

impl PartialEq for ScoreFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ScoreFunction::Custom(a), ScoreFunction::Custom(b)) => core::ptr::fn_addr_eq(*a, *b),
            _ => core::mem::discriminant(self) == core::mem::discriminant(other),
        }
    }
}

impl ScoreFunction {
    /// Scale factor `g(pred)` such that the symmetric built-ins read
    /// `|truth - pred| / g(pred)` and invert to `pred ± q * g(pred)`.
    fn scale(&self, pred: f64) -> f64 {
        match self {
            ScoreFunction::Absolute | ScoreFunction::Raw => 1.0,
            ScoreFunction::Relative => math::abs(pred).max(SCORE_EPSILON),
            ScoreFunction::ZeroAdjustedRelative => math::abs(pred) + 1.0,
            ScoreFunction::Heterogeneous => math::sqrt(math::abs(pred).max(SCORE_EPSILON)),
            ScoreFunction::Custom(_) => 1.0,
        }
    }

    /// Score of a single (pred, truth) pair.
    pub fn score(&self, pred: f64, truth: f64) -> f64 {
        match self {
            ScoreFunction::Raw => truth - pred,
            ScoreFunction::Custom(f) => f(pred, truth),
            _ => math::abs(truth - pred) / self.scale(pred),
        }
    }

    /// Scores of paired vectors, validating custom-score output.
    pub fn scores(&self, preds: &[f64], truths: &[f64]) -> Result<Vec<f64>> {
        if preds.len() != truths.len() {
            return Err(Error::LengthMismatch {
                what: "score preds vs truths",
                left: preds.len(),
                right: truths.len(),
            });
        }
        let mut out = Vec::with_capacity(preds.len());
        for (i, (&p, &t)) in preds.iter().zip(truths).enumerate() {
            let s = self.score(p, t);
            if !s.is_finite() {
                return Err(Error::InvalidScore { index: i });
            }
            out.push(s);
        }
        Ok(out)
    }

    /// The interval `{y : score(pred, y) <= q}` for the symmetric
    /// built-ins. `q` may be `+inf`, giving an unbounded interval.
    ///
    /// Raw scores need two quantiles; use [`invert_raw`]. Custom scores
    /// are not invertible here.
    pub fn invert(&self, pred: f64, q: f64) -> Result<Interval> {
        match self {
            ScoreFunction::Custom(_) => Err(Error::UnsupportedInversion),
            ScoreFunction::Raw => {
                // symmetric fallback; callers normally use invert_raw
                Ok(half_width_interval(pred, q))
            }
            _ => {
                let half = q * self.scale(pred);
                Ok(half_width_interval(pred, half))
            }
        }
    }

    pub fn is_raw(&self) -> bool {
        matches!(self, ScoreFunction::Raw)
    }

    pub fn is_custom(&self) -> bool {
        matches!(self, ScoreFunction::Custom(_))
    }
}

fn half_width_interval(pred: f64, half: f64) -> Interval {
    if half.is_infinite() {
        Interval::unbounded()
    } else {
        Interval::new(pred - half, pred + half).expect("non-negative half width")
    }
}

/// Interval for raw (signed) scores from a lower and an upper quantile:
/// `[pred + q_lo, pred + q_hi]`.
pub fn invert_raw(pred: f64, q_lo: f64, q_hi: f64) -> Interval {
    let lower = if q_lo.is_infinite() {
        f64::NEG_INFINITY
    } else {
        pred + q_lo
    };
    let upper = if q_hi.is_infinite() {
        f64::INFINITY
    } else {
        pred + q_hi
    };
    Interval::new(lower, upper).expect("q_lo <= q_hi")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn score_definitions() {
        assert_eq!(ScoreFunction::Absolute.score(2.0, 5.0), 3.0);
        assert_eq!(ScoreFunction::Raw.score(5.0, 2.0), -3.0);
        assert_eq!(ScoreFunction::ZeroAdjustedRelative.score(0.0, 2.0), 2.0);
        assert_eq!(ScoreFunction::Relative.score(2.0, 5.0), 1.5);
        // pred=4: sqrt(4)=2
        assert_eq!(ScoreFunction::Heterogeneous.score(4.0, 8.0), 2.0);
    }

    #[test]
    fn relative_score_survives_zero_pred() {
        let s = ScoreFunction::Relative.score(0.0, 1.0);
        assert!(s.is_finite());
        assert_eq!(s, 1.0 / SCORE_EPSILON);
    }

    #[test]
    fn invert_absolute() {
        let iv = ScoreFunction::Absolute.invert(10.0, 2.0).unwrap();
        assert_eq!((iv.lower(), iv.upper()), (8.0, 12.0));
        let degenerate = ScoreFunction::Absolute.invert(10.0, 0.0).unwrap();
        assert_eq!((degenerate.lower(), degenerate.upper()), (10.0, 10.0));
    }

    #[test]
    fn invert_zero_adjusted_relative() {
        // q=0.5, scale = |3|+1 = 4 -> [1, 5]
        let iv = ScoreFunction::ZeroAdjustedRelative.invert(3.0, 0.5).unwrap();
        assert_eq!((iv.lower(), iv.upper()), (1.0, 5.0));
    }

    #[test]
    fn invert_unbounded_quantile() {
        let iv = ScoreFunction::Absolute.invert(1.0, f64::INFINITY).unwrap();
        assert!(iv.lower().is_infinite() && iv.upper().is_infinite());
    }

    #[test]
    fn invert_raw_is_asymmetric() {
        let iv = invert_raw(5.0, -1.0, 0.5);
        assert_eq!((iv.lower(), iv.upper()), (4.0, 5.5));
    }

    #[test]
    fn custom_scores_cannot_invert() {
        let custom = ScoreFunction::Custom(|p, t| (t - p) * (t - p));
        assert_eq!(custom.invert(0.0, 1.0).unwrap_err(), Error::UnsupportedInversion);
    }

    #[test]
    fn custom_score_nan_is_reported_with_index() {
        let custom = ScoreFunction::Custom(|p, t| math::sqrt(t - p));
        let err = custom.scores(&[0.0, 2.0], &[1.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::InvalidScore { index: 1 });
    }

    #[test]
    fn score_invert_round_trip_contains_truth() {
        let fns = [
            ScoreFunction::Absolute,
            ScoreFunction::Relative,
            ScoreFunction::ZeroAdjustedRelative,
            ScoreFunction::Heterogeneous,
        ];
        let pairs = vec![(2.0, 5.0), (-3.0, -2.5), (0.0, 0.7), (100.0, 90.0)];
        for f in fns {
            for &(p, t) in &pairs {
                let q = f.score(p, t);
                let iv = f.invert(p, q).unwrap();
                assert!(
                    iv.contains(t),
                    "{f:?} failed round trip at ({p}, {t}): {iv:?}"
                );
            }
        }
    }
}
