//! Finite-sample conformal quantiles, plain and weighted.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::ConfidenceLevel;

/// The conformal quantile of calibration scores.
///
/// Returns the k-th smallest score with `k = ceil((1 - alpha) * (n + 1))`,
/// or `+inf` when `k > n`. Defined through the rank inequality
/// `k / (n + 1) >= 1 - alpha`, which keeps the finite-sample guarantee
/// exact and avoids floating-point drift at grid values of alpha.
pub fn conformal_quantile(scores: &[f64], alpha: ConfidenceLevel) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyCalibration);
    }
    let n = scores.len();
    let k = conformal_rank(n, alpha);
    if k > n {
        return Ok(f64::INFINITY);
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[k - 1])
}

/// Smallest rank `k >= 1` with `k / (n + 1) >= 1 - alpha`.
///
/// May exceed `n`, in which case no finite quantile exists.
pub fn conformal_rank(n: usize, alpha: ConfidenceLevel) -> usize {
    let target = 1.0 - alpha.alpha();
    let denom = (n + 1) as f64;
    let mut k = crate::math::ceil(target * denom) as usize;
    k = k.max(1);
    // ceil on the product can be off by one at representable boundaries;
    // the rank inequality itself is authoritative.
    while k > 1 && (k - 1) as f64 / denom >= target {
        k -= 1;
    }
    while (k as f64) / denom < target {
        k += 1;
    }
    k
}

/// Weighted conformal quantile.
///
/// Scores are sorted ascending with their weights; the unseen test point
/// receives mass `w* = max_i w_i` (conservative). The result is the
/// smallest score whose cumulative weight share
/// `sum_{i <= k} w_(i) / (sum_j w_j + w*)` reaches `1 - alpha`, or `+inf`
/// when the calibration mass alone cannot reach it.
///
/// Uniform weights reproduce [`conformal_quantile`] exactly.
pub fn weighted_quantile(
    scores: &[f64],
    weights: &[f64],
    alpha: ConfidenceLevel,
) -> Result<f64> {
    let max_w = validate_weights(scores, weights)?;
    weighted_quantile_impl(scores, weights, alpha, max_w)
}

/// [`weighted_quantile`] with an explicit test-point mass instead of the
/// default `max_i w_i`.
pub fn weighted_quantile_with_test_weight(
    scores: &[f64],
    weights: &[f64],
    alpha: ConfidenceLevel,
    test_weight: f64,
) -> Result<f64> {
    validate_weights(scores, weights)?;
    if !(test_weight >= 0.0) || !test_weight.is_finite() {
        return Err(Error::InvalidWeights { index: scores.len() });
    }
    weighted_quantile_impl(scores, weights, alpha, test_weight)
}

fn validate_weights(scores: &[f64], weights: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyCalibration);
    }
    if scores.len() != weights.len() {
        return Err(Error::LengthMismatch {
            what: "scores vs weights",
            left: scores.len(),
            right: weights.len(),
        });
    }
    let mut max_w = 0.0f64;
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeights { index: i });
        }
        max_w = max_w.max(w);
    }
    if max_w == 0.0 {
        return Err(Error::DegenerateWeights);
    }
    Ok(max_w)
}

fn weighted_quantile_impl(
    scores: &[f64],
    weights: &[f64],
    alpha: ConfidenceLevel,
    test_weight: f64,
) -> Result<f64> {
    let target = 1.0 - alpha.alpha();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // stable by construction: ties keep input order, so tied scores
    // accumulate onto the same score value regardless of permutation
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let total: f64 = weights.iter().sum::<f64>() + test_weight;
    let mut cum = 0.0;
    for &idx in &order {
        cum += weights[idx];
        if cum / total >= target {
            return Ok(scores[idx]);
        }
    }
    Ok(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn level(alpha: f64) -> ConfidenceLevel {
        ConfidenceLevel::new(alpha).unwrap()
    }

    fn tenths() -> Vec<f64> {
        (1..=10).map(|i| i as f64 / 10.0).collect()
    }

    #[test]
    fn order_statistic_rule() {
        // n=10, alpha=0.1 -> k = ceil(0.9 * 11) = 10 -> 1.0
        assert_eq!(conformal_quantile(&tenths(), level(0.1)).unwrap(), 1.0);
        // alpha=0.5 -> k = ceil(0.5 * 11) = 6 -> 0.6
        assert_eq!(conformal_quantile(&tenths(), level(0.5)).unwrap(), 0.6);
        // alpha=0.01 -> k = 11 > 10 -> +inf
        assert!(conformal_quantile(&tenths(), level(0.01))
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn empty_scores_error() {
        assert_eq!(
            conformal_quantile(&[], level(0.1)).unwrap_err(),
            Error::EmptyCalibration
        );
    }

    #[test]
    fn unsorted_input_is_handled() {
        let scores = vec![0.9, 0.1, 0.5, 0.3, 0.7];
        // n=5, alpha=0.5 -> k = ceil(0.5*6) = 3 -> third smallest = 0.5
        assert_eq!(conformal_quantile(&scores, level(0.5)).unwrap(), 0.5);
    }

    /// Brute-force oracle: smallest score s with
    /// #{i : s_i <= s} / (n+1) >= 1 - alpha, else +inf.
    fn oracle(scores: &[f64], alpha: f64) -> f64 {
        let mut sorted = scores.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        for &s in &sorted {
            let count = sorted.iter().filter(|&&x| x <= s).count();
            if count as f64 / (n + 1) as f64 >= 1.0 - alpha {
                return s;
            }
        }
        f64::INFINITY
    }

    #[test]
    fn matches_rank_enumeration_oracle() {
        // all n <= 20 x 99-point alpha grid, distinct scores
        for n in 1..=20usize {
            let scores: Vec<f64> = (0..n).map(|i| (i * i) as f64 * 0.37 + 1.0).collect();
            for a in 1..=99usize {
                let alpha = a as f64 / 100.0;
                let got = conformal_quantile(&scores, level(alpha)).unwrap();
                let want = oracle(&scores, alpha);
                assert!(
                    (got.is_infinite() && want.is_infinite()) || got == want,
                    "n={n} alpha={alpha}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn uniform_weights_reduce_to_conformal() {
        let scores = vec![1.0, 2.0, 3.0];
        let w = vec![1.0, 1.0, 1.0];
        // k = ceil(0.75 * 4) = 3 -> 3.0
        assert_eq!(weighted_quantile(&scores, &w, level(0.25)).unwrap(), 3.0);
        for a in 1..=99usize {
            let alpha = level(a as f64 / 100.0);
            let cq = conformal_quantile(&scores, alpha).unwrap();
            let wq = weighted_quantile(&scores, &w, alpha).unwrap();
            assert!((cq.is_infinite() && wq.is_infinite()) || cq == wq);
        }
    }

    #[test]
    fn point_mass_weight_pins_the_quantile() {
        let scores = vec![1.0, 2.0, 3.0];
        let w = vec![0.0, 0.0, 5.0];
        // total = 5 + 5; any alpha with 1 - alpha <= 0.5 hits score 3
        for alpha in [0.5, 0.6, 0.9] {
            assert_eq!(weighted_quantile(&scores, &w, level(alpha)).unwrap(), 3.0);
        }
        // 1 - alpha > 0.5 cannot be reached by calibration mass
        assert!(weighted_quantile(&scores, &w, level(0.4))
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn hand_computed_mass_rule() {
        // weights {1,1,2}, w*=2, denom=6; cumulative {1/6, 2/6, 4/6};
        // first >= 0.6 is at score 3
        let q = weighted_quantile(&[1.0, 2.0, 3.0], &[1.0, 1.0, 2.0], level(0.4)).unwrap();
        assert_eq!(q, 3.0);
    }

    #[test]
    fn all_zero_weights_error() {
        assert_eq!(
            weighted_quantile(&[1.0, 2.0], &[0.0, 0.0], level(0.1)).unwrap_err(),
            Error::DegenerateWeights
        );
    }

    #[test]
    fn explicit_test_weight_overrides_max_rule() {
        let scores = vec![1.0, 2.0];
        let w = vec![1.0, 1.0];
        // with test mass 0 the calibration mass alone is the total:
        // cumulative {1/2, 1} -> alpha=0.5 hits score 1
        let q = weighted_quantile_with_test_weight(&scores, &w, level(0.5), 0.0).unwrap();
        assert_eq!(q, 1.0);
        // default (max rule) uses denom 3: cumulative {1/3, 2/3} -> score 2
        assert_eq!(weighted_quantile(&scores, &w, level(0.5)).unwrap(), 2.0);
    }

    #[test]
    fn weighted_quantile_monotone_in_alpha() {
        let scores = vec![0.3, 1.2, 0.9, 2.8, 0.1, 1.9];
        let weights = vec![0.5, 1.5, 0.2, 1.0, 2.0, 0.7];
        let mut prev = f64::INFINITY;
        for a in 1..=99usize {
            let q = weighted_quantile(&scores, &weights, level(a as f64 / 100.0)).unwrap();
            assert!(q <= prev, "not monotone at alpha={}", a as f64 / 100.0);
            prev = q;
        }
    }
}
