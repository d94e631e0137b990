//! Intervals, interval sets, and the confidence level they are built for.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Miscoverage rate `alpha` in (0, 1); the target coverage is `1 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceLevel {
    alpha: f64,
}

impl ConfidenceLevel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Nominal coverage `1 - alpha`.
    pub fn coverage(&self) -> f64 {
        1.0 - self.alpha
    }

    /// The level `alpha / 2` used for two-sided constructions.
    pub fn halved(&self) -> ConfidenceLevel {
        ConfidenceLevel {
            alpha: self.alpha / 2.0,
        }
    }
}

/// A closed interval `[lower, upper]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::Domain(alloc::format!(
                "invalid interval bounds [{lower}, {upper}]"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The unbounded interval `[-inf, +inf]`.
    pub fn unbounded() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: f64) -> Self {
        Self { lower: x, upper: x }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    /// Intersection with another interval, or `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lower = self.lower.max(other.lower);
        let upper = self.upper.min(other.upper);
        (lower <= upper).then_some(Interval { lower, upper })
    }
}

/// An ordered, pairwise-disjoint, non-empty list of intervals.
///
/// This is the discontiguous output shape of bin-conditional prediction
/// sets; everything else in the crate emits plain [`Interval`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    /// Builds a set from arbitrary candidate intervals.
    ///
    /// Candidates are sorted by lower bound; overlapping intervals and
    /// intervals sharing an endpoint are merged.
    pub fn from_candidates(mut candidates: Vec<Interval>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::Domain("interval set cannot be empty".into()));
        }
        candidates.sort_by(|a, b| a.lower.total_cmp(&b.lower));
        let mut merged: Vec<Interval> = Vec::with_capacity(candidates.len());
        for cand in candidates {
            match merged.last_mut() {
                Some(last) if cand.lower <= last.upper => {
                    last.upper = last.upper.max(cand.upper);
                }
                _ => merged.push(cand),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one member
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// Sum of the member widths.
    pub fn total_width(&self) -> f64 {
        self.intervals.iter().map(Interval::width).sum()
    }
}

/// Collapses a set to the single interval spanning its extreme endpoints.
///
/// The result contains every member of the input, so coverage can only
/// grow; the price is over-coverage when the set had gaps.
pub fn contiguize(set: &IntervalSet) -> Interval {
    let lower = set.intervals.first().map(|iv| iv.lower).unwrap_or(0.0);
    let upper = set
        .intervals
        .iter()
        .map(|iv| iv.upper)
        .fold(f64::NEG_INFINITY, f64::max);
    Interval { lower, upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn alpha_must_be_interior() {
        assert!(ConfidenceLevel::new(0.0).is_err());
        assert!(ConfidenceLevel::new(1.0).is_err());
        assert!(ConfidenceLevel::new(f64::NAN).is_err());
        assert_eq!(ConfidenceLevel::new(0.1).unwrap().coverage(), 0.9);
    }

    #[test]
    fn interval_rejects_inverted_bounds() {
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(1.0, 1.0).is_ok());
    }

    #[test]
    fn contiguize_spans_extremes() {
        let set = IntervalSet::from_candidates(vec![iv(1.0, 2.0), iv(3.0, 4.0)]).unwrap();
        assert_eq!(contiguize(&set), iv(1.0, 4.0));

        let single = IntervalSet::from_candidates(vec![iv(0.0, 5.0)]).unwrap();
        assert_eq!(contiguize(&single), iv(0.0, 5.0));

        let three =
            IntervalSet::from_candidates(vec![iv(-1.0, 0.0), iv(2.0, 3.0), iv(10.0, 11.0)])
                .unwrap();
        assert_eq!(contiguize(&three), iv(-1.0, 11.0));
    }

    #[test]
    fn touching_candidates_merge() {
        let set = IntervalSet::from_candidates(vec![iv(4.0, 5.5), iv(5.5, 7.0)]).unwrap();
        assert_eq!(set.intervals(), &[iv(4.0, 7.0)]);
    }

    #[test]
    fn overlapping_candidates_merge_out_of_order() {
        let set =
            IntervalSet::from_candidates(vec![iv(3.0, 6.0), iv(1.0, 4.0), iv(8.0, 9.0)]).unwrap();
        assert_eq!(set.intervals(), &[iv(1.0, 6.0), iv(8.0, 9.0)]);
    }

    #[test]
    fn contiguize_contains_all_members() {
        let set =
            IntervalSet::from_candidates(vec![iv(-3.0, -1.0), iv(0.5, 0.6), iv(2.0, 9.0)]).unwrap();
        let hull = contiguize(&set);
        for member in set.intervals() {
            assert!(hull.contains(member.lower()) && hull.contains(member.upper()));
        }
    }
}
