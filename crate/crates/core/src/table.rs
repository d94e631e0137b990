//! The uniform output of every interval method: one row per test point
//! plus structured warnings.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::interval::{Interval, IntervalSet};

/// The prediction set attached to a single test point.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictionSet {
    /// A single interval (every method except discontiguous BCCP).
    Interval(Interval),
    /// A union of disjoint intervals (discontiguous BCCP).
    Set(IntervalSet),
    /// The empty set: every bin was rejected at level alpha. Counted as
    /// a miss by coverage evaluation.
    Empty,
}

impl PredictionSet {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            PredictionSet::Interval(iv) => iv.contains(x),
            PredictionSet::Set(set) => set.contains(x),
            PredictionSet::Empty => false,
        }
    }

    /// Width of the set: interval width, sum of component widths, or 0.
    pub fn width(&self) -> f64 {
        match self {
            PredictionSet::Interval(iv) => iv.width(),
            PredictionSet::Set(set) => set.total_width(),
            PredictionSet::Empty => 0.0,
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            PredictionSet::Interval(iv) => iv.is_bounded(),
            PredictionSet::Set(set) => set.intervals().iter().all(Interval::is_bounded),
            PredictionSet::Empty => true,
        }
    }
}

/// Group or cluster assignment carried along with a row.
#[derive(Debug, Clone, PartialEq)]
pub enum RowLabel {
    Group(String),
    Cluster(usize),
}

/// One test point: its point prediction and prediction set.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRow {
    pub pred: f64,
    pub set: PredictionSet,
    pub label: Option<RowLabel>,
}

impl IntervalRow {
    pub fn new(pred: f64, set: PredictionSet) -> Self {
        Self {
            pred,
            set,
            label: None,
        }
    }

    pub fn with_label(mut self, label: RowLabel) -> Self {
        self.label = Some(label);
        self
    }
}

/// Non-fatal conditions raised while building a table.
///
/// Warnings are values, not console output; callers decide how to
/// surface them.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The order-statistic rank exceeded the calibration size, so the
    /// affected rows are unbounded.
    UnboundedInterval { group: Option<String> },
    /// A cluster had too few quantile-partition points and fell back to
    /// the pooled quantile.
    SparseCluster { cluster: usize, n: usize },
    /// A group contributed no rows to the clustering partition; its
    /// embedding was computed from all of its rows instead.
    EmbeddingFallback { group: String },
    /// A bin holds fewer calibration points than the guarantee needs.
    SparseBin { bin: usize, n: usize, needed: usize },
    /// Every bin was rejected for this row; the prediction set is empty.
    EmptyPredictionSet { row: usize },
    /// The requested cluster count was reduced to a feasible value.
    ClusterCountClamped { requested: usize, used: usize },
}

impl Warning {
    /// Short machine-readable code for serialized output.
    pub fn code(&self) -> &'static str {
        match self {
            Warning::UnboundedInterval { .. } => "unbounded_interval",
            Warning::SparseCluster { .. } => "sparse_cluster",
            Warning::EmbeddingFallback { .. } => "embedding_fallback",
            Warning::SparseBin { .. } => "sparse_bin",
            Warning::EmptyPredictionSet { .. } => "empty_prediction_set",
            Warning::ClusterCountClamped { .. } => "cluster_count_clamped",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::UnboundedInterval { group: Some(g) } => {
                write!(f, "quantile rank exceeds calibration size in group '{g}'; interval is unbounded")
            }
            Warning::UnboundedInterval { group: None } => {
                write!(f, "quantile rank exceeds calibration size; interval is unbounded")
            }
            Warning::SparseCluster { cluster, n } => {
                write!(f, "cluster {cluster} has only {n} quantile points; using the pooled quantile")
            }
            Warning::EmbeddingFallback { group } => {
                write!(f, "group '{group}' has no clustering rows; embedding uses all of its rows")
            }
            Warning::SparseBin { bin, n, needed } => {
                write!(f, "bin {bin} has {n} calibration points, fewer than the {needed} the guarantee needs")
            }
            Warning::EmptyPredictionSet { row } => {
                write!(f, "row {row}: every bin was rejected; prediction set is empty")
            }
            Warning::ClusterCountClamped { requested, used } => {
                write!(f, "cluster count clamped from {requested} to {used}")
            }
        }
    }
}

/// Per-test-point intervals plus any warnings raised along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTable {
    pub rows: Vec<IntervalRow>,
    pub warnings: Vec<Warning>,
}

impl IntervalTable {
    pub fn new(rows: Vec<IntervalRow>) -> Self {
        Self {
            rows,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}
