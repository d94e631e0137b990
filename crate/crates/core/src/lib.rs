//! Model-agnostic prediction intervals.
//!
//! Takes point predictions plus a calibration set of (prediction,
//! outcome) pairs and produces prediction intervals by several routes:
//!
//! - [`pinterval_conformal`]: split conformal prediction, optionally
//!   distance-weighted toward calibration points near the test point;
//! - [`pinterval_mondrian`]: per-group calibration with group-conditional
//!   coverage;
//! - [`pinterval_ccp`]: clustered calibration that pools groups with
//!   similar score distributions;
//! - [`pinterval_bccp`]: bin-conditional calibration over user-defined
//!   outcome bins, with discontiguous or contiguized output;
//! - [`pinterval_bootstrap`]: resampled calibration errors;
//! - [`pinterval_parametric`]: an assumed error or outcome distribution.
//!
//! The [`evaluation`] module measures empirical coverage, interval
//! width, and the MAE of group-wise coverage against the nominal level.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only switches the float math backend.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod bccp;
mod bootstrap;
mod calibration;
mod cluster;
mod conformal;
pub mod dist;
mod error;
pub mod evaluation;
mod grouped;
mod interval;
mod math;
mod parametric;
mod quantile;
mod rng;
mod score;
mod table;
mod weighting;

pub use bccp::{assign_bins, pinterval_bccp, BinSpec};
pub use bootstrap::{pinterval_bootstrap, BootstrapConfig, ErrorType};
pub use calibration::{CalibrationSet, Matrix};
pub use cluster::{calinski_harabasz, kmeans, KMeansFit};
pub use conformal::pinterval_conformal;
pub use error::{Error, Result};
pub use grouped::{
    cluster_groups, group_embeddings, pinterval_ccp, pinterval_mondrian, CcpConfig, ChDirection,
    ClusterAssignment, GroupedCalibration, DEFAULT_EMBEDDING_LEVELS,
};
pub use interval::{contiguize, ConfidenceLevel, Interval, IntervalSet};
pub use parametric::{
    dist_quantile, estimate_params, pinterval_parametric, DistFamily, DistSpec, EstimatedParams,
    Params, Provenance,
};
pub use quantile::{
    conformal_quantile, conformal_rank, weighted_quantile, weighted_quantile_with_test_weight,
};
pub use rng::stream_rng;
pub use score::{invert_raw, ScoreFunction, SCORE_EPSILON};
pub use table::{IntervalRow, IntervalTable, PredictionSet, RowLabel, Warning};
pub use weighting::{
    compute_distances, kernel_weights, normalize_distances, DistanceType, DistanceWeightConfig,
    Kernel, Normalization,
};
