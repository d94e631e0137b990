//! Error type shared by every interval method.

use alloc::string::String;
use thiserror::Error;

/// Errors produced while building or applying prediction intervals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("calibration set is empty")]
    EmptyCalibration,

    #[error("length mismatch in {what}: {left} vs {right}")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("non-finite value at index {index} in {what}")]
    NonFinite { what: &'static str, index: usize },

    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),

    #[error("probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(f64),

    #[error("custom score function returned a non-finite value at index {index}")]
    InvalidScore { index: usize },

    #[error("custom score functions cannot be inverted; supply a custom inversion")]
    UnsupportedInversion,

    #[error("all weights are zero")]
    DegenerateWeights,

    #[error("custom kernel returned a negative or non-finite weight at index {index}")]
    InvalidWeights { index: usize },

    #[error("kernel output length {got} does not match distance length {expected}")]
    KernelLengthMismatch { expected: usize, got: usize },

    #[error("covariance matrix is singular; use a positive ridge")]
    SingularCovariance,

    #[error("distance features are required but missing for {0}")]
    MissingFeatures(&'static str),

    #[error("feature column mismatch: calibration has {calib}, prediction has {pred}")]
    FeatureDimMismatch { calib: usize, pred: usize },

    #[error("unknown group label: {0}")]
    UnknownGroup(String),

    #[error("cluster count must be at least 1, got {0}")]
    InvalidClusterCount(usize),

    #[error("Calinski-Harabasz index is undefined for {clusters} clusters of {points} points")]
    UndefinedIndex { clusters: usize, points: usize },

    #[error("bin {0} has no calibration points")]
    EmptyBin(usize),

    #[error("value {value} at index {index} falls outside the bin range")]
    OutOfBinRange { value: f64, index: usize },

    #[error("bin breaks must be strictly increasing and define at least two bins")]
    InvalidBreaks,

    #[error("bin label {label} at index {index} is outside 1..={bins}")]
    InvalidBinLabel {
        label: usize,
        index: usize,
        bins: usize,
    },

    #[error("bootstrap sample count must be at least 1")]
    InvalidBootstrapCount,

    #[error("residuals are underdispersed relative to a negative binomial; a Poisson model may fit better")]
    Underdispersion,

    #[error("supply either calibration data or distribution parameters, not both")]
    AmbiguousParams,

    #[error("distribution '{0}' needs calibration data or explicit parameters")]
    MissingParams(&'static str),

    #[error("estimated distribution is degenerate: {0}")]
    DegenerateDistribution(&'static str),

    #[error("parameter '{0}' is missing or invalid")]
    InvalidParameter(&'static str),

    #[error("{0}")]
    Domain(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
