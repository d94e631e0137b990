//! Calibration data: paired predictions and outcomes with optional
//! group labels, bin labels, and distance features.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense row-major matrix of distance features.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    what: "matrix row",
                    left: cols,
                    right: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        what: "matrix entry",
                        index: i * cols + j,
                    });
                }
                data.push(v);
            }
        }
        Ok(Self { data, rows: n, cols })
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                what: "matrix data",
                left: rows * cols,
                right: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "matrix entry",
                index: idx,
            });
        }
        Ok(Self { data, rows, cols })
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

/// Point predictions paired with observed outcomes, plus optional
/// per-row group labels, bin labels, and distance features.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSet {
    preds: Vec<f64>,
    truths: Vec<f64>,
    groups: Option<Vec<String>>,
    bins: Option<Vec<usize>>,
    features: Option<Matrix>,
}

impl CalibrationSet {
    /// Builds a calibration set from predictions and matching outcomes.
    ///
    /// Both vectors must be non-empty, of equal length, and finite.
    pub fn new(preds: Vec<f64>, truths: Vec<f64>) -> Result<Self> {
        if preds.is_empty() {
            return Err(Error::EmptyCalibration);
        }
        if preds.len() != truths.len() {
            return Err(Error::LengthMismatch {
                what: "calibration preds vs truths",
                left: preds.len(),
                right: truths.len(),
            });
        }
        if let Some(idx) = preds.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "calibration preds",
                index: idx,
            });
        }
        if let Some(idx) = truths.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "calibration truths",
                index: idx,
            });
        }
        Ok(Self {
            preds,
            truths,
            groups: None,
            bins: None,
            features: None,
        })
    }

    pub fn with_groups(mut self, groups: Vec<String>) -> Result<Self> {
        if groups.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "calibration groups",
                left: self.len(),
                right: groups.len(),
            });
        }
        self.groups = Some(groups);
        Ok(self)
    }

    /// Attaches explicit bin labels (ids starting at 1).
    pub fn with_bins(mut self, bins: Vec<usize>) -> Result<Self> {
        if bins.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "calibration bins",
                left: self.len(),
                right: bins.len(),
            });
        }
        self.bins = Some(bins);
        Ok(self)
    }

    pub fn with_features(mut self, features: Matrix) -> Result<Self> {
        if features.n_rows() != self.len() {
            return Err(Error::LengthMismatch {
                what: "calibration features",
                left: self.len(),
                right: features.n_rows(),
            });
        }
        self.features = Some(features);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn preds(&self) -> &[f64] {
        &self.preds
    }

    pub fn truths(&self) -> &[f64] {
        &self.truths
    }

    pub fn groups(&self) -> Option<&[String]> {
        self.groups.as_deref()
    }

    pub fn bins(&self) -> Option<&[usize]> {
        self.bins.as_deref()
    }

    pub fn features(&self) -> Option<&Matrix> {
        self.features.as_ref()
    }

    /// Prediction errors `truth - pred`, row by row.
    pub fn errors(&self) -> Vec<f64> {
        self.preds
            .iter()
            .zip(&self.truths)
            .map(|(p, t)| t - p)
            .collect()
    }
}
