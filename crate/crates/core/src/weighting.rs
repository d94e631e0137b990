//! Distance-weighting machinery shared by the conformal and bootstrap
//! methods: feature distances, distance normalization, and kernels that
//! turn distances into non-negative weights.

use alloc::vec;
use alloc::vec::Vec;

use crate::calibration::Matrix;
use crate::error::{Error, Result};
use crate::math;

/// Distance between feature rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceType {
    /// `sqrt((x-z)^T (Sigma + ridge I)^-1 (x-z))` with `Sigma` the sample
    /// covariance of the calibration features.
    Mahalanobis,
    Euclidean,
}

/// Optional rescaling of the full distance matrix before the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    /// `(d - min) / (max - min)` over all entries; all-equal input maps
    /// to all zeros.
    MinMax,
    /// `d / sd(all entries)` (population sd); zero sd maps to all zeros.
    Sd,
}

/// Kernel mapping a distance vector to non-negative weights.
#[derive(Debug, Clone, Copy)]
pub enum Kernel {
    /// `exp(-d^2)`
    Gaussian,
    /// `1 / (1 + d^2)`
    Cauchy,
    /// `1 / (1 + exp(d))`
    Logistic,
    /// `1 / (1 + d)`
    ReciprocalLinear,
    /// User-supplied mapping; output is validated for length and
    /// non-negativity at call time.
    Custom(fn(&[f64]) -> Vec<f64>),
}

impl PartialEq for Kernel {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Kernel::Custom(a), Kernel::Custom(b)) => core::ptr::fn_addr_eq(*a, *b),
            _ => core::mem::discriminant(self) == core::mem::discriminant(other),
        }
    }
}

/// Configuration of the distance-weighted path.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceWeightConfig {
    pub enabled: bool,
    pub distance_type: DistanceType,
    pub normalize: Normalization,
    pub kernel: Kernel,
    /// Covariance regularizer for the Mahalanobis distance.
    pub ridge: f64,
}

impl Default for DistanceWeightConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            distance_type: DistanceType::Mahalanobis,
            normalize: Normalization::None,
            kernel: Kernel::Gaussian,
            ridge: 1e-8,
        }
    }
}

impl DistanceWeightConfig {
    /// Weighting switched off; all other fields at their defaults.
    pub fn disabled() -> Self {
        Self::default()
    }

    /// Mahalanobis distances, Gaussian kernel, no normalization.
    pub fn enabled() -> Self {
        Self {
            enabled: true,
            ..Self::default()
        }
    }

    /// Full weight matrix (`n_pred x n_calib`) for prediction features
    /// against calibration features.
    pub fn weights(&self, features_calib: &Matrix, features_pred: &Matrix) -> Result<Matrix> {
        let d = compute_distances(features_calib, features_pred, self.distance_type, self.ridge)?;
        let d = normalize_distances(&d, self.normalize);
        let mut out = Vec::with_capacity(d.n_rows() * d.n_cols());
        for i in 0..d.n_rows() {
            out.extend_from_slice(&kernel_weights(d.row(i), self.kernel)?);
        }
        Matrix::from_flat(d.n_rows(), d.n_cols(), out)
    }
}

/// Pairwise distances between prediction rows and calibration rows.
///
/// Returns an `n_pred x n_calib` matrix. Mahalanobis needs at least two
/// calibration rows for the sample covariance.
pub fn compute_distances(
    features_calib: &Matrix,
    features_pred: &Matrix,
    distance_type: DistanceType,
    ridge: f64,
) -> Result<Matrix> {
    if features_calib.n_cols() != features_pred.n_cols() {
        return Err(Error::FeatureDimMismatch {
            calib: features_calib.n_cols(),
            pred: features_pred.n_cols(),
        });
    }
    let n_pred = features_pred.n_rows();
    let n_calib = features_calib.n_rows();
    let p = features_calib.n_cols();

    match distance_type {
        DistanceType::Euclidean => {
            let mut data = Vec::with_capacity(n_pred * n_calib);
            for i in 0..n_pred {
                let x = features_pred.row(i);
                for j in 0..n_calib {
                    let z = features_calib.row(j);
                    let sq: f64 = x
                        .iter()
                        .zip(z)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    data.push(math::sqrt(sq));
                }
            }
            Matrix::from_flat(n_pred, n_calib, data)
        }
        DistanceType::Mahalanobis => {
            if n_calib < 2 {
                return Err(Error::Domain(
                    "Mahalanobis distance needs at least 2 calibration rows".into(),
                ));
            }
            let chol = Cholesky::of_regularized_covariance(features_calib, ridge)?;
            let mut data = Vec::with_capacity(n_pred * n_calib);
            let mut diff = vec![0.0; p];
            for i in 0..n_pred {
                let x = features_pred.row(i);
                for j in 0..n_calib {
                    let z = features_calib.row(j);
                    for k in 0..p {
                        diff[k] = x[k] - z[k];
                    }
                    data.push(math::sqrt(chol.quadratic_form(&diff)));
                }
            }
            Matrix::from_flat(n_pred, n_calib, data)
        }
    }
}

/// Rescales a distance matrix; statistics are taken over all entries at
/// once so weights stay comparable across test points.
pub fn normalize_distances(d: &Matrix, mode: Normalization) -> Matrix {
    let n = d.n_rows() * d.n_cols();
    let entries: Vec<f64> = (0..d.n_rows()).flat_map(|i| d.row(i).to_vec()).collect();
    let transformed: Vec<f64> = match mode {
        Normalization::None => entries,
        Normalization::MinMax => {
            let min = entries.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = entries.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if max > min {
                entries.iter().map(|&v| (v - min) / (max - min)).collect()
            } else {
                vec![0.0; n]
            }
        }
        Normalization::Sd => {
            let mean = entries.iter().sum::<f64>() / n as f64;
            let var = entries.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            let sd = math::sqrt(var);
            if sd > 0.0 {
                entries.iter().map(|&v| v / sd).collect()
            } else {
                vec![0.0; n]
            }
        }
    };
    Matrix::from_flat(d.n_rows(), d.n_cols(), transformed).expect("shape preserved")
}

/// Applies a kernel to a distance vector, validating custom output.
pub fn kernel_weights(d: &[f64], kernel: Kernel) -> Result<Vec<f64>> {
    let weights = match kernel {
        Kernel::Gaussian => d.iter().map(|&x| math::exp(-x * x)).collect(),
        Kernel::Cauchy => d.iter().map(|&x| 1.0 / (1.0 + x * x)).collect(),
        Kernel::Logistic => d.iter().map(|&x| 1.0 / (1.0 + math::exp(x))).collect(),
        Kernel::ReciprocalLinear => d.iter().map(|&x| 1.0 / (1.0 + x)).collect(),
        Kernel::Custom(f) => {
            let w = f(d);
            if w.len() != d.len() {
                return Err(Error::KernelLengthMismatch {
                    expected: d.len(),
                    got: w.len(),
                });
            }
            w
        }
    };
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeights { index: i });
        }
    }
    Ok(weights)
}

/// Lower-triangular Cholesky factor of `Sigma + ridge I`.
struct Cholesky {
    l: Vec<f64>,
    p: usize,
}

impl Cholesky {
    fn of_regularized_covariance(features: &Matrix, ridge: f64) -> Result<Self> {
        let n = features.n_rows();
        let p = features.n_cols();
        let mut means = vec![0.0; p];
        for i in 0..n {
            for (k, m) in means.iter_mut().enumerate() {
                *m += features.get(i, k);
            }
        }
        for m in &mut means {
            *m /= n as f64;
        }
        // sample covariance (n - 1 denominator) plus ridge on the diagonal
        let mut sigma = vec![0.0; p * p];
        for i in 0..n {
            for a in 0..p {
                let da = features.get(i, a) - means[a];
                for b in a..p {
                    sigma[a * p + b] += da * (features.get(i, b) - means[b]);
                }
            }
        }
        for a in 0..p {
            for b in a..p {
                let v = sigma[a * p + b] / (n - 1) as f64;
                sigma[a * p + b] = v;
                sigma[b * p + a] = v;
            }
            sigma[a * p + a] += ridge;
        }
        Self::factor(&sigma, p)
    }

    fn factor(sigma: &[f64], p: usize) -> Result<Self> {
        let mut l = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..=i {
                let mut sum = sigma[i * p + j];
                for k in 0..j {
                    sum -= l[i * p + k] * l[j * p + k];
                }
                if i == j {
                    if sum <= 0.0 {
                        return Err(Error::SingularCovariance);
                    }
                    l[i * p + i] = math::sqrt(sum);
                } else {
                    l[i * p + j] = sum / l[j * p + j];
                }
            }
        }
        Ok(Self { l, p })
    }

    /// `v^T (L L^T)^-1 v` via one forward solve.
    fn quadratic_form(&self, v: &[f64]) -> f64 {
        let mut y = vec![0.0; self.p];
        for i in 0..self.p {
            let mut sum = v[i];
            for k in 0..i {
                sum -= self.l[i * self.p + k] * y[k];
            }
            y[i] = sum / self.l[i * self.p + i];
        }
        y.iter().map(|x| x * x).sum()
    }
}
