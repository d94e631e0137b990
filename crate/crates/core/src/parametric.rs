//! Parametric prediction intervals from an assumed error or outcome
//! distribution, with parameters estimated from calibration data or
//! supplied directly.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::calibration::CalibrationSet;
use crate::dist;
use crate::error::{Error, Result};
use crate::interval::{ConfidenceLevel, Interval};
use crate::math;
use crate::table::{IntervalRow, IntervalTable, PredictionSet};

/// Named distribution parameters.
pub type Params = BTreeMap<String, f64>;

/// Supported distribution families.
///
/// Normal and logistic model the prediction errors; lognormal models the
/// log-scale errors; Poisson, negative binomial, and chi-squared model
/// the outcome directly with the point prediction as their parameter.
#[derive(Debug, Clone, Copy)]
pub enum DistFamily {
    Normal,
    Lognormal,
    Logistic,
    Poisson,
    NegBin,
    Chisq,
    /// User-supplied quantile function `(p, pars, pred) -> quantile`.
    Custom(fn(f64, &Params, f64) -> f64),
}

impl PartialEq for DistFamily {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (DistFamily::Custom(a), DistFamily::Custom(b)) => core::ptr::fn_addr_eq(*a, *b),
            _ => core::mem::discriminant(self) == core::mem::discriminant(other),
        }
    }
}

impl DistFamily {
    fn name(&self) -> &'static str {
        match self {
            DistFamily::Normal => "normal",
            DistFamily::Lognormal => "lognormal",
            DistFamily::Logistic => "logistic",
            DistFamily::Poisson => "poisson",
            DistFamily::NegBin => "negbin",
            DistFamily::Chisq => "chisq",
            DistFamily::Custom(_) => "custom",
        }
    }

    /// Families whose single parameter is the point prediction itself.
    fn is_self_parameterized(&self) -> bool {
        matches!(self, DistFamily::Poisson | DistFamily::Chisq)
    }
}

/// A distribution choice plus its parameter source.
#[derive(Debug, Clone, PartialEq)]
pub struct DistSpec {
    pub dist: DistFamily,
    /// Explicit parameters; mutually exclusive with calibration data.
    pub pars: Option<Params>,
    /// Fix the estimated mean/location at zero (the classical centered
    /// error model) instead of estimating it.
    pub center_at_zero: bool,
}

impl DistSpec {
    pub fn new(dist: DistFamily) -> Self {
        Self {
            dist,
            pars: None,
            center_at_zero: false,
        }
    }

    pub fn with_pars(mut self, pars: Params) -> Self {
        self.pars = Some(pars);
        self
    }

    pub fn centered(mut self) -> Self {
        self.center_at_zero = true;
        self
    }
}

/// Where parameter values came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Estimated,
    Supplied,
}

/// Estimated or supplied parameters with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedParams {
    pub values: Params,
    pub provenance: Provenance,
}

fn mean_and_sample_sd(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    if n < 2 {
        return Err(Error::DegenerateDistribution(
            "need at least 2 calibration points to estimate a scale",
        ));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    Ok((mean, math::sqrt(var)))
}

/// Estimates the family's parameters from calibration data.
pub fn estimate_params(dist: &DistFamily, calib: &CalibrationSet) -> Result<EstimatedParams> {
    let mut values = Params::new();
    match dist {
        DistFamily::Normal => {
            let (mean, sd) = mean_and_sample_sd(&calib.errors())?;
            if sd == 0.0 {
                return Err(Error::DegenerateDistribution("zero error variance"));
            }
            values.insert("mean".into(), mean);
            values.insert("sd".into(), sd);
        }
        DistFamily::Logistic => {
            let (mean, sd) = mean_and_sample_sd(&calib.errors())?;
            if sd == 0.0 {
                return Err(Error::DegenerateDistribution("zero error variance"));
            }
            // moment estimator: sd of a logistic is scale * pi / sqrt(3)
            values.insert("location".into(), mean);
            values.insert(
                "scale".into(),
                sd * math::sqrt(3.0) / core::f64::consts::PI,
            );
        }
        DistFamily::Lognormal => {
            if calib
                .preds()
                .iter()
                .chain(calib.truths())
                .any(|&v| v <= 0.0)
            {
                return Err(Error::Domain(
                    "lognormal needs strictly positive predictions and outcomes".into(),
                ));
            }
            let log_errors: Vec<f64> = calib
                .preds()
                .iter()
                .zip(calib.truths())
                .map(|(&p, &t)| math::ln(t) - math::ln(p))
                .collect();
            let (meanlog, sdlog) = mean_and_sample_sd(&log_errors)?;
            if sdlog == 0.0 {
                return Err(Error::DegenerateDistribution("zero log-error variance"));
            }
            values.insert("meanlog".into(), meanlog);
            values.insert("sdlog".into(), sdlog);
        }
        DistFamily::NegBin => {
            if calib.truths().iter().any(|&t| t < 0.0) {
                return Err(Error::Domain(
                    "negative binomial needs non-negative outcomes".into(),
                ));
            }
            if calib.preds().iter().any(|&p| p < 0.0) {
                return Err(Error::Domain(
                    "negative binomial needs non-negative predictions".into(),
                ));
            }
            // method of moments on pooled residuals:
            // Var(truth) = mu + mu^2 / theta with mu = pred per point
            let numer: f64 = calib.preds().iter().map(|&p| p * p).sum();
            let denom: f64 = calib
                .preds()
                .iter()
                .zip(calib.truths())
                .map(|(&p, &t)| (t - p) * (t - p) - p)
                .sum();
            if denom <= 0.0 {
                return Err(Error::Underdispersion);
            }
            if numer <= 0.0 {
                return Err(Error::DegenerateDistribution("all predictions are zero"));
            }
            values.insert("dispersion".into(), numer / denom);
        }
        // the single parameter is the prediction itself, applied at
        // interval time
        DistFamily::Poisson | DistFamily::Chisq => {}
        DistFamily::Custom(_) => {
            return Err(Error::MissingParams("custom"));
        }
    }
    Ok(EstimatedParams {
        values,
        provenance: Provenance::Estimated,
    })
}

fn require(params: &Params, key: &'static str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .filter(|v| v.is_finite())
        .ok_or(Error::InvalidParameter(key))
}

fn require_positive(params: &Params, key: &'static str) -> Result<f64> {
    let v = require(params, key)?;
    if v <= 0.0 {
        return Err(Error::InvalidParameter(key));
    }
    Ok(v)
}

/// Quantile of the family at probability `p`.
///
/// Error-scale families read their parameters from `params`; the
/// self-parameterized count/positive families read them from `pred`.
/// Discrete families return the smallest integer whose CDF reaches `p`.
pub fn dist_quantile(dist: &DistFamily, p: f64, params: &Params, pred: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    match dist {
        DistFamily::Normal => {
            let mean = require(params, "mean")?;
            let sd = require_positive(params, "sd")?;
            Ok(mean + sd * dist::normal_quantile(p)?)
        }
        DistFamily::Logistic => {
            let location = require(params, "location")?;
            let scale = require_positive(params, "scale")?;
            dist::logistic_quantile(p, location, scale)
        }
        DistFamily::Lognormal => {
            let meanlog = require(params, "meanlog")?;
            let sdlog = require_positive(params, "sdlog")?;
            dist::lognormal_quantile(p, meanlog, sdlog)
        }
        DistFamily::Poisson => Ok(dist::poisson_quantile(p, pred)? as f64),
        DistFamily::NegBin => {
            let theta = require_positive(params, "dispersion")?;
            Ok(dist::negbin_quantile(p, pred, theta)? as f64)
        }
        DistFamily::Chisq => dist::chisq_quantile(p, pred),
        DistFamily::Custom(f) => Ok(f(p, params, pred)),
    }
}

/// Parametric prediction intervals.
///
/// Exactly one of calibration data or `spec.pars` must be supplied for
/// the families that need parameters; Poisson and chi-squared need
/// neither, their parameter being the prediction itself. Error-scale
/// families place `[pred + Q(alpha/2), pred + Q(1 - alpha/2)]` around
/// the prediction; the lognormal multiplies by the log-scale quantiles;
/// outcome families evaluate their quantiles at each prediction.
pub fn pinterval_parametric(
    pred: &[f64],
    spec: &DistSpec,
    calib: Option<&CalibrationSet>,
    alpha: ConfidenceLevel,
) -> Result<IntervalTable> {
    let params = resolve_params(spec, calib)?;
    let lo_p = alpha.alpha() / 2.0;
    let hi_p = 1.0 - alpha.alpha() / 2.0;

    let mut rows = Vec::with_capacity(pred.len());
    for &p in pred {
        let (lower, upper) = match spec.dist {
            DistFamily::Normal | DistFamily::Logistic => {
                let lo = dist_quantile(&spec.dist, lo_p, &params.values, p)?;
                let hi = dist_quantile(&spec.dist, hi_p, &params.values, p)?;
                (p + lo, p + hi)
            }
            DistFamily::Lognormal => {
                if p <= 0.0 {
                    return Err(Error::Domain(
                        "lognormal intervals need positive predictions".into(),
                    ));
                }
                let meanlog = require(&params.values, "meanlog")?;
                let sdlog = require_positive(&params.values, "sdlog")?;
                let lo = math::exp(meanlog + sdlog * dist::normal_quantile(lo_p)?);
                let hi = math::exp(meanlog + sdlog * dist::normal_quantile(hi_p)?);
                (p * lo, p * hi)
            }
            DistFamily::Poisson | DistFamily::NegBin | DistFamily::Chisq => {
                let lo = dist_quantile(&spec.dist, lo_p, &params.values, p)?;
                let hi = dist_quantile(&spec.dist, hi_p, &params.values, p)?;
                (lo, hi)
            }
            DistFamily::Custom(f) => {
                let lo = f(lo_p, &params.values, p);
                let hi = f(hi_p, &params.values, p);
                if !lo.is_finite() || !hi.is_finite() || lo > hi {
                    return Err(Error::Domain(
                        "custom quantile function returned invalid bounds".into(),
                    ));
                }
                (lo, hi)
            }
        };
        rows.push(IntervalRow::new(
            p,
            PredictionSet::Interval(Interval::new(lower, upper)?),
        ));
    }
    Ok(IntervalTable::new(rows))
}

fn resolve_params(spec: &DistSpec, calib: Option<&CalibrationSet>) -> Result<EstimatedParams> {
    if spec.dist.is_self_parameterized() {
        if calib.is_some() || spec.pars.is_some() {
            return Err(Error::Domain(alloc::format!(
                "{} takes neither calibration data nor parameters; it is parameterized by the predictions",
                spec.dist.name()
            )));
        }
        return Ok(EstimatedParams {
            values: Params::new(),
            provenance: Provenance::Supplied,
        });
    }
    match (calib, &spec.pars) {
        (Some(_), Some(_)) => Err(Error::AmbiguousParams),
        (None, None) => Err(Error::MissingParams(spec.dist.name())),
        (None, Some(pars)) => Ok(EstimatedParams {
            values: pars.clone(),
            provenance: Provenance::Supplied,
        }),
        (Some(calib), None) => {
            let mut estimated = estimate_params(&spec.dist, calib)?;
            if spec.center_at_zero {
                for key in ["mean", "location", "meanlog"] {
                    if let Some(v) = estimated.values.get_mut(key) {
                        *v = 0.0;
                    }
                }
            }
            Ok(estimated)
        }
    }
}
