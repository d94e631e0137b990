//! Distribution functions backing the parametric intervals: inverse
//! normal, regularized incomplete gamma and beta, and the CDFs and
//! quantiles of the supported families.

use crate::error::{Error, Result};
use crate::math;

const EPS: f64 = 1e-15;
const MAX_ITER: usize = 500;

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * math::erfc(-x / core::f64::consts::SQRT_2)
}

/// Standard normal quantile.
///
/// Rational initial estimate refined by one Halley step against
/// [`normal_cdf`]; accurate to machine precision over (0, 1).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }

    // rational approximation in three regions
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = math::sqrt(-2.0 * math::ln(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = math::sqrt(-2.0 * math::ln(1.0 - p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // one Halley refinement step
    let e = normal_cdf(x) - p;
    let u = e * math::sqrt(2.0 * core::f64::consts::PI) * math::exp(x * x / 2.0);
    Ok(x - u / (1.0 + x * u / 2.0))
}

/// Logistic CDF with location and scale.
pub fn logistic_cdf(x: f64, location: f64, scale: f64) -> f64 {
    1.0 / (1.0 + math::exp(-(x - location) / scale))
}

/// Logistic quantile: `location + scale * ln(p / (1 - p))`.
pub fn logistic_quantile(p: f64, location: f64, scale: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(location + scale * math::ln(p / (1.0 - p)))
}

/// Lognormal CDF parameterized on the log scale.
pub fn lognormal_cdf(x: f64, meanlog: f64, sdlog: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    normal_cdf((math::ln(x) - meanlog) / sdlog)
}

/// Lognormal quantile: `exp(meanlog + sdlog * Phi^-1(p))`.
pub fn lognormal_quantile(p: f64, meanlog: f64, sdlog: f64) -> Result<f64> {
    Ok(math::exp(meanlog + sdlog * normal_quantile(p)?))
}

/// Regularized lower incomplete gamma `P(a, x)`.
///
/// Series expansion for `x < a + 1`, continued fraction otherwise.
pub fn reg_gamma_lower(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        // series representation
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = a;
        for _ in 0..MAX_ITER {
            n += 1.0;
            term *= x / n;
            sum += term;
            if math::abs(term) < math::abs(sum) * EPS {
                break;
            }
        }
        sum * math::exp(-x + a * math::ln(x) - math::ln_gamma(a))
    } else {
        // continued fraction for Q(a, x), modified Lentz
        const FPMIN: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if math::abs(d) < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if math::abs(c) < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if math::abs(del - 1.0) < EPS {
                break;
            }
        }
        1.0 - math::exp(-x + a * math::ln(x) - math::ln_gamma(a)) * h
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn reg_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let bt = math::exp(
        math::ln_gamma(a + b) - math::ln_gamma(a) - math::ln_gamma(b)
            + a * math::ln(x)
            + b * math::ln(1.0 - x),
    );
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * beta_cf(a, b, x) / a
    } else {
        1.0 - bt * beta_cf(b, a, 1.0 - x) / b
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if math::abs(d) < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if math::abs(d) < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if math::abs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if math::abs(d) < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if math::abs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if math::abs(del - 1.0) < EPS {
            break;
        }
    }
    h
}

/// Poisson CDF `P(X <= k)` for rate `lambda >= 0`.
pub fn poisson_cdf(k: u64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 1.0;
    }
    1.0 - reg_gamma_lower((k + 1) as f64, lambda)
}

/// Negative binomial CDF `P(X <= k)` with mean `mu` and dispersion
/// `theta` (`Var = mu + mu^2 / theta`).
pub fn negbin_cdf(k: u64, mu: f64, theta: f64) -> f64 {
    if mu == 0.0 {
        return 1.0;
    }
    reg_beta(theta, (k + 1) as f64, theta / (theta + mu))
}

/// Chi-squared CDF with `df` degrees of freedom.
pub fn chisq_cdf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    reg_gamma_lower(df / 2.0, x / 2.0)
}

/// Smallest integer `k` with `cdf(k) >= p`, for a nondecreasing CDF.
fn discrete_quantile(p: f64, cdf: impl Fn(u64) -> f64) -> Result<u64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    // bracket by doubling, then binary search
    let mut hi: u64 = 1;
    let mut iters = 0;
    while cdf(hi) < p {
        hi = hi.saturating_mul(2).saturating_add(1);
        iters += 1;
        if iters > 128 {
            return Err(Error::Domain("discrete quantile search diverged".into()));
        }
    }
    let mut lo: u64 = 0;
    if cdf(0) >= p {
        return Ok(0);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if cdf(mid) >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Poisson quantile for rate `lambda`.
pub fn poisson_quantile(p: f64, lambda: f64) -> Result<u64> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::Domain("Poisson rate must be non-negative".into()));
    }
    if lambda == 0.0 {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        return Ok(0);
    }
    discrete_quantile(p, |k| poisson_cdf(k, lambda))
}

/// Negative binomial quantile (mean/dispersion parameterization).
pub fn negbin_quantile(p: f64, mu: f64, theta: f64) -> Result<u64> {
    if mu < 0.0 || !mu.is_finite() {
        return Err(Error::Domain(
            "negative binomial mean must be non-negative".into(),
        ));
    }
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidParameter("dispersion"));
    }
    if mu == 0.0 {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        return Ok(0);
    }
    discrete_quantile(p, |k| negbin_cdf(k, mu, theta))
}

/// Chi-squared quantile by bisection on the CDF.
pub fn chisq_quantile(p: f64, df: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p));
    }
    if !(df > 0.0) || !df.is_finite() {
        return Err(Error::Domain(
            "chi-squared degrees of freedom must be positive".into(),
        ));
    }
    let mut hi = df + 10.0 * math::sqrt(2.0 * df) + 50.0;
    let mut iters = 0;
    while chisq_cdf(hi, df) < p {
        hi *= 2.0;
        iters += 1;
        if iters > 200 {
            return Err(Error::Domain("chi-squared inversion diverged".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chisq_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
