//! Sampling-distribution diagnostics over a vector of trial estimates.
//!
//! Moments are population style (divide by the trial count, no small-sample
//! corrections) and are always computed in the same pass order, so results
//! are bit-reproducible for a given input vector. Statistics that need a
//! positive spread are `None` when the estimates are all equal rather than
//! silently zero.

use serde::Serialize;

use crate::error::{Error, Result};

/// Mean, standard deviation, and the two shape moments of a set of trial
/// estimates. `kurtosis` is the plain fourth standardized moment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentStats {
    pub mean: f64,
    pub sd: f64,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

/// Population moments of `values`, in one fixed accumulation order.
pub fn moment_stats(values: &[f64]) -> Result<MomentStats> {
    if values.is_empty() {
        return Err(Error::InvalidSample("no trial estimates".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSample(
            "non-finite trial estimate".into(),
        ));
    }
    let t = values.len() as f64;
    let mean = values.iter().sum::<f64>() / t;
    let (mut m2, mut m3, mut m4) = (0.0f64, 0.0f64, 0.0f64);
    for v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= t;
    m3 /= t;
    m4 /= t;
    let sd = m2.sqrt();
    let (skewness, kurtosis) = if m2 > 0.0 {
        (Some(m3 / (m2 * sd)), Some(m4 / (m2 * m2)))
    } else {
        (None, None)
    };
    Ok(MomentStats {
        mean,
        sd,
        skewness,
        kurtosis,
    })
}

/// Jarque-Bera normality statistic for `t` observations with the given
/// sample skewness and kurtosis, and its asymptotic chi-square(2) p-value
/// exp(-JB/2).
pub fn jarque_bera(skewness: f64, kurtosis: f64, t: usize) -> (f64, f64) {
    let jb = t as f64 / 6.0 * (skewness * skewness + 0.25 * (kurtosis - 3.0).powi(2));
    (jb, (-0.5 * jb).exp())
}

const MEAN_FLOOR: f64 = 1e-12;

/// Standard deviation of the trial estimates divided by their mean.
/// Standardizing removes the scale of the underlying measure so precision
/// is comparable across measures and distributions.
pub fn standardized_se(values: &[f64]) -> Result<f64> {
    let stats = moment_stats(values)?;
    if stats.mean.abs() < MEAN_FLOOR {
        return Err(Error::DegenerateMean { mean: stats.mean });
    }
    Ok(stats.sd / stats.mean)
}

/// Empirical two-sided confidence interval of the trial estimates at the
/// given level, both bounds divided by the mean estimate.
///
/// With `T` trials the bounds are the ceil(q*T)-th smallest estimates for
/// q = (1-level)/2 and (1+level)/2. A tiny slack absorbs products like
/// 0.95 * 10000 that float a hair above their integer value.
pub fn standardized_ci(values: &[f64], level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::bad_param(
            "level",
            format!("confidence level must lie in (0, 1), got {level}"),
        ));
    }
    let stats = moment_stats(values)?;
    if stats.mean.abs() < MEAN_FLOOR {
        return Err(Error::DegenerateMean { mean: stats.mean });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let t = values.len();
    let lo = quantile_rank(t, 0.5 * (1.0 - level));
    let hi = quantile_rank(t, 0.5 * (1.0 + level));
    Ok((sorted[lo - 1] / stats.mean, sorted[hi - 1] / stats.mean))
}

/// 1-based rank of the empirical q-quantile among t sorted values.
fn quantile_rank(t: usize, q: f64) -> usize {
    let rank = (q * t as f64 - 1e-9).ceil() as usize;
    rank.clamp(1, t)
}

/// Ratio of two statistics, `None` when the denominator is too small to
/// divide by meaningfully.
pub fn ratio(numerator: f64, denominator: f64) -> Option<f64> {
    if denominator.abs() < MEAN_FLOOR {
        None
    } else {
        Some(numerator / denominator)
    }
}
