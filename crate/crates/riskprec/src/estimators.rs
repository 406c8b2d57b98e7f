//! Order-statistic estimators of quantile-based risk measures.
//!
//! All three estimators read off a sorted loss sample. With `m` the number
//! of observations expected beyond the `alpha` quantile:
//!
//! * value-at-risk is the (m+1)-th highest observation;
//! * expected shortfall is the average of the m+1 highest observations,
//!   the VaR order statistic included;
//! * a spectral measure is the weighted sum of all order statistics, the
//!   i-th ascending one weighted by phi(i/n)/n for the chosen risk-aversion
//!   weight function.
//!
//! The weights deliberately do not renormalize to one at finite n; the
//! small deficit phi carries over a grid is part of the estimator and
//! vanishes as n grows.

use crate::error::{Error, Result};

/// A loss sample sorted ascending, ready for order-statistic reads.
#[derive(Debug, Clone)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Sort and validate a raw loss vector. Requires at least two finite
    /// observations and no NaN or infinite entries.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSample(format!(
                "need at least 2 observations, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(format!(
                "non-finite observation {bad}"
            )));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(SortedSample { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ascending order statistics.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Number of observations expected beyond the `alpha` quantile:
/// floor((1-alpha) * n), with a tiny forgiveness so products like
/// 0.1 * 250 that land a hair under an integer still count it.
pub fn tail_count(n: usize, alpha: f64) -> Result<usize> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::bad_param(
            "alpha",
            format!("confidence level must lie in (0, 1), got {alpha}"),
        ));
    }
    let m = ((1.0 - alpha) * n as f64 + 1e-9).floor() as usize;
    if m + 1 > n {
        return Err(Error::InsufficientTail {
            alpha,
            n,
            needed: m + 1,
            available: n,
        });
    }
    Ok(m)
}

/// Value-at-risk at level `alpha`: the (m+1)-th highest observation.
pub fn estimate_var(sample: &SortedSample, alpha: f64) -> Result<f64> {
    let n = sample.len();
    let m = tail_count(n, alpha)?;
    Ok(sample.values[n - m - 1])
}

/// Expected shortfall at level `alpha`: the mean of the m+1 highest
/// observations. Requires at least one observation strictly beyond the
/// VaR order statistic, i.e. (1-alpha) * n >= 1.
pub fn estimate_es(sample: &SortedSample, alpha: f64) -> Result<f64> {
    let n = sample.len();
    let m = tail_count(n, alpha)?;
    if m < 1 {
        return Err(Error::InsufficientTail {
            alpha,
            n,
            needed: 1,
            available: 0,
        });
    }
    let tail = &sample.values[n - m - 1..];
    Ok(tail.iter().sum::<f64>() / tail.len() as f64)
}

/// Order-statistic weights for the exponential spectral measure with
/// absolute risk aversion `k`: w_i = (k/n) * exp(-k(1-i/n)) / (1-exp(-k))
/// for i = 1..n. Their sum is (k/n) / (1 - exp(-k/n)), slightly above one
/// and converging to one as n/k grows.
pub fn srm_weights(n: usize, k: f64) -> Result<Vec<f64>> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::bad_param(
            "k",
            format!("risk aversion must be positive and finite, got {k}"),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidSample("empty sample".into()));
    }
    // 1 - exp(-k) via expm1 so small k keeps full precision.
    let denom = -(-k).exp_m1();
    let nf = n as f64;
    let scale = k / (nf * denom);
    Ok((1..=n)
        .map(|i| scale * (-k * (nf - i as f64) / nf).exp())
        .collect())
}

/// Exponential spectral risk measure estimate: the weighted sum of the
/// ascending order statistics.
pub fn estimate_srm(sample: &SortedSample, k: f64) -> Result<f64> {
    let weights = srm_weights(sample.len(), k)?;
    Ok(srm_dot(sample, &weights))
}

/// Dot product of precomputed spectral weights with the order statistics.
/// Summation runs in ascending index order so results are bit-reproducible
/// however the weights were obtained.
pub fn srm_dot(sample: &SortedSample, weights: &[f64]) -> f64 {
    debug_assert_eq!(sample.len(), weights.len());
    sample
        .values
        .iter()
        .zip(weights)
        .map(|(x, w)| x * w)
        .sum()
}
