//! Loss distributions: density, CDF, quantile, analytic moments, sampling.
//!
//! Three families are supported. `Normal` is the usual Gaussian. A
//! `TwoPieceNormal` glues two half-normals with different scales at a common
//! mode, giving a skewed unimodal density. `StandardizedT` is a Student t
//! rescaled to unit variance, giving heavy tails without changing location
//! or scale.
//!
//! Sampling is inverse-CDF driven so that a trial's draws are a fixed
//! function of its random stream. The Student t is the one exception: its
//! chi-square mixing variable comes from a gamma sampler, which is still a
//! deterministic function of the stream.

use rand_distr::{Distribution as RandDistribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad;
use crate::rng::RandomStream;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_2PI: f64 = 2.5066282746310002;

/// First four moments of a distribution. `kurtosis` is the plain fourth
/// standardized moment (3 for a Gaussian), not excess.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

/// A parameterized loss distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum DistributionSpec {
    #[serde(rename = "normal")]
    Normal { mu: f64, sigma: f64 },
    /// Two half-normal pieces sharing mode `mu`: scale `sigma1` below the
    /// mode, `sigma2` above it. Density height is continuous at the join;
    /// the piece probabilities are sigma1/(sigma1+sigma2) and its
    /// complement. `sigma2 > sigma1` puts the heavy tail on the loss side.
    #[serde(rename = "2pn")]
    TwoPieceNormal { mu: f64, sigma1: f64, sigma2: f64 },
    /// Student t with `nu` degrees of freedom, scaled by sqrt((nu-2)/nu) so
    /// the variance is exactly 1. Requires nu >= 5 so the fourth moment is
    /// finite.
    #[serde(rename = "std_t")]
    StandardizedT { nu: u32 },
}

impl DistributionSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        let d = DistributionSpec::Normal { mu, sigma };
        d.validate()?;
        Ok(d)
    }

    pub fn two_piece_normal(mu: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        let d = DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 };
        d.validate()?;
        Ok(d)
    }

    pub fn standardized_t(nu: u32) -> Result<Self> {
        let d = DistributionSpec::StandardizedT { nu };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Normal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(Error::bad_param("mu", format!("must be finite, got {mu}")));
                }
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(Error::bad_param(
                        "sigma",
                        format!("must be positive and finite, got {sigma}"),
                    ));
                }
            }
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                if !mu.is_finite() {
                    return Err(Error::bad_param("mu", format!("must be finite, got {mu}")));
                }
                for (name, s) in [("sigma1", sigma1), ("sigma2", sigma2)] {
                    if !(s.is_finite() && s > 0.0) {
                        return Err(Error::bad_param(
                            name,
                            format!("must be positive and finite, got {s}"),
                        ));
                    }
                }
            }
            DistributionSpec::StandardizedT { nu } => {
                if nu < 5 {
                    return Err(Error::bad_param(
                        "nu",
                        format!("need nu >= 5 for a finite fourth moment, got {nu}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Short family tag used in reports and file names.
    pub fn family(&self) -> &'static str {
        match self {
            DistributionSpec::Normal { .. } => "normal",
            DistributionSpec::TwoPieceNormal { .. } => "2pn",
            DistributionSpec::StandardizedT { .. } => "std_t",
        }
    }

    /// Parameter string for report columns, semicolon separated so it stays
    /// a single CSV field without quoting.
    pub fn params_label(&self) -> String {
        match *self {
            DistributionSpec::Normal { mu, sigma } => format!("mu={mu};sigma={sigma}"),
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                format!("mu={mu};sigma1={sigma1};sigma2={sigma2}")
            }
            DistributionSpec::StandardizedT { nu } => format!("nu={nu}"),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                (-0.5 * z * z).exp() / (sigma * SQRT_2PI)
            }
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                let height = 2.0 / (SQRT_2PI * (sigma1 + sigma2));
                let s = if x <= mu { sigma1 } else { sigma2 };
                let z = (x - mu) / s;
                height * (-0.5 * z * z).exp()
            }
            DistributionSpec::StandardizedT { nu } => {
                let s = t_scale(nu);
                t_pdf(nu, x / s) / s
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Normal { mu, sigma } => norm_cdf((x - mu) / sigma),
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                let pi1 = sigma1 / (sigma1 + sigma2);
                if x <= mu {
                    2.0 * pi1 * norm_cdf((x - mu) / sigma1)
                } else {
                    1.0 - 2.0 * (1.0 - pi1) * norm_sf((x - mu) / sigma2)
                }
            }
            DistributionSpec::StandardizedT { nu } => t_cdf(nu, x / t_scale(nu)),
        }
    }

    /// Survival function 1 - CDF, computed without cancellation in the
    /// upper tail where the CDF rounds to 1.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Normal { mu, sigma } => norm_sf((x - mu) / sigma),
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                if x <= mu {
                    // The lower piece carries at most the mode mass, so the
                    // plain complement keeps full accuracy here.
                    1.0 - self.cdf(x)
                } else {
                    let pi1 = sigma1 / (sigma1 + sigma2);
                    2.0 * (1.0 - pi1) * norm_sf((x - mu) / sigma2)
                }
            }
            DistributionSpec::StandardizedT { nu } => t_sf(nu, x / t_scale(nu)),
        }
    }

    /// Inverse CDF. Errors unless `p` lies strictly inside (0, 1).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::bad_param(
                "p",
                format!("quantile level must lie in (0, 1), got {p}"),
            ));
        }
        Ok(match *self {
            DistributionSpec::Normal { mu, sigma } => mu + sigma * norm_quantile(p),
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                let pi1 = sigma1 / (sigma1 + sigma2);
                if p <= pi1 {
                    // Within the lower piece the CDF is 2*pi1*Phi(z).
                    mu + sigma1 * norm_quantile(0.5 * p / pi1)
                } else {
                    mu + sigma2 * norm_quantile(0.5 + 0.5 * (p - pi1) / (1.0 - pi1))
                }
            }
            DistributionSpec::StandardizedT { nu } => t_scale(nu) * t_quantile(nu, p),
        })
    }

    /// Exact moments where closed forms exist; quadrature for the two-piece
    /// normal. The integration range [mu - 12*sigma1, mu + 12*sigma2] leaves
    /// Gaussian mass far below the 1e-10 tolerance.
    pub fn analytic_moments(&self) -> Result<Moments> {
        match *self {
            DistributionSpec::Normal { mu, sigma } => Ok(Moments {
                mean: mu,
                variance: sigma * sigma,
                skewness: 0.0,
                kurtosis: 3.0,
            }),
            DistributionSpec::StandardizedT { nu } => Ok(Moments {
                mean: 0.0,
                variance: 1.0,
                skewness: 0.0,
                kurtosis: 3.0 * (nu as f64 - 2.0) / (nu as f64 - 4.0),
            }),
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                let (a, b) = (mu - 12.0 * sigma1, mu + 12.0 * sigma2);
                let tol = 1e-10;
                let mean = quad::integrate(&|x| x * self.density(x), a, b, tol)?;
                let m2 = quad::integrate(&|x| (x - mean).powi(2) * self.density(x), a, b, tol)?;
                let m3 = quad::integrate(&|x| (x - mean).powi(3) * self.density(x), a, b, tol)?;
                let m4 = quad::integrate(&|x| (x - mean).powi(4) * self.density(x), a, b, tol)?;
                Ok(Moments {
                    mean,
                    variance: m2,
                    skewness: m3 / m2.powf(1.5),
                    kurtosis: m4 / (m2 * m2),
                })
            }
        }
    }

    /// Fill `out` with draws from this distribution, consuming the stream.
    pub fn sample_into(&self, stream: &mut RandomStream, out: &mut [f64]) {
        match *self {
            DistributionSpec::Normal { mu, sigma } => {
                for x in out.iter_mut() {
                    *x = mu + sigma * norm_quantile(stream.next_open01());
                }
            }
            DistributionSpec::TwoPieceNormal { mu, sigma1, sigma2 } => {
                let pi1 = sigma1 / (sigma1 + sigma2);
                for x in out.iter_mut() {
                    let piece = stream.next_open01();
                    // Half-normal magnitude from the upper half of Phi.
                    let z = norm_quantile(0.5 + 0.5 * stream.next_open01());
                    *x = if piece <= pi1 {
                        mu - sigma1 * z
                    } else {
                        mu + sigma2 * z
                    };
                }
            }
            DistributionSpec::StandardizedT { nu } => {
                let s = t_scale(nu);
                let chi2 = Gamma::new(0.5 * nu as f64, 2.0)
                    .expect("validated nu gives a legal gamma shape");
                for x in out.iter_mut() {
                    let z = norm_quantile(stream.next_open01());
                    let w: f64 = chi2.sample(stream);
                    *x = s * z * (nu as f64 / w).sqrt();
                }
            }
        }
    }
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Standard normal CDF via erfc, which keeps full relative precision deep
/// in the lower tail.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal survival function, 1 - CDF, precise in the upper tail.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

// Rational approximation coefficients for the normal quantile, AS 241
// (Wichura's PPND16). Accurate to about 1e-15 relative over the whole of
// (0, 1), so no refinement step is needed.
const PN_A: [f64; 8] = [
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
];
const PN_B: [f64; 8] = [
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
];
const PN_C: [f64; 8] = [
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
];
const PN_D: [f64; 8] = [
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
];
const PN_E: [f64; 8] = [
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
];
const PN_F: [f64; 8] = [
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
];

fn poly8(c: &[f64; 8], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Standard normal quantile. Returns NaN outside (0, 1).
///
/// The upper half mirrors the lower half; for p <= 0.5 the tail branches
/// work off ln(p) directly, so relative accuracy holds arbitrarily deep.
pub fn norm_quantile(p: f64) -> f64 {
    if !(p > 0.0 && p < 1.0) {
        return f64::NAN;
    }
    if p == 0.5 {
        return 0.0;
    }
    if p > 0.5 {
        // 1 - p is exact for p in [0.5, 1).
        -norm_quantile_lower(1.0 - p)
    } else {
        norm_quantile_lower(p)
    }
}

fn norm_quantile_lower(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly8(&PN_A, r) / poly8(&PN_B, r);
    }
    let r = (-p.ln()).sqrt();
    if r <= 5.0 {
        let t = r - 1.6;
        -poly8(&PN_C, t) / poly8(&PN_D, t)
    } else {
        let t = r - 5.0;
        -poly8(&PN_E, t) / poly8(&PN_F, t)
    }
}

fn t_scale(nu: u32) -> f64 {
    ((nu as f64 - 2.0) / nu as f64).sqrt()
}

fn t_pdf(nu: u32, t: f64) -> f64 {
    let v = nu as f64;
    let ln_norm = ln_gamma(0.5 * (v + 1.0))
        - ln_gamma(0.5 * v)
        - 0.5 * (v * std::f64::consts::PI).ln();
    (ln_norm - 0.5 * (v + 1.0) * (t * t / v).ln_1p()).exp()
}

/// Student t survival function with full relative precision in the far
/// tail, where 1 - cdf would cancel.
fn t_sf(nu: u32, t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0 - t_cdf(nu, t);
    }
    let v = nu as f64;
    0.5 * beta_reg(0.5 * v, 0.5, v / (v + t * t))
}

fn t_cdf(nu: u32, t: f64) -> f64 {
    if t > 0.0 {
        return 1.0 - t_sf(nu, t);
    }
    // By symmetry the lower tail is half the regularized beta directly.
    let v = nu as f64;
    0.5 * beta_reg(0.5 * v, 0.5, v / (v + t * t))
}

/// Student t quantile. Solves sf(x) = 1 - p with a bracketed Newton
/// iteration so the result keeps full relative precision however deep into
/// the tail p sits.
fn t_quantile(nu: u32, p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    if p < 0.5 {
        // 1 - p is exact for p in (0.5, 1); mirror into the upper half.
        return -t_quantile(nu, 1.0 - p);
    }
    let q = 1.0 - p;
    let v = nu as f64;
    let guess = if q < 0.05 {
        // Asymptotic tail inverse: sf(t) ~ c_v t^(-v) / v for large t.
        let ln_c = ln_gamma(0.5 * (v + 1.0)) + 0.5 * v * v.ln()
            - 0.5 * (v * std::f64::consts::PI).ln()
            - ln_gamma(0.5 * v);
        ((ln_c - (v * q).ln()) / v).exp()
    } else {
        // Near the center the t quantile is a mildly inflated normal one.
        norm_quantile(p) * (1.0 + 2.0 / v)
    };

    // Bracket the root: sf(0) = 0.5 > q, grow hi until sf(hi) <= q.
    let mut lo = 0.0f64;
    let mut hi = guess.max(1.0);
    for _ in 0..200 {
        if t_sf(nu, hi) <= q {
            break;
        }
        hi *= 2.0;
    }

    let mut x = guess.clamp(lo, hi);
    for _ in 0..100 {
        let g = t_sf(nu, x) - q;
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        // Newton step on sf, falling back to bisection when it would leave
        // the bracket.
        let f = t_pdf(nu, x);
        let mut next = if f > 0.0 { x + g / f } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - x).abs() <= 4e-16 * next.abs().max(1.0);
        x = next;
        if done {
            break;
        }
    }
    x
}
