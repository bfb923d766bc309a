//! Bayesian estimation under independent gamma priors.
//!
//! With `alpha ~ Gamma(a, b)` and `beta ~ Gamma(c, d)` (shape, rate) the
//! joint posterior kernel is
//!
//! ```text
//! alpha^(D+a-1) beta^(D+c-1) exp(-b alpha - d beta)
//!     * prod x_i^(alpha-1) * exp(-beta W(alpha))
//! ```
//!
//! with `W(alpha) = sum (R_i + 1) x_i^alpha + R* T*^alpha`. The full
//! conditional of `beta` is `Gamma(D + c, d + W(alpha))`; the conditional of
//! `alpha` has no standard form, hence the Metropolis steps in [`sampler`].

mod credible;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::censoring::GphcsSample;
use crate::error::{Error, Result};
use crate::frequentist::{IntervalEstimate, IntervalMethod};
use crate::frequentist::CensoredStats;

pub use credible::{credible_interval, percentile_indices, CredibleMethod};
pub use sampler::{mh_sample, McmcOptions, PosteriorSample, ReliabilityTarget};

/// Gamma hyperparameters: `alpha ~ Gamma(a, b)`, `beta ~ Gamma(c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PriorSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl PriorSpec {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::domain(format!(
                    "prior hyperparameter {name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// Near-flat gamma priors, all hyperparameters 1e-4.
    pub fn noninformative() -> Self {
        Self {
            a: 1e-4,
            b: 1e-4,
            c: 1e-4,
            d: 1e-4,
        }
    }

    pub fn mean_alpha(&self) -> f64 {
        self.a / self.b
    }

    pub fn mean_beta(&self) -> f64 {
        self.c / self.d
    }
}

impl<'de> Deserialize<'de> for PriorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: f64,
            b: f64,
            c: f64,
            d: f64,
        }
        let r = Raw::deserialize(d)?;
        PriorSpec::new(r.a, r.b, r.c, r.d).map_err(serde::de::Error::custom)
    }
}

/// Log posterior kernels for one sample and prior.
#[derive(Clone, Debug)]
pub(crate) struct Posterior {
    stats: CensoredStats,
    prior: PriorSpec,
}

impl Posterior {
    pub fn new(s: &GphcsSample, prior: &PriorSpec) -> Result<Self> {
        Ok(Self {
            stats: CensoredStats::new(s)?,
            prior: *prior,
        })
    }

    /// `W(alpha)`
    pub fn w(&self, alpha: f64) -> f64 {
        self.stats.moments(alpha).w()
    }

    pub fn log_joint(&self, alpha: f64, beta: f64) -> f64 {
        if !(alpha > 0.0 && beta > 0.0) {
            return f64::NEG_INFINITY;
        }
        let p = &self.prior;
        let d = self.stats.d;
        (d + p.a - 1.0) * alpha.ln() + (d + p.c - 1.0) * beta.ln() - p.b * alpha - p.d * beta
            + (alpha - 1.0) * self.stats.sum_log
            - beta * self.w(alpha)
    }

    pub fn log_cond_alpha(&self, alpha: f64, beta: f64) -> f64 {
        if !(alpha > 0.0) {
            return f64::NEG_INFINITY;
        }
        let (base, w) = self.alpha_parts(alpha);
        base - beta * w
    }

    /// `alpha`-only part of the alpha conditional, and `W(alpha)`; the
    /// conditional is `base - beta * W`.
    pub fn alpha_parts(&self, alpha: f64) -> (f64, f64) {
        if !(alpha > 0.0) {
            return (f64::NEG_INFINITY, f64::NAN);
        }
        let p = &self.prior;
        let base = (self.stats.d + p.a - 1.0) * alpha.ln() - p.b * alpha
            + (alpha - 1.0) * self.stats.sum_log;
        (base, self.w(alpha))
    }

    /// Conditional of `beta` given `W(alpha)`.
    pub fn log_cond_beta_given_w(&self, w: f64, beta: f64) -> f64 {
        if !(beta > 0.0) {
            return f64::NEG_INFINITY;
        }
        let p = &self.prior;
        (self.stats.d + p.c - 1.0) * beta.ln() - p.d * beta - beta * w
    }
}

/// Joint log posterior up to an additive constant; `-inf` off the support.
pub fn log_posterior(s: &GphcsSample, prior: &PriorSpec, alpha: f64, beta: f64) -> Result<f64> {
    Ok(Posterior::new(s, prior)?.log_joint(alpha, beta))
}

pub fn conditional_log_alpha(
    s: &GphcsSample,
    prior: &PriorSpec,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    Ok(Posterior::new(s, prior)?.log_cond_alpha(alpha, beta))
}

pub fn conditional_log_beta(
    s: &GphcsSample,
    prior: &PriorSpec,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    let post = Posterior::new(s, prior)?;
    if !(alpha > 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(post.log_cond_beta_given_w(post.w(alpha), beta))
}

/// Posterior means (Bayes estimates under squared-error loss) and credible
/// intervals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BayesResult {
    pub alpha_se: f64,
    pub beta_se: f64,
    pub reliability_se: Option<f64>,
    pub alpha_interval: IntervalEstimate,
    pub beta_interval: IntervalEstimate,
    pub reliability_interval: Option<IntervalEstimate>,
}

pub fn posterior_mean(draws: &[f64]) -> Result<f64> {
    if draws.is_empty() {
        return Err(Error::domain("posterior mean of an empty draw set"));
    }
    Ok(draws.iter().sum::<f64>() / draws.len() as f64)
}

pub fn self_estimates(
    ps: &PosteriorSample,
    gamma: f64,
    method: CredibleMethod,
) -> Result<BayesResult> {
    let reliability = match &ps.draws_reliability {
        Some(r) => Some((posterior_mean(r)?, credible_interval(r, gamma, method)?)),
        None => None,
    };
    Ok(BayesResult {
        alpha_se: posterior_mean(&ps.draws_alpha)?,
        beta_se: posterior_mean(&ps.draws_beta)?,
        reliability_se: reliability.map(|r| r.0),
        alpha_interval: credible_interval(&ps.draws_alpha, gamma, method)?,
        beta_interval: credible_interval(&ps.draws_beta, gamma, method)?,
        reliability_interval: reliability.map(|r| r.1),
    })
}

impl CredibleMethod {
    pub fn interval_method(self) -> IntervalMethod {
        match self {
            CredibleMethod::Percentile => IntervalMethod::Percentile,
            CredibleMethod::MinWidth => IntervalMethod::HpdMinWidth,
        }
    }
}
