//! Maximum-likelihood inference: likelihood and derivatives, the profiled
//! Newton solver, Wald and delta-method intervals, and the one-sample
//! Kolmogorov-Smirnov test.

mod interval;
mod ks;
mod likelihood;
mod solver;

use serde::{Deserialize, Serialize};

use crate::censoring::GphcsSample;
use crate::error::Result;
use crate::weibull::WeibullParams;

pub use interval::{
    aci_param, aci_reliability, aci_reliability_with, mle_system_reliability, IntervalEstimate,
    IntervalMethod, Parameter,
};
pub use ks::{ks_test, KsResult};
pub(crate) use likelihood::CensoredStats;
pub use likelihood::{log_likelihood, observed_info, profile_beta, score};
pub use solver::{fit, initial_alpha, SolverOptions};

/// MLEs with the observed information and its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub params_hat: WeibullParams,
    /// `[[-l11, -l12], [-l21, -l22]]` at the MLE.
    pub info_observed: [[f64; 2]; 2],
    /// Inverse of `info_observed`.
    pub covariance: [[f64; 2]; 2],
    pub iterations: usize,
    /// Norm of `(alpha * dl/dalpha, beta * dl/dbeta) / D` at the MLE.
    pub grad_norm: f64,
}

impl FitResult {
    pub fn var_alpha(&self) -> f64 {
        self.covariance[0][0]
    }

    pub fn var_beta(&self) -> f64 {
        self.covariance[1][1]
    }

    pub fn cov_ab(&self) -> f64 {
        self.covariance[0][1]
    }
}

#[derive(Serialize, Deserialize)]
struct FitRecord {
    alpha_hat: f64,
    beta_hat: f64,
    var_alpha: f64,
    var_beta: f64,
    cov_ab: f64,
    iterations: usize,
    grad_norm: f64,
    info_observed: [[f64; 2]; 2],
}

impl Serialize for FitResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FitRecord {
            alpha_hat: self.params_hat.alpha(),
            beta_hat: self.params_hat.beta(),
            var_alpha: self.var_alpha(),
            var_beta: self.var_beta(),
            cov_ab: self.cov_ab(),
            iterations: self.iterations,
            grad_norm: self.grad_norm,
            info_observed: self.info_observed,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FitResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FitRecord::deserialize(d)?;
        Ok(FitResult {
            params_hat: WeibullParams::new(r.alpha_hat, r.beta_hat)
                .map_err(serde::de::Error::custom)?,
            info_observed: r.info_observed,
            covariance: [[r.var_alpha, r.cov_ab], [r.cov_ab, r.var_beta]],
            iterations: r.iterations,
            grad_norm: r.grad_norm,
        })
    }
}

/// Fit of a complete sample through its censored embedding.
pub fn fit_complete(times: &[f64], options: &SolverOptions) -> Result<FitResult> {
    fit(&GphcsSample::complete(times)?, options)
}
