use std::fmt;

use serde::{Deserialize, Serialize};

use super::FitResult;
use crate::error::{Error, Result};
use crate::koon::{self, GradientForm, SystemSpec};
use crate::special::z_two_sided;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalMethod {
    #[serde(rename = "ACI")]
    Aci,
    #[serde(rename = "ACI-delta")]
    AciDelta,
    #[serde(rename = "HPD-minwidth")]
    HpdMinWidth,
    #[serde(rename = "percentile")]
    Percentile,
}

impl fmt::Display for IntervalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalMethod::Aci => "ACI",
            IntervalMethod::AciDelta => "ACI-delta",
            IntervalMethod::HpdMinWidth => "HPD-minwidth",
            IntervalMethod::Percentile => "percentile",
        })
    }
}

/// A two-sided interval at level `1 - gamma`.
///
/// When bounds were clamped for reporting (reliabilities), the unclamped
/// bounds are kept in `raw_lower` / `raw_upper`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: IntervalMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_upper: Option<f64>,
}

impl IntervalEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Width before any clamping.
    pub fn raw_width(&self) -> f64 {
        self.raw_upper.unwrap_or(self.upper) - self.raw_lower.unwrap_or(self.lower)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Alpha,
    Beta,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("gamma must be in (0, 1), got {gamma}")))
    }
}

/// Wald interval `estimate -/+ z_{gamma/2} sqrt(var)`.
pub fn aci_param(fit: &FitResult, which: Parameter, gamma: f64) -> Result<IntervalEstimate> {
    check_gamma(gamma)?;
    let (est, var) = match which {
        Parameter::Alpha => (fit.params_hat.alpha(), fit.var_alpha()),
        Parameter::Beta => (fit.params_hat.beta(), fit.var_beta()),
    };
    if !(var >= 0.0) {
        return Err(Error::UnstableCovariance(format!("negative variance {var:e}")));
    }
    let half = z_two_sided(gamma) * var.sqrt();
    Ok(IntervalEstimate {
        lower: est - half,
        upper: est + half,
        level: 1.0 - gamma,
        method: IntervalMethod::Aci,
        raw_lower: None,
        raw_upper: None,
    })
}

/// System reliability at the MLE.
pub fn mle_system_reliability(fit: &FitResult, spec: &SystemSpec, t: f64) -> Result<f64> {
    koon::system_reliability(spec, &fit.params_hat, t)
}

/// Delta-method interval for system reliability at time `t`.
pub fn aci_reliability(
    fit: &FitResult,
    spec: &SystemSpec,
    t: f64,
    gamma: f64,
) -> Result<IntervalEstimate> {
    aci_reliability_with(fit, spec, t, gamma, GradientForm::Exact)
}

pub fn aci_reliability_with(
    fit: &FitResult,
    spec: &SystemSpec,
    t: f64,
    gamma: f64,
    form: GradientForm,
) -> Result<IntervalEstimate> {
    check_gamma(gamma)?;
    let c = &fit.covariance;
    if !(c[0][0] >= 0.0 && c[1][1] >= 0.0) || c.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::UnstableCovariance("covariance has negative or non-finite variances".into()));
    }
    let r = mle_system_reliability(fit, spec, t)?;
    let g = koon::system_reliability_gradient_with(spec, &fit.params_hat, t, form)?.as_array();
    let var = g[0] * g[0] * c[0][0] + 2.0 * g[0] * g[1] * c[0][1] + g[1] * g[1] * c[1][1];
    // allow for rounding in an otherwise semidefinite quadratic form
    let scale = (g[0] * g[0] * c[0][0]).abs() + (g[1] * g[1] * c[1][1]).abs();
    if !var.is_finite() || var < -1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::UnstableCovariance(format!(
            "delta-method variance is negative ({var:e})"
        )));
    }
    let half = z_two_sided(gamma) * var.max(0.0).sqrt();
    let (raw_lower, raw_upper) = (r - half, r + half);
    Ok(IntervalEstimate {
        lower: raw_lower.clamp(0.0, 1.0),
        upper: raw_upper.clamp(0.0, 1.0),
        level: 1.0 - gamma,
        method: IntervalMethod::AciDelta,
        raw_lower: Some(raw_lower),
        raw_upper: Some(raw_upper),
    })
}
