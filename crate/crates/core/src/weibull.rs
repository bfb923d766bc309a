//! Weibull lifetime law in the rate parameterization
//! `F(x) = 1 - exp(-beta * x^alpha)`.
//!
//! `beta` multiplies `x^alpha` (units time^-alpha); it is not a scale
//! parameter. The common scale `lambda` relates as `beta = lambda^-alpha`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape `alpha` and rate `beta` of a Weibull lifetime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeibullParams {
    alpha: f64,
    beta: f64,
}

impl WeibullParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::domain(format!(
                "alpha must be finite and > 0, got {alpha}"
            )));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::domain(format!(
                "beta must be finite and > 0, got {beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Cumulative hazard `beta * x^alpha`.
    #[inline]
    pub(crate) fn cumulative_hazard(&self, x: f64) -> f64 {
        self.beta * x.powf(self.alpha)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_nonnegative(x)?;
        Ok(-(-self.cumulative_hazard(x)).exp_m1())
    }

    pub fn reliability(&self, x: f64) -> Result<f64> {
        check_nonnegative(x)?;
        Ok((-self.cumulative_hazard(x)).exp())
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(self.alpha * self.beta * x.powf(self.alpha - 1.0) * (-self.cumulative_hazard(x)).exp())
    }

    pub fn hazard(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(self.alpha * self.beta * x.powf(self.alpha - 1.0))
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::domain(format!("quantile level must be in [0, 1), got {u}")));
        }
        Ok(self.quantile_unchecked(u))
    }

    #[inline]
    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        (-(-u).ln_1p() / self.beta).powf(1.0 / self.alpha)
    }

    /// One lifetime by inversion of a uniform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.quantile_unchecked(u)
    }

    /// Parameters of the law of `c * X` when `X` follows `self`.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta * c.powf(-self.alpha))
    }
}

impl<'de> Deserialize<'de> for WeibullParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            alpha: f64,
            beta: f64,
        }
        let raw = Raw::deserialize(d)?;
        WeibullParams::new(raw.alpha, raw.beta).map_err(serde::de::Error::custom)
    }
}

fn check_nonnegative(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be finite and >= 0, got {x}")))
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be finite and > 0, got {x}")))
    }
}
