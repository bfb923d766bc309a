//! Reliability of a K-out-of-N:G system of i.i.d. Weibull components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weibull::WeibullParams;

const MAX_COMPONENTS: u32 = 10_000;

/// An N-component system that works while at least K components work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemSpec {
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "K")]
    k: u32,
}

impl SystemSpec {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 || n > MAX_COMPONENTS {
            return Err(Error::domain(format!(
                "N must be in 1..={MAX_COMPONENTS}, got {n}"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::domain(format!("K must be in 1..=N ({n}), got {k}")));
        }
        Ok(Self { n, k })
    }

    pub fn components(&self) -> u32 {
        self.n
    }

    pub fn required(&self) -> u32 {
        self.k
    }

    /// `P(Binomial(N, r) >= K)` for component reliability `r`.
    pub fn reliability_from_component(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= 1.0 {
            return 1.0;
        }
        let (n, k) = (self.n, self.k);
        let (ln_r, ln_q) = (r.ln(), (-r).ln_1p());
        let sum: f64 = ln_binomial_tail(n, k)
            .map(|(i, ln_c)| (ln_c + ln_pow(ln_r, i) + ln_pow(ln_q, n - i)).exp())
            .sum();
        sum.clamp(0.0, 1.0)
    }
}

impl<'de> Deserialize<'de> for SystemSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            n: u32,
            #[serde(rename = "K")]
            k: u32,
        }
        let raw = Raw::deserialize(d)?;
        SystemSpec::new(raw.n, raw.k).map_err(serde::de::Error::custom)
    }
}

/// `C(n, k)` built multiplicatively.
#[cfg(test)]
fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0;
    for j in 0..k {
        c = c * f64::from(n - j) / f64::from(j + 1);
    }
    c
}

/// `(i, ln C(n, i))` for `i = k..=n`. Logs keep systems with thousands of
/// components finite, where `C(n, i)` itself overflows.
fn ln_binomial_tail(n: u32, k: u32) -> impl Iterator<Item = (u32, f64)> {
    let ln_start = {
        let j = k.min(n - k);
        (0..j).map(|t| (f64::from(n - t) / f64::from(t + 1)).ln()).sum::<f64>()
    };
    (k..=n).scan(ln_start, move |ln_c, i| {
        let current = *ln_c;
        if i < n {
            *ln_c += (f64::from(n - i) / f64::from(i + 1)).ln();
        }
        Some((i, current))
    })
}

/// `e * ln_x`, with `x^0 = 1` even when `x = 0`.
#[inline]
fn ln_pow(ln_x: f64, e: u32) -> f64 {
    if e == 0 {
        0.0
    } else {
        f64::from(e) * ln_x
    }
}

/// Partial derivatives of system reliability in `(alpha, beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityGradient {
    pub d_alpha: f64,
    pub d_beta: f64,
}

impl ReliabilityGradient {
    pub const ZERO: Self = Self {
        d_alpha: 0.0,
        d_beta: 0.0,
    };

    pub fn as_array(&self) -> [f64; 2] {
        [self.d_alpha, self.d_beta]
    }
}

/// Inner factor used when differentiating the binomial terms.
///
/// `Exact` is the term-by-term derivative `(N u - i)` and agrees with finite
/// differences. `Legacy` uses `(N - 2i + i u)`; it does not match the
/// derivative and exists only to reproduce interval tables computed with it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientForm {
    #[default]
    Exact,
    Legacy,
}

pub fn system_reliability(spec: &SystemSpec, p: &WeibullParams, t: f64) -> Result<f64> {
    let r = p.reliability(t)?;
    Ok(spec.reliability_from_component(r))
}

pub fn system_reliability_gradient(
    spec: &SystemSpec,
    p: &WeibullParams,
    t: f64,
) -> Result<ReliabilityGradient> {
    system_reliability_gradient_with(spec, p, t, GradientForm::Exact)
}

pub fn system_reliability_gradient_with(
    spec: &SystemSpec,
    p: &WeibullParams,
    t: f64,
    form: GradientForm,
) -> Result<ReliabilityGradient> {
    if !t.is_finite() {
        return Err(Error::domain(format!("time must be finite, got {t}")));
    }
    if t <= 0.0 {
        return Ok(ReliabilityGradient::ZERO);
    }
    let (n, k) = (spec.n, spec.k);
    let ta = t.powf(p.alpha());
    let s = p.beta() * ta;
    let u = (-s).exp();
    let (ln_u, ln_q) = (-s, (-(-s).exp_m1()).ln());

    // dR/ds; R depends on (alpha, beta) only through s = beta t^alpha.
    let nf = f64::from(n);
    let sum: f64 = ln_binomial_tail(n, k)
        .map(|(i, ln_c)| {
            let fi = f64::from(i);
            match form {
                GradientForm::Exact if i == n => -fi * ln_pow(ln_u, i).exp(),
                GradientForm::Exact => {
                    (ln_c + ln_pow(ln_u, i) + ln_pow(ln_q, n - i - 1)).exp() * (nf * u - fi)
                }
                GradientForm::Legacy => {
                    let ln_tail = if i == n { -ln_q } else { ln_pow(ln_q, n - i - 1) };
                    (ln_c + ln_pow(ln_u, i) + ln_tail).exp() * (nf - 2.0 * fi + fi * u)
                }
            }
        })
        .sum();

    Ok(ReliabilityGradient {
        d_alpha: s * t.ln() * sum,
        d_beta: ta * sum,
    })
}
