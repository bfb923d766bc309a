//! Log-likelihood of a generalized progressive hybrid censored Weibull
//! sample and its first and second derivatives.
//!
//! Up to a constant,
//! `l = D ln a + D ln b + (a - 1) sum ln x_i - b W(a)` with
//! `W(a) = sum (R_i + 1) x_i^a + R* T*^a`.

use crate::censoring::GphcsSample;
use crate::error::{Error, Result};
use crate::weibull::WeibullParams;

/// Sufficient statistics of a sample, with `x^a` carried relative to the
/// largest time so that `W` and its derivatives never overflow.
#[derive(Clone, Debug)]
pub(crate) struct CensoredStats {
    pub d: f64,
    pub sum_log: f64,
    /// `(weight, ln x)` for every failure and the terminal censoring group.
    terms: Vec<(f64, f64)>,
    log_ref: f64,
}

/// `W(a)`, `W'(a)`, `W''(a)` divided by `exp(a * log_ref)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Moments {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub log_scale: f64,
}

impl Moments {
    /// `ln W(a)`
    pub fn log_w(&self) -> f64 {
        self.s0.ln() + self.log_scale
    }

    pub fn w(&self) -> f64 {
        self.log_w().exp()
    }

    pub fn w1(&self) -> f64 {
        self.s1 * self.log_scale.exp()
    }

    pub fn w2(&self) -> f64 {
        self.s2 * self.log_scale.exp()
    }
}

impl CensoredStats {
    pub fn new(s: &GphcsSample) -> Result<Self> {
        if s.big_d == 0 || s.times.len() != s.big_d || s.removals_applied.len() != s.big_d {
            return Err(Error::Contract(format!(
                "sample with D = {} has {} times and {} removals",
                s.big_d,
                s.times.len(),
                s.removals_applied.len()
            )));
        }
        if s.times.iter().any(|x| !x.is_finite() || *x <= 0.0)
            || !s.t_star.is_finite()
            || s.t_star <= 0.0
        {
            return Err(Error::domain("failure and termination times must be finite and > 0"));
        }
        let mut terms: Vec<(f64, f64)> = s
            .times
            .iter()
            .zip(&s.removals_applied)
            .map(|(x, r)| ((*r + 1) as f64, x.ln()))
            .collect();
        if s.r_star > 0 {
            terms.push((s.r_star as f64, s.t_star.ln()));
        }
        let log_ref = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            d: s.big_d as f64,
            sum_log: s.times.iter().map(|x| x.ln()).sum(),
            terms,
            log_ref,
        })
    }

    pub fn moments(&self, alpha: f64) -> Moments {
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for &(w, lx) in &self.terms {
            let e = w * (alpha * (lx - self.log_ref)).exp();
            s0 += e;
            s1 += e * lx;
            s2 += e * lx * lx;
        }
        Moments {
            s0,
            s1,
            s2,
            log_scale: alpha * self.log_ref,
        }
    }

    pub fn log_likelihood(&self, alpha: f64, beta: f64) -> f64 {
        let m = self.moments(alpha);
        self.d * alpha.ln() + self.d * beta.ln() + (alpha - 1.0) * self.sum_log
            - (beta.ln() + m.log_w()).exp()
    }

    pub fn profile_beta(&self, alpha: f64) -> f64 {
        (self.d.ln() - self.moments(alpha).log_w()).exp()
    }

    /// Score in `alpha` with `beta` profiled out, and its derivative.
    pub fn profile_score(&self, alpha: f64) -> (f64, f64) {
        let m = self.moments(alpha);
        let mean = m.s1 / m.s0;
        let var = (m.s2 / m.s0 - mean * mean).max(0.0);
        let g = self.d / alpha + self.sum_log - self.d * mean;
        let dg = -self.d / (alpha * alpha) - self.d * var;
        (g, dg)
    }

    /// Scale of the terms that make up the profiled score, for tolerances.
    pub fn score_scale(&self, alpha: f64) -> f64 {
        let abs_log: f64 = self.terms.iter().map(|t| t.0 * t.1.abs()).sum();
        (self.d / alpha + abs_log).max(1.0)
    }

    pub fn distinct_failures(&self, s: &GphcsSample) -> bool {
        s.times.windows(2).any(|w| w[0] != w[1])
    }
}

fn stats_for(s: &GphcsSample) -> Result<CensoredStats> {
    CensoredStats::new(s)
}

pub fn log_likelihood(s: &GphcsSample, p: &WeibullParams) -> Result<f64> {
    Ok(stats_for(s)?.log_likelihood(p.alpha(), p.beta()))
}

/// `(dl/dalpha, dl/dbeta)`
pub fn score(s: &GphcsSample, p: &WeibullParams) -> Result<(f64, f64)> {
    let st = stats_for(s)?;
    let (a, b) = (p.alpha(), p.beta());
    let m = st.moments(a);
    let d_alpha = st.d / a + st.sum_log - b * m.w1();
    let d_beta = st.d / b - m.w();
    Ok((d_alpha, d_beta))
}

/// Closed-form root in `beta` of the second likelihood equation.
pub fn profile_beta(s: &GphcsSample, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::domain(format!("alpha must be finite and > 0, got {alpha}")));
    }
    Ok(stats_for(s)?.profile_beta(alpha))
}

/// Negated Hessian of the log-likelihood.
pub fn observed_info(s: &GphcsSample, p: &WeibullParams) -> Result<[[f64; 2]; 2]> {
    let st = stats_for(s)?;
    Ok(info_from_stats(&st, p.alpha(), p.beta()))
}

pub(crate) fn info_from_stats(st: &CensoredStats, a: f64, b: f64) -> [[f64; 2]; 2] {
    let m = st.moments(a);
    let l11 = -st.d / (a * a) - b * m.w2();
    let l12 = -m.w1();
    let l22 = -st.d / (b * b);
    [[-l11, -l12], [-l12, -l22]]
}
