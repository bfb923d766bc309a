//! Maximum-likelihood fit by a safeguarded Newton iteration on the profiled
//! score `g(alpha) = dl/dalpha (alpha, beta_hat(alpha))`.

use serde::{Deserialize, Serialize};

use super::likelihood::{info_from_stats, CensoredStats};
use super::FitResult;
use crate::censoring::GphcsSample;
use crate::error::{Error, Result};
use crate::weibull::WeibullParams;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub max_expansions: usize,
    pub score_tol: f64,
    pub step_tol: f64,
    /// Starting shape; a probability-plot regression is used when absent.
    pub initial_alpha: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            max_expansions: 60,
            score_tol: 1e-10,
            step_tol: 1e-10,
            initial_alpha: None,
        }
    }
}

/// Least-squares slope of `ln(-ln(1 - p_i))` on `ln x_i` with plotting
/// positions `p_i = (i - 0.375) / (D + 0.25)`, clamped to `[0.05, 20]`.
pub fn initial_alpha(times: &[f64]) -> f64 {
    let d = times.len() as f64;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = (i as f64 + 1.0 - 0.375) / (d + 0.25);
            (x.ln(), (-(-p).ln_1p()).ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / d;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / d;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    if slope.is_finite() {
        slope.clamp(0.05, 20.0)
    } else {
        1.0
    }
}

pub fn fit(s: &GphcsSample, options: &SolverOptions) -> Result<FitResult> {
    let st = CensoredStats::new(s)?;
    if s.big_d < 2 {
        return Err(Error::InsufficientInformation(format!(
            "two parameters need at least 2 failures, got D = {}",
            s.big_d
        )));
    }
    if !st.distinct_failures(s) {
        return Err(Error::InsufficientInformation(
            "all observed failure times are equal".into(),
        ));
    }

    let alpha0 = options
        .initial_alpha
        .filter(|a| a.is_finite() && *a > 0.0)
        .unwrap_or_else(|| initial_alpha(&s.times));

    // g is decreasing: g(lo) > 0 > g(hi) brackets the root.
    let (mut lo, mut hi) = (alpha0 / 2.0, alpha0 * 2.0);
    let mut expansions = 0;
    while st.profile_score(lo).0 <= 0.0 {
        if expansions == options.max_expansions {
            return Err(Error::NoRoot { expansions });
        }
        lo /= 2.0;
        expansions += 1;
    }
    expansions = 0;
    while st.profile_score(hi).0 >= 0.0 {
        if expansions == options.max_expansions {
            return Err(Error::NoRoot { expansions });
        }
        hi *= 2.0;
        expansions += 1;
    }

    let mut alpha = alpha0.clamp(lo, hi);
    let mut iterations = 0;
    loop {
        if iterations == options.max_iterations {
            return Err(Error::NonConvergence {
                iterations,
                last_alpha: alpha,
            });
        }
        iterations += 1;

        let (g, dg) = st.profile_score(alpha);
        if g > 0.0 {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let newton = alpha - g / dg;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - alpha).abs();
        alpha = next;

        let small_step = step < options.step_tol * alpha.max(1.0);
        let small_score = g.abs() < options.score_tol * st.score_scale(alpha);
        let collapsed = hi - lo <= 4.0 * f64::EPSILON * alpha;
        if (small_step && small_score) || collapsed {
            break;
        }
    }

    let beta = st.profile_beta(alpha);
    let params_hat = WeibullParams::new(alpha, beta).map_err(|_| {
        Error::InsufficientInformation(format!("profiled rate is degenerate at alpha = {alpha}"))
    })?;
    let info = info_from_stats(&st, alpha, beta);
    let covariance = invert_2x2(&info)?;

    let m = st.moments(alpha);
    let d_alpha = st.d / alpha + st.sum_log - beta * m.w1();
    let d_beta = st.d / beta - m.w();
    let grad_norm = ((alpha * d_alpha).powi(2) + (beta * d_beta).powi(2)).sqrt() / st.d;

    Ok(FitResult {
        params_hat,
        info_observed: info,
        covariance,
        iterations,
        grad_norm,
    })
}

pub(crate) fn invert_2x2(m: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !det.is_finite() || det <= 0.0 || m[0][0] <= 0.0 {
        return Err(Error::UnstableCovariance(format!(
            "observed information is not positive definite (det = {det:e})"
        )));
    }
    Ok([
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ])
}
