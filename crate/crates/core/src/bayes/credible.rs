//! Credible intervals from posterior draws.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequentist::IntervalEstimate;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CredibleMethod {
    /// Equal-tail order-statistic interval.
    Percentile,
    /// Shortest window covering `floor(B (1 - gamma))` order-statistic gaps
    /// (Chen-Shao HPD estimate).
    #[default]
    MinWidth,
}

// guards floor() against products like 1000 * 0.95 landing a hair below 950
const FLOOR_SLACK: f64 = 1e-9;

/// 1-based order-statistic indices `(floor(B gamma/2), floor(B (1 - gamma/2)))`
/// of the percentile interval, the lower one clamped to at least 1.
pub fn percentile_indices(b: usize, gamma: f64) -> (usize, usize) {
    let bf = b as f64;
    let lo = ((bf * gamma / 2.0 + FLOOR_SLACK).floor() as usize).max(1);
    let hi = ((bf * (1.0 - gamma / 2.0) + FLOOR_SLACK).floor() as usize).clamp(lo, b);
    (lo, hi)
}

pub fn credible_interval(
    draws: &[f64],
    gamma: f64,
    method: CredibleMethod,
) -> Result<IntervalEstimate> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::domain(format!("gamma must be in (0, 1), got {gamma}")));
    }
    let b = draws.len();
    if (b as f64) * gamma < 2.0 - FLOOR_SLACK {
        return Err(Error::domain(format!(
            "{b} draws are too few for gamma = {gamma}; need at least {}",
            (2.0 / gamma).ceil()
        )));
    }
    if draws.iter().any(|x| x.is_nan()) {
        return Err(Error::domain("draws contain NaN"));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);

    let (lower, upper) = match method {
        CredibleMethod::Percentile => {
            let (lo, hi) = percentile_indices(b, gamma);
            (sorted[lo - 1], sorted[hi - 1])
        }
        CredibleMethod::MinWidth => {
            let span = ((b as f64) * (1.0 - gamma) + FLOOR_SLACK).floor() as usize;
            let mut best = 0;
            let mut best_width = f64::INFINITY;
            for j in 0..b - span {
                let width = sorted[j + span] - sorted[j];
                if width < best_width {
                    best_width = width;
                    best = j;
                }
            }
            (sorted[best], sorted[best + span])
        }
    };
    Ok(IntervalEstimate {
        lower,
        upper,
        level: 1.0 - gamma,
        method: method.interval_method(),
        raw_lower: None,
        raw_upper: None,
    })
}
