//! Progressive Type-II censored samples and the generalized progressive
//! hybrid termination rule.
//!
//! A life test puts `n` units on test; at the i-th failure `R_i` survivors
//! are withdrawn. The test stops at `T* = max(x_k, min(T, x_m))`, which
//! guarantees at least `k` failures while capping the duration near `T`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weibull::WeibullParams;

/// `(n, m, k, T, R_1..R_m)` of a generalized progressive hybrid test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensoringPlan {
    n: usize,
    m: usize,
    k: usize,
    #[serde(rename = "T")]
    threshold: f64,
    removals: Vec<usize>,
}

impl CensoringPlan {
    pub fn new(n: usize, m: usize, k: usize, threshold: f64, removals: Vec<usize>) -> Result<Self> {
        if !(1 <= k && k < m && m <= n) {
            return Err(Error::InvalidPlan(format!(
                "need 1 <= k < m <= n, got n={n}, m={m}, k={k}"
            )));
        }
        if !threshold.is_finite() || threshold <= 0.0 {
            return Err(Error::InvalidPlan(format!("T must be finite and > 0, got {threshold}")));
        }
        if removals.len() != m {
            return Err(Error::InvalidPlan(format!(
                "removal scheme has {} entries, expected m = {m}",
                removals.len()
            )));
        }
        let total: usize = removals.iter().sum();
        if total != n - m {
            return Err(Error::InvalidPlan(format!(
                "removals sum to {total}, expected n - m = {}",
                n - m
            )));
        }
        Ok(Self {
            n,
            m,
            k,
            threshold,
            removals,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn removals(&self) -> &[usize] {
        &self.removals
    }

    /// Same plan with a different threshold `T`.
    pub fn with_threshold(&self, threshold: f64) -> Result<Self> {
        Self::new(self.n, self.m, self.k, threshold, self.removals.clone())
    }
}

impl<'de> Deserialize<'de> for CensoringPlan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            m: usize,
            k: usize,
            #[serde(rename = "T")]
            threshold: f64,
            removals: Vec<usize>,
        }
        let r = Raw::deserialize(d)?;
        CensoringPlan::new(r.n, r.m, r.k, r.threshold, r.removals).map_err(serde::de::Error::custom)
    }
}

/// Ordered failure times `x_1 <= ... <= x_m` of a progressive Type-II test.
///
/// Generated samples are strictly increasing. Samples read from data may
/// contain ties.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgressiveSample {
    times: Vec<f64>,
    plan: CensoringPlan,
}

impl ProgressiveSample {
    pub fn new(times: Vec<f64>, plan: CensoringPlan) -> Result<Self> {
        if times.len() != plan.m {
            return Err(Error::Contract(format!(
                "sample has {} failure times but the plan expects m = {}",
                times.len(),
                plan.m
            )));
        }
        if times.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::domain("failure times must be finite and > 0"));
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("failure times must be sorted ascending"));
        }
        Ok(Self { times, plan })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn plan(&self) -> &CensoringPlan {
        &self.plan
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// All m failures before T.
    I,
    /// Between k and m failures by T.
    II,
    /// Fewer than k failures by T; the test runs on to the k-th failure.
    III,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
        })
    }
}

/// Treatment of a failure recorded exactly at the threshold `T`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryRule {
    /// Observation window is `[0, T)`: a failure at exactly `T` is censored
    /// at `T* = T`.
    #[default]
    Open,
    /// Observation window is `[0, T]`: a failure at exactly `T` is observed.
    Closed,
}

impl BoundaryRule {
    #[inline]
    fn observed_by(self, x: f64, threshold: f64) -> bool {
        match self {
            BoundaryRule::Open => x < threshold,
            BoundaryRule::Closed => x <= threshold,
        }
    }
}

/// The observed data of a generalized progressive hybrid censored test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GphcsSample {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "T")]
    pub threshold: f64,
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    #[serde(rename = "D")]
    pub big_d: usize,
    #[serde(rename = "T_star")]
    pub t_star: f64,
    #[serde(rename = "R_star")]
    pub r_star: usize,
    pub times: Vec<f64>,
    #[serde(rename = "removals")]
    pub removals_applied: Vec<usize>,
}

impl GphcsSample {
    /// A complete (uncensored) sample embedded as `D = n`, all `R_i = 0`,
    /// `R* = 0` and `T* = max(times)`. Times are sorted; ties are kept.
    pub fn complete(times: &[f64]) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::domain("complete sample must be non-empty"));
        }
        if times.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::domain("failure times must be finite and > 0"));
        }
        let mut sorted = times.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let t_star = sorted[n - 1];
        Ok(Self {
            n,
            m: n,
            k: n,
            threshold: t_star,
            case_tag: CaseTag::I,
            big_d: n,
            t_star,
            r_star: 0,
            times: sorted,
            removals_applied: vec![0; n],
        })
    }

    /// Checks the structural invariants of a sample built elsewhere
    /// (deserialized, or assembled by hand).
    pub fn validate(&self) -> Result<()> {
        let d = self.big_d;
        if d == 0 || self.times.len() != d || self.removals_applied.len() != d {
            return Err(Error::Contract(format!(
                "D = {d} but {} times and {} removals",
                self.times.len(),
                self.removals_applied.len()
            )));
        }
        if self.times.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::domain("failure times must be finite and > 0"));
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("failure times must be sorted ascending"));
        }
        if !self.t_star.is_finite() || self.t_star < self.times[d - 1] {
            return Err(Error::Contract("T* precedes the last observed failure".into()));
        }
        let removed: usize = self.removals_applied.iter().sum();
        if d + removed + self.r_star != self.n {
            return Err(Error::Contract(format!(
                "D + sum R_i + R* = {} != n = {}",
                d + removed + self.r_star,
                self.n
            )));
        }
        Ok(())
    }

    pub fn removed_before_end(&self) -> usize {
        self.removals_applied.iter().sum()
    }
}

/// Draws a progressive Type-II sample by the uniform-spacings construction.
pub fn generate_progressive<R: Rng + ?Sized>(
    plan: &CensoringPlan,
    p: &WeibullParams,
    rng: &mut R,
) -> ProgressiveSample {
    let m = plan.m;
    // V_i = W_i^(1 / (i + R_m + ... + R_{m-i+1})) and U_i = 1 - V_m ... V_{m-i+1};
    // carried in log form as the cumulative hazard -ln(1 - U_i).
    let mut tail = 0usize;
    let mut log_v = Vec::with_capacity(m);
    for i in 1..=m {
        tail += plan.removals[m - i];
        let w: f64 = 1.0 - rng.random::<f64>();
        log_v.push(w.ln() / (i + tail) as f64);
    }
    let mut times = Vec::with_capacity(m);
    let mut cum_hazard = 0.0;
    for i in 1..=m {
        cum_hazard -= log_v[m - i];
        times.push((cum_hazard / p.beta()).powf(1.0 / p.alpha()));
    }
    for i in 0..m {
        if times[i] <= 0.0 {
            times[i] = f64::MIN_POSITIVE;
        }
        if i > 0 && times[i] <= times[i - 1] {
            times[i] = next_up(times[i - 1]);
        }
    }
    ProgressiveSample {
        times,
        plan: plan.clone(),
    }
}

fn next_up(x: f64) -> f64 {
    debug_assert!(x.is_finite() && x >= 0.0);
    f64::from_bits(x.to_bits() + 1)
}

/// Applies the termination rule `T* = max(x_k, min(T, x_m))`.
pub fn apply_gphcs_rule(sample: &ProgressiveSample, plan: &CensoringPlan) -> Result<GphcsSample> {
    apply_gphcs_rule_with(sample, plan, BoundaryRule::default())
}

pub fn apply_gphcs_rule_with(
    sample: &ProgressiveSample,
    plan: &CensoringPlan,
    boundary: BoundaryRule,
) -> Result<GphcsSample> {
    if sample.times.len() != plan.m || sample.plan.n != plan.n || sample.plan.removals != plan.removals
    {
        return Err(Error::Contract(
            "progressive sample was not generated under this plan".into(),
        ));
    }
    let x = &sample.times;
    let (m, k, threshold) = (plan.m, plan.k, plan.threshold);

    let (case_tag, big_d, t_star) = if boundary.observed_by(x[m - 1], threshold) {
        (CaseTag::I, m, x[m - 1])
    } else if boundary.observed_by(x[k - 1], threshold) {
        let d = x.iter().take_while(|&&xi| boundary.observed_by(xi, threshold)).count();
        (CaseTag::II, d, threshold)
    } else {
        (CaseTag::III, k, x[k - 1])
    };

    let removals_applied = plan.removals[..big_d].to_vec();
    let removed: usize = removals_applied.iter().sum();
    let r_star = plan
        .n
        .checked_sub(big_d + removed)
        .ok_or_else(|| Error::Contract("removals exceed units on test".into()))?;

    Ok(GphcsSample {
        n: plan.n,
        m,
        k,
        threshold,
        case_tag,
        big_d,
        t_star,
        r_star,
        times: x[..big_d].to_vec(),
        removals_applied,
    })
}

pub fn generate_gphcs<R: Rng + ?Sized>(
    plan: &CensoringPlan,
    p: &WeibullParams,
    rng: &mut R,
) -> GphcsSample {
    let progressive = generate_progressive(plan, p, rng);
    apply_gphcs_rule(&progressive, plan).expect("sample generated under its own plan")
}
