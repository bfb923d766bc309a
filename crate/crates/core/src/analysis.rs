//! End-to-end analysis of one data set: build the censored sample, fit by
//! maximum likelihood, sample the posterior, and collect every estimate and
//! interval in one report.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bayes::{self, mh_sample, BayesResult, CredibleMethod, McmcOptions, PriorSpec, ReliabilityTarget};
use crate::censoring::{apply_gphcs_rule, CensoringPlan, GphcsSample, ProgressiveSample};
use crate::error::{Error, Result};
use crate::frequentist::{
    aci_param, aci_reliability, fit, ks_test, mle_system_reliability, FitResult, IntervalEstimate,
    KsResult, Parameter, SolverOptions,
};
use crate::koon::SystemSpec;

/// Label attached to every reported `beta`.
pub const BETA_LABEL: &str = "rate, time^(-alpha)";

/// How the input data relate to the censoring plan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputMode {
    /// The data are already the `m` ordered failure times of a progressive
    /// Type-II test run under the plan's removals.
    Progressive,
    /// The data are raw lifetimes of at least `n` units; withdrawals are
    /// simulated (see [`simulate_withdrawal`]).
    #[default]
    Raw,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub plan: CensoringPlan,
    pub mode: InputMode,
    pub spec: SystemSpec,
    pub t: f64,
    pub prior: PriorSpec,
    pub mcmc: McmcOptions,
    pub gamma: f64,
    pub hpd_method: CredibleMethod,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEstimates {
    pub alpha: f64,
    pub beta: f64,
    pub reliability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalSet {
    pub alpha: IntervalEstimate,
    pub beta: IntervalEstimate,
    pub reliability: IntervalEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub settings: AnalysisSettings,
    pub beta_parameterization: String,
    pub sample: GphcsSample,
    pub fit: FitResult,
    pub mle: PointEstimates,
    pub aci: IntervalSet,
    pub bayes: BayesResult,
    pub bayes_estimates: PointEstimates,
    pub credible: IntervalSet,
    pub accept_rate_alpha: f64,
    pub accept_rate_beta: f64,
    /// Kolmogorov-Smirnov test against the fitted law; only for complete
    /// samples.
    pub gof: Option<KsResult>,
}

/// Runs a progressive Type-II test on the given unit lifetimes: at the i-th
/// failure, `R_i` surviving units are withdrawn uniformly at random. When
/// more than `n` lifetimes are supplied, `n` of them are first drawn at
/// random to be the units on test.
pub fn simulate_withdrawal<R: Rng + ?Sized>(
    lifetimes: &[f64],
    plan: &CensoringPlan,
    rng: &mut R,
) -> Result<ProgressiveSample> {
    let n = plan.n();
    if lifetimes.len() < n {
        return Err(Error::domain(format!(
            "raw mode needs at least n = {n} lifetimes, got {}",
            lifetimes.len()
        )));
    }
    let mut alive: Vec<f64> = if lifetimes.len() == n {
        lifetimes.to_vec()
    } else {
        index::sample(rng, lifetimes.len(), n)
            .into_iter()
            .map(|i| lifetimes[i])
            .collect()
    };
    alive.sort_by(f64::total_cmp);

    let mut observed = Vec::with_capacity(plan.m());
    for &r in plan.removals() {
        observed.push(alive.remove(0));
        let mut drop = index::sample(rng, alive.len(), r).into_vec();
        drop.sort_unstable_by(|a, b| b.cmp(a));
        for i in drop {
            alive.remove(i);
        }
    }
    ProgressiveSample::new(observed, plan.clone())
}

fn is_complete(s: &GphcsSample) -> bool {
    s.big_d == s.n && s.r_star == 0 && s.removals_applied.iter().all(|&r| r == 0)
}

/// Builds the censored sample from the data according to `settings.mode`.
pub fn build_sample(data: &[f64], settings: &AnalysisSettings) -> Result<GphcsSample> {
    let progressive = match settings.mode {
        InputMode::Progressive => {
            let mut times = data.to_vec();
            times.sort_by(f64::total_cmp);
            ProgressiveSample::new(times, settings.plan.clone())?
        }
        InputMode::Raw => {
            let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
            rng.set_stream(1);
            simulate_withdrawal(data, &settings.plan, &mut rng)?
        }
    };
    apply_gphcs_rule(&progressive, &settings.plan)
}

pub fn analyze(data: &[f64], settings: &AnalysisSettings) -> Result<AnalysisReport> {
    let sample = build_sample(data, settings)?;
    analyze_sample(sample, settings)
}

/// Runs the inference pipeline on an already-censored sample.
pub fn analyze_sample(sample: GphcsSample, settings: &AnalysisSettings) -> Result<AnalysisReport> {
    let (spec, t, gamma) = (settings.spec, settings.t, settings.gamma);
    let fit = fit(&sample, &SolverOptions::default())?;
    let mle = PointEstimates {
        alpha: fit.params_hat.alpha(),
        beta: fit.params_hat.beta(),
        reliability: mle_system_reliability(&fit, &spec, t)?,
    };
    let aci = IntervalSet {
        alpha: aci_param(&fit, Parameter::Alpha, gamma)?,
        beta: aci_param(&fit, Parameter::Beta, gamma)?,
        reliability: aci_reliability(&fit, &spec, t, gamma)?,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let ps = mh_sample(
        &sample,
        &settings.prior,
        &fit,
        Some(ReliabilityTarget { spec, t }),
        &settings.mcmc,
        &mut rng,
    )?;
    let bayes = bayes::self_estimates(&ps, gamma, settings.hpd_method)?;
    let bayes_estimates = PointEstimates {
        alpha: bayes.alpha_se,
        beta: bayes.beta_se,
        reliability: bayes.reliability_se.expect("target was set"),
    };
    let credible = IntervalSet {
        alpha: bayes.alpha_interval.clone(),
        beta: bayes.beta_interval.clone(),
        reliability: bayes.reliability_interval.clone().expect("target was set"),
    };

    let gof = if is_complete(&sample) {
        Some(ks_test(&sample.times, &fit.params_hat)?)
    } else {
        None
    };

    Ok(AnalysisReport {
        settings: settings.clone(),
        beta_parameterization: BETA_LABEL.to_string(),
        sample,
        fit,
        mle,
        aci,
        bayes,
        bayes_estimates,
        credible,
        accept_rate_alpha: ps.accept_rate_alpha,
        accept_rate_beta: ps.accept_rate_beta,
        gof,
    })
}

/// Complete-sample fit and Kolmogorov-Smirnov test.
pub fn goodness_of_fit(times: &[f64]) -> Result<(FitResult, KsResult)> {
    let f = fit(&GphcsSample::complete(times)?, &SolverOptions::default())?;
    let ks = ks_test(times, &f.params_hat)?;
    Ok((f, ks))
}
