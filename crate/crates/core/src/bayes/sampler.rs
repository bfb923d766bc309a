//! Metropolis-within-Gibbs sampler with fixed normal random-walk proposals.
//!
//! Each sweep updates `alpha` against the previous `beta`, then `beta`
//! against the freshly updated `alpha`. Proposal standard deviations are the
//! asymptotic standard errors of the MLE and stay fixed for the whole run.

use std::io::Write;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Posterior, PriorSpec};
use crate::censoring::GphcsSample;
use crate::error::{Error, Result};
use crate::frequentist::FitResult;
use crate::koon::SystemSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityTarget {
    pub spec: SystemSpec,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcOptions {
    /// Retained draws `B`.
    pub draws: usize,
    pub burn_in: usize,
    /// Keep every `thin`-th sweep after burn-in.
    pub thin: usize,
    /// Overrides the proposal standard deviations taken from the fit.
    #[serde(skip)]
    pub proposal_sd: Option<(f64, f64)>,
    /// Keeps `alpha` at its initial value and samples `beta` only.
    #[serde(skip)]
    pub hold_alpha: bool,
}

impl Default for McmcOptions {
    fn default() -> Self {
        Self {
            draws: 10_000,
            burn_in: 2_000,
            thin: 1,
            proposal_sd: None,
            hold_alpha: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSample {
    pub draws_alpha: Vec<f64>,
    pub draws_beta: Vec<f64>,
    pub draws_reliability: Option<Vec<f64>>,
    pub burn_in: usize,
    /// Fraction of sweeps in which a proposal different from the current
    /// state was accepted.
    pub accept_rate_alpha: f64,
    pub accept_rate_beta: f64,
    pub seed: Option<u64>,
}

impl PosteriorSample {
    pub fn len(&self) -> usize {
        self.draws_alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws_alpha.is_empty()
    }

    /// Writes `iter,alpha,beta,reliability` rows; `reliability` is empty
    /// when no target was tracked.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "iter,alpha,beta,reliability")?;
        for i in 0..self.len() {
            let r = self
                .draws_reliability
                .as_ref()
                .map(|r| r[i].to_string())
                .unwrap_or_default();
            writeln!(out, "{},{},{},{}", i + 1, self.draws_alpha[i], self.draws_beta[i], r)?;
        }
        Ok(())
    }
}

#[inline]
fn accept<R: Rng + ?Sized>(rng: &mut R, log_ratio: f64) -> bool {
    let u: f64 = rng.random();
    u.ln() < log_ratio
}

pub fn mh_sample<R: Rng + ?Sized>(
    s: &GphcsSample,
    prior: &PriorSpec,
    init: &FitResult,
    target: Option<ReliabilityTarget>,
    options: &McmcOptions,
    rng: &mut R,
) -> Result<PosteriorSample> {
    if options.draws == 0 {
        return Err(Error::domain("MCMC needs at least one retained draw"));
    }
    let thin = options.thin.max(1);
    let (sd_alpha, sd_beta) = match options.proposal_sd {
        Some((a, b)) if a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite() => (a, b),
        Some(bad) => {
            return Err(Error::InvalidProposalScale(format!("{bad:?}")));
        }
        None => {
            let (va, vb) = (init.var_alpha(), init.var_beta());
            if !(va > 0.0 && vb > 0.0 && va.is_finite() && vb.is_finite()) {
                return Err(Error::InvalidProposalScale(format!(
                    "Var(alpha_hat) = {va:e}, Var(beta_hat) = {vb:e}"
                )));
            }
            (va.sqrt(), vb.sqrt())
        }
    };

    let post = Posterior::new(s, prior)?;
    let mut alpha = init.params_hat.alpha();
    let mut beta = init.params_hat.beta();
    let (mut base, mut w) = post.alpha_parts(alpha);

    let b = options.draws;
    let mut draws_alpha = Vec::with_capacity(b);
    let mut draws_beta = Vec::with_capacity(b);
    let mut draws_rel = target.map(|_| Vec::with_capacity(b));
    let (mut moved_alpha, mut moved_beta) = (0usize, 0usize);
    let sweeps = options.burn_in + b * thin;

    for sweep in 0..sweeps {
        if !options.hold_alpha {
            let z: f64 = rng.sample(StandardNormal);
            let proposal = alpha + sd_alpha * z;
            let (base_prop, w_prop) = post.alpha_parts(proposal);
            let log_ratio = (base_prop - beta * w_prop) - (base - beta * w);
            if accept(rng, log_ratio) && proposal != alpha {
                alpha = proposal;
                (base, w) = (base_prop, w_prop);
                moved_alpha += 1;
            }
        }

        let z: f64 = rng.sample(StandardNormal);
        let proposal = beta + sd_beta * z;
        let lp_cur = post.log_cond_beta_given_w(w, beta);
        let lp_prop = post.log_cond_beta_given_w(w, proposal);
        if accept(rng, lp_prop - lp_cur) && proposal != beta {
            beta = proposal;
            moved_beta += 1;
        }

        if sweep >= options.burn_in && (sweep - options.burn_in) % thin == thin - 1 {
            draws_alpha.push(alpha);
            draws_beta.push(beta);
            if let (Some(out), Some(tg)) = (draws_rel.as_mut(), target.as_ref()) {
                let r = (-beta * tg.t.powf(alpha)).exp();
                out.push(tg.spec.reliability_from_component(r));
            }
        }
    }

    Ok(PosteriorSample {
        draws_alpha,
        draws_beta,
        draws_reliability: draws_rel,
        burn_in: options.burn_in,
        accept_rate_alpha: if options.hold_alpha { 0.0 } else { moved_alpha as f64 / sweeps as f64 },
        accept_rate_beta: moved_beta as f64 / sweeps as f64,
        seed: None,
    })
}
