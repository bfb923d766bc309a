//! Replicated simulation of the estimators: generate censored samples under
//! a known truth, fit by maximum likelihood and MCMC, and aggregate average
//! estimates, mean squared errors and average interval widths.
//!
//! Replication `r` draws from its own ChaCha stream derived from
//! `(seed, r, attempt)`, and the reduction runs in replication order, so a
//! cell's report does not depend on the number of worker threads.

mod render;

use std::fmt;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{
    self, credible_interval, mh_sample, CredibleMethod, McmcOptions, PriorSpec, ReliabilityTarget,
};
use crate::censoring::{generate_gphcs, CensoringPlan, GphcsSample};
use crate::error::{Error, Result};
use crate::frequentist::{self, aci_param, aci_reliability, Parameter, SolverOptions};
use crate::koon::{system_reliability, SystemSpec};
use crate::weibull::WeibullParams;

pub use render::{render_estimate_table, render_interval_table, to_csv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeId {
    /// All `n - m` withdrawals at the first failure.
    I,
    /// All withdrawals at the m-th failure.
    II,
    /// One withdrawal at each of the first `n - m` failures.
    III,
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeId::I => "I",
            SchemeId::II => "II",
            SchemeId::III => "III",
        })
    }
}

pub fn build_scheme(scheme: SchemeId, n: usize, m: usize) -> Result<Vec<usize>> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 <= m <= n, got n={n}, m={m}")));
    }
    let extra = n - m;
    let mut r = vec![0; m];
    match scheme {
        SchemeId::I => r[0] = extra,
        SchemeId::II => r[m - 1] = extra,
        SchemeId::III => {
            if extra > m {
                return Err(Error::domain(format!(
                    "scheme III needs n - m <= m, got n - m = {extra}, m = {m}"
                )));
            }
            r[..extra].fill(1);
        }
    }
    Ok(r)
}

fn default_true_params() -> WeibullParams {
    WeibullParams::new(1.5, 1.0).unwrap()
}
fn default_spec() -> SystemSpec {
    SystemSpec::new(5, 3).unwrap()
}
fn default_t_eval() -> f64 {
    0.5
}
fn default_prior() -> PriorSpec {
    PriorSpec::new(3.0, 2.0, 2.5, 2.5).unwrap()
}
fn default_replications() -> usize {
    10_000
}
fn default_draws() -> usize {
    10_000
}
fn default_burn_in() -> usize {
    2_000
}
fn default_gamma() -> f64 {
    0.05
}
fn default_seed() -> u64 {
    20_240_601
}

/// One simulation setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimCell {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    #[serde(rename = "T")]
    pub threshold: f64,
    pub scheme: SchemeId,
    #[serde(default = "default_true_params")]
    pub true_params: WeibullParams,
    #[serde(default = "default_spec")]
    pub spec: SystemSpec,
    #[serde(default = "default_t_eval")]
    pub t_eval: f64,
    #[serde(default = "default_prior")]
    pub prior: PriorSpec,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(rename = "B", default = "default_draws")]
    pub draws: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub hpd_method: CredibleMethod,
}

impl SimCell {
    /// A cell with the default truth, system, prior and MCMC sizes.
    pub fn new(n: usize, m: usize, k: usize, threshold: f64, scheme: SchemeId) -> Self {
        Self {
            label: None,
            n,
            m,
            k,
            threshold,
            scheme,
            true_params: default_true_params(),
            spec: default_spec(),
            t_eval: default_t_eval(),
            prior: default_prior(),
            replications: default_replications(),
            draws: default_draws(),
            burn_in: default_burn_in(),
            gamma: default_gamma(),
            seed: default_seed(),
            hpd_method: CredibleMethod::default(),
        }
    }

    /// Desk-scale sizes: 1000 replications, `B = 2000`, burn-in 500.
    pub fn fast(mut self) -> Self {
        self.replications = 1_000;
        self.draws = 2_000;
        self.burn_in = 500;
        self
    }

    pub fn plan(&self) -> Result<CensoringPlan> {
        let removals = build_scheme(self.scheme, self.n, self.m)?;
        CensoringPlan::new(self.n, self.m, self.k, self.threshold, removals)
    }

    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| {
            format!(
                "n={} m={} k={} T={} scheme {}",
                self.n, self.m, self.k, self.threshold, self.scheme
            )
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.plan()?;
        if self.replications == 0 {
            return Err(Error::domain("replications must be >= 1"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::domain(format!("gamma must be in (0, 1), got {}", self.gamma)));
        }
        if (self.draws as f64) * self.gamma < 2.0 {
            return Err(Error::domain(format!(
                "B = {} is too small for gamma = {}",
                self.draws, self.gamma
            )));
        }
        if !self.t_eval.is_finite() || self.t_eval <= 0.0 {
            return Err(Error::domain(format!("t_eval must be > 0, got {}", self.t_eval)));
        }
        Ok(())
    }

    pub fn truth(&self) -> Result<[f64; 3]> {
        Ok([
            self.true_params.alpha(),
            self.true_params.beta(),
            system_reliability(&self.spec, &self.true_params, self.t_eval)?,
        ])
    }
}

/// Simulation design: an ordered list of cells.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub cells: Vec<SimCell>,
}

impl Design {
    pub fn from_json(text: &str) -> Result<Self> {
        let design: Design = serde_json::from_str(text)?;
        for cell in &design.cells {
            cell.validate().map_err(|e| Error::Cell {
                cell: cell.name(),
                source: Box::new(e),
            })?;
        }
        Ok(design)
    }

    pub fn fast(self) -> Self {
        Design {
            cells: self.cells.into_iter().map(SimCell::fast).collect(),
        }
    }
}

/// Aggregates of one estimated quantity over the replications.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QuantityReport {
    pub truth: f64,
    pub ae_mle: f64,
    pub mse_mle: f64,
    pub ae_bayes: f64,
    pub mse_bayes: f64,
    /// Average bounds and width of the asymptotic interval (unclamped).
    pub aci_lower: f64,
    pub aci_upper: f64,
    pub aw_aci: f64,
    /// Average bounds and width of the credible interval of `hpd_method`.
    pub hpd_lower: f64,
    pub hpd_upper: f64,
    pub aw_hpd: f64,
    pub aw_minwidth: f64,
    pub aw_percentile: f64,
    /// Extension: empirical coverage of the true value.
    pub coverage_aci: f64,
    pub coverage_hpd: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub cell: SimCell,
    pub alpha: QuantityReport,
    pub beta: QuantityReport,
    pub reliability: QuantityReport,
    pub failures: usize,
    pub elapsed_secs: f64,
}

impl CellReport {
    pub fn quantities(&self) -> [(&'static str, &QuantityReport); 3] {
        [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("reliability", &self.reliability),
        ]
    }
}

/// Average and mean squared error of a set of estimates around `truth`.
pub fn average_and_mse(estimates: &[f64], truth: f64) -> (f64, f64) {
    let n = estimates.len() as f64;
    let ae = estimates.iter().sum::<f64>() / n;
    let mse = estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / n;
    (ae, mse)
}

/// Stream for replication `rep`, attempt `attempt` of a cell seeded with
/// `seed`.
pub fn replication_rng(seed: u64, rep: usize, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication_stream_id(rep, attempt));
    rng
}

pub fn replication_stream_id(rep: usize, attempt: usize) -> u64 {
    assert!(attempt < 1 << 16, "attempt index out of range");
    ((rep as u64) << 16) | attempt as u64
}

/// Per-replication results for the three quantities (alpha, beta, R).
#[derive(Clone, Debug)]
struct Replicate {
    mle: [f64; 3],
    bayes: [f64; 3],
    aci: [(f64, f64); 3],
    hpd: [(f64, f64); 3],
    minwidth: [(f64, f64); 3],
    percentile: [(f64, f64); 3],
    failures: usize,
}

fn analyze_replicate(
    cell: &SimCell,
    sample: &GphcsSample,
    rng: &mut ChaCha8Rng,
) -> Result<Replicate> {
    let fit = frequentist::fit(sample, &SolverOptions::default())?;
    let a_ci = aci_param(&fit, Parameter::Alpha, cell.gamma)?;
    let b_ci = aci_param(&fit, Parameter::Beta, cell.gamma)?;
    let r_ci = aci_reliability(&fit, &cell.spec, cell.t_eval, cell.gamma)?;
    let r_hat = frequentist::mle_system_reliability(&fit, &cell.spec, cell.t_eval)?;

    let target = ReliabilityTarget {
        spec: cell.spec,
        t: cell.t_eval,
    };
    let opts = McmcOptions {
        draws: cell.draws,
        burn_in: cell.burn_in,
        ..McmcOptions::default()
    };
    let ps = mh_sample(sample, &cell.prior, &fit, Some(target), &opts, rng)?;
    let rel = ps.draws_reliability.as_deref().expect("target was set");
    let sets: [&[f64]; 3] = [&ps.draws_alpha, &ps.draws_beta, rel];

    let mut bayes_est = [0.0; 3];
    let mut minwidth = [(0.0, 0.0); 3];
    let mut percentile = [(0.0, 0.0); 3];
    for (q, draws) in sets.iter().enumerate() {
        bayes_est[q] = bayes::posterior_mean(draws)?;
        let mw = credible_interval(draws, cell.gamma, CredibleMethod::MinWidth)?;
        let pc = credible_interval(draws, cell.gamma, CredibleMethod::Percentile)?;
        minwidth[q] = (mw.lower, mw.upper);
        percentile[q] = (pc.lower, pc.upper);
    }
    let hpd = match cell.hpd_method {
        CredibleMethod::MinWidth => minwidth,
        CredibleMethod::Percentile => percentile,
    };

    Ok(Replicate {
        mle: [fit.params_hat.alpha(), fit.params_hat.beta(), r_hat],
        bayes: bayes_est,
        aci: [
            (a_ci.lower, a_ci.upper),
            (b_ci.lower, b_ci.upper),
            (r_ci.raw_lower.unwrap(), r_ci.raw_upper.unwrap()),
        ],
        hpd,
        minwidth,
        percentile,
        failures: 0,
    })
}

pub fn run_cell(cell: &SimCell) -> Result<CellReport> {
    let plan = cell.plan().map_err(|e| cell_error(cell, e))?;
    run_cell_with(cell, |rng| generate_gphcs(&plan, &cell.true_params, rng))
}

/// Runs a cell with a caller-supplied sample generator.
pub fn run_cell_with<G>(cell: &SimCell, generate: G) -> Result<CellReport>
where
    G: Fn(&mut ChaCha8Rng) -> GphcsSample + Sync,
{
    let started = Instant::now();
    cell.validate().map_err(|e| cell_error(cell, e))?;
    let truth = cell.truth()?;
    let cap = cell.replications / 10;

    let reps: Vec<Result<Replicate>> = (0..cell.replications)
        .into_par_iter()
        .map(|rep| {
            let mut attempt = 0;
            loop {
                let mut rng = replication_rng(cell.seed, rep, attempt);
                let sample = generate(&mut rng);
                match analyze_replicate(cell, &sample, &mut rng) {
                    Ok(mut r) => {
                        r.failures = attempt;
                        return Ok(r);
                    }
                    Err(e) if e.is_numerical() && attempt < cap => attempt += 1,
                    Err(e) => return Err(e),
                }
            }
        })
        .collect();

    let mut ok = Vec::with_capacity(reps.len());
    for r in reps {
        ok.push(r.map_err(|e| cell_error(cell, e))?);
    }
    let failures: usize = ok.iter().map(|r| r.failures).sum();
    if failures > cap {
        return Err(cell_error(
            cell,
            Error::InsufficientInformation(format!(
                "{failures} failed fits exceed the cap of {cap} ({} replications)",
                cell.replications
            )),
        ));
    }

    let n = ok.len() as f64;
    let mut quantities: Vec<QuantityReport> = Vec::with_capacity(3);
    for q in 0..3 {
        let mle: Vec<f64> = ok.iter().map(|r| r.mle[q]).collect();
        let bayes: Vec<f64> = ok.iter().map(|r| r.bayes[q]).collect();
        let (ae_mle, mse_mle) = average_and_mse(&mle, truth[q]);
        let (ae_bayes, mse_bayes) = average_and_mse(&bayes, truth[q]);
        let mean = |f: &dyn Fn(&Replicate) -> f64| ok.iter().map(f).sum::<f64>() / n;
        let covers = |lo: f64, hi: f64| if lo <= truth[q] && truth[q] <= hi { 1.0 } else { 0.0 };
        quantities.push(QuantityReport {
            truth: truth[q],
            ae_mle,
            mse_mle,
            ae_bayes,
            mse_bayes,
            aci_lower: mean(&|r| r.aci[q].0),
            aci_upper: mean(&|r| r.aci[q].1),
            aw_aci: mean(&|r| r.aci[q].1 - r.aci[q].0),
            hpd_lower: mean(&|r| r.hpd[q].0),
            hpd_upper: mean(&|r| r.hpd[q].1),
            aw_hpd: mean(&|r| r.hpd[q].1 - r.hpd[q].0),
            aw_minwidth: mean(&|r| r.minwidth[q].1 - r.minwidth[q].0),
            aw_percentile: mean(&|r| r.percentile[q].1 - r.percentile[q].0),
            coverage_aci: mean(&|r| covers(r.aci[q].0, r.aci[q].1)),
            coverage_hpd: mean(&|r| covers(r.hpd[q].0, r.hpd[q].1)),
        });
    }
    let reliability = quantities.pop().unwrap();
    let beta = quantities.pop().unwrap();
    let alpha = quantities.pop().unwrap();

    Ok(CellReport {
        cell: cell.clone(),
        alpha,
        beta,
        reliability,
        failures,
        elapsed_secs: started.elapsed().as_secs_f64(),
    })
}

fn cell_error(cell: &SimCell, e: Error) -> Error {
    match e {
        e @ Error::Cell { .. } => e,
        e => Error::Cell {
            cell: cell.name(),
            source: Box::new(e),
        },
    }
}

/// Runs cells in order; replications inside a cell run on `threads` workers
/// (all available cores when `None`).
pub fn run_design(cells: &[SimCell], threads: Option<usize>) -> Result<Vec<CellReport>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| cells.iter().map(run_cell).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn schemes() {
        let mut one = vec![0; 20];
        one[0] = 20;
        assert_eq!(build_scheme(SchemeId::I, 40, 20).unwrap(), one);
        let mut two = vec![0; 20];
        two[19] = 20;
        assert_eq!(build_scheme(SchemeId::II, 40, 20).unwrap(), two);
        let mut three = vec![1; 30];
        three.extend([0; 20]);
        assert_eq!(build_scheme(SchemeId::III, 80, 50).unwrap(), three);
        assert!(build_scheme(SchemeId::III, 80, 30).is_err());
        assert!(build_scheme(SchemeId::I, 10, 11).is_err());
    }

    #[test]
    fn truth_uses_system_reliability() {
        let cell = SimCell::new(40, 20, 10, 1.0, SchemeId::I);
        let t = cell.truth().unwrap();
        assert_eq!(&t[..2], &[1.5, 1.0]);
        assert!((t[2] - 0.8398).abs() < 1e-4);
    }

    #[test]
    fn stream_ids_do_not_collide() {
        let mut seen = HashSet::new();
        for rep in 0..2000 {
            for attempt in 0..4 {
                assert!(seen.insert(replication_stream_id(rep, attempt)));
            }
        }
        use rand::RngCore;
        let a = replication_rng(1, 0, 0).next_u64();
        let b = replication_rng(1, 1, 0).next_u64();
        let c = replication_rng(1, 0, 1).next_u64();
        assert!(a != b && a != c && b != c);
    }

    #[test]
    fn single_replication_aggregation() {
        let mut cell = SimCell::new(30, 20, 12, 80.0, SchemeId::I);
        cell.true_params = WeibullParams::new(0.9, 0.02).unwrap();
        cell.t_eval = 50.0;
        cell.replications = 1;
        cell.draws = 400;
        cell.burn_in = 100;
        let fixed = GphcsSample::complete(&crate::dataset::AIRCON).unwrap();
        let report = run_cell_with(&cell, |_| fixed.clone()).unwrap();
        let fit = frequentist::fit(&fixed, &SolverOptions::default()).unwrap();
        let a = fit.params_hat.alpha();
        assert_eq!(report.alpha.ae_mle, a);
        assert!((report.alpha.mse_mle - (a - 0.9).powi(2)).abs() < 1e-15);
        assert_eq!(report.failures, 0);
    }

    #[test]
    fn failure_cap_names_the_cell() {
        let mut cell = SimCell::new(30, 20, 12, 80.0, SchemeId::I);
        cell.replications = 5;
        cell.draws = 100;
        cell.burn_in = 0;
        cell.label = Some("degenerate".into());
        let bad = GphcsSample::complete(&[2.0, 2.0, 2.0]).unwrap();
        match run_cell_with(&cell, |_| bad.clone()) {
            Err(Error::Cell { cell, source }) => {
                assert_eq!(cell, "degenerate");
                assert!(source.is_numerical());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_design() {
        assert!(run_design(&[], Some(1)).unwrap().is_empty());
        let d = Design::from_json(r#"{"cells": []}"#).unwrap();
        assert!(d.cells.is_empty());
    }

    #[test]
    fn design_validation() {
        let ok = r#"{"cells":[{"n":40,"m":20,"k":10,"T":1.0,"scheme":"I"}]}"#;
        let d = Design::from_json(ok).unwrap();
        assert_eq!(d.cells[0].replications, 10_000);
        assert_eq!(d.cells[0].prior, PriorSpec::new(3.0, 2.0, 2.5, 2.5).unwrap());
        let fast = d.fast();
        assert_eq!((fast.cells[0].replications, fast.cells[0].draws, fast.cells[0].burn_in), (1000, 2000, 500));
        let bad = r#"{"cells":[{"n":40,"m":20,"k":20,"T":1.0,"scheme":"I"}]}"#;
        assert!(matches!(Design::from_json(bad), Err(Error::Cell { .. })));
        let bad = r#"{"cells":[{"n":80,"m":30,"k":10,"T":1.0,"scheme":"III"}]}"#;
        assert!(Design::from_json(bad).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mse_decomposes(est in prop::collection::vec(-10.0f64..10.0, 1..200), truth in -5.0f64..5.0) {
                let (ae, mse) = average_and_mse(&est, truth);
                let n = est.len() as f64;
                let var = est.iter().map(|e| (e - ae).powi(2)).sum::<f64>() / n;
                prop_assert!((mse - (var + (ae - truth).powi(2))).abs() < 1e-10 * mse.max(1.0));
                prop_assert!(mse >= 0.0);
            }
        }
    }
}
