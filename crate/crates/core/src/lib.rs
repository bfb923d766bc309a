//! Reliability inference for K-out-of-N:G systems of Weibull components
//! observed under generalized progressive hybrid censoring.
//!
//! The crate covers the component lifetime law ([`weibull`]), system
//! reliability ([`koon`]), sample generation and the termination rule
//! ([`censoring`]), maximum likelihood with Wald and delta-method intervals
//! ([`frequentist`]), Metropolis-within-Gibbs posterior sampling ([`bayes`]),
//! and the replicated simulation harness ([`mcsim`]).
//!
//! Throughout, `beta` is a *rate*: `F(x) = 1 - exp(-beta * x^alpha)`.

pub mod analysis;
pub mod bayes;
pub mod censoring;
pub mod dataset;
pub mod error;
pub mod frequentist;
pub mod koon;
pub mod mcsim;
pub mod special;
pub mod weibull;

pub use censoring::{BoundaryRule, CaseTag, CensoringPlan, GphcsSample, ProgressiveSample};
pub use error::{Error, Result};
pub use koon::{GradientForm, ReliabilityGradient, SystemSpec};
pub use weibull::WeibullParams;
