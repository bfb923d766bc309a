use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid censoring plan: {0}")]
    InvalidPlan(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("insufficient information: {0}")]
    InsufficientInformation(String),

    #[error("no root: profiled score has no sign change after {expansions} bracket expansions")]
    NoRoot { expansions: usize },

    #[error("non-convergence after {iterations} iterations (last alpha = {last_alpha})")]
    NonConvergence { iterations: usize, last_alpha: f64 },

    #[error("unstable covariance: {0}")]
    UnstableCovariance(String),

    #[error("invalid proposal scale: {0}")]
    InvalidProposalScale(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cell {cell}: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerical machinery (solver, covariance,
    /// sampler) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::InsufficientInformation(_)
            | Error::NoRoot { .. }
            | Error::NonConvergence { .. }
            | Error::UnstableCovariance(_)
            | Error::InvalidProposalScale(_) => true,
            Error::Cell { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
