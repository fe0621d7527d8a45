use std::path::PathBuf;

use crate::state::{State, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("validation failed: {}", first_violation(.0))]
    Validation(Vec<Violation>),

    #[error(
        "conductivity law below floor at rho={rho}, theta={theta}: kappa={kappa} < kappa1*theta^q={floor}"
    )]
    ConstitutiveViolation {
        rho: f64,
        theta: f64,
        kappa: f64,
        floor: f64,
    },

    #[error("tridiagonal solve failed: zero pivot at row {row}")]
    LinearSolve { row: usize },

    #[error("solver failure at t={}: {}", .0.t, .0.reason)]
    Solver(Box<SolverFailure>),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("rate fit error: {0}")]
    Fit(String),

    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config error on key `{key}`: {message}")]
    ConfigKey { key: String, message: String },

    #[error("malformed file {}: {message}", .path.display())]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Details of an integration that could not continue.
#[derive(Debug, Clone)]
pub struct SolverFailure {
    pub t: f64,
    /// Field responsible for the failure, when one can be named.
    pub field: Option<&'static str>,
    pub reason: String,
    /// Last accepted state before the failure, if the run got that far.
    pub last_good: Option<State>,
}

impl Error {
    pub(crate) fn solver(t: f64, field: Option<&'static str>, reason: impl Into<String>) -> Self {
        Error::Solver(Box::new(SolverFailure {
            t,
            field,
            reason: reason.into(),
            last_good: None,
        }))
    }

    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    /// True for errors caused by the integration itself rather than bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::Solver(_) | Error::LinearSolve { .. } | Error::ConstitutiveViolation { .. }
        )
    }
}

fn first_violation(v: &[Violation]) -> String {
    match v {
        [] => "no details".to_string(),
        [one] => one.to_string(),
        [first, rest @ ..] => format!("{first} (and {} more)", rest.len()),
    }
}
