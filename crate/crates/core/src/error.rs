use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("two terms lie within the merge tolerance of frequency {0}")]
    AmbiguousMatch(f64),
    #[error("quadrature node budget of {budget} exhausted (error estimate {error:e}, tolerance {tolerance:e})")]
    QuadratureBudgetExceeded {
        budget: usize,
        error: f64,
        tolerance: f64,
    },
    #[error("polynomial expansion needs {terms} terms, cap is {cap}")]
    TermBlowup { terms: usize, cap: usize },
    #[error("level {j_max} is below the required level {required}")]
    JMaxTooSmall { j_max: u32, required: u32 },
    #[error("polynomial is not real-valued: {0}")]
    NotRealValued(String),
    #[error("principal value undefined at singular point {0}")]
    SingularPoint(f64),
    #[error("infeasible ensemble specification: {0}")]
    InfeasibleSpec(String),
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
