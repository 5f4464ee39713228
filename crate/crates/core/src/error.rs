use thiserror::Error;

/// Errors produced by the numerical machinery.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("state outside admissible phase space: {0}")]
    InadmissibleState(String),
    #[error("matrix not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("non-hyperbolic state: {0}")]
    NonHyperbolic(String),
    #[error("genuine nonlinearity failure for family {family}: |c_f| = {c_f_abs:.3e}")]
    GenuineNonlinearity { family: usize, c_f_abs: f64 },
    #[error("Newton iteration failed: {0}")]
    NewtonFailure(String),
    #[error("Lax condition violated: {0}")]
    LaxViolation(String),
    #[error("wave profile construction failed: {0}")]
    ProfileFailure(String),
    #[error("ODE integration failed: {0}")]
    OdeFailure(String),
    #[error("CFL bound violated: {0}")]
    CflViolation(String),
    #[error("solver aborted: {0}")]
    SolverAbort(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("evaluation outside tabulated range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
