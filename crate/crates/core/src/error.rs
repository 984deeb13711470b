use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A construction was requested that cannot exist.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// A fit had no information to work with.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    /// The fixed-step integrator's local error estimate exceeded its limit.
    #[error("step rejected at s = {s}: local error estimate {estimate:e} exceeds {limit:e}")]
    StepRejected { s: f64, estimate: f64, limit: f64 },
    /// Malformed text input.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
