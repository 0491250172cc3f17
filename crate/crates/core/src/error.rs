use thiserror::Error;

/// Errors raised by the models, schedulers, solvers and drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument is outside its domain (non-positive size, bad epsilon, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// More jobs than the `m * k` slots of the machine park.
    #[error("infeasible: {jobs} jobs exceed capacity {capacity} (m * k)")]
    Infeasible { jobs: usize, capacity: usize },

    /// A schedule refers to a job the instance does not contain.
    #[error("unknown job id {0}")]
    UnknownJob(usize),

    /// A machine index outside `1..=m`.
    #[error("machine {machine} out of range 1..={m}")]
    MachineOutOfRange { machine: usize, m: usize },

    /// A scheduler produced a state that breaks the online contract.
    #[error("contract violation at arrival {arrival}: {reason}")]
    ContractViolation { arrival: usize, reason: String },

    /// The instance is too large for an exhaustive routine.
    #[error("instance too large for {what}: {n} jobs (limit {limit})")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    /// Malformed input line.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
