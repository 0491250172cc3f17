//! Makespan scheduling with a cap of `k` jobs per machine.
//!
//! The crate contains online, ordinal and bounded-migration schedulers,
//! adversarial drivers that replay lower-bound constructions against any
//! scheduler, exact offline solvers used as ratio denominators, and a small
//! class-constrained variant.

pub mod adversary;
pub mod clcs;
pub mod constant;
pub mod error;
pub mod harness;
pub mod model;
pub mod online;
pub mod oracle;
pub mod ordinal;
pub mod robust;
pub mod rounding;

pub use error::{Error, Result};
pub use model::{
    check_feasible, loads, makespan, Instance, Job, JobId, MachineId, MigrationRecord, Move,
    Schedule, Trace, Violation,
};
pub use online::{build_scheduler, run_stream, OnlineScheduler, SchedulerDecision};
pub use oracle::{brute_opt, exact_opt, lower_bound, sorted_round_robin, OracleResult};
