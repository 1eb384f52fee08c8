//! Hourly evacuation flight scheduling for a disaster-impacted airport.
//!
//! For each departure hour the evacuating airport may add a flight to any of
//! its ten most popular destinations. A [`SelectionVector`] encodes that
//! choice as ten bits and [`fitness`] scores it from destination popularity,
//! the destination's general-aviation/military capability at arrival, the
//! variability of that capability, and a penalty for scheduling more flights
//! than the evacuating airport can handle.
//!
//! Three solvers share the same objective:
//!
//! - [`oracle::solve_exhaustive`] enumerates all 1024 selections,
//! - [`ga::run_ga`] is a generational genetic algorithm,
//! - [`hybrid::run_hybrid`] is the same GA with individuals sampled from a
//!   trained [`mlp::MlpModel`] injected into every generation.
//!
//! [`scheduler`] runs a solver over all 24 hours of a day and compares
//! solvers across seeds.

pub mod data;
pub mod error;
pub mod fitness;
pub mod ga;
pub mod hybrid;
pub mod mlp;
pub mod oracle;
pub mod scheduler;
pub mod seed;

pub use data::{CandidateTable, CandidateRow, DestinationInfo, HourlyCapability, OperationsRecord};
pub use error::{Error, Result};
pub use fitness::{fitness, popcount, FitnessBreakdown, FitnessWeights, SelectionVector};
pub use ga::{run_ga, GaConfig, GaTrace};
pub use hybrid::{run_hybrid, Approach, HybridConfig};
pub use mlp::{MlpModel, TrainingRow};
pub use oracle::{solve_exhaustive, OracleResult};
pub use scheduler::{build_day_schedule, compare_solvers, DaySchedule, HourlySchedule, Solver};

/// Number of candidate destinations per evacuating airport.
pub const NUM_DESTINATIONS: usize = 10;

/// Hours in a scheduling day.
pub const HOURS_PER_DAY: usize = 24;
