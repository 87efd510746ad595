//! Seeded metaheuristics used as layer generators: a genetic algorithm for
//! combinatorial placement problems and simulated annealing for continuous
//! production parameters, plus weighted-sum scalarization of multi-objective
//! evaluations. Both optimizers are minimizers and fully deterministic under
//! a fixed random stream.

mod ga;
mod sa;
mod scalarize;

pub use ga::{ga_optimize, GaConfig, GaOutcome, GaProblem};
pub use sa::{acceptance_probability, sa_optimize, SaConfig, SaOutcome, SaProblem, TracePoint};
pub use scalarize::{scalarize, ObjectiveValues, ObjectiveWeights, ReferenceValues};

use thiserror::Error;

/// Errors raised by the optimizers and scalarization.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetaError {
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("no feasible individual could be generated to seed the population")]
    NoFeasibleIndividual,
    #[error("invalid objective weights: {0}")]
    InvalidWeights(String),
}
