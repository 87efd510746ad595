//! Layered exploration of huge industrial solution spaces.
//!
//! The `explore` module provides the generic engine: a solution space is
//! divided vertically into layers and horizontally into sub-spaces, with
//! three filter levels (no-go, feasibility, ranking) pruning candidates
//! between layers. The `cpps` module instantiates it for reconfigurable
//! production systems — enumerate system configurations, place modules on a
//! shop-floor grid, and tune production parameters against a discrete-event
//! flow-shop simulation (`des`), using the genetic and annealing optimizers
//! in `meta`. `scenario` handles problem files and comparison reports, and
//! `runner` wires everything into three comparable regimes: undivided brute
//! force, staged filtering, and integrated filtering.

pub mod cpps;
pub mod des;
pub mod explore;
pub mod meta;
pub mod runner;
pub mod scenario;

mod timeclock;

pub use runner::{run, Mode, RunOptions, RunOutcome};
pub use scenario::{load_scenario, scenario_from_str, ScenarioError};
