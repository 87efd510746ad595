//! Simulated annealing with geometric cooling.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::MetaError;

/// Simulated-annealing configuration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaConfig {
    /// Starting temperature; positive.
    pub initial_temperature: f64,
    /// Geometric cooling factor; strictly between 0 and 1, so the
    /// temperature sequence is strictly decreasing.
    pub cooling_factor: f64,
    /// Proposals evaluated at each temperature level.
    pub iterations_per_temperature: usize,
    /// Total proposal budget across all temperature levels.
    pub max_iterations: usize,
    /// Annealing stops once the temperature falls below this; positive.
    pub min_temperature: f64,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            initial_temperature: 1.0,
            cooling_factor: 0.95,
            iterations_per_temperature: 20,
            max_iterations: 2000,
            min_temperature: 1e-4,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<(), MetaError> {
        let invalid = |m: &str| Err(MetaError::InvalidConfig(m.to_string()));
        if !(self.initial_temperature > 0.0) {
            return invalid("initial temperature must be positive");
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return invalid("cooling factor must lie strictly between 0 and 1");
        }
        if self.iterations_per_temperature == 0 {
            return invalid("iterations per temperature must be positive");
        }
        if !(self.min_temperature > 0.0) {
            return invalid("minimum temperature must be positive");
        }
        Ok(())
    }
}

/// A problem simulated annealing can minimize.
pub trait SaProblem {
    type Payload: Clone;

    /// Objective of a feasible payload; lower is better.
    fn objective(&self, payload: &Self::Payload) -> f64;
    /// A random neighbor of `payload`.
    fn neighbor(&self, payload: &Self::Payload, rng: &mut ChaCha8Rng) -> Self::Payload;
    fn feasible(&self, payload: &Self::Payload) -> bool;
}

/// One recorded annealing step, for diagnostics and visualization.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TracePoint {
    /// Proposals consumed so far (0 = initial state).
    pub proposal: u64,
    pub temperature: f64,
    /// Objective of the current state.
    pub current: f64,
    /// Best objective seen so far; non-increasing along the trace.
    pub best: f64,
}

/// Result of a simulated-annealing run.
#[derive(Debug, Clone)]
pub struct SaOutcome<P> {
    /// Best payload encountered, tracked separately from the current state.
    pub best: P,
    pub best_value: f64,
    /// Proposals consumed (feasible or not).
    pub proposals: u64,
    /// Objective evaluations performed (initial state plus each feasible
    /// proposal); infeasible neighbors are rejected without evaluation.
    pub evaluations: u64,
    pub trace: Vec<TracePoint>,
}

/// Metropolis acceptance probability for a candidate worse by `delta > 0` at
/// temperature `temperature`; improvements (`delta <= 0`) have probability 1.
pub fn acceptance_probability(delta: f64, temperature: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else {
        (-delta / temperature).exp()
    }
}

/// The acceptance decision used by [`sa_optimize`].
pub(crate) fn metropolis_accepts(delta: f64, temperature: f64, rng: &mut ChaCha8Rng) -> bool {
    delta <= 0.0 || rng.random::<f64>() < acceptance_probability(delta, temperature)
}

/// Minimizes the objective starting from a feasible `initial` payload.
///
/// Worsening moves are accepted with probability `exp(-delta / T)`;
/// infeasible neighbors are rejected outright (they still consume budget).
/// With a zero budget the initial payload is returned unchanged.
pub fn sa_optimize<Pr: SaProblem>(
    problem: &Pr,
    initial: Pr::Payload,
    config: &SaConfig,
    rng: &mut ChaCha8Rng,
) -> Result<SaOutcome<Pr::Payload>, MetaError> {
    config.validate()?;
    debug_assert!(problem.feasible(&initial), "initial payload must be feasible");

    let mut current = initial;
    let mut current_value = problem.objective(&current);
    let mut evaluations = 1u64;
    let mut best = current.clone();
    let mut best_value = current_value;
    let mut proposals = 0u64;
    let mut temperature = config.initial_temperature;
    let mut trace = vec![TracePoint {
        proposal: 0,
        temperature,
        current: current_value,
        best: best_value,
    }];

    'cooling: while temperature >= config.min_temperature {
        for _ in 0..config.iterations_per_temperature {
            if proposals >= config.max_iterations as u64 {
                break 'cooling;
            }
            proposals += 1;
            let candidate = problem.neighbor(&current, rng);
            if !problem.feasible(&candidate) {
                continue;
            }
            let candidate_value = problem.objective(&candidate);
            evaluations += 1;
            let delta = candidate_value - current_value;
            if metropolis_accepts(delta, temperature, rng) {
                current = candidate;
                current_value = candidate_value;
                if current_value < best_value {
                    best = current.clone();
                    best_value = current_value;
                }
            }
            trace.push(TracePoint {
                proposal: proposals,
                temperature,
                current: current_value,
                best: best_value,
            });
        }
        temperature *= config.cooling_factor;
    }

    Ok(SaOutcome { best, best_value, proposals, evaluations, trace })
}
