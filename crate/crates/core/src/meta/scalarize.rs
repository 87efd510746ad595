//! Weighted-sum scalarization of time / cost / energy objectives.

use super::MetaError;

/// Raw objective values of one evaluated solution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ObjectiveValues {
    pub time_s: f64,
    pub cost: f64,
    pub energy_kwh: f64,
}

/// Positive reference values that normalize each objective before weighting,
/// making the weighted sum dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceValues {
    pub time_s: f64,
    pub cost: f64,
    pub energy_kwh: f64,
}

impl ReferenceValues {
    pub fn validate(&self) -> Result<(), MetaError> {
        if self.time_s > 0.0 && self.cost > 0.0 && self.energy_kwh > 0.0 {
            Ok(())
        } else {
            Err(MetaError::InvalidWeights("reference values must be positive".to_string()))
        }
    }
}

/// Non-negative objective weights; normalized to sum to 1 on construction.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "RawWeights", into = "RawWeights")]
pub struct ObjectiveWeights {
    time: f64,
    cost: f64,
    energy: f64,
}

/// Serialized form; accepts unnormalized weights.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    time: f64,
    cost: f64,
    energy: f64,
}

impl TryFrom<RawWeights> for ObjectiveWeights {
    type Error = MetaError;
    fn try_from(raw: RawWeights) -> Result<Self, MetaError> {
        ObjectiveWeights::new(raw.time, raw.cost, raw.energy)
    }
}

impl From<ObjectiveWeights> for RawWeights {
    fn from(w: ObjectiveWeights) -> Self {
        RawWeights { time: w.time, cost: w.cost, energy: w.energy }
    }
}

impl ObjectiveWeights {
    /// Builds normalized weights. Each must be non-negative and finite and
    /// their sum positive.
    pub fn new(time: f64, cost: f64, energy: f64) -> Result<Self, MetaError> {
        let invalid = |m: &str| Err(MetaError::InvalidWeights(m.to_string()));
        for w in [time, cost, energy] {
            if !w.is_finite() || w < 0.0 {
                return invalid("weights must be finite and non-negative");
            }
        }
        let sum = time + cost + energy;
        if sum <= 0.0 {
            return invalid("at least one weight must be positive");
        }
        Ok(Self { time: time / sum, cost: cost / sum, energy: energy / sum })
    }

    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn cost(&self) -> f64 {
        self.cost
    }
    pub fn energy(&self) -> f64 {
        self.energy
    }
}

/// Scalarizes objectives into a single minimization value:
/// `w_time * time/ref_time + w_cost * cost/ref_cost + w_energy * energy/ref_energy`.
pub fn scalarize(
    values: &ObjectiveValues,
    weights: &ObjectiveWeights,
    refs: &ReferenceValues,
) -> f64 {
    weights.time * values.time_s / refs.time_s
        + weights.cost * values.cost / refs.cost
        + weights.energy * values.energy_kwh / refs.energy_kwh
}
