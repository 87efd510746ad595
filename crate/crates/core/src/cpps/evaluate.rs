//! Bridges complete solutions to the flow-shop simulator.
//!
//! The configuration's modules become stations at their layout cells, and
//! each order step becomes a simulation step whose effective time is the
//! service's base duration divided by the chosen speed factor.

use crate::des::{simulate, SimModel, SimResult, SimStep, Station};
use crate::meta::scalarize;

use super::{DomainError, GridLayout, ParameterSet, Scenario, SystemConfiguration};

/// Simulates a complete solution and returns the raw objectives.
pub fn evaluate(
    config: &SystemConfiguration,
    layout: &GridLayout,
    params: &ParameterSet,
    scenario: &Scenario,
) -> Result<SimResult, DomainError> {
    if params.steps.len() != config.assignments.len() {
        return Err(DomainError::InconsistentSolution(format!(
            "{} parameter steps for {} assignments",
            params.steps.len(),
            config.assignments.len()
        )));
    }
    let modules = config.module_set();
    let stations = modules
        .iter()
        .map(|id| {
            let cell =
                layout.position(id).ok_or_else(|| DomainError::UnplacedModule(id.clone()))?;
            let standby_power_w = scenario
                .module(id)
                .map(|m| m.standby_power_w)
                .ok_or_else(|| DomainError::InconsistentSolution(format!("unknown module '{id}'")))?;
            Ok(Station { label: id.to_string(), cell: (cell.x, cell.y), standby_power_w })
        })
        .collect::<Result<Vec<_>, DomainError>>()?;
    let steps = config
        .assignments
        .iter()
        .zip(&params.steps)
        .map(|(a, p)| SimStep {
            station: modules.binary_search(&a.module).expect("module set covers assignments"),
            effective_time_s: a.service.base_duration_s / p.speed_factor,
            processing_power_w: a.service.processing_power_w,
            cost_rate_per_h: a.service.cost_rate_per_h,
        })
        .collect();
    let model = SimModel {
        stations,
        steps,
        quantity: scenario.order.quantity,
        transport_unit_time_s: scenario.costs.transport_unit_time_s,
        energy_price_per_kwh: scenario.costs.energy_price_per_kwh,
    };
    Ok(simulate(&model)?)
}

/// Scalarizes a simulation result under the scenario's weights and
/// reference values; lower is better.
pub fn scalar_value(result: &SimResult, scenario: &Scenario) -> Result<f64, DomainError> {
    let weights = scenario.weights.weights()?;
    Ok(scalarize(&result.objectives(), &weights, &scenario.weights.reference))
}
