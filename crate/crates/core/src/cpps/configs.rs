//! Layer 1: enumeration of system configurations.

use super::{
    DomainError, PartialSolution, Scenario, StepAssignment, SystemConfiguration,
};

/// One selectable offering for an order step.
#[derive(Debug, Clone)]
struct Offering {
    module: usize,
    machine_config: usize,
    service: usize,
}

/// Offerings serving `step`, in registry order (module, config, service).
fn offerings_for_step(scenario: &Scenario, step: usize, apply_thresholds: bool) -> Vec<Offering> {
    let kind = &scenario.order.steps[step];
    let mut out = Vec::new();
    for (mi, module) in scenario.modules.iter().enumerate() {
        if apply_thresholds && !scenario.module_admissible(module) {
            continue;
        }
        for (ci, mc) in module.machine_configs.iter().enumerate() {
            for (si, service) in mc.services.iter().enumerate() {
                if &service.kind == kind {
                    out.push(Offering { module: mi, machine_config: ci, service: si });
                }
            }
        }
    }
    out
}

/// Generates all feasible system configurations in lexicographic order of
/// the per-step offering indices.
///
/// Enumeration integrates the level-1 standby thresholds (inadmissible
/// modules and over-threshold configurations are never emitted) and level-2
/// feasibility: every used module commits to exactly one machine
/// configuration, and the module set fits the grid. Fails when some step's
/// service kind is offered by no admissible module.
pub fn generate_configurations(
    scenario: &Scenario,
) -> Result<Vec<SystemConfiguration>, DomainError> {
    enumerate_configurations(scenario, true)
}

/// Shared enumeration; `apply_thresholds = false` ignores the level-1
/// standby rules (used by the undivided brute-force path).
pub(crate) fn enumerate_configurations(
    scenario: &Scenario,
    apply_thresholds: bool,
) -> Result<Vec<SystemConfiguration>, DomainError> {
    let steps = scenario.order.steps.len();
    let mut options: Vec<Vec<Offering>> = Vec::with_capacity(steps);
    for step in 0..steps {
        let offerings = offerings_for_step(scenario, step, apply_thresholds);
        if offerings.is_empty() {
            return Err(DomainError::NoFeasibleConfiguration {
                step,
                kind: scenario.order.steps[step].clone(),
            });
        }
        options.push(offerings);
    }

    let mut out = Vec::new();
    let mut chosen: Vec<Option<&Offering>> = vec![None; steps];
    descend(scenario, &options, &mut chosen, 0, apply_thresholds, &mut out);
    Ok(out)
}

fn descend<'a>(
    scenario: &Scenario,
    options: &'a [Vec<Offering>],
    chosen: &mut Vec<Option<&'a Offering>>,
    step: usize,
    apply_thresholds: bool,
    out: &mut Vec<SystemConfiguration>,
) {
    if step == options.len() {
        let config = materialize(scenario, chosen);
        // Level-2: the module set must fit the grid.
        if config.module_set().len() as u64 > scenario.grid.cells() {
            return;
        }
        // Level-1: summed standby power of the used modules.
        if apply_thresholds && !scenario.config_standby_ok(&config) {
            return;
        }
        out.push(config);
        return;
    }
    'offering: for offering in &options[step] {
        // Level-2 consistency: one machine configuration per module.
        for prior in chosen[..step].iter().flatten() {
            if prior.module == offering.module && prior.machine_config != offering.machine_config {
                continue 'offering;
            }
        }
        chosen[step] = Some(offering);
        descend(scenario, options, chosen, step + 1, apply_thresholds, out);
        chosen[step] = None;
    }
}

fn materialize(scenario: &Scenario, chosen: &[Option<&Offering>]) -> SystemConfiguration {
    let assignments = chosen
        .iter()
        .map(|o| {
            let o = o.expect("all steps chosen");
            let module = &scenario.modules[o.module];
            let mc = &module.machine_configs[o.machine_config];
            StepAssignment {
                module: module.id.clone(),
                machine_config: mc.name.clone(),
                service: mc.services[o.service].clone(),
            }
        })
        .collect();
    SystemConfiguration { assignments }
}

/// The undivided domain size of the configuration layer: the product over
/// steps of all offerings of the required kind, ignoring thresholds and
/// consistency. This is the \"all combinations\" count a brute-force approach
/// would have to check.
pub fn raw_assignment_count(scenario: &Scenario) -> u128 {
    let mut count: u128 = 1;
    for step in 0..scenario.order.steps.len() {
        let offerings = offerings_for_step(scenario, step, false).len() as u128;
        count = count.saturating_mul(offerings.max(1));
    }
    count
}

/// Wraps enumerated configurations as first-layer partial solutions.
pub(crate) fn configuration_partials(
    scenario: &Scenario,
    apply_thresholds: bool,
) -> Result<Vec<PartialSolution>, DomainError> {
    Ok(enumerate_configurations(scenario, apply_thresholds)?
        .into_iter()
        .map(PartialSolution::configured)
        .collect())
}

/// True when every module used by the configuration passes the per-module
/// standby threshold.
pub fn modules_admissible(config: &SystemConfiguration, scenario: &Scenario) -> bool {
    config
        .module_set()
        .iter()
        .all(|id| scenario.module(id).is_some_and(|m| scenario.module_admissible(m)))
}
