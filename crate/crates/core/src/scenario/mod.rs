//! Scenario files: loading, saving and validating problem definitions.
//!
//! A scenario is a single JSON document describing the machine park, the
//! production order, the shop-floor grid, filter settings, optimizer
//! configurations and the cost model. Validation reports the violated
//! invariant rather than a serde path.

pub mod report;

use std::path::Path;

use thiserror::Error;

use crate::cpps::{LayoutObjective, Scenario};

/// Schema version accepted by the loader.
pub const SCHEMA_VERSION: u32 = 1;

/// Errors raised while reading, writing or validating scenario files.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot access scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse scenario: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scenario: {0}")]
    Validation(String),
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    scenario_from_str(&std::fs::read_to_string(path)?)
}

/// Parses and validates a scenario from JSON text.
pub fn scenario_from_str(json: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario = serde_json::from_str(json)?;
    validate_scenario(&scenario)?;
    Ok(scenario)
}

/// Writes a scenario as pretty-printed JSON.
pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let mut json = serde_json::to_string_pretty(scenario)?;
    json.push('\n');
    Ok(std::fs::write(path, json)?)
}

/// Checks every scenario invariant; the error message names the first one
/// violated.
pub fn validate_scenario(scenario: &Scenario) -> Result<(), ScenarioError> {
    let invalid = |m: String| Err(ScenarioError::Validation(m));

    if scenario.schema_version != SCHEMA_VERSION {
        return invalid(format!(
            "schema version {} is not supported (expected {SCHEMA_VERSION})",
            scenario.schema_version
        ));
    }

    if scenario.modules.is_empty() {
        return invalid("at least one module is required".to_string());
    }
    for module in &scenario.modules {
        let dup = scenario.modules.iter().filter(|m| m.id == module.id).count();
        if dup > 1 {
            return invalid(format!("module id '{}' is not unique", module.id));
        }
        if !(module.standby_power_w >= 0.0 && module.standby_power_w.is_finite()) {
            return invalid(format!(
                "module '{}' needs a finite non-negative standby power",
                module.id
            ));
        }
        if module.machine_configs.is_empty() {
            return invalid(format!("module '{}' needs at least one machine configuration", module.id));
        }
        for mc in &module.machine_configs {
            let dup = module.machine_configs.iter().filter(|c| c.name == mc.name).count();
            if dup > 1 {
                return invalid(format!(
                    "machine configuration '{}' of module '{}' is not unique",
                    mc.name, module.id
                ));
            }
            if mc.services.is_empty() {
                return invalid(format!(
                    "machine configuration '{}' of module '{}' offers no service",
                    mc.name, module.id
                ));
            }
            for service in &mc.services {
                let at = format!("service '{}' of module '{}'", service.kind, module.id);
                if !(service.base_duration_s > 0.0 && service.base_duration_s.is_finite()) {
                    return invalid(format!("{at} needs a positive base duration"));
                }
                if !(service.processing_power_w >= 0.0 && service.processing_power_w.is_finite())
                {
                    return invalid(format!("{at} needs a finite non-negative processing power"));
                }
                if !(service.cost_rate_per_h >= 0.0 && service.cost_rate_per_h.is_finite()) {
                    return invalid(format!("{at} needs a finite non-negative cost rate"));
                }
                let speed = service.speed_factor;
                if !(speed.min > 0.0 && speed.min.is_finite() && speed.max.is_finite()) {
                    return invalid(format!("{at} needs positive finite speed-factor bounds"));
                }
                if speed.min > speed.max {
                    return invalid(format!("{at} has an empty speed-factor interval"));
                }
                for extra in &service.extra_parameters {
                    if !(extra.interval.min.is_finite()
                        && extra.interval.max.is_finite()
                        && extra.interval.min <= extra.interval.max)
                    {
                        return invalid(format!(
                            "parameter '{}' of {at} needs a non-empty finite interval",
                            extra.name
                        ));
                    }
                }
            }
        }
    }

    if scenario.order.steps.is_empty() {
        return invalid("the production order needs at least one step".to_string());
    }
    if scenario.order.quantity == 0 {
        return invalid("the production order needs a positive quantity".to_string());
    }

    if scenario.grid.width == 0 || scenario.grid.height == 0 {
        return invalid("the grid needs positive dimensions".to_string());
    }

    if let Some(layout) = &scenario.current_layout {
        for (module, pos) in &layout.placement {
            if scenario.module(module).is_none() {
                return invalid(format!("the current layout places unknown module '{module}'"));
            }
            if !scenario.grid.contains(*pos) {
                return invalid(format!(
                    "the current layout places module '{module}' outside the grid"
                ));
            }
        }
        if !layout.is_injective() {
            return invalid("the current layout places two modules on one cell".to_string());
        }
    }

    for (name, threshold) in [
        ("module standby threshold", scenario.filters.standby_module_max_w),
        ("system standby threshold", scenario.filters.standby_config_max_w),
    ] {
        if let Some(value) = threshold {
            if !(value >= 0.0 && value.is_finite()) {
                return invalid(format!("the {name} must be finite and non-negative"));
            }
        }
    }
    if scenario.filters.layout.top_k == Some(0) {
        return invalid("the layout top-k must be positive when set".to_string());
    }
    if let LayoutObjective::Compromise { alpha } = scenario.filters.layout.objective {
        if !(0.0..=1.0).contains(&alpha) {
            return invalid("the compromise weight must lie in [0, 1]".to_string());
        }
    }
    if scenario.filters.parameters.points_per_step == 0 {
        return invalid("the parameter grid needs at least one point per step".to_string());
    }
    if scenario.filters.parameters.top_k == Some(0) {
        return invalid("the parameter top-k must be positive when set".to_string());
    }

    let meta = |e: crate::meta::MetaError| ScenarioError::Validation(e.to_string());
    scenario.ga.validate().map_err(meta)?;
    scenario.sa.validate().map_err(meta)?;
    scenario.weights.weights().map_err(meta)?;
    scenario.weights.reference.validate().map_err(meta)?;

    for (name, value) in [
        ("transport unit time", scenario.costs.transport_unit_time_s),
        ("energy price", scenario.costs.energy_price_per_kwh),
        ("per-evaluation cost", scenario.costs.per_eval_cost_s),
    ] {
        if !(value >= 0.0 && value.is_finite()) {
            return invalid(format!("the {name} must be finite and non-negative"));
        }
    }

    Ok(())
}
