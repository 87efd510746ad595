//! Reconfigurable production domain: modular production units offering
//! services, system configurations assigning services to order steps,
//! grid layouts placing the chosen modules, and production parameters
//! (speed factors) tuned per step.
//!
//! This module instantiates the three exploration layers:
//! 1. configurations — which module/machine-config/service serves each step,
//! 2. layouts — where the chosen modules sit on the shop-floor grid,
//! 3. parameters — how fast each step runs, evaluated by simulation.

mod configs;
mod evaluate;
mod layers;
mod layout;
mod params;

pub use configs::{generate_configurations, raw_assignment_count};
pub use evaluate::{evaluate, scalar_value};
pub use layers::{build_layers, LayerPlan, LayoutStrategy, ParameterStrategy};
pub use layout::{
    layout_bruteforce, layout_feasible, layout_fitness, layout_ga, placement_count,
    reconfiguration_effort, transport_effort,
};
pub use params::{parameter_space, ParameterSpace};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::des::SimResult;
use crate::meta::{GaConfig, MetaError, ObjectiveWeights, ReferenceValues, SaConfig};

/// Errors raised by domain operations.
#[derive(Debug, Error)]
pub enum DomainError {
    #[error("no admissible module offers service kind '{kind}' required by step {step}")]
    NoFeasibleConfiguration { step: usize, kind: ServiceKind },
    #[error("grid too small: {modules} modules cannot be placed on {cells} cells")]
    GridTooSmall { modules: usize, cells: u64 },
    #[error("module '{0}' is not placed in the layout")]
    UnplacedModule(CppmId),
    #[error("layout objective needs current_layout, which the scenario does not define")]
    MissingCurrentLayout,
    #[error("inconsistent solution: {0}")]
    InconsistentSolution(String),
    #[error(transparent)]
    Optimizer(#[from] MetaError),
    #[error(transparent)]
    Simulation(#[from] crate::des::DesError),
}

/// Identifier of a production module.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CppmId(pub String);

impl std::fmt::Display for CppmId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// A service capability, matched against production-order steps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ServiceKind(pub String);

impl std::fmt::Display for ServiceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// A closed interval of admissible parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub fn contains(&self, value: f64) -> bool {
        value >= self.min && value <= self.max
    }
    pub fn midpoint(&self) -> f64 {
        (self.min + self.max) / 2.0
    }
    pub fn width(&self) -> f64 {
        self.max - self.min
    }
    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.min, self.max)
    }
}

/// A named extra production parameter with its admissible interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtraParameter {
    pub name: String,
    pub interval: Interval,
}

/// A service offered by one machine configuration of a module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Service {
    pub kind: ServiceKind,
    /// Duration at speed factor 1, in seconds.
    pub base_duration_s: f64,
    /// Power drawn while serving, in watts.
    pub processing_power_w: f64,
    /// Operating cost while serving, per hour.
    pub cost_rate_per_h: f64,
    /// Admissible speed factors; effective duration is base / speed.
    pub speed_factor: Interval,
    /// Further tunable parameters; kept at their interval midpoints by the
    /// optimizers, but validated like the speed factor.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_parameters: Vec<ExtraParameter>,
}

/// A machine-level configuration of a module: the services it can offer
/// while the module is set up this way.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineConfig {
    pub name: String,
    pub services: Vec<Service>,
}

/// A cyber-physical production module. Occupies one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cppm {
    pub id: CppmId,
    /// Power drawn while idle, in watts.
    pub standby_power_w: f64,
    pub machine_configs: Vec<MachineConfig>,
}

/// A production order: the service steps every part visits, in sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionOrder {
    pub steps: Vec<ServiceKind>,
    pub quantity: u32,
}

/// Shop-floor grid dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub width: u32,
    pub height: u32,
}

impl Grid {
    pub fn cells(&self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }

    /// All positions in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = GridPos> + '_ {
        (0..self.height).flat_map(move |y| (0..self.width).map(move |x| GridPos { x, y }))
    }

    pub fn contains(&self, pos: GridPos) -> bool {
        pos.x < self.width && pos.y < self.height
    }
}

/// A grid cell position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPos {
    pub x: u32,
    pub y: u32,
}

impl GridPos {
    pub fn manhattan(self, other: GridPos) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

/// Assignment of one order step to a module, machine configuration and
/// service. The service is stored by value so a configuration is
/// self-contained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepAssignment {
    pub module: CppmId,
    pub machine_config: String,
    pub service: Service,
}

/// A system configuration: one assignment per order step, with every used
/// module committed to a single machine configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfiguration {
    pub assignments: Vec<StepAssignment>,
}

impl SystemConfiguration {
    /// Distinct modules used, ascending by id.
    pub fn module_set(&self) -> Vec<CppmId> {
        let mut out: Vec<CppmId> = self.assignments.iter().map(|a| a.module.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// The machine configuration each used module is committed to.
    pub fn machine_config_of(&self, module: &CppmId) -> Option<&str> {
        self.assignments
            .iter()
            .find(|a| &a.module == module)
            .map(|a| a.machine_config.as_str())
    }

    /// Total standby power of the used modules, looked up in the scenario.
    pub fn total_standby_w(&self, scenario: &Scenario) -> f64 {
        self.module_set()
            .iter()
            .filter_map(|id| scenario.module(id))
            .map(|m| m.standby_power_w)
            .sum()
    }
}

/// An injective placement of modules onto grid cells.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridLayout {
    pub placement: BTreeMap<CppmId, GridPos>,
}

impl GridLayout {
    pub fn position(&self, module: &CppmId) -> Option<GridPos> {
        self.placement.get(module).copied()
    }

    /// True when all positions are distinct (one module per cell).
    pub fn is_injective(&self) -> bool {
        let mut cells: Vec<GridPos> = self.placement.values().copied().collect();
        cells.sort();
        cells.windows(2).all(|w| w[0] != w[1])
    }
}

/// Tunable parameters of one order step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepParameters {
    pub speed_factor: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<f64>,
}

/// Production parameters for every order step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterSet {
    pub steps: Vec<StepParameters>,
}

/// Simulation result and scalarized objective of a complete solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluatedSolution {
    pub result: SimResult,
    pub scalar: f64,
}

/// A partial solution as it is refined layer by layer: configuration first,
/// then layout, then parameters (with the evaluation attached when the
/// parameter layer optimized rather than enumerated).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSolution {
    pub config: SystemConfiguration,
    pub layout: Option<GridLayout>,
    pub params: Option<ParameterSet>,
    pub evaluation: Option<EvaluatedSolution>,
}

impl PartialSolution {
    pub fn configured(config: SystemConfiguration) -> Self {
        Self { config, layout: None, params: None, evaluation: None }
    }

    pub fn with_layout(&self, layout: GridLayout) -> Self {
        Self { layout: Some(layout), ..self.clone() }
    }

    pub fn with_params(&self, params: ParameterSet, evaluation: Option<EvaluatedSolution>) -> Self {
        Self { params: Some(params), evaluation, ..self.clone() }
    }

    /// The layout, or an error for payloads before the layout layer.
    pub fn layout_or_err(&self) -> Result<&GridLayout, DomainError> {
        self.layout
            .as_ref()
            .ok_or_else(|| DomainError::InconsistentSolution("layout missing".to_string()))
    }
}

/// How the layout layer searches placements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutMode {
    Ga,
    BruteForce,
}

/// What the layout ranking minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutObjective {
    /// Total transport distance along the order's step sequence.
    Transport,
    /// Modules moved or newly installed relative to the current layout.
    Reconfiguration,
    /// Weighted compromise of both, each normalized by its value for the
    /// current layout (fallback 1 when that baseline is 0 or undefined).
    Compromise { alpha: f64 },
}

/// How the parameter layer treats each layout's parameter space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamMode {
    /// Simulated annealing emits one optimized parameter set per layout.
    Anneal,
    /// Exhaustive enumeration of a per-step speed-factor grid; used for
    /// oracle comparisons against full enumeration.
    Grid,
}

/// Layout-layer filter settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LayoutSettings {
    pub mode: LayoutMode,
    pub objective: LayoutObjective,
    /// Most promising layouts kept per configuration; `null` = unbounded
    /// (which degenerates the genetic search to exhaustive enumeration).
    pub top_k: Option<usize>,
}

impl Default for LayoutSettings {
    fn default() -> Self {
        Self { mode: LayoutMode::Ga, objective: LayoutObjective::Transport, top_k: Some(3) }
    }
}

/// Parameter-layer filter settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParameterSettings {
    pub mode: ParamMode,
    /// Grid resolution per step; also the brute-force projection resolution.
    pub points_per_step: usize,
    /// In grid mode: parameter sets kept per layout after ranking by the
    /// scalarized objective; `null` = keep all.
    pub top_k: Option<usize>,
}

impl Default for ParameterSettings {
    fn default() -> Self {
        Self { mode: ParamMode::Anneal, points_per_step: 5, top_k: None }
    }
}

/// All filter settings of a scenario, grouped by layer.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSettings {
    /// Level-1 no-go: modules whose standby power exceeds this are excluded.
    pub standby_module_max_w: Option<f64>,
    /// Level-1 no-go: configurations whose summed standby power exceeds this
    /// are excluded.
    pub standby_config_max_w: Option<f64>,
    pub layout: LayoutSettings,
    pub parameters: ParameterSettings,
}

/// Objective weights and their normalization references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSettings {
    pub time: f64,
    pub cost: f64,
    pub energy: f64,
    pub reference: ReferenceValues,
}

impl WeightSettings {
    pub fn weights(&self) -> Result<ObjectiveWeights, MetaError> {
        ObjectiveWeights::new(self.time, self.cost, self.energy)
    }
}

/// Cost-model settings shared by simulation and reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSettings {
    /// Seconds of transport per Manhattan cell.
    pub transport_unit_time_s: f64,
    /// Energy price used in the cost objective, per kWh.
    pub energy_price_per_kwh: f64,
    /// Accounted synthetic cost per simulator evaluation, in seconds; lets
    /// reports project evaluation-bound runtimes without sleeping.
    #[serde(default)]
    pub per_eval_cost_s: f64,
}

/// A complete problem scenario: the machine park, the order, the grid,
/// filter settings, optimizer configurations and the cost model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub modules: Vec<Cppm>,
    pub order: ProductionOrder,
    pub grid: Grid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub current_layout: Option<GridLayout>,
    #[serde(default)]
    pub filters: FilterSettings,
    #[serde(default)]
    pub ga: GaConfig,
    #[serde(default)]
    pub sa: SaConfig,
    pub weights: WeightSettings,
    pub costs: CostSettings,
}

impl Scenario {
    pub fn module(&self, id: &CppmId) -> Option<&Cppm> {
        self.modules.iter().find(|m| &m.id == id)
    }

    /// True when the module passes the per-module standby no-go threshold.
    pub fn module_admissible(&self, module: &Cppm) -> bool {
        self.filters
            .standby_module_max_w
            .map_or(true, |max| module.standby_power_w <= max)
    }

    /// True when a configuration passes the summed-standby no-go threshold.
    pub fn config_standby_ok(&self, config: &SystemConfiguration) -> bool {
        self.filters
            .standby_config_max_w
            .map_or(true, |max| config.total_standby_w(self) <= max)
    }

    /// True when any level-1 threshold is configured.
    pub fn has_no_go_rules(&self) -> bool {
        self.filters.standby_module_max_w.is_some() || self.filters.standby_config_max_w.is_some()
    }
}

/// Structural feasibility of a configuration against the scenario: kinds
/// match the order, every used module is committed to one existing machine
/// configuration that offers the assigned service, and the module set fits
/// the grid.
pub fn config_feasible(config: &SystemConfiguration, scenario: &Scenario) -> bool {
    if config.assignments.len() != scenario.order.steps.len() {
        return false;
    }
    for (step, assignment) in config.assignments.iter().enumerate() {
        if assignment.service.kind != scenario.order.steps[step] {
            return false;
        }
        let Some(module) = scenario.module(&assignment.module) else { return false };
        let Some(mc) = module.machine_configs.iter().find(|mc| mc.name == assignment.machine_config)
        else {
            return false;
        };
        if !mc.services.contains(&assignment.service) {
            return false;
        }
        if config.machine_config_of(&assignment.module) != Some(assignment.machine_config.as_str()) {
            return false;
        }
    }
    config.module_set().len() as u64 <= scenario.grid.cells()
}

/// Bounds feasibility of a parameter set against its configuration.
pub fn params_feasible(params: &ParameterSet, config: &SystemConfiguration) -> bool {
    if params.steps.len() != config.assignments.len() {
        return false;
    }
    params.steps.iter().zip(&config.assignments).all(|(p, a)| {
        a.service.speed_factor.contains(p.speed_factor)
            && p.extra.len() == a.service.extra_parameters.len()
            && p.extra
                .iter()
                .zip(&a.service.extra_parameters)
                .all(|(v, bound)| bound.interval.contains(*v))
    })
}
