//! Assembles the three exploration layers for a scenario: configuration
//! enumeration, layout placement, and production-parameter tuning.
//!
//! Two regimes share the same declared filter rules:
//! - staged: every generator emits its full consistent sub-space and the
//!   rules prune afterwards;
//! - integrated: generators enforce the no-go thresholds while emitting and
//!   search heuristically (genetic placements, annealed parameters), so
//!   excluded candidates are never materialized.

use std::time::Duration;

use rand_chacha::ChaCha8Rng;

use crate::explore::{FilterRule, Generated, GeneratorError, IntegratedLevels, Keep, LayerSpec};
use crate::meta::{sa_optimize, SaProblem};

use super::configs::{configuration_partials, modules_admissible};
use super::{
    config_feasible, evaluate, layout_bruteforce, layout_feasible, layout_fitness, layout_ga,
    parameter_space, params_feasible, placement_count, raw_assignment_count, scalar_value,
    DomainError, EvaluatedSolution, GridLayout, LayoutMode, ParamMode, ParameterSet,
    PartialSolution, Scenario, SystemConfiguration,
};

/// How the layout layer produces candidate placements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayoutStrategy {
    /// Enumerate every injective placement; ranking rules prune afterwards.
    Exhaustive,
    /// Genetic search emitting at most `top_k` promising placements.
    Genetic { top_k: usize },
}

/// How the parameter layer produces candidate parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParameterStrategy {
    /// Enumerate an evenly spaced speed-factor grid per step.
    Grid { points: usize },
    /// Simulated annealing emitting one optimized set per placement.
    Anneal,
}

/// Which generators the three layers use and whether level-1 thresholds are
/// integrated into generation or applied as post-generation filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerPlan {
    pub layout: LayoutStrategy,
    pub parameters: ParameterStrategy,
    /// When set, generators enforce the standby thresholds while emitting,
    /// so excluded candidates are never materialized.
    pub integrate_thresholds: bool,
}

impl LayerPlan {
    /// Staged filtering: full consistent sub-spaces, pruned after generation.
    pub fn staged(scenario: &Scenario) -> Self {
        Self {
            layout: LayoutStrategy::Exhaustive,
            parameters: Self::parameters_of(scenario),
            integrate_thresholds: false,
        }
    }

    /// Integrated filtering: thresholds apply during generation, and the
    /// layout layer searches genetically when a top-k bound is set (an
    /// unbounded top-k falls back to exhaustive enumeration).
    pub fn integrated(scenario: &Scenario) -> Self {
        let layout = match (scenario.filters.layout.mode, scenario.filters.layout.top_k) {
            (LayoutMode::Ga, Some(top_k)) => LayoutStrategy::Genetic { top_k },
            _ => LayoutStrategy::Exhaustive,
        };
        Self { layout, parameters: Self::parameters_of(scenario), integrate_thresholds: true }
    }

    fn parameters_of(scenario: &Scenario) -> ParameterStrategy {
        match scenario.filters.parameters.mode {
            ParamMode::Grid => {
                ParameterStrategy::Grid { points: scenario.filters.parameters.points_per_step }
            }
            ParamMode::Anneal => ParameterStrategy::Anneal,
        }
    }
}

/// Builds the three-layer stack for the scenario under the given plan.
pub fn build_layers(
    scenario: &Scenario,
    plan: LayerPlan,
) -> Vec<LayerSpec<PartialSolution, Scenario>> {
    vec![
        configuration_layer(scenario, plan),
        layout_layer(scenario, plan),
        parameter_layer(scenario, plan),
    ]
}

fn configuration_layer(
    scenario: &Scenario,
    plan: LayerPlan,
) -> LayerSpec<PartialSolution, Scenario> {
    let apply_thresholds = plan.integrate_thresholds;
    let mut layer = LayerSpec::new(
        0,
        "configurations",
        raw_assignment_count(scenario),
        move |_parent, ctx: &Scenario, _rng: &mut ChaCha8Rng| {
            Ok(Generated::from(configuration_partials(ctx, apply_thresholds)?))
        },
    );
    // Enumeration always enforces consistency; thresholds join when the plan
    // integrates them (their rules stay declared either way).
    let mut integrated = IntegratedLevels::FEASIBILITY;
    if scenario.has_no_go_rules() {
        layer = layer
            .with_filter(FilterRule::no_go(
                "module-standby-threshold",
                |p: &PartialSolution, ctx: &Scenario| modules_admissible(&p.config, ctx),
            ))
            .with_filter(FilterRule::no_go(
                "system-standby-threshold",
                |p: &PartialSolution, ctx: &Scenario| ctx.config_standby_ok(&p.config),
            ));
        if apply_thresholds {
            integrated = IntegratedLevels::BOTH;
        }
    }
    layer
        .with_filter(FilterRule::feasibility(
            "configuration-consistent",
            |p: &PartialSolution, ctx: &Scenario| config_feasible(&p.config, ctx),
        ))
        .with_integrated(integrated)
}

fn layout_layer(scenario: &Scenario, plan: LayerPlan) -> LayerSpec<PartialSolution, Scenario> {
    let strategy = plan.layout;
    let generator = move |parent: Option<&PartialSolution>,
                          ctx: &Scenario,
                          rng: &mut ChaCha8Rng|
          -> Result<Generated<PartialSolution>, GeneratorError> {
        let parent = parent_or_err(parent, "layouts")?;
        let layouts = match strategy {
            LayoutStrategy::Exhaustive => {
                layout_bruteforce(&parent.config.module_set(), &ctx.grid)?
            }
            LayoutStrategy::Genetic { top_k } => layout_ga(&parent.config, ctx, top_k, rng)?,
        };
        Ok(Generated::from(
            layouts.into_iter().map(|l| parent.with_layout(l)).collect::<Vec<_>>(),
        ))
    };

    let mut layer = LayerSpec::new(1, "layouts", layout_domain_size(scenario), generator)
        .with_filter(FilterRule::feasibility(
            "layout-valid",
            |p: &PartialSolution, ctx: &Scenario| {
                p.layout.as_ref().is_some_and(|l| layout_feasible(&p.config, l, &ctx.grid))
            },
        ))
        .with_integrated(IntegratedLevels::FEASIBILITY);
    if let Some(k) = scenario.filters.layout.top_k {
        layer = layer.with_filter(FilterRule::ranking(
            "layout-objective",
            |p: &PartialSolution, ctx: &Scenario| match &p.layout {
                Some(l) => layout_fitness(&p.config, l, ctx).unwrap_or(f64::INFINITY),
                None => f64::INFINITY,
            },
            Keep::Top(k),
        ));
    }
    layer
}

fn parameter_layer(scenario: &Scenario, plan: LayerPlan) -> LayerSpec<PartialSolution, Scenario> {
    let strategy = plan.parameters;
    let generator = move |parent: Option<&PartialSolution>,
                          ctx: &Scenario,
                          rng: &mut ChaCha8Rng|
          -> Result<Generated<PartialSolution>, GeneratorError> {
        let parent = parent_or_err(parent, "parameters")?;
        let space = parameter_space(&parent.config);
        match strategy {
            ParameterStrategy::Grid { points } => Ok(Generated::from(
                space
                    .grid(points)
                    .into_iter()
                    .map(|set| parent.with_params(set, None))
                    .collect::<Vec<_>>(),
            )),
            ParameterStrategy::Anneal => anneal_one(parent, ctx, &space.initial(), rng),
        }
    };

    let mut layer =
        LayerSpec::new(2, "parameters", parameter_domain_size(scenario), generator)
            .with_filter(FilterRule::feasibility(
                "parameters-in-bounds",
                |p: &PartialSolution, _ctx: &Scenario| {
                    p.params.as_ref().is_some_and(|params| params_feasible(params, &p.config))
                },
            ))
            .with_integrated(IntegratedLevels::FEASIBILITY);
    if matches!(strategy, ParameterStrategy::Grid { .. }) {
        if let Some(k) = scenario.filters.parameters.top_k {
            layer = layer.with_filter(FilterRule::ranking(
                "scalarized-objective",
                |p: &PartialSolution, ctx: &Scenario| {
                    complete_scalar(p, ctx).unwrap_or(f64::INFINITY)
                },
                Keep::Top(k),
            ));
        }
    }
    layer
}

/// Undivided size of the layout sub-space: placements of the largest module
/// set any configuration can use.
fn layout_domain_size(scenario: &Scenario) -> u128 {
    let bound = scenario.order.steps.len().min(scenario.modules.len()) as u64;
    let modules = bound.min(scenario.grid.cells()) as usize;
    placement_count(scenario.grid.cells(), modules)
}

/// Undivided size of the parameter sub-space at the scenario's grid
/// resolution (this is also the projection used when annealing replaces
/// enumeration).
fn parameter_domain_size(scenario: &Scenario) -> u128 {
    let points = scenario.filters.parameters.points_per_step.max(1) as u128;
    (0..scenario.order.steps.len()).fold(1u128, |count, _| count.saturating_mul(points))
}

fn parent_or_err<'a>(
    parent: Option<&'a PartialSolution>,
    layer: &str,
) -> Result<&'a PartialSolution, GeneratorError> {
    parent.ok_or_else(|| {
        Box::new(DomainError::InconsistentSolution(format!(
            "the {layer} layer refines a parent solution and cannot run at the root"
        ))) as GeneratorError
    })
}

/// Scalarized objective of a complete solution, simulated on the fly.
fn complete_scalar(p: &PartialSolution, ctx: &Scenario) -> Result<f64, DomainError> {
    let layout = p.layout_or_err()?;
    let params = p
        .params
        .as_ref()
        .ok_or_else(|| DomainError::InconsistentSolution("parameters missing".to_string()))?;
    let result = evaluate(&p.config, layout, params, ctx)?;
    scalar_value(&result, ctx)
}

/// One simulated-annealing run over a placed configuration's parameters.
struct AnnealObjective<'a> {
    config: &'a SystemConfiguration,
    layout: &'a GridLayout,
    scenario: &'a Scenario,
    space: super::ParameterSpace,
}

impl SaProblem for AnnealObjective<'_> {
    type Payload = ParameterSet;

    fn objective(&self, params: &ParameterSet) -> f64 {
        evaluate(self.config, self.layout, params, self.scenario)
            .and_then(|r| scalar_value(&r, self.scenario))
            .unwrap_or(f64::INFINITY)
    }

    fn neighbor(&self, params: &ParameterSet, rng: &mut ChaCha8Rng) -> ParameterSet {
        self.space.neighbor(params, rng)
    }

    fn feasible(&self, params: &ParameterSet) -> bool {
        self.space.feasible(params)
    }
}

/// Anneals the parameters of one placed configuration and emits a single
/// evaluated candidate. Synthetic time accounts one per-evaluation cost for
/// every simulator call (including the final attaching evaluation) without
/// sleeping.
fn anneal_one(
    parent: &PartialSolution,
    ctx: &Scenario,
    initial: &ParameterSet,
    rng: &mut ChaCha8Rng,
) -> Result<Generated<PartialSolution>, GeneratorError> {
    let layout = parent.layout_or_err()?;
    let problem = AnnealObjective {
        config: &parent.config,
        layout,
        scenario: ctx,
        space: parameter_space(&parent.config),
    };
    let outcome = sa_optimize(&problem, initial.clone(), &ctx.sa, rng)?;
    let result = evaluate(&parent.config, layout, &outcome.best, ctx)?;
    let scalar = scalar_value(&result, ctx)?;
    let candidates =
        vec![parent.with_params(outcome.best, Some(EvaluatedSolution { result, scalar }))];
    let synthetic_time = if ctx.costs.per_eval_cost_s > 0.0 {
        Duration::from_secs_f64(ctx.costs.per_eval_cost_s * (outcome.evaluations + 1) as f64)
    } else {
        Duration::ZERO
    };
    Ok(Generated { candidates, synthetic_time })
}
