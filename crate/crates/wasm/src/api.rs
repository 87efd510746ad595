//! Host-testable implementation behind the browser bindings: every
//! operation takes and returns JSON strings.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use solex_core::cpps::{
    evaluate, generate_configurations, layout_ga, parameter_space, scalar_value, GridLayout,
    ParameterSet, ParameterSpace, PartialSolution, Scenario, SystemConfiguration,
};
use solex_core::meta::{sa_optimize, SaProblem};
use solex_core::scenario::report::{write_report, ReportFormat};
use solex_core::{run, scenario_from_str, Mode, RunOptions};

/// Solutions without an attached evaluation are simulated on demand, up to
/// this many, to pick the best one for display.
const EVALUATION_BUDGET: usize = 1000;

/// The built-in demo scenario, shared with the `scenarios/` fixtures.
pub fn demo_scenario_json() -> String {
    include_str!("../../../scenarios/demo.json").to_string()
}

/// Runs one exploration regime and returns a JSON document with the report
/// row, per-layer statistics, the rendered table and the best solution.
pub fn explore_json(
    scenario_json: &str,
    mode: &str,
    seed: u32,
    top_k: Option<u32>,
    per_eval_cost: Option<f64>,
) -> Result<String, String> {
    let scenario = scenario_from_str(scenario_json).map_err(|e| e.to_string())?;
    let mode: Mode = mode.parse()?;
    let mut options = RunOptions::new(mode);
    options.seed = u64::from(seed);
    options.top_k = top_k.map(|k| k as usize);
    options.per_eval_cost_s = per_eval_cost;
    let outcome = run(&scenario, &options).map_err(|e| e.to_string())?;

    let mut table = Vec::new();
    write_report(std::slice::from_ref(&outcome.row), ReportFormat::Table, &mut table)
        .map_err(|e| e.to_string())?;

    let layers: Vec<serde_json::Value> = outcome
        .stats
        .per_layer
        .iter()
        .map(|l| {
            serde_json::json!({
                "name": l.name,
                "generated": l.generated,
                "survivors": l.survivors,
                "removed_by_level": l.removed_by_level,
            })
        })
        .collect();

    let response = serde_json::json!({
        "row": outcome.row,
        "layers": layers,
        "grid": { "width": scenario.grid.width, "height": scenario.grid.height },
        "current_layout": scenario.current_layout,
        "best": best_solution(&outcome.finals, &scenario),
        "table": String::from_utf8_lossy(&table),
    });
    serde_json::to_string(&response).map_err(|e| e.to_string())
}

/// The lowest-scalar solution, simulating unevaluated ones within a budget.
fn best_solution(finals: &[PartialSolution], scenario: &Scenario) -> Option<serde_json::Value> {
    let mut best: Option<(f64, serde_json::Value)> = None;
    for solution in finals.iter().take(EVALUATION_BUDGET) {
        let (result, scalar) = match &solution.evaluation {
            Some(eval) => (eval.result.clone(), eval.scalar),
            None => {
                let (Some(layout), Some(params)) = (&solution.layout, &solution.params) else {
                    continue;
                };
                let Ok(result) = evaluate(&solution.config, layout, params, scenario) else {
                    continue;
                };
                let Ok(scalar) = scalar_value(&result, scenario) else {
                    continue;
                };
                (result, scalar)
            }
        };
        if best.as_ref().is_none_or(|(s, _)| scalar < *s) {
            let value = serde_json::json!({
                "solution": solution,
                "result": result,
                "scalar": scalar,
            });
            best = Some((scalar, value));
        }
    }
    best.map(|(_, value)| value)
}

/// Parameter annealing over one fixed configuration and layout.
struct ParamAnneal<'a> {
    scenario: &'a Scenario,
    config: &'a SystemConfiguration,
    layout: &'a GridLayout,
    space: &'a ParameterSpace,
}

impl SaProblem for ParamAnneal<'_> {
    type Payload = ParameterSet;

    fn objective(&self, params: &ParameterSet) -> f64 {
        evaluate(self.config, self.layout, params, self.scenario)
            .ok()
            .and_then(|r| scalar_value(&r, self.scenario).ok())
            .unwrap_or(f64::INFINITY)
    }
    fn neighbor(&self, params: &ParameterSet, rng: &mut ChaCha8Rng) -> ParameterSet {
        self.space.neighbor(params, rng)
    }
    fn feasible(&self, params: &ParameterSet) -> bool {
        self.space.feasible(params)
    }
}

/// Anneals the production parameters of the scenario's first configuration
/// on its best genetic layout and returns the full objective trace.
pub fn anneal_trace_json(scenario_json: &str, seed: u32) -> Result<String, String> {
    let scenario = scenario_from_str(scenario_json).map_err(|e| e.to_string())?;
    let configs = generate_configurations(&scenario).map_err(|e| e.to_string())?;
    let config = configs.first().ok_or_else(|| "no configuration available".to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
    let layouts = layout_ga(config, &scenario, 1, &mut rng).map_err(|e| e.to_string())?;
    let layout = layouts.first().ok_or_else(|| "no feasible layout".to_string())?;
    let space = parameter_space(config);
    let problem = ParamAnneal { scenario: &scenario, config, layout, space: &space };
    let outcome =
        sa_optimize(&problem, space.initial(), &scenario.sa, &mut rng).map_err(|e| e.to_string())?;
    let result = evaluate(config, layout, &outcome.best, &scenario).map_err(|e| e.to_string())?;

    let assignments: Vec<serde_json::Value> = config
        .assignments
        .iter()
        .map(|a| {
            serde_json::json!({
                "module": a.module,
                "machine_config": a.machine_config,
                "kind": a.service.kind,
            })
        })
        .collect();
    let response = serde_json::json!({
        "trace": outcome.trace,
        "best_value": outcome.best_value,
        "proposals": outcome.proposals,
        "evaluations": outcome.evaluations,
        "best_params": outcome.best,
        "layout": layout,
        "assignments": assignments,
        "result": result,
    });
    serde_json::to_string(&response).map_err(|e| e.to_string())
}
