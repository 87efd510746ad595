//! End-to-end runs: explore a scenario in one regime and assemble the
//! comparison report row.
//!
//! Three regimes are compared. Brute force enumerates the undivided space
//! (or only projects it when that would exceed the cap). The two layered
//! regimes share the same filter rules but differ in when filters act:
//! `issev1` prunes after each generation stage, `issev2` integrates the
//! filters into the generators themselves.

use crate::cpps::{build_layers, LayerPlan, LayoutStrategy, ParameterStrategy, PartialSolution, Scenario};
use crate::explore::{
    explore, explore_bruteforce, ExplorationStats, ExploreError, DEFAULT_BRUTEFORCE_CAP,
};
use crate::scenario::report::{Method, ReportRow};

/// The exploration regime to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Undivided enumeration of the whole solution space.
    Brute,
    /// Layered exploration with staged (post-generation) filtering.
    IsseV1,
    /// Layered exploration with integrated (in-generation) filtering.
    IsseV2,
}

impl Mode {
    fn method(self) -> Method {
        match self {
            Mode::Brute => Method::Brute,
            Mode::IsseV1 => Method::IsseV1,
            Mode::IsseV2 => Method::IsseV2,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(Mode::Brute),
            "issev1" => Ok(Mode::IsseV1),
            "issev2" => Ok(Mode::IsseV2),
            other => Err(format!("unknown mode '{other}' (expected brute, issev1 or issev2)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.method().fmt(f)
    }
}

/// Options of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub mode: Mode,
    /// Master seed; all random streams derive from it.
    pub seed: u64,
    /// Worker count; results are identical for any value.
    pub parallelism: usize,
    /// Overrides the scenario's layout top-k when set.
    pub top_k: Option<usize>,
    /// Overrides the scenario's accounted per-evaluation cost when set.
    pub per_eval_cost_s: Option<f64>,
    /// Enumeration cap for brute force; beyond it the run only projects.
    pub brute_cap: u128,
}

impl RunOptions {
    /// Default options for a mode: seed 0, one worker, scenario settings.
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            seed: 0,
            parallelism: 1,
            top_k: None,
            per_eval_cost_s: None,
            brute_cap: DEFAULT_BRUTEFORCE_CAP,
        }
    }
}

/// Outcome of one run: the report row, the surviving solutions and the
/// full per-layer statistics.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub row: ReportRow,
    /// Complete solutions, empty when enumeration was skipped.
    pub finals: Vec<PartialSolution>,
    pub stats: ExplorationStats,
    /// Combinations enumerated by brute force.
    pub enumerated: Option<u64>,
    /// Combinations brute force rejected as infeasible.
    pub infeasible: Option<u64>,
}

/// Runs the scenario in the requested regime.
pub fn run(scenario: &Scenario, options: &RunOptions) -> Result<RunOutcome, ExploreError> {
    let mut scenario = scenario.clone();
    if let Some(k) = options.top_k {
        scenario.filters.layout.top_k = Some(k);
    }
    if let Some(cost) = options.per_eval_cost_s {
        scenario.costs.per_eval_cost_s = cost;
    }
    match options.mode {
        Mode::Brute => run_brute(&scenario, options),
        Mode::IsseV1 => run_layered(&scenario, LayerPlan::staged(&scenario), options),
        Mode::IsseV2 => run_layered(&scenario, LayerPlan::integrated(&scenario), options),
    }
}

fn run_layered(
    scenario: &Scenario,
    plan: LayerPlan,
    options: &RunOptions,
) -> Result<RunOutcome, ExploreError> {
    let layers = build_layers(scenario, plan);
    let out = explore(&layers, scenario, options.seed, options.parallelism)?;
    let layer = |i: usize| &out.stats.per_layer[i];
    let row = ReportRow {
        method: options.mode.method(),
        p: Some(layer(0).survivors),
        l: Some(layer(1).survivors),
        n: Some(layer(2).survivors),
        t_p_s: Some(layer(0).time.as_secs_f64()),
        t_l_s: Some(layer(1).time.as_secs_f64()),
        t_n_min_s: Some(layer(2).max_node_time.as_secs_f64()),
        t_n_max_s: Some(layer(2).time.as_secs_f64()),
        t_tot_min_s: Some(out.stats.t_min.as_secs_f64()),
        t_tot_max_s: Some(out.stats.t_max.as_secs_f64()),
        estimated_count: out.stats.estimated_bruteforce.count,
        estimated_time_s: estimated_time(out.stats.estimated_bruteforce.count, scenario),
        estimated_only: false,
    };
    Ok(RunOutcome { row, finals: out.finals, stats: out.stats, enumerated: None, infeasible: None })
}

/// Brute force ignores heuristics and thresholds: staged generators expand
/// the full consistent space, parameters on the projection grid, and only
/// the whole-solution feasibility check prunes at the end.
fn bruteforce_plan(scenario: &Scenario) -> LayerPlan {
    LayerPlan {
        layout: LayoutStrategy::Exhaustive,
        parameters: ParameterStrategy::Grid {
            points: scenario.filters.parameters.points_per_step,
        },
        integrate_thresholds: false,
    }
}

fn run_brute(scenario: &Scenario, options: &RunOptions) -> Result<RunOutcome, ExploreError> {
    let layers = build_layers(scenario, bruteforce_plan(scenario));
    match explore_bruteforce(&layers, scenario, options.seed, options.brute_cap) {
        Ok(out) => {
            let total = out.stats.per_layer[0].time.as_secs_f64();
            let row = ReportRow {
                method: Method::Brute,
                p: None,
                l: None,
                n: Some(out.finals.len() as u64),
                t_p_s: None,
                t_l_s: None,
                t_n_min_s: Some(total),
                t_n_max_s: Some(total),
                t_tot_min_s: Some(out.stats.t_min.as_secs_f64()),
                t_tot_max_s: Some(out.stats.t_max.as_secs_f64()),
                estimated_count: out.stats.estimated_bruteforce.count,
                estimated_time_s: estimated_time(out.stats.estimated_bruteforce.count, scenario),
                estimated_only: false,
            };
            Ok(RunOutcome {
                row,
                finals: out.finals,
                stats: out.stats,
                enumerated: Some(out.enumerated),
                infeasible: Some(out.infeasible),
            })
        }
        // An oversized space is a result, not a failure: report projections.
        Err(ExploreError::SpaceTooLarge { count, .. }) => {
            let row = ReportRow {
                method: Method::Brute,
                p: None,
                l: None,
                n: None,
                t_p_s: None,
                t_l_s: None,
                t_n_min_s: None,
                t_n_max_s: None,
                t_tot_min_s: None,
                t_tot_max_s: None,
                estimated_count: count,
                estimated_time_s: estimated_time(count, scenario),
                estimated_only: true,
            };
            let stats = ExplorationStats {
                per_layer: Vec::new(),
                t_min: std::time::Duration::ZERO,
                t_max: std::time::Duration::ZERO,
                estimated_bruteforce: crate::explore::CountEstimate {
                    count,
                    saturated: false,
                },
            };
            Ok(RunOutcome { row, finals: Vec::new(), stats, enumerated: None, infeasible: None })
        }
        Err(e) => Err(e),
    }
}

/// Projected enumeration time at the accounted per-evaluation cost.
fn estimated_time(count: u128, scenario: &Scenario) -> Option<f64> {
    let cost = scenario.costs.per_eval_cost_s;
    (cost > 0.0).then(|| count as f64 * cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpps::{test_fixtures, ParamMode};

    /// Tiny scenario with grid parameters and unbounded rankings, so all
    /// three regimes agree exactly.
    fn oracle_scenario() -> Scenario {
        let mut scenario = test_fixtures::tiny_scenario();
        scenario.filters.layout.top_k = None;
        scenario.filters.parameters.mode = ParamMode::Grid;
        scenario.filters.parameters.points_per_step = 2;
        scenario
    }

    fn run_mode(scenario: &Scenario, mode: Mode) -> RunOutcome {
        run(scenario, &RunOptions::new(mode)).unwrap()
    }

    #[test]
    fn all_three_regimes_find_the_same_solutions() {
        let scenario = oracle_scenario();
        let brute = run_mode(&scenario, Mode::Brute);
        let v1 = run_mode(&scenario, Mode::IsseV1);
        let v2 = run_mode(&scenario, Mode::IsseV2);
        assert_eq!(v1.finals, brute.finals);
        assert_eq!(v2.finals, brute.finals);
        assert_eq!(brute.row.n, Some(160));
        assert_eq!(v1.row.n, Some(160));
    }

    #[test]
    fn layered_rows_expose_the_funnel() {
        let scenario = oracle_scenario();
        let out = run_mode(&scenario, Mode::IsseV1);
        assert_eq!(out.row.p, Some(4));
        assert_eq!(out.row.l, Some(40));
        assert_eq!(out.row.n, Some(160));
        assert!(out.row.t_tot_min_s.unwrap() <= out.row.t_tot_max_s.unwrap());
        assert!(out.row.t_n_min_s.unwrap() <= out.row.t_n_max_s.unwrap());
        assert_eq!(out.row.estimated_count, 4 * 12 * 4);
        assert!(out.row.estimated_time_s.is_none(), "no per-evaluation cost configured");
    }

    #[test]
    fn brute_rows_have_no_layer_split() {
        let scenario = oracle_scenario();
        let out = run_mode(&scenario, Mode::Brute);
        assert_eq!(out.row.p, None);
        assert_eq!(out.row.l, None);
        assert_eq!(out.enumerated, Some(160));
        assert_eq!(out.infeasible, Some(0));
        assert!(!out.row.estimated_only);
    }

    #[test]
    fn oversized_spaces_project_instead_of_enumerating() {
        let scenario = oracle_scenario();
        let mut options = RunOptions::new(Mode::Brute);
        options.brute_cap = 10;
        options.per_eval_cost_s = Some(1.0);
        let out = run(&scenario, &options).unwrap();
        assert!(out.row.estimated_only);
        assert_eq!(out.row.n, None);
        assert_eq!(out.row.estimated_count, 4 * 12 * 4);
        assert_eq!(out.row.estimated_time_s, Some(192.0));
        assert!(out.finals.is_empty());
    }

    #[test]
    fn top_k_override_narrows_the_layout_layer() {
        let scenario = oracle_scenario();
        let mut options = RunOptions::new(Mode::IsseV1);
        options.top_k = Some(1);
        let out = run(&scenario, &options).unwrap();
        assert_eq!(out.row.p, Some(4));
        assert_eq!(out.row.l, Some(4), "one placement kept per configuration");
        assert_eq!(out.row.n, Some(16));
    }

    #[test]
    fn mode_parsing_matches_labels() {
        for mode in [Mode::Brute, Mode::IsseV1, Mode::IsseV2] {
            assert_eq!(mode.to_string().parse::<Mode>().unwrap(), mode);
        }
        assert!("fast".parse::<Mode>().is_err());
    }
}
