//! Shared builders for the integration test suite: fixture loading,
//! randomized placement instances and randomized simulation models.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use solex_core::cpps::{
    CostSettings, Cppm, CppmId, FilterSettings, Grid, GridLayout, GridPos, Interval,
    LayoutMode, LayoutObjective, LayoutSettings, MachineConfig, ParamMode, ParameterSettings,
    ProductionOrder, Scenario, Service, ServiceKind, StepAssignment, SystemConfiguration,
};
use solex_core::des::{SimModel, SimStep, Station};
use solex_core::meta::{GaConfig, ReferenceValues, SaConfig};

/// Path of a fixture under the repository's `scenarios/` directory.
pub fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

/// Loads and validates a fixture scenario.
pub fn load(name: &str) -> Scenario {
    solex_core::load_scenario(scenario_path(name))
        .unwrap_or_else(|e| panic!("fixture {name} must load: {e}"))
}

/// One service with the given kind and nominal figures; speed 0.5..1.5.
pub fn service(kind: &str, base_s: f64, power_w: f64, rate_per_h: f64) -> Service {
    Service {
        kind: ServiceKind(kind.to_string()),
        base_duration_s: base_s,
        processing_power_w: power_w,
        cost_rate_per_h: rate_per_h,
        speed_factor: Interval { min: 0.5, max: 1.5 },
        extra_parameters: Vec::new(),
    }
}

/// A randomized module-placement instance: every module offers one distinct
/// service, the order visits all of them in shuffled sequence, and the
/// layout objective cycles through all three variants.
pub fn placement_instance(rng: &mut ChaCha8Rng) -> (Scenario, SystemConfiguration) {
    let module_count = rng.random_range(3..=5usize);
    let (width, height) = *[(3u32, 2u32), (3, 3), (2, 3), (4, 2)]
        .choose(rng)
        .expect("non-empty grid choices");
    let grid = Grid { width, height };

    let mut modules = Vec::new();
    let mut assignments = Vec::new();
    for i in 0..module_count {
        let svc = service(
            &format!("k{i}"),
            rng.random_range(5.0..15.0),
            rng.random_range(200.0..700.0),
            rng.random_range(8.0..25.0),
        );
        let id = CppmId(format!("m{i}"));
        modules.push(Cppm {
            id: id.clone(),
            standby_power_w: rng.random_range(5.0..50.0),
            machine_configs: vec![MachineConfig { name: "std".to_string(), services: vec![svc.clone()] }],
        });
        assignments.push(StepAssignment { module: id, machine_config: "std".to_string(), service: svc });
    }
    assignments.shuffle(rng);
    let steps: Vec<ServiceKind> = assignments.iter().map(|a| a.service.kind.clone()).collect();

    let mut cells: Vec<GridPos> = grid.positions().collect();
    cells.shuffle(rng);
    let current_layout = GridLayout {
        placement: modules.iter().map(|m| m.id.clone()).zip(cells).collect(),
    };

    let objective = match rng.random_range(0..3u8) {
        0 => LayoutObjective::Transport,
        1 => LayoutObjective::Reconfiguration,
        _ => LayoutObjective::Compromise { alpha: 0.5 },
    };

    let scenario = Scenario {
        schema_version: 1,
        modules,
        order: ProductionOrder { steps, quantity: rng.random_range(1..=3) },
        grid,
        current_layout: Some(current_layout),
        filters: FilterSettings {
            standby_module_max_w: None,
            standby_config_max_w: None,
            layout: LayoutSettings { mode: LayoutMode::Ga, objective, top_k: Some(1) },
            parameters: ParameterSettings { mode: ParamMode::Grid, points_per_step: 2, top_k: None },
        },
        ga: GaConfig {
            population_size: 16,
            generations: 50,
            crossover_rate: 0.9,
            mutation_rate: 0.3,
            elitism_count: 2,
            top_k: 1,
        },
        sa: SaConfig::default(),
        weights: solex_core::cpps::WeightSettings {
            time: 1.0,
            cost: 1.0,
            energy: 1.0,
            reference: ReferenceValues { time_s: 100.0, cost: 10.0, energy_kwh: 1.0 },
        },
        costs: CostSettings {
            transport_unit_time_s: rng.random_range(1.0..3.0),
            energy_price_per_kwh: 0.3,
            per_eval_cost_s: 0.0,
        },
    };
    (scenario, SystemConfiguration { assignments })
}

/// A randomized flow-shop model within the simulator's validity envelope.
pub fn random_model(rng: &mut ChaCha8Rng) -> SimModel {
    let station_count = rng.random_range(1..=4usize);
    let stations = (0..station_count)
        .map(|i| Station {
            label: format!("s{i}"),
            cell: (rng.random_range(0..6u32), rng.random_range(0..6u32)),
            standby_power_w: rng.random_range(5.0..50.0),
        })
        .collect();
    let step_count = rng.random_range(1..=6usize);
    let steps = (0..step_count)
        .map(|_| SimStep {
            station: rng.random_range(0..station_count),
            effective_time_s: rng.random_range(0.5..20.0),
            processing_power_w: rng.random_range(50.0..700.0),
            cost_rate_per_h: rng.random_range(5.0..30.0),
        })
        .collect();
    SimModel {
        stations,
        steps,
        quantity: rng.random_range(1..=5),
        transport_unit_time_s: rng.random_range(0.0..3.0),
        energy_price_per_kwh: rng.random_range(0.1..0.5),
    }
}
