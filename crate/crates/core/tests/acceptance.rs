//! Acceptance suite: one test per acceptance criterion, each printing a
//! single PASS/FAIL line (visible with `cargo test --test acceptance --
//! --nocapture`).

mod common;

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use solex_core::cpps::{layout_bruteforce, layout_fitness, layout_ga};
use solex_core::des::simulate;
use solex_core::meta::{sa_optimize, SaConfig, SaProblem};
use solex_core::scenario::report::{format_duration, thousands, write_report, ReportFormat};
use solex_core::{run, Mode, RunOptions};

/// Runs one criterion check and prints its verdict as a single line.
fn criterion(number: u8, name: &str, check: impl FnOnce()) {
    let result = catch_unwind(AssertUnwindSafe(check));
    let verdict = if result.is_ok() { "PASS" } else { "FAIL" };
    println!("{verdict} criterion {number}: {name}");
    if let Err(payload) = result {
        resume_unwind(payload);
    }
}

#[test]
fn criterion_1_layered_matches_exhaustive() {
    criterion(1, "layered exploration finds exactly the exhaustive solution set", || {
        let started = Instant::now();
        for name in ["tiny.json", "alt.json", "mid.json"] {
            let scenario = common::load(name);
            let brute = run(&scenario, &RunOptions::new(Mode::Brute)).expect("brute");
            let v1 = run(&scenario, &RunOptions::new(Mode::IsseV1)).expect("issev1");
            let v2 = run(&scenario, &RunOptions::new(Mode::IsseV2)).expect("issev2");
            assert!(!brute.finals.is_empty(), "{name}: exhaustive set must be non-empty");
            assert_eq!(v1.finals, brute.finals, "{name}: staged filtering lost or invented solutions");
            assert_eq!(v2.finals, brute.finals, "{name}: integrated filtering lost or invented solutions");
        }
        assert!(started.elapsed().as_secs() < 60, "oracle comparison exceeded 60s");
    });
}

#[test]
fn criterion_2_integration_dominates_staging() {
    criterion(2, "integrated filtering materializes no more candidates than staged filtering", || {
        let mut thresholded = common::load("tiny.json");
        thresholded.filters.standby_module_max_w = Some(40.0);
        for scenario in [&thresholded, &common::load("speedup.json")] {
            let v1 = run(scenario, &RunOptions::new(Mode::IsseV1)).expect("issev1");
            let v2 = run(scenario, &RunOptions::new(Mode::IsseV2)).expect("issev2");
            for (a, b) in v1.stats.per_layer.iter().zip(&v2.stats.per_layer) {
                assert!(
                    b.generated <= a.generated,
                    "layer {}: integrated generated {} > staged {}",
                    a.name,
                    b.generated,
                    a.generated
                );
            }
            let (g1, g2): (u64, u64) = (
                v1.stats.per_layer.iter().map(|l| l.generated).sum(),
                v2.stats.per_layer.iter().map(|l| l.generated).sum(),
            );
            assert!(g2 < g1, "integration must materialize strictly fewer candidates in total");
        }
        // With thresholds integrated the surviving sets still agree.
        let v1 = run(&thresholded, &RunOptions::new(Mode::IsseV1)).expect("issev1");
        let v2 = run(&thresholded, &RunOptions::new(Mode::IsseV2)).expect("issev2");
        assert_eq!(v1.finals, v2.finals, "integration must not change the surviving set");
    });
}

#[test]
fn criterion_3_report_accounting_is_exact() {
    criterion(3, "report accounting: counts, bounds and duration rendering are exact", || {
        let accounting = common::load("accounting.json");
        let brute = run(&accounting, &RunOptions::new(Mode::Brute)).expect("brute");
        assert_eq!(brute.row.n, Some(40));
        assert_eq!(brute.row.estimated_count, 40);
        assert_eq!(brute.row.estimated_time_s, Some(40.0), "40 evaluations at 1s each");
        assert_eq!(brute.row.t_n_min_s, brute.row.t_n_max_s);
        let v1 = run(&accounting, &RunOptions::new(Mode::IsseV1)).expect("issev1");
        assert_eq!((v1.row.p, v1.row.l, v1.row.n), (Some(4), Some(20), Some(40)));

        let mut capped = RunOptions::new(Mode::IsseV1);
        capped.top_k = Some(2);
        let row = run(&common::load("tiny.json"), &capped).expect("issev1").row;
        let (p, l) = (row.p.unwrap(), row.l.unwrap());
        assert!(l <= p * 2, "kept layouts {l} exceed {p} configurations x top 2");
        assert_eq!(l, 8);

        let toolarge = common::load("toolarge.json");
        let projected = run(&toolarge, &RunOptions::new(Mode::Brute)).expect("projection");
        assert!(projected.row.estimated_only, "oversized space must be projected, not run");
        assert_eq!(projected.row.estimated_count, 346_275_000);
        assert_eq!(projected.row.estimated_time_s, Some(346_275_000.0));
        assert_eq!(format_duration(346_275_000.0), "10a 357d 19h 30m 0s");
        assert_eq!(format_duration(1_900_000_000_027.0), "60,248a 220d 17h 47m 7s");
        assert_eq!(thousands(346_275_000), "346,275,000");

        let mut rendered = Vec::new();
        write_report(&[projected.row], ReportFormat::Table, &mut rendered).expect("render");
        let table = String::from_utf8(rendered).expect("utf8");
        assert!(table.contains("brute (projected)"), "projected rows must be marked");
        assert!(table.contains("10a 357d 19h 30m 0s"), "table must render the projected time");
    });
}

#[test]
fn criterion_4_genetic_layout_matches_exhaustive_optimum() {
    criterion(4, "genetic layout search matches the exhaustive optimum on small instances", || {
        let started = Instant::now();
        let mut instance_rng = ChaCha8Rng::seed_from_u64(424_242);
        let mut matched = 0;
        for _ in 0..20 {
            let (scenario, config) = common::placement_instance(&mut instance_rng);
            let optimum = layout_bruteforce(&config.module_set(), &scenario.grid)
                .expect("enumerable")
                .iter()
                .map(|l| layout_fitness(&config, l, &scenario).expect("fitness"))
                .fold(f64::INFINITY, f64::min);
            let ga_best = (0..5)
                .map(|seed| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let top = layout_ga(&config, &scenario, 1, &mut rng).expect("ga");
                    layout_fitness(&config, &top[0], &scenario).expect("fitness")
                })
                .fold(f64::INFINITY, f64::min);
            if ga_best <= optimum + 1e-9 {
                matched += 1;
            }
        }
        assert!(matched >= 18, "genetic search matched the optimum on only {matched}/20 instances");
        assert!(started.elapsed().as_secs() < 30, "genetic benchmark exceeded 30s");
    });
}

/// Every neighbor is worse by exactly `delta`; isolates the acceptance rule.
struct UphillRamp {
    delta: f64,
}

impl SaProblem for UphillRamp {
    type Payload = f64;

    fn objective(&self, x: &f64) -> f64 {
        *x
    }
    fn neighbor(&self, x: &f64, _rng: &mut ChaCha8Rng) -> f64 {
        x + self.delta
    }
    fn feasible(&self, _x: &f64) -> bool {
        true
    }
}

/// Quadratic bowl with its minimum at x = 3, walked in 0.05 steps.
struct Bowl;

impl SaProblem for Bowl {
    type Payload = f64;

    fn objective(&self, x: &f64) -> f64 {
        (x - 3.0).powi(2)
    }
    fn neighbor(&self, x: &f64, rng: &mut ChaCha8Rng) -> f64 {
        use rand::Rng;
        let step = if rng.random_bool(0.5) { 0.05 } else { -0.05 };
        (x + step).clamp(0.0, 10.0)
    }
    fn feasible(&self, x: &f64) -> bool {
        (0.0..=10.0).contains(x)
    }
}

#[test]
fn criterion_5_annealing_acceptance_and_convergence() {
    criterion(5, "annealing accepts worsening moves at the theoretical rate and converges", || {
        // Statistical check of the Metropolis rule at a held temperature.
        let delta = 0.5;
        let n = 10_000usize;
        let config = SaConfig {
            initial_temperature: 1.0,
            cooling_factor: 0.999_999,
            iterations_per_temperature: n,
            max_iterations: n,
            min_temperature: 1e-9,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let outcome = sa_optimize(&UphillRamp { delta }, 0.0, &config, &mut rng).expect("sa");
        assert_eq!(outcome.proposals, n as u64);
        let accepted = outcome
            .trace
            .windows(2)
            .filter(|w| w[1].current != w[0].current)
            .count();
        let expected = (-delta / 1.0f64).exp();
        let observed = accepted as f64 / n as f64;
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!(
            (observed - expected).abs() <= 3.0 * sigma,
            "worsening-move acceptance rate {observed:.4} is outside {expected:.4} +/- {:.4}",
            3.0 * sigma
        );

        // Improving moves are always accepted.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let downhill = sa_optimize(&UphillRamp { delta: -delta }, 0.0, &config, &mut rng).expect("sa");
        assert_eq!(downhill.best_value, -(n as f64) * delta, "improving moves must always be taken");

        // Convergence on the bowl from spread-out starts.
        let config = SaConfig::default();
        let mut converged = 0;
        for seed in 0..100u64 {
            let start = 0.05 + 0.0995 * seed as f64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let outcome = sa_optimize(&Bowl, start, &config, &mut rng).expect("sa");
            if (outcome.best - 3.0).abs() <= 0.1 {
                converged += 1;
            }
        }
        assert!(converged >= 95, "annealing converged on only {converged}/100 runs");
    });
}

#[test]
fn criterion_6_simulation_invariants() {
    criterion(6, "flow-shop simulation upholds conservation, bounds and determinism", || {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for case in 0..500 {
            let model = common::random_model(&mut rng);
            let result = simulate(&model).expect("valid model");
            assert_eq!(simulate(&model).expect("rerun"), result, "case {case}: nondeterministic");

            let q = f64::from(model.quantity);
            let single_part: f64 = model
                .steps
                .iter()
                .map(|s| s.effective_time_s)
                .sum::<f64>()
                + (0..model.steps.len().saturating_sub(1))
                    .map(|j| {
                        let a = model.stations[model.steps[j].station].cell;
                        let b = model.stations[model.steps[j + 1].station].cell;
                        f64::from(a.0.abs_diff(b.0) + a.1.abs_diff(b.1))
                            * model.transport_unit_time_s
                    })
                    .sum::<f64>();
            let sum_eff: f64 = model.steps.iter().map(|s| s.effective_time_s).sum();
            let serial_bound = q * sum_eff + (single_part - sum_eff);
            assert!(
                result.makespan_s >= single_part - 1e-9,
                "case {case}: makespan below one part's critical path"
            );
            assert!(
                result.makespan_s <= serial_bound + 1e-6,
                "case {case}: makespan {} above the fully serial bound {serial_bound}",
                result.makespan_s
            );

            let mut processing_energy_ws = 0.0;
            let mut processing_cost = 0.0;
            for (i, station) in result.stations.iter().enumerate() {
                let demand: f64 = model
                    .steps
                    .iter()
                    .filter(|s| s.station == i)
                    .map(|s| q * s.effective_time_s)
                    .sum();
                assert!(
                    (station.busy_s - demand).abs() <= 1e-6 * demand.max(1.0),
                    "case {case}: station {i} busy time differs from its demand"
                );
                assert!(station.idle_s >= -1e-9, "case {case}: negative idle time");
                assert!(
                    (station.busy_s + station.idle_s - result.makespan_s).abs() <= 1e-9,
                    "case {case}: busy + idle must equal the makespan"
                );
                processing_energy_ws += model.stations[i].standby_power_w * station.idle_s;
            }
            for step in &model.steps {
                processing_energy_ws += q * step.effective_time_s * step.processing_power_w;
                processing_cost += q * step.effective_time_s * step.cost_rate_per_h / 3600.0;
            }
            let energy_kwh = processing_energy_ws / 3_600_000.0;
            assert!(
                (result.energy_kwh - energy_kwh).abs() <= 1e-9 * energy_kwh.max(1.0),
                "case {case}: energy differs from its recomputation"
            );
            let cost = processing_cost + model.energy_price_per_kwh * energy_kwh;
            assert!(
                (result.cost - cost).abs() <= 1e-9 * cost.max(1.0),
                "case {case}: cost differs from its recomputation"
            );

            let mut faster = model.clone();
            for step in &mut faster.steps {
                step.effective_time_s *= 0.5;
            }
            let fast = simulate(&faster).expect("valid model");
            assert!(
                fast.makespan_s <= result.makespan_s + 1e-9,
                "case {case}: halving every processing time must not slow the line"
            );
        }
    });
}

#[test]
fn criterion_7_parallel_and_seed_determinism() {
    criterion(7, "exploration results are identical across worker counts and stable per seed", || {
        for (name, mode) in [("tiny.json", Mode::IsseV1), ("speedup.json", Mode::IsseV2)] {
            let scenario = common::load(name);
            for seed in 0..10 {
                let mut reference = None;
                for parallelism in [1usize, 2, 8] {
                    let mut options = RunOptions::new(mode);
                    options.seed = seed;
                    options.parallelism = parallelism;
                    let outcome = run(&scenario, &options).expect("run");
                    let observed = (
                        outcome.finals,
                        outcome
                            .stats
                            .per_layer
                            .iter()
                            .map(|l| (l.generated, l.survivors, l.removed_by_level))
                            .collect::<Vec<_>>(),
                    );
                    match &reference {
                        None => reference = Some(observed),
                        Some(expected) => assert_eq!(
                            &observed, expected,
                            "{name} seed {seed}: results differ at parallelism {parallelism}"
                        ),
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_8_integrated_exploration_visits_a_fraction() {
    criterion(8, "integrated exploration visits at most 1% of the exhaustive space on the benchmark", || {
        let scenario = common::load("speedup.json");
        let outcome = run(&scenario, &RunOptions::new(Mode::IsseV2)).expect("issev2");
        assert!(!outcome.finals.is_empty());
        assert!(
            outcome.finals.iter().all(|f| f.evaluation.is_some()),
            "annealed finals must carry their evaluation"
        );
        let materialized: u64 = outcome.stats.per_layer.iter().map(|l| l.generated).sum();
        let exhaustive = outcome.row.estimated_count;
        assert_eq!(exhaustive, 108_864);
        assert!(
            u128::from(materialized) * 100 <= exhaustive,
            "visited {materialized} of {exhaustive} candidates, above 1%"
        );
        let projected = outcome.row.estimated_time_s.expect("cost model projects a time");
        assert!((projected - 5_443.2).abs() < 1e-9, "projection must be count x per-evaluation cost");
    });
}
