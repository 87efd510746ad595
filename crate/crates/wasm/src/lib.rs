//! Browser bindings for the exploration engine: a built-in demo scenario,
//! one-shot exploration runs and an annealing trace, all exchanged as JSON
//! strings so the page needs no generated glue types.

mod api;

pub use api::{anneal_trace_json, demo_scenario_json, explore_json};

use wasm_bindgen::prelude::wasm_bindgen;
use wasm_bindgen::JsValue;

/// The built-in demo scenario as a JSON string.
#[wasm_bindgen]
pub fn demo_scenario() -> String {
    demo_scenario_json()
}

/// Explores a scenario under `mode` ("brute", "issev1" or "issev2") and
/// returns a JSON document with the report row, per-layer statistics and
/// the best solution found.
#[wasm_bindgen]
pub fn run_exploration(
    scenario_json: &str,
    mode: &str,
    seed: u32,
    top_k: Option<u32>,
    per_eval_cost: Option<f64>,
) -> Result<String, JsValue> {
    explore_json(scenario_json, mode, seed, top_k, per_eval_cost)
        .map_err(|e| JsValue::from_str(&e))
}

/// Anneals the production parameters of the scenario's first configuration
/// and returns the full objective trace for plotting.
#[wasm_bindgen]
pub fn annealing_trace(scenario_json: &str, seed: u32) -> Result<String, JsValue> {
    anneal_trace_json(scenario_json, seed).map_err(|e| JsValue::from_str(&e))
}
