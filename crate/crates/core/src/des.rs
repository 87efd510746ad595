//! Discrete-event simulation of a flow-shop production system.
//!
//! All parts of an order are released at time zero and visit the same step
//! sequence. Each station serves one part at a time with FIFO queueing;
//! transport between consecutive steps takes Manhattan distance times a unit
//! time, with unlimited transport capacity. The simulation is event-driven
//! and bit-exact deterministic: events are ordered by time with insertion
//! sequence as the tie-break.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::meta::ObjectiveValues;

const WATT_SECONDS_PER_KWH: f64 = 3_600_000.0;

/// Errors raised when a simulation model is malformed.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesError {
    #[error("simulation model invalid: {0}")]
    InvalidModel(String),
}

/// A physical station (one production module placed on the grid).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Station {
    /// Identifier for diagnostics (the module id).
    pub label: String,
    /// Grid cell; transport distances are Manhattan distances between cells.
    pub cell: (u32, u32),
    /// Power drawn while the station is idle, in watts.
    pub standby_power_w: f64,
}

/// One step of the flow-shop route.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimStep {
    /// Index into the station list.
    pub station: usize,
    /// Service duration at the chosen speed, in seconds.
    pub effective_time_s: f64,
    /// Power drawn while serving this step, in watts.
    pub processing_power_w: f64,
    /// Operating cost while serving this step, per hour.
    pub cost_rate_per_h: f64,
}

/// A complete flow-shop model ready to simulate.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimModel {
    pub stations: Vec<Station>,
    /// Steps in route order; every part visits all of them.
    pub steps: Vec<SimStep>,
    /// Parts to produce.
    pub quantity: u32,
    /// Seconds of transport per Manhattan cell.
    pub transport_unit_time_s: f64,
    /// Energy price used in the cost objective, per kWh.
    pub energy_price_per_kwh: f64,
}

impl SimModel {
    fn validate(&self) -> Result<(), DesError> {
        let invalid = |m: String| Err(DesError::InvalidModel(m));
        if self.stations.is_empty() {
            return invalid("at least one station is required".to_string());
        }
        if self.steps.is_empty() {
            return invalid("at least one step is required".to_string());
        }
        if self.quantity == 0 {
            return invalid("quantity must be positive".to_string());
        }
        if !(self.transport_unit_time_s >= 0.0) {
            return invalid("transport unit time must be non-negative".to_string());
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.station >= self.stations.len() {
                return invalid(format!("step {i} references unknown station {}", step.station));
            }
            if !(step.effective_time_s > 0.0) {
                return invalid(format!("step {i} needs a positive effective time"));
            }
        }
        Ok(())
    }

    fn transport_s(&self, from_step: usize, to_step: usize) -> f64 {
        let a = self.stations[self.steps[from_step].station].cell;
        let b = self.stations[self.steps[to_step].station].cell;
        let distance = a.0.abs_diff(b.0) + a.1.abs_diff(b.1);
        f64::from(distance) * self.transport_unit_time_s
    }
}

/// Busy/idle split of one station over the makespan.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StationUsage {
    pub label: String,
    pub busy_s: f64,
    pub idle_s: f64,
}

/// Result of one simulation run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimResult {
    /// Order release to last part complete, in seconds.
    pub makespan_s: f64,
    /// Processing cost plus energy price times energy.
    pub cost: f64,
    /// Processing energy of busy stations plus standby energy of idle ones.
    pub energy_kwh: f64,
    pub stations: Vec<StationUsage>,
}

impl SimResult {
    /// The three objective values fed into scalarization.
    pub fn objectives(&self) -> ObjectiveValues {
        ObjectiveValues { time_s: self.makespan_s, cost: self.cost, energy_kwh: self.energy_kwh }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EventKind {
    /// A part arrives at the queue of its step's station.
    Arrival { part: u32, step: usize },
    /// A station finishes serving a part's step.
    Finish { part: u32, step: usize },
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    /// Insertion sequence; deterministic tie-break for simultaneous events.
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the earliest event.
        other.time.total_cmp(&self.time).then(other.seq.cmp(&self.seq))
    }
}

/// Runs the flow-shop simulation.
///
/// Guarantees on success: every station's busy plus idle time equals the
/// makespan; the makespan is at least the single-part critical path and at
/// least the busiest station's demand; repeated runs are bit-identical.
pub fn simulate(model: &SimModel) -> Result<SimResult, DesError> {
    model.validate()?;

    let mut heap: BinaryHeap<Event> = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |heap: &mut BinaryHeap<Event>, time: f64, kind: EventKind| {
        let event = Event { time, seq, kind };
        seq += 1;
        heap.push(event);
    };

    let stations = model.stations.len();
    let mut busy: Vec<bool> = vec![false; stations];
    let mut queues: Vec<VecDeque<(u32, usize)>> = vec![VecDeque::new(); stations];
    let mut busy_s: Vec<f64> = vec![0.0; stations];
    let mut processing_energy_ws = 0.0f64;
    let mut processing_cost = 0.0f64;
    let mut completed = 0u32;
    let mut makespan = 0.0f64;

    for part in 0..model.quantity {
        push(&mut heap, 0.0, EventKind::Arrival { part, step: 0 });
    }

    while let Some(event) = heap.pop() {
        match event.kind {
            EventKind::Arrival { part, step } => {
                let station = model.steps[step].station;
                queues[station].push_back((part, step));
                if !busy[station] {
                    start_next(model, station, event.time, &mut busy, &mut queues, &mut busy_s, &mut processing_energy_ws, &mut processing_cost, &mut |t, k| push(&mut heap, t, k));
                }
            }
            EventKind::Finish { part, step } => {
                let station = model.steps[step].station;
                busy[station] = false;
                makespan = makespan.max(event.time);
                if step + 1 < model.steps.len() {
                    let arrival = event.time + model.transport_s(step, step + 1);
                    push(&mut heap, arrival, EventKind::Arrival { part, step: step + 1 });
                } else {
                    completed += 1;
                }
                start_next(model, station, event.time, &mut busy, &mut queues, &mut busy_s, &mut processing_energy_ws, &mut processing_cost, &mut |t, k| push(&mut heap, t, k));
            }
        }
    }
    debug_assert_eq!(completed, model.quantity, "all parts must complete");

    let mut standby_energy_ws = 0.0f64;
    let usage: Vec<StationUsage> = model
        .stations
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let idle = makespan - busy_s[i];
            standby_energy_ws += s.standby_power_w * idle;
            StationUsage { label: s.label.clone(), busy_s: busy_s[i], idle_s: idle }
        })
        .collect();

    let energy_kwh = (processing_energy_ws + standby_energy_ws) / WATT_SECONDS_PER_KWH;
    let cost = processing_cost + model.energy_price_per_kwh * energy_kwh;
    Ok(SimResult { makespan_s: makespan, cost, energy_kwh, stations: usage })
}

/// Starts serving the head of a station's queue, if the station is free.
#[allow(clippy::too_many_arguments)]
fn start_next(
    model: &SimModel,
    station: usize,
    time: f64,
    busy: &mut [bool],
    queues: &mut [VecDeque<(u32, usize)>],
    busy_s: &mut [f64],
    processing_energy_ws: &mut f64,
    processing_cost: &mut f64,
    push: &mut impl FnMut(f64, EventKind),
) {
    debug_assert!(!busy[station]);
    let Some((part, step)) = queues[station].pop_front() else { return };
    let spec = &model.steps[step];
    busy[station] = true;
    busy_s[station] += spec.effective_time_s;
    *processing_energy_ws += spec.processing_power_w * spec.effective_time_s;
    *processing_cost += spec.cost_rate_per_h * spec.effective_time_s / 3600.0;
    push(time + spec.effective_time_s, EventKind::Finish { part, step });
}
