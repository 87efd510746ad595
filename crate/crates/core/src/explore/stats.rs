//! Run statistics and the undivided brute-force projection.

use std::time::Duration;

/// Per-layer accounting aggregated over the whole tree.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStats {
    /// Layer name, for reports.
    pub name: String,
    /// Candidates emitted by generators at this layer.
    pub generated: u64,
    /// Post-generation removals indexed by filter level slot.
    pub removed_by_level: [u64; 3],
    /// Post-generation removals aligned with the layer's rule list.
    pub removed_by_rule: Vec<u64>,
    /// Candidates surviving this layer's filters (nodes at this layer).
    pub survivors: u64,
    /// Total time spent generating and filtering this layer.
    pub time: Duration,
    /// Largest single-node time at this layer: the layer's duration if every
    /// sub-space ran concurrently.
    pub max_node_time: Duration,
}

/// Saturating product of per-layer domain sizes: the candidate count of the
/// undivided problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountEstimate {
    pub count: u128,
    /// True when the product overflowed and `count` is saturated.
    pub saturated: bool,
}

/// Statistics of one exploration run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplorationStats {
    pub per_layer: Vec<LayerStats>,
    /// Longest root-to-leaf chain of node times (fully parallelized bound).
    pub t_min: Duration,
    /// Sum of all node times (strictly sequential bound).
    pub t_max: Duration,
    /// Undivided brute-force candidate count projected from the layers'
    /// declared domain sizes.
    pub estimated_bruteforce: CountEstimate,
}

impl ExplorationStats {
    /// Survivor counts per layer (`[p, l, n]` for a three-layer problem).
    pub fn survivors(&self) -> Vec<u64> {
        self.per_layer.iter().map(|l| l.survivors).collect()
    }
}

/// A projected brute-force run: candidate count and total evaluation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceEstimate {
    pub count: u128,
    pub count_saturated: bool,
    pub time: Duration,
    pub time_saturated: bool,
}

/// Projects the undivided brute-force effort from per-layer branching
/// factors and a per-evaluation cost.
///
/// Factors multiply with u128 saturation; the time estimate saturates at
/// `Duration::MAX`. Factors are expected to be ≥ 1.
pub fn estimate_bruteforce(factors: &[u128], per_eval_cost: Duration) -> BruteForceEstimate {
    let mut count: u128 = 1;
    let mut saturated = false;
    for &f in factors {
        match count.checked_mul(f) {
            Some(c) => count = c,
            None => {
                count = u128::MAX;
                saturated = true;
                break;
            }
        }
    }
    let seconds = count as f64 * per_eval_cost.as_secs_f64();
    // Duration::MAX is ~5.8e11 years; anything beyond is reported saturated.
    let max_secs = Duration::MAX.as_secs_f64();
    let (time, time_saturated) = if saturated || !seconds.is_finite() || seconds >= max_secs {
        (Duration::MAX, seconds != 0.0)
    } else {
        (Duration::from_secs_f64(seconds), false)
    };
    BruteForceEstimate { count, count_saturated: saturated, time, time_saturated }
}

/// Saturating product of layer domain sizes.
pub(crate) fn saturating_product(factors: impl IntoIterator<Item = u128>) -> CountEstimate {
    let mut count: u128 = 1;
    for f in factors {
        match count.checked_mul(f) {
            Some(c) => count = c,
            None => return CountEstimate { count: u128::MAX, saturated: true },
        }
    }
    CountEstimate { count, saturated: false }
}
