//! Parameter layer: the admissible production-parameter space of a
//! configuration.
//!
//! Each order step contributes one speed-factor interval (and the intervals
//! of any extra parameters). The space supports midpoint initialization,
//! local neighbor moves for annealing, and exhaustive grid enumeration for
//! oracle comparisons.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Interval, ParameterSet, StepParameters, SystemConfiguration};

/// Fraction of the interval width a neighbor move may shift the speed factor.
const NEIGHBOR_STEP_FRACTION: f64 = 0.1;

/// The admissible parameter space of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSpace {
    steps: Vec<StepSpace>,
}

#[derive(Debug, Clone, PartialEq)]
struct StepSpace {
    speed: Interval,
    extras: Vec<Interval>,
}

/// Builds the parameter space spanned by the configuration's services.
pub fn parameter_space(config: &SystemConfiguration) -> ParameterSpace {
    ParameterSpace {
        steps: config
            .assignments
            .iter()
            .map(|a| StepSpace {
                speed: a.service.speed_factor,
                extras: a.service.extra_parameters.iter().map(|e| e.interval).collect(),
            })
            .collect(),
    }
}

impl ParameterSpace {
    /// Number of order steps the space covers.
    pub fn dimensions(&self) -> usize {
        self.steps.len()
    }

    /// All parameters at their interval midpoints.
    pub fn initial(&self) -> ParameterSet {
        ParameterSet {
            steps: self
                .steps
                .iter()
                .map(|s| StepParameters {
                    speed_factor: s.speed.midpoint(),
                    extra: s.extras.iter().map(Interval::midpoint).collect(),
                })
                .collect(),
        }
    }

    /// A local move: one uniformly chosen step's speed factor shifts by up to
    /// ±10% of its interval width, clamped to the interval. Extra parameters
    /// are carried over unchanged.
    pub fn neighbor(&self, current: &ParameterSet, rng: &mut ChaCha8Rng) -> ParameterSet {
        let mut next = current.clone();
        if self.steps.is_empty() {
            return next;
        }
        let step = rng.random_range(0..self.steps.len());
        let interval = self.steps[step].speed;
        let max_shift = NEIGHBOR_STEP_FRACTION * interval.width();
        let shift = rng.random_range(-max_shift..=max_shift);
        next.steps[step].speed_factor = interval.clamp(next.steps[step].speed_factor + shift);
        next
    }

    /// True when every value lies inside its interval.
    pub fn feasible(&self, params: &ParameterSet) -> bool {
        params.steps.len() == self.steps.len()
            && params.steps.iter().zip(&self.steps).all(|(p, s)| {
                s.speed.contains(p.speed_factor)
                    && p.extra.len() == s.extras.len()
                    && p.extra.iter().zip(&s.extras).all(|(v, i)| i.contains(*v))
            })
    }

    /// Exhaustively enumerates `points` evenly spaced speed factors per step
    /// (interval endpoints included; a single point is the midpoint), extras
    /// at their midpoints. Lexicographic: the last step varies fastest.
    pub fn grid(&self, points: usize) -> Vec<ParameterSet> {
        let axes: Vec<Vec<f64>> =
            self.steps.iter().map(|s| axis_values(s.speed, points)).collect();
        let mut out = Vec::new();
        let mut chosen = vec![0.0; self.steps.len()];
        self.grid_descend(&axes, 0, &mut chosen, &mut out);
        out
    }

    fn grid_descend(
        &self,
        axes: &[Vec<f64>],
        step: usize,
        chosen: &mut Vec<f64>,
        out: &mut Vec<ParameterSet>,
    ) {
        if step == axes.len() {
            out.push(ParameterSet {
                steps: self
                    .steps
                    .iter()
                    .zip(chosen.iter())
                    .map(|(s, &speed)| StepParameters {
                        speed_factor: speed,
                        extra: s.extras.iter().map(Interval::midpoint).collect(),
                    })
                    .collect(),
            });
            return;
        }
        for &value in &axes[step] {
            chosen[step] = value;
            self.grid_descend(axes, step + 1, chosen, out);
        }
    }

    /// Size of the enumeration grid: `points ^ steps`, saturating.
    pub fn count(&self, points: usize) -> u128 {
        let points = points.max(1) as u128;
        self.steps.iter().fold(1u128, |count, _| count.saturating_mul(points))
    }
}

/// Evenly spaced values across an interval, endpoints included.
fn axis_values(interval: Interval, points: usize) -> Vec<f64> {
    match points {
        0 | 1 => vec![interval.midpoint()],
        // Clamped: the last point's rounding may otherwise land an ulp
        // outside the interval and fail the bounds check.
        _ => (0..points)
            .map(|i| interval.clamp(interval.min + interval.width() * i as f64 / (points - 1) as f64))
            .collect(),
    }
}
