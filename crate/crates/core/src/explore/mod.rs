//! Layered divide-and-conquer exploration of large solution spaces.
//!
//! A problem is split vertically into layers (each layer refines the partial
//! solutions of the layer above) and horizontally into sub-spaces (each
//! surviving candidate spans its own subtree). Three filter levels prune
//! candidates between layers: hard no-gos, mandatory feasibility, and
//! ranking to the most promising k. The result is a tree whose last-layer
//! leaves are complete solutions, together with per-layer accounting that
//! can be compared against the undivided brute-force effort.
//!
//! Determinism: every node draws from a private random stream derived from
//! the master seed and the node's path, so results are bit-identical for any
//! worker count.

mod filter;
mod node;
pub mod rng;
mod stats;

pub use filter::{apply_filters, FilterLevel, FilterOutcome, FilterRule, IntegratedLevels, Keep};
pub use node::{ChildrenStats, ExplorationNode};
pub use stats::{
    estimate_bruteforce, BruteForceEstimate, CountEstimate, ExplorationStats, LayerStats,
};

use std::time::Duration;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::timeclock;

/// Default cap on exhaustive enumeration.
pub const DEFAULT_BRUTEFORCE_CAP: u128 = 10_000_000;

/// Errors raised by the exploration engine.
#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("invalid layer specification at layer {layer}: {reason}")]
    InvalidLayerSpec { layer: usize, reason: String },
    #[error("empty solution space: no candidate survived layer {layer} ({})", level_label(.level))]
    EmptySolutionSpace { layer: usize, level: Option<FilterLevel> },
    #[error("solution space too large: {count} candidates exceed the enumeration cap of {cap}")]
    SpaceTooLarge { count: u128, cap: u128 },
    #[error("generator failed at layer {layer}: {source}")]
    Generator {
        layer: usize,
        #[source]
        source: GeneratorError,
    },
    #[error("worker pool could not be built: {0}")]
    WorkerPool(String),
}

/// Boxed error type generators may raise.
pub type GeneratorError = Box<dyn std::error::Error + Send + Sync + 'static>;

fn level_label(level: &Option<FilterLevel>) -> String {
    match level {
        Some(l) => format!("removed at {l}"),
        None => "generator emitted no candidates".to_string(),
    }
}

/// Output of one generator call.
#[derive(Debug, Clone)]
pub struct Generated<P> {
    /// Candidates for the child layer, in the generator's deterministic order.
    pub candidates: Vec<P>,
    /// Accounted synthetic evaluation time (e.g. projected cost of simulator
    /// runs performed while generating), added to the node's wall time.
    pub synthetic_time: Duration,
}

impl<P> From<Vec<P>> for Generated<P> {
    fn from(candidates: Vec<P>) -> Self {
        Self { candidates, synthetic_time: Duration::ZERO }
    }
}

type Generator<P, C> = Box<
    dyn Fn(Option<&P>, &C, &mut ChaCha8Rng) -> Result<Generated<P>, GeneratorError> + Send + Sync,
>;

/// One vertical layer: a generator producing candidates from the parent
/// partial solution, plus the filter rules that prune them.
pub struct LayerSpec<P, C> {
    index: usize,
    name: String,
    /// Analytic size of this layer's undivided candidate domain; feeds the
    /// brute-force projection.
    domain_size: u128,
    generator: Generator<P, C>,
    filters: Vec<FilterRule<P, C>>,
    integrated: IntegratedLevels,
}

impl<P, C> LayerSpec<P, C> {
    pub fn new(
        index: usize,
        name: impl Into<String>,
        domain_size: u128,
        generator: impl Fn(Option<&P>, &C, &mut ChaCha8Rng) -> Result<Generated<P>, GeneratorError>
            + Send
            + Sync
            + 'static,
    ) -> Self {
        Self {
            index,
            name: name.into(),
            domain_size,
            generator: Box::new(generator),
            filters: Vec::new(),
            integrated: IntegratedLevels::NONE,
        }
    }

    pub fn with_filter(mut self, rule: FilterRule<P, C>) -> Self {
        self.filters.push(rule);
        self
    }

    /// Declares which levels the generator enforces internally. Those levels
    /// are not re-applied post-generation but their rules stay declared for
    /// auditing and whole-solution checks.
    pub fn with_integrated(mut self, integrated: IntegratedLevels) -> Self {
        self.integrated = integrated;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_size(&self) -> u128 {
        self.domain_size
    }

    pub fn filters(&self) -> &[FilterRule<P, C>] {
        &self.filters
    }

    fn feasibility_rules(&self) -> impl Iterator<Item = &FilterRule<P, C>> {
        self.filters.iter().filter(|r| r.level() == FilterLevel::Feasibility)
    }
}

/// A completed exploration: final solutions, statistics and the full tree.
#[derive(Debug, Clone)]
pub struct Exploration<P> {
    /// Last-layer leaf payloads in deterministic path order.
    pub finals: Vec<P>,
    pub stats: ExplorationStats,
    pub tree: ExplorationNode<P>,
}

/// Explores the layered solution space depth-first with all filters active.
///
/// `parallelism` is the worker count; results are bit-identical for any
/// value because every node draws from its own path-derived random stream.
/// Fails with [`ExploreError::EmptySolutionSpace`] when no last-layer leaf
/// survives, reporting the deepest layer reached and the filter level that
/// removed its last candidate.
pub fn explore<P, C>(
    layers: &[LayerSpec<P, C>],
    ctx: &C,
    seed: u64,
    parallelism: usize,
) -> Result<Exploration<P>, ExploreError>
where
    P: Clone + Send + Sync,
    C: Sync,
{
    validate_layers(layers)?;
    let tree = run_root(layers, ctx, seed, parallelism.max(1))?;
    let stats = assemble_stats(layers, &tree);
    let finals: Vec<P> = tree.payloads_at(layers.len() - 1).into_iter().cloned().collect();
    if finals.is_empty() {
        let (layer, level) = deepest_dead_end(&tree);
        return Err(ExploreError::EmptySolutionSpace { layer, level });
    }
    Ok(Exploration { finals, stats, tree })
}

/// An executed exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct BruteForceRun<P> {
    /// Complete solutions passing the whole-solution feasibility check.
    pub finals: Vec<P>,
    /// Full cross-product combinations enumerated.
    pub enumerated: u64,
    /// Combinations rejected by the whole-solution feasibility check.
    pub infeasible: u64,
    /// Single undivided accounting entry (no per-layer split).
    pub stats: ExplorationStats,
}

/// Enumerates the full cross-product of the layers' generator outputs,
/// applying only level-2 feasibility — as one whole-solution check at the
/// end. Serves as the ground-truth oracle for the filtered exploration.
///
/// Fails with [`ExploreError::SpaceTooLarge`] when the projected candidate
/// count (product of declared domain sizes) or the actual enumeration
/// exceeds `cap`.
pub fn explore_bruteforce<P, C>(
    layers: &[LayerSpec<P, C>],
    ctx: &C,
    seed: u64,
    cap: u128,
) -> Result<BruteForceRun<P>, ExploreError>
where
    P: Clone + Send + Sync,
    C: Sync,
{
    validate_layers(layers)?;
    let projected = stats::saturating_product(layers.iter().map(|l| l.domain_size));
    if projected.saturated || projected.count > cap {
        return Err(ExploreError::SpaceTooLarge { count: projected.count, cap });
    }

    let (result, elapsed) = timeclock::measure(|| -> Result<_, ExploreError> {
        let mut finals = Vec::new();
        let mut enumerated = 0u64;
        let mut synthetic = Duration::ZERO;
        enumerate(layers, ctx, seed, None, &mut Vec::new(), cap, &mut finals, &mut enumerated, &mut synthetic)?;
        let before = finals.len();
        finals.retain(|p| {
            layers.iter().all(|layer| layer.feasibility_rules().all(|r| r.accepts(p, ctx)))
        });
        let infeasible = (before - finals.len()) as u64;
        Ok((finals, enumerated, infeasible, synthetic))
    });
    let (finals, enumerated, infeasible, synthetic) = result?;
    let total = elapsed + synthetic;

    let stats = ExplorationStats {
        per_layer: vec![LayerStats {
            name: "undivided".to_string(),
            generated: enumerated,
            removed_by_level: [0, infeasible, 0],
            removed_by_rule: Vec::new(),
            survivors: finals.len() as u64,
            time: total,
            max_node_time: total,
        }],
        t_min: total,
        t_max: total,
        estimated_bruteforce: projected,
    };
    Ok(BruteForceRun { finals, enumerated, infeasible, stats })
}

/// Depth-first expansion of the unfiltered generator cross-product.
#[allow(clippy::too_many_arguments)]
fn enumerate<P, C>(
    layers: &[LayerSpec<P, C>],
    ctx: &C,
    seed: u64,
    payload: Option<&P>,
    path: &mut Vec<u32>,
    cap: u128,
    finals: &mut Vec<P>,
    enumerated: &mut u64,
    synthetic: &mut Duration,
) -> Result<(), ExploreError>
where
    P: Clone,
{
    let layer_index = path.len();
    let mut rng = rng::stream(seed, path);
    let generated = (layers[layer_index].generator)(payload, ctx, &mut rng)
        .map_err(|source| ExploreError::Generator { layer: layer_index, source })?;
    *synthetic += generated.synthetic_time;
    let last = layer_index + 1 == layers.len();
    for (i, candidate) in generated.candidates.into_iter().enumerate() {
        if last {
            *enumerated += 1;
            if u128::from(*enumerated) > cap {
                return Err(ExploreError::SpaceTooLarge { count: u128::from(*enumerated), cap });
            }
            finals.push(candidate);
        } else {
            path.push(i as u32);
            enumerate(layers, ctx, seed, Some(&candidate), path, cap, finals, enumerated, synthetic)?;
            path.pop();
        }
    }
    Ok(())
}

fn validate_layers<P, C>(layers: &[LayerSpec<P, C>]) -> Result<(), ExploreError> {
    if layers.is_empty() {
        return Err(ExploreError::InvalidLayerSpec {
            layer: 0,
            reason: "at least one layer is required".to_string(),
        });
    }
    for (position, layer) in layers.iter().enumerate() {
        let invalid = |reason: &str| ExploreError::InvalidLayerSpec {
            layer: position,
            reason: reason.to_string(),
        };
        if layer.index != position {
            return Err(invalid(&format!(
                "layer index {} does not match its position {position}",
                layer.index
            )));
        }
        if layer.domain_size == 0 {
            return Err(invalid("declared domain size must be positive"));
        }
        let has_feasibility = layer.integrated.feasibility
            || layer.filters.iter().any(|r| r.level() == FilterLevel::Feasibility);
        if !has_feasibility {
            return Err(invalid("every layer needs a feasibility rule (level 2 is mandatory)"));
        }
        for rule in &layer.filters {
            if let FilterLevel::Ranking = rule.level() {
                if rule.keep_zero() {
                    return Err(invalid(&format!(
                        "ranking rule '{}' must retain at least one candidate",
                        rule.name()
                    )));
                }
            }
        }
    }
    Ok(())
}

fn run_root<P, C>(
    layers: &[LayerSpec<P, C>],
    ctx: &C,
    seed: u64,
    parallelism: usize,
) -> Result<ExplorationNode<P>, ExploreError>
where
    P: Clone + Send + Sync,
    C: Sync,
{
    #[cfg(not(target_arch = "wasm32"))]
    if parallelism > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .map_err(|e| ExploreError::WorkerPool(e.to_string()))?;
        return pool.install(|| build_node(layers, ctx, seed, true, None, Vec::new()));
    }
    let _ = parallelism;
    build_node(layers, ctx, seed, false, None, Vec::new())
}

fn build_node<P, C>(
    layers: &[LayerSpec<P, C>],
    ctx: &C,
    seed: u64,
    parallel: bool,
    payload: Option<P>,
    path: Vec<u32>,
) -> Result<ExplorationNode<P>, ExploreError>
where
    P: Clone + Send + Sync,
    C: Sync,
{
    let child_layer = path.len();
    let node_seed = rng::stream_seed(seed, &path);
    if child_layer == layers.len() {
        // Last-layer leaf: a complete solution, nothing left to generate.
        return Ok(ExplorationNode {
            path,
            payload,
            stream_seed: node_seed,
            wall_time: Duration::ZERO,
            children_stats: None,
            children: Vec::new(),
        });
    }

    let layer = &layers[child_layer];
    let (result, elapsed) = timeclock::measure(|| -> Result<_, ExploreError> {
        let mut stream = rng::stream(seed, &path);
        let generated = (layer.generator)(payload.as_ref(), ctx, &mut stream)
            .map_err(|source| ExploreError::Generator { layer: child_layer, source })?;
        let synthetic = generated.synthetic_time;
        let emitted = generated.candidates.len() as u64;
        let outcome = apply_filters(generated.candidates, &layer.filters, layer.integrated, ctx);
        Ok((synthetic, emitted, outcome))
    });
    let (synthetic, emitted, outcome) = result?;

    let children = expand_children(outcome.survivors, parallel, &path, |child_path, p| {
        build_node(layers, ctx, seed, parallel, Some(p), child_path)
    })?;

    Ok(ExplorationNode {
        path,
        payload,
        stream_seed: node_seed,
        wall_time: elapsed + synthetic,
        children_stats: Some(ChildrenStats {
            generated: emitted,
            removed_by_level: outcome.removed_by_level,
            removed_by_rule: outcome.removed_by_rule,
            last_removal: outcome.last_removal,
        }),
        children,
    })
}

/// Expands survivors into child subtrees, preserving candidate order.
fn expand_children<P, F>(
    survivors: Vec<P>,
    parallel: bool,
    parent_path: &[u32],
    build: F,
) -> Result<Vec<ExplorationNode<P>>, ExploreError>
where
    P: Clone + Send + Sync,
    F: Fn(Vec<u32>, P) -> Result<ExplorationNode<P>, ExploreError> + Send + Sync,
{
    let child_path = |i: usize| {
        let mut p = parent_path.to_vec();
        p.push(i as u32);
        p
    };
    #[cfg(not(target_arch = "wasm32"))]
    if parallel {
        use rayon::prelude::*;
        return survivors
            .into_par_iter()
            .enumerate()
            .map(|(i, payload)| build(child_path(i), payload))
            .collect();
    }
    let _ = parallel;
    survivors
        .into_iter()
        .enumerate()
        .map(|(i, payload)| build(child_path(i), payload))
        .collect()
}

fn assemble_stats<P, C>(layers: &[LayerSpec<P, C>], tree: &ExplorationNode<P>) -> ExplorationStats {
    let mut per_layer: Vec<LayerStats> = layers
        .iter()
        .map(|l| LayerStats {
            name: l.name.clone(),
            generated: 0,
            removed_by_level: [0; 3],
            removed_by_rule: vec![0; l.filters.len()],
            survivors: 0,
            time: Duration::ZERO,
            max_node_time: Duration::ZERO,
        })
        .collect();

    tree.walk(&mut |node| {
        let Some(cs) = &node.children_stats else { return };
        let layer = &mut per_layer[node.path.len()];
        layer.generated += cs.generated;
        for (slot, removed) in cs.removed_by_level.iter().enumerate() {
            layer.removed_by_level[slot] += removed;
        }
        for (i, removed) in cs.removed_by_rule.iter().enumerate() {
            layer.removed_by_rule[i] += removed;
        }
        layer.survivors += node.children.len() as u64;
        layer.time += node.wall_time;
        layer.max_node_time = layer.max_node_time.max(node.wall_time);
    });

    ExplorationStats {
        per_layer,
        t_min: tree.critical_path(),
        t_max: tree.total_time(),
        estimated_bruteforce: stats::saturating_product(layers.iter().map(|l| l.domain_size)),
    }
}

/// Locates the deepest dead end: the node with the largest child layer whose
/// candidates all died, reporting the level that removed the last of them.
fn deepest_dead_end<P>(tree: &ExplorationNode<P>) -> (usize, Option<FilterLevel>) {
    let mut best: Option<(usize, Option<FilterLevel>)> = None;
    tree.walk(&mut |node| {
        let Some(cs) = &node.children_stats else { return };
        if !node.children.is_empty() {
            return;
        }
        let layer = node.path.len();
        let level = if cs.generated == 0 { None } else { cs.last_removal };
        if best.map_or(true, |(l, _)| layer > l) {
            best = Some((layer, level));
        }
    });
    best.unwrap_or((0, None))
}

impl<P, C> FilterRule<P, C> {
    /// True for a ranking rule declared with a zero retention.
    fn keep_zero(&self) -> bool {
        matches!(self.keep(), Some(Keep::Top(0)))
    }
}

impl std::fmt::Display for FilterLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FilterLevel::NoGo => write!(f, "level 1, no-go"),
            FilterLevel::Feasibility => write!(f, "level 2, feasibility"),
            FilterLevel::Ranking => write!(f, "level 3, ranking"),
        }
    }
}
