//! Layout layer: placing a configuration's modules on the shop-floor grid.
//!
//! A layout is an injective map from the configuration's module set to grid
//! cells. Candidates come either from exhaustive enumeration or from a
//! genetic search over cell permutations; both are ranked by a transport,
//! reconfiguration, or compromise objective (lower is better).

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::meta::{ga_optimize, GaConfig, GaProblem};

use super::{
    CppmId, DomainError, Grid, GridLayout, GridPos, LayoutObjective, Scenario, SystemConfiguration,
};

/// Number of injective placements of `modules` modules on `cells` cells:
/// the falling factorial `cells · (cells−1) · … `, saturating at `u128::MAX`.
pub fn placement_count(cells: u64, modules: usize) -> u128 {
    if modules as u64 > cells {
        return 0;
    }
    (0..modules as u64).fold(1u128, |count, i| count.saturating_mul(u128::from(cells - i)))
}

/// Enumerates every injective placement of `modules` on the grid, in
/// lexicographic order over row-major cell indices.
pub fn layout_bruteforce(modules: &[CppmId], grid: &Grid) -> Result<Vec<GridLayout>, DomainError> {
    let cells: Vec<GridPos> = grid.positions().collect();
    if modules.len() > cells.len() {
        return Err(DomainError::GridTooSmall { modules: modules.len(), cells: grid.cells() });
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(modules.len());
    let mut used = vec![false; cells.len()];
    descend(modules, &cells, &mut chosen, &mut used, &mut out);
    Ok(out)
}

fn descend(
    modules: &[CppmId],
    cells: &[GridPos],
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<GridLayout>,
) {
    if chosen.len() == modules.len() {
        let placement = modules.iter().cloned().zip(chosen.iter().map(|&i| cells[i])).collect();
        out.push(GridLayout { placement });
        return;
    }
    for i in 0..cells.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        chosen.push(i);
        descend(modules, cells, chosen, used, out);
        chosen.pop();
        used[i] = false;
    }
}

/// Total Manhattan distance a part travels between consecutive order steps.
pub fn transport_effort(
    config: &SystemConfiguration,
    layout: &GridLayout,
) -> Result<u32, DomainError> {
    let position = |module: &CppmId| {
        layout.position(module).ok_or_else(|| DomainError::UnplacedModule(module.clone()))
    };
    let mut total = 0;
    for pair in config.assignments.windows(2) {
        total += position(&pair[0].module)?.manhattan(position(&pair[1].module)?);
    }
    Ok(total)
}

/// Number of modules that are moved or newly installed relative to the
/// current layout.
pub fn reconfiguration_effort(layout: &GridLayout, current: &GridLayout) -> u32 {
    layout
        .placement
        .iter()
        .filter(|(module, pos)| current.position(module) != Some(**pos))
        .count() as u32
}

/// The layout objective value under the scenario's settings; lower is
/// better. Compromise terms are each normalized by the current layout's value
/// for the same configuration, falling back to 1 when that baseline is zero
/// or undefined.
pub fn layout_fitness(
    config: &SystemConfiguration,
    layout: &GridLayout,
    scenario: &Scenario,
) -> Result<f64, DomainError> {
    let current = || scenario.current_layout.as_ref().ok_or(DomainError::MissingCurrentLayout);
    match scenario.filters.layout.objective {
        LayoutObjective::Transport => Ok(f64::from(transport_effort(config, layout)?)),
        LayoutObjective::Reconfiguration => {
            Ok(f64::from(reconfiguration_effort(layout, current()?)))
        }
        LayoutObjective::Compromise { alpha } => {
            let current = current()?;
            let transport = f64::from(transport_effort(config, layout)?);
            let reconfig = f64::from(reconfiguration_effort(layout, current));
            let transport_base =
                normalizer(transport_effort(config, current).ok().map(f64::from));
            // The current layout's own reconfiguration effort is zero by
            // definition, so its normalizer is always the fallback.
            let reconfig_base = normalizer(Some(0.0));
            Ok(alpha * transport / transport_base + (1.0 - alpha) * reconfig / reconfig_base)
        }
    }
}

/// A strictly positive normalization baseline: the value itself, or 1 when
/// it is missing or zero.
fn normalizer(baseline: Option<f64>) -> f64 {
    match baseline {
        Some(v) if v > 0.0 => v,
        _ => 1.0,
    }
}

/// True when the layout places exactly the configuration's module set on
/// distinct in-grid cells.
pub fn layout_feasible(config: &SystemConfiguration, layout: &GridLayout, grid: &Grid) -> bool {
    let modules = config.module_set();
    layout.placement.len() == modules.len()
        && modules.iter().all(|m| layout.position(m).is_some_and(|p| grid.contains(p)))
        && layout.is_injective()
}

/// Genetic placement search. The genome is a permutation of all grid cells;
/// its first `m` entries place the configuration's `m` modules (ascending by
/// id), so every genome decodes to a feasible layout. Order crossover and
/// swap mutation keep genomes valid permutations.
struct PlacementProblem<'a> {
    modules: Vec<CppmId>,
    cells: Vec<GridPos>,
    config: &'a SystemConfiguration,
    scenario: &'a Scenario,
}

impl GaProblem for PlacementProblem<'_> {
    type Payload = GridLayout;
    type Genome = Vec<usize>;

    fn random(&self, rng: &mut ChaCha8Rng) -> GridLayout {
        let mut perm: Vec<usize> = (0..self.cells.len()).collect();
        perm.shuffle(rng);
        self.decode(&perm)
    }

    fn fitness(&self, layout: &GridLayout) -> f64 {
        layout_fitness(self.config, layout, self.scenario).unwrap_or(f64::INFINITY)
    }

    fn encode(&self, layout: &GridLayout) -> Vec<usize> {
        let mut perm: Vec<usize> = self
            .modules
            .iter()
            .map(|m| {
                let pos = layout.position(m).expect("feasible layouts place every module");
                self.cells.iter().position(|c| *c == pos).expect("placed on a grid cell")
            })
            .collect();
        let mut rest: Vec<usize> = (0..self.cells.len()).filter(|i| !perm.contains(i)).collect();
        perm.append(&mut rest);
        perm
    }

    fn decode(&self, genome: &Vec<usize>) -> GridLayout {
        let placement = self
            .modules
            .iter()
            .cloned()
            .zip(genome.iter().map(|&i| self.cells[i]))
            .collect();
        GridLayout { placement }
    }

    /// Order crossover: copy a random span from the first parent, then fill
    /// the remaining slots with the second parent's cells in its order.
    fn crossover(&self, a: &Vec<usize>, b: &Vec<usize>, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let n = a.len();
        if n < 2 {
            return a.clone();
        }
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        let (lo, hi) = (i.min(j), i.max(j));
        let mut taken = vec![false; n];
        for &cell in &a[lo..=hi] {
            taken[cell] = true;
        }
        let mut fill = b.iter().copied().filter(|&cell| !taken[cell]);
        (0..n)
            .map(|slot| {
                if (lo..=hi).contains(&slot) {
                    a[slot]
                } else {
                    fill.next().expect("permutation fill is exact")
                }
            })
            .collect()
    }

    fn mutate(&self, genome: &mut Vec<usize>, rng: &mut ChaCha8Rng) {
        let n = genome.len();
        if n < 2 {
            return;
        }
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        genome.swap(i, j);
    }

    fn feasible(&self, layout: &GridLayout) -> bool {
        layout_feasible(self.config, layout, &self.scenario.grid)
    }
}

/// Runs the genetic placement search and returns up to `top_k` distinct
/// layouts, ascending by the scenario's layout objective.
pub fn layout_ga(
    config: &SystemConfiguration,
    scenario: &Scenario,
    top_k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<GridLayout>, DomainError> {
    let modules = config.module_set();
    let cells: Vec<GridPos> = scenario.grid.positions().collect();
    if modules.len() > cells.len() {
        return Err(DomainError::GridTooSmall {
            modules: modules.len(),
            cells: scenario.grid.cells(),
        });
    }
    let problem = PlacementProblem { modules, cells, config, scenario };
    let ga = GaConfig { top_k, ..scenario.ga.clone() };
    Ok(ga_optimize(&problem, &ga, rng)?.top)
}
