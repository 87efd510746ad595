//! Genetic algorithm with pluggable encoding and operators.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::MetaError;

/// How many variation attempts may yield an infeasible offspring before the
/// parent is cloned instead.
const INFEASIBLE_RETRIES: usize = 10;

/// How many random draws per missing individual before seeding gives up.
const SEEDING_ATTEMPTS_PER_SLOT: usize = 20;

/// A problem the genetic algorithm can optimize. Fitness is minimized.
///
/// All operators must be deterministic given the passed stream; `decode`
/// must invert `encode` on feasible payloads.
pub trait GaProblem {
    type Payload: Clone + PartialEq;
    type Genome: Clone;

    /// Draws a random candidate used to seed the initial population.
    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Payload;
    /// Fitness of a feasible payload; lower is better.
    fn fitness(&self, payload: &Self::Payload) -> f64;
    fn encode(&self, payload: &Self::Payload) -> Self::Genome;
    fn decode(&self, genome: &Self::Genome) -> Self::Payload;
    fn crossover(&self, a: &Self::Genome, b: &Self::Genome, rng: &mut ChaCha8Rng) -> Self::Genome;
    fn mutate(&self, genome: &mut Self::Genome, rng: &mut ChaCha8Rng);
    fn feasible(&self, payload: &Self::Payload) -> bool;
}

/// Genetic algorithm configuration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaConfig {
    /// Individuals per generation; at least 2.
    pub population_size: usize,
    /// Generations to evolve after seeding.
    pub generations: usize,
    /// Probability that an offspring is produced by crossover rather than
    /// cloning its first parent. In [0, 1].
    pub crossover_rate: f64,
    /// Probability that an offspring is mutated. In [0, 1].
    pub mutation_rate: f64,
    /// Best individuals carried over unchanged. Below `population_size`;
    /// the optimizer enforces an effective minimum of 1 so the best fitness
    /// never regresses between generations.
    pub elitism_count: usize,
    /// Distinct best payloads returned.
    pub top_k: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 16,
            generations: 50,
            crossover_rate: 0.9,
            mutation_rate: 0.3,
            elitism_count: 2,
            top_k: 3,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), MetaError> {
        let invalid = |m: &str| Err(MetaError::InvalidConfig(m.to_string()));
        if self.population_size < 2 {
            return invalid("population size must be at least 2");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return invalid("crossover rate must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return invalid("mutation rate must lie in [0, 1]");
        }
        if self.elitism_count >= self.population_size {
            return invalid("elitism count must be below the population size");
        }
        if self.top_k == 0 {
            return invalid("top-k must be positive");
        }
        Ok(())
    }
}

/// Result of a genetic-algorithm run.
#[derive(Debug, Clone)]
pub struct GaOutcome<P> {
    /// Up to `top_k` distinct feasible payloads, ascending by fitness.
    pub top: Vec<P>,
    /// Best fitness after seeding and after each generation; non-increasing.
    pub best_per_generation: Vec<f64>,
}

struct Individual<P> {
    payload: P,
    fitness: f64,
}

/// Evolves a population and returns the best distinct feasible payloads.
///
/// Selection is a size-2 tournament; offspring that decode to infeasible
/// payloads are rejected and re-drawn up to [`INFEASIBLE_RETRIES`] times
/// before the first parent is cloned. Elitism keeps at least the single best
/// individual, so the best fitness is non-increasing across generations.
pub fn ga_optimize<Pr: GaProblem>(
    problem: &Pr,
    config: &GaConfig,
    rng: &mut ChaCha8Rng,
) -> Result<GaOutcome<Pr::Payload>, MetaError> {
    config.validate()?;

    let mut population = seed_population(problem, config, rng)?;
    sort_by_fitness(&mut population);
    let mut best_per_generation = vec![population[0].fitness];

    let elites = config.elitism_count.max(1);
    for _ in 0..config.generations {
        let mut next: Vec<Individual<Pr::Payload>> = Vec::with_capacity(config.population_size);
        for elite in &population[..elites] {
            next.push(Individual { payload: elite.payload.clone(), fitness: elite.fitness });
        }
        while next.len() < config.population_size {
            let parent_a = tournament(&population, rng);
            let parent_b = tournament(&population, rng);
            let payload = offspring(problem, config, parent_a, parent_b, rng);
            let fitness = problem.fitness(&payload);
            next.push(Individual { payload, fitness });
        }
        population = next;
        sort_by_fitness(&mut population);
        debug_assert!(population[0].fitness <= *best_per_generation.last().unwrap());
        best_per_generation.push(population[0].fitness);
    }

    let mut top: Vec<Pr::Payload> = Vec::new();
    for individual in &population {
        if top.len() == config.top_k {
            break;
        }
        if !top.contains(&individual.payload) {
            top.push(individual.payload.clone());
        }
    }
    Ok(GaOutcome { top, best_per_generation })
}

fn seed_population<Pr: GaProblem>(
    problem: &Pr,
    config: &GaConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Individual<Pr::Payload>>, MetaError> {
    let mut population = Vec::with_capacity(config.population_size);
    let attempts = config.population_size * SEEDING_ATTEMPTS_PER_SLOT;
    for _ in 0..attempts {
        if population.len() == config.population_size {
            break;
        }
        let payload = problem.random(rng);
        if problem.feasible(&payload) {
            let fitness = problem.fitness(&payload);
            population.push(Individual { payload, fitness });
        }
    }
    if population.is_empty() {
        return Err(MetaError::NoFeasibleIndividual);
    }
    // Short seeding (rare feasibles) is padded by cycling what was found.
    let mut i = 0;
    while population.len() < config.population_size {
        let clone = Individual {
            payload: population[i].payload.clone(),
            fitness: population[i].fitness,
        };
        population.push(clone);
        i += 1;
    }
    Ok(population)
}

fn sort_by_fitness<P>(population: &mut [Individual<P>]) {
    population.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
}

/// Size-2 tournament: draw two individuals, keep the fitter.
fn tournament<'a, P>(population: &'a [Individual<P>], rng: &mut ChaCha8Rng) -> &'a Individual<P> {
    let a = &population[rng.random_range(0..population.len())];
    let b = &population[rng.random_range(0..population.len())];
    if a.fitness <= b.fitness {
        a
    } else {
        b
    }
}

fn offspring<Pr: GaProblem>(
    problem: &Pr,
    config: &GaConfig,
    parent_a: &Individual<Pr::Payload>,
    parent_b: &Individual<Pr::Payload>,
    rng: &mut ChaCha8Rng,
) -> Pr::Payload {
    for _ in 0..=INFEASIBLE_RETRIES {
        let mut genome = if rng.random_bool(config.crossover_rate) {
            problem.crossover(&problem.encode(&parent_a.payload), &problem.encode(&parent_b.payload), rng)
        } else {
            problem.encode(&parent_a.payload)
        };
        if rng.random_bool(config.mutation_rate) {
            problem.mutate(&mut genome, rng);
        }
        let payload = problem.decode(&genome);
        if problem.feasible(&payload) {
            return payload;
        }
    }
    parent_a.payload.clone()
}
