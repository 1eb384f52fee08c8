//! Generational genetic algorithm over 10-bit selection vectors.
//!
//! Each generation is built entirely from children: two parents are drawn by
//! fitness-proportional roulette, recombined by single-point crossover and
//! mutated bit by bit, until the new population is full. The old population
//! is then discarded. There is no elitism, so the engine tracks the best
//! individual ever evaluated and returns that.

use std::io::Write;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::data::CandidateTable;
use crate::error::{Error, Result};
use crate::fitness::{fitness, SelectionVector};
use crate::seed::{rng_from_seed, Rng};
use crate::NUM_DESTINATIONS;

/// Added to every shifted roulette weight so the worst individual keeps a
/// non-zero share.
pub const ROULETTE_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub num_generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 75,
            num_generations: 25,
            crossover_rate: 0.9,
            mutation_rate: 0.05,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn new(population_size: usize, num_generations: usize, seed: u64) -> Self {
        GaConfig {
            population_size,
            num_generations,
            seed,
            ..GaConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config(format!(
                "population size {} must be at least 2",
                self.population_size
            )));
        }
        if self.num_generations == 0 {
            return Err(Error::Config("number of generations must be positive".into()));
        }
        for (name, rate) in [("crossover", self.crossover_rate), ("mutation", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::Config(format!("{name} rate {rate} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Population statistics after one generational replacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    /// 1-based generation index.
    pub generation: usize,
    /// Best fitness in the current population.
    pub best: f64,
    pub mean: f64,
    /// Best fitness seen in any population so far, including the initial one.
    pub best_so_far: f64,
    /// Number of NN-sampled members injected this generation (hybrid runs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injected: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GaTrace {
    pub generations: Vec<GenerationStats>,
}

impl GaTrace {
    pub fn len(&self) -> usize {
        self.generations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generations.is_empty()
    }

    /// Writes `generation,best,mean,best_so_far`, plus a `source` column with
    /// the injected-member count when the trace comes from a hybrid run.
    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let with_source = self.generations.iter().any(|g| g.injected.is_some());
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["generation", "best", "mean", "best_so_far"];
        if with_source {
            header.push("source");
        }
        w.write_record(&header)?;
        for g in &self.generations {
            let mut rec = vec![
                g.generation.to_string(),
                g.best.to_string(),
                g.mean.to_string(),
                g.best_so_far.to_string(),
            ];
            if with_source {
                rec.push(g.injected.unwrap_or(0).to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<trace>", e))?;
        Ok(())
    }
}

/// Result of a GA or hybrid run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaRun {
    pub best: SelectionVector,
    pub best_fitness: f64,
    pub trace: GaTrace,
}

pub fn random_individual(rng: &mut Rng) -> SelectionVector {
    SelectionVector::from_bits(std::array::from_fn(|_| rng.random::<bool>()))
}

/// `size` individuals with every bit drawn uniformly.
pub fn init_population(size: usize, rng: &mut Rng) -> Vec<SelectionVector> {
    (0..size).map(|_| random_individual(rng)).collect()
}

/// Fitness-proportional draw over `w_i = (f_i - min f) + ε`.
///
/// # Panics
///
/// If `population` is empty or `fitnesses` has a different length.
pub fn select_parent(population: &[SelectionVector], fitnesses: &[f64], rng: &mut Rng) -> SelectionVector {
    assert!(!population.is_empty(), "cannot select from an empty population");
    assert_eq!(population.len(), fitnesses.len());
    population[roulette_index(fitnesses, rng)]
}

fn roulette_index(fitnesses: &[f64], rng: &mut Rng) -> usize {
    let min = fitnesses.iter().copied().fold(f64::INFINITY, f64::min);
    let max = fitnesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return rng.random_range(0..fitnesses.len());
    }
    let total: f64 = fitnesses.iter().map(|f| f - min + ROULETTE_EPSILON).sum();
    let mut target = rng.random::<f64>() * total;
    for (i, f) in fitnesses.iter().enumerate() {
        target -= f - min + ROULETTE_EPSILON;
        if target < 0.0 {
            return i;
        }
    }
    fitnesses.len() - 1
}

/// Single-point crossover at `cut`: child 1 takes bits `[0, cut)` from
/// `parent1` and the rest from `parent2`; child 2 is the mirror.
pub fn crossover_at(
    parent1: SelectionVector,
    parent2: SelectionVector,
    cut: usize,
) -> (SelectionVector, SelectionVector) {
    let low = (1u16 << cut) - 1;
    let high = SelectionVector::FULL.encoding() & !low;
    let (a, b) = (parent1.encoding(), parent2.encoding());
    let c1 = SelectionVector::from_encoding((a & low) | (b & high)).expect("10-bit");
    let c2 = SelectionVector::from_encoding((b & low) | (a & high)).expect("10-bit");
    (c1, c2)
}

/// With probability `crossover_rate`, crosses the parents at a cut drawn
/// uniformly from 1..=9; otherwise returns copies.
pub fn crossover(
    parent1: SelectionVector,
    parent2: SelectionVector,
    crossover_rate: f64,
    rng: &mut Rng,
) -> (SelectionVector, SelectionVector) {
    if rng.random::<f64>() < crossover_rate {
        let cut = rng.random_range(1..NUM_DESTINATIONS);
        crossover_at(parent1, parent2, cut)
    } else {
        (parent1, parent2)
    }
}

/// Flips each bit independently with probability `mutation_rate`.
pub fn mutate(child: SelectionVector, mutation_rate: f64, rng: &mut Rng) -> SelectionVector {
    (0..NUM_DESTINATIONS).fold(child, |acc, i| {
        if rng.random::<f64>() < mutation_rate {
            acc.flip(i)
        } else {
            acc
        }
    })
}

pub(crate) fn evaluate(population: &[SelectionVector], table: &CandidateTable) -> Vec<f64> {
    population.iter().map(|&s| fitness(s, table).score).collect()
}

/// Children of one full generation, bred from `population`. Children come in
/// pairs; for an odd population size the second child of the last pair is
/// discarded.
pub fn next_generation(
    population: &[SelectionVector],
    fitnesses: &[f64],
    config: &GaConfig,
    rng: &mut Rng,
) -> Vec<SelectionVector> {
    let mut next = Vec::with_capacity(config.population_size);
    while next.len() < config.population_size {
        let p1 = select_parent(population, fitnesses, rng);
        let p2 = select_parent(population, fitnesses, rng);
        let (c1, c2) = crossover(p1, p2, config.crossover_rate, rng);
        next.push(mutate(c1, config.mutation_rate, rng));
        let c2 = mutate(c2, config.mutation_rate, rng);
        if next.len() < config.population_size {
            next.push(c2);
        }
    }
    next
}

/// Shared generational loop. `after_replacement` runs on the initial
/// population and after every replacement; it may rewrite the population
/// (keeping `fitnesses` aligned) and returns the number of injected members
/// to record, if any.
pub(crate) fn evolve<F>(table: &CandidateTable, config: &GaConfig, mut after_replacement: F) -> Result<GaRun>
where
    F: FnMut(&mut Vec<SelectionVector>, &mut Vec<f64>, &mut Rng) -> Option<usize>,
{
    config.validate()?;
    let mut rng = rng_from_seed(config.seed);
    let mut population = init_population(config.population_size, &mut rng);
    let mut fitnesses = evaluate(&population, table);
    after_replacement(&mut population, &mut fitnesses, &mut rng);

    let (mut best, mut best_fitness) = fittest(&population, &fitnesses);
    let mut trace = GaTrace {
        generations: Vec::with_capacity(config.num_generations),
    };
    for generation in 1..=config.num_generations {
        population = next_generation(&population, &fitnesses, config, &mut rng);
        fitnesses = evaluate(&population, table);
        let injected = after_replacement(&mut population, &mut fitnesses, &mut rng);
        debug_assert_eq!(population.len(), config.population_size);

        let (gen_best, gen_best_fitness) = fittest(&population, &fitnesses);
        if gen_best_fitness > best_fitness {
            best = gen_best;
            best_fitness = gen_best_fitness;
        }
        trace.generations.push(GenerationStats {
            generation,
            best: gen_best_fitness,
            mean: fitnesses.iter().sum::<f64>() / fitnesses.len() as f64,
            best_so_far: best_fitness,
            injected,
        });
    }
    Ok(GaRun {
        best,
        best_fitness,
        trace,
    })
}

// First index wins among equal fitness.
fn fittest(population: &[SelectionVector], fitnesses: &[f64]) -> (SelectionVector, f64) {
    let mut idx = 0;
    for (i, &f) in fitnesses.iter().enumerate() {
        if f > fitnesses[idx] {
            idx = i;
        }
    }
    (population[idx], fitnesses[idx])
}

/// Runs `config.num_generations` generational replacements on `table` and
/// returns the best individual seen across all generations.
pub fn run_ga(table: &CandidateTable, config: &GaConfig) -> Result<GaRun> {
    evolve(table, config, |_, _, _| None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_exhaustive;

    fn sv(s: &str) -> SelectionVector {
        s.parse().unwrap()
    }

    fn sample_table() -> CandidateTable {
        let rows: [(f64, f64, f64); 10] = std::array::from_fn(|i| {
            let x = i as f64 / 9.0;
            (x, 1.0 - x * x, (x * 7.0) % 1.0)
        });
        CandidateTable::from_normalized(4.0, rows)
    }

    #[test]
    fn population_shape_and_determinism() {
        let a = init_population(15, &mut rng_from_seed(5));
        let b = init_population(15, &mut rng_from_seed(5));
        assert_eq!(a.len(), 15);
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.encoding() < 1024));
    }

    #[test]
    fn init_bits_are_balanced() {
        let pop = init_population(1000, &mut rng_from_seed(17));
        for i in 0..10 {
            let mean = pop.iter().filter(|s| s.bit(i)).count() as f64 / 1000.0;
            assert!((0.45..=0.55).contains(&mean), "bit {i}: {mean}");
        }
    }

    #[test]
    fn equal_fitness_is_uniform() {
        let pop = [sv("1000000000"), sv("0100000000")];
        let mut rng = rng_from_seed(1);
        let first = (0..10_000)
            .filter(|_| select_parent(&pop, &[0.4, 0.4], &mut rng) == pop[0])
            .count() as f64
            / 10_000.0;
        assert!((first - 0.5).abs() <= 0.05, "{first}");
    }

    #[test]
    fn shifted_weights_favor_the_fitter() {
        // Weights: ε and 2 + ε -> fitter share (2 + ε) / (2 + 2ε).
        let expected = (2.0 + ROULETTE_EPSILON) / (2.0 + 2.0 * ROULETTE_EPSILON);
        let pop = [sv("1000000000"), sv("0100000000")];
        let mut rng = rng_from_seed(2);
        let share = (0..10_000)
            .filter(|_| select_parent(&pop, &[-1.0, 1.0], &mut rng) == pop[1])
            .count() as f64
            / 10_000.0;
        assert!((share - expected).abs() < 1e-3, "{share} vs {expected}");
    }

    #[test]
    fn single_individual_always_selected() {
        let pop = [sv("0011001100")];
        let mut rng = rng_from_seed(3);
        assert!((0..100).all(|_| select_parent(&pop, &[-3.0], &mut rng) == pop[0]));
    }

    #[test]
    fn crossover_examples() {
        let (ones, zeros) = (SelectionVector::FULL, SelectionVector::EMPTY);
        let (c1, c2) = crossover_at(ones, zeros, 3);
        assert_eq!(c1, sv("1110000000"));
        assert_eq!(c2, sv("0001111111"));

        let mut rng = rng_from_seed(4);
        for _ in 0..50 {
            assert_eq!(crossover(ones, zeros, 0.0, &mut rng), (ones, zeros));
            let p = sv("0110100101");
            assert_eq!(crossover(p, p, 1.0, &mut rng), (p, p));
        }
    }

    #[test]
    fn mutation_extremes_and_rate() {
        let mut rng = rng_from_seed(6);
        let s = sv("0110100101");
        assert_eq!(mutate(s, 0.0, &mut rng), s);
        assert_eq!(mutate(s, 1.0, &mut rng), s.complement());
        let flips: u32 = (0..1000)
            .map(|_| mutate(SelectionVector::EMPTY, 0.1, &mut rng).count_ones())
            .sum();
        let frac = f64::from(flips) / 10_000.0;
        assert!((0.08..=0.12).contains(&frac), "{frac}");
    }

    #[test]
    fn config_validation() {
        assert!(GaConfig::new(15, 5, 0).validate().is_ok());
        assert!(GaConfig::new(1, 5, 0).validate().is_err());
        assert!(GaConfig::new(0, 5, 0).validate().is_err());
        assert!(GaConfig::new(16, 0, 0).validate().is_err());
        let mut c = GaConfig::new(16, 5, 0);
        c.mutation_rate = 1.5;
        assert!(c.validate().is_err());
        assert!(GaConfig::new(2, 1, 0).validate().is_ok());
    }

    #[test]
    fn odd_population_keeps_its_size() {
        let cfg = GaConfig::new(15, 1, 0);
        let mut rng = rng_from_seed(1);
        let pop = init_population(15, &mut rng);
        let fit = evaluate(&pop, &sample_table());
        assert_eq!(next_generation(&pop, &fit, &cfg, &mut rng).len(), 15);
    }

    #[test]
    fn degenerate_run() {
        let t = sample_table();
        let cfg = GaConfig::new(2, 1, 9);
        let run = run_ga(&t, &cfg).unwrap();
        // Replay the same stream by hand.
        let mut rng = rng_from_seed(9);
        let init = init_population(2, &mut rng);
        let f0 = evaluate(&init, &t);
        let kids = next_generation(&init, &f0, &cfg, &mut rng);
        let best = init
            .iter()
            .chain(&kids)
            .map(|&s| fitness(s, &t).score)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(run.best_fitness, best);
        assert_eq!(run.trace.len(), 1);
    }

    #[test]
    fn trace_invariants_and_oracle_dominance() {
        let t = sample_table();
        let oracle = solve_exhaustive(&t);
        for seed in 0..20 {
            let cfg = GaConfig::new(20, 15, seed);
            let run = run_ga(&t, &cfg).unwrap();
            assert_eq!(run.trace.len(), 15);
            assert!(run
                .trace
                .generations
                .windows(2)
                .all(|w| w[1].best_so_far >= w[0].best_so_far));
            assert!(run.best_fitness <= oracle.best_fitness);
            assert_eq!(fitness(run.best, &t).score, run.best_fitness);
            assert_eq!(run, run_ga(&t, &cfg).unwrap());
        }
    }

    #[test]
    fn trace_csv_header() {
        let run = run_ga(&sample_table(), &GaConfig::new(4, 2, 1)).unwrap();
        let mut out = Vec::new();
        run.trace.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("generation,best,mean,best_so_far\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
