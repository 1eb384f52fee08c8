//! GA whose population pool also receives individuals sampled from a trained
//! network after every generational replacement.
//!
//! Two injection rules are supported: overwrite randomly chosen members
//! ([`Approach::RandomReplace`]) or overwrite the least fit members
//! ([`Approach::WorstReplace`]). NN individuals are sampled into the initial
//! population and re-sampled after every replacement.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::data::CandidateTable;
use crate::error::{Error, Result};
use crate::fitness::{fitness, SelectionVector};
use crate::ga::{evolve, GaConfig, GaRun};
use crate::mlp::{sample_individuals, MlpModel};
use crate::seed::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Approach {
    RandomReplace,
    WorstReplace,
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Approach::RandomReplace => "random",
            Approach::WorstReplace => "worst",
        })
    }
}

impl FromStr for Approach {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "random" | "random_replace" => Ok(Approach::RandomReplace),
            "worst" | "worst_replace" => Ok(Approach::WorstReplace),
            other => Err(format!("unknown approach {other:?} (expected random or worst)")),
        }
    }
}

pub const DEFAULT_INJECTION_FRACTION: f64 = 0.2;

#[derive(Debug, Clone)]
pub struct HybridConfig {
    pub ga: GaConfig,
    /// Share of the population replaced by NN samples each generation.
    pub injection_fraction: f64,
    pub approach: Approach,
    pub model: Arc<MlpModel>,
}

impl HybridConfig {
    pub fn new(ga: GaConfig, approach: Approach, model: Arc<MlpModel>) -> Self {
        HybridConfig {
            ga,
            injection_fraction: DEFAULT_INJECTION_FRACTION,
            approach,
            model,
        }
    }

    /// `round(injection_fraction × population_size)`.
    pub fn injection_count(&self) -> usize {
        (self.injection_fraction * self.ga.population_size as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        self.ga.validate()?;
        if !(self.injection_fraction > 0.0 && self.injection_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "injection fraction {} outside (0, 1]",
                self.injection_fraction
            )));
        }
        if self.injection_count() == 0 {
            return Err(Error::Config(format!(
                "injection fraction {} injects no individuals into a population of {}",
                self.injection_fraction, self.ga.population_size
            )));
        }
        Ok(())
    }
}

/// Overwrites `nn_individuals.len()` distinct, uniformly chosen positions.
///
/// # Panics
///
/// If there are more NN individuals than population members.
pub fn inject_random(population: &mut [SelectionVector], nn_individuals: &[SelectionVector], rng: &mut Rng) {
    assert!(nn_individuals.len() <= population.len());
    if nn_individuals.is_empty() {
        return;
    }
    let positions = index::sample(rng, population.len(), nn_individuals.len());
    for (pos, &ind) in positions.iter().zip(nn_individuals) {
        population[pos] = ind;
    }
}

/// Positions of the `k` least fit members. Sorting is stable on descending
/// fitness, so among equal fitness the later members are replaced first.
pub fn worst_positions(fitnesses: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| fitnesses[b].total_cmp(&fitnesses[a]));
    order.split_off(fitnesses.len() - k)
}

/// Overwrites the `nn_individuals.len()` lowest-fitness members.
///
/// # Panics
///
/// If there are more NN individuals than population members, or the
/// fitnesses are not aligned with the population.
pub fn inject_worst(population: &mut [SelectionVector], fitnesses: &[f64], nn_individuals: &[SelectionVector]) {
    assert!(nn_individuals.len() <= population.len());
    assert_eq!(population.len(), fitnesses.len());
    for (pos, &ind) in worst_positions(fitnesses, nn_individuals.len()).into_iter().zip(nn_individuals) {
        population[pos] = ind;
    }
}

fn run_with_count(table: &CandidateTable, config: &HybridConfig, k: usize) -> Result<GaRun> {
    let model = &config.model;
    evolve(table, &config.ga, |population, fitnesses, rng| {
        if k == 0 {
            return Some(0);
        }
        let nn = sample_individuals(model, table, k, rng);
        match config.approach {
            Approach::RandomReplace => inject_random(population, &nn, rng),
            Approach::WorstReplace => inject_worst(population, fitnesses, &nn),
        }
        for (f, s) in fitnesses.iter_mut().zip(population.iter()) {
            *f = fitness(*s, table).score;
        }
        Some(k)
    })
}

/// Runs the GA with NN injection into the initial population and after every
/// replacement, and returns the best
/// individual seen across all generations.
pub fn run_hybrid(table: &CandidateTable, config: &HybridConfig) -> Result<GaRun> {
    config.validate()?;
    run_with_count(table, config, config.injection_count())
}
