//! Run configuration: a TOML file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use evac_core::data::synthetic::SyntheticConfig;
use evac_core::hybrid::{Approach, DEFAULT_INJECTION_FRACTION};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Global seed; every component seed is derived from it.
    pub seed: u64,
    pub out: PathBuf,
    /// Evacuating airport.
    pub airport: String,
    pub data: DataConfig,
    pub ga: SearchConfig,
    pub hybrid: HybridSection,
    pub nn: NnConfig,
    pub compare: CompareConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            out: PathBuf::from("out"),
            airport: "DAB".into(),
            data: DataConfig::default(),
            ga: SearchConfig {
                population_size: 75,
                num_generations: 25,
                crossover_rate: 0.9,
                mutation_rate: 0.05,
            },
            hybrid: HybridSection::default(),
            nn: NnConfig::default(),
            compare: CompareConfig::default(),
        }
    }
}

/// Input files. When either path is missing, data comes from the synthetic
/// generator instead.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    pub operations: Option<PathBuf>,
    pub flights: Option<PathBuf>,
    pub synthetic: SyntheticConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub population_size: usize,
    pub num_generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridSection {
    pub population_size: usize,
    pub num_generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub injection_fraction: f64,
    pub approach: Approach,
    /// Trained model to use; trained on the fly when absent.
    pub model: Option<PathBuf>,
}

impl Default for HybridSection {
    fn default() -> Self {
        HybridSection {
            population_size: 15,
            num_generations: 5,
            crossover_rate: 0.9,
            mutation_rate: 0.05,
            injection_fraction: DEFAULT_INJECTION_FRACTION,
            approach: Approach::RandomReplace,
            model: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NnConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub hidden: Vec<usize>,
}

impl Default for NnConfig {
    fn default() -> Self {
        NnConfig {
            epochs: 5,
            learning_rate: 0.01,
            batch_size: 16,
            hidden: vec![64, 32],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareConfig {
    pub seeds: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig { seeds: 10 }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        // Relative data paths are relative to the config file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.data.operations, &mut cfg.data.flights, &mut cfg.hybrid.model]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_config_parses() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/example.toml");
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.airport, "DAB");
        assert_eq!(cfg.ga.population_size, 75);
        assert_eq!(cfg.hybrid.approach, Approach::RandomReplace);
        assert_eq!(cfg.data.synthetic.days, 60);
    }

    #[test]
    fn empty_config_is_default() {
        let cfg: RunConfig = toml::from_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("sed = 3").is_err());
    }
}
