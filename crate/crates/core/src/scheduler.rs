//! Day-long schedules: one independent optimization per departure hour.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::data::{CandidateTable, History};
use crate::error::{Error, Result};
use crate::fitness::{fitness, SelectionVector};
use crate::ga::{run_ga, GaConfig, GaTrace};
use crate::hybrid::{run_hybrid, Approach, HybridConfig};
use crate::oracle::solve_exhaustive;
use crate::seed::derive_indexed;
use crate::HOURS_PER_DAY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverKind {
    Oracle,
    #[serde(rename = "GA")]
    Ga,
    Hybrid,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Oracle => "oracle",
            SolverKind::Ga => "ga",
            SolverKind::Hybrid => "hybrid",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Solver {
    Oracle,
    Ga(GaConfig),
    Hybrid(HybridConfig),
}

/// Serializable description of a [`Solver`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSnapshot {
    pub kind: SolverKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ga: Option<GaConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approach: Option<Approach>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub injection_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_epochs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_seed: Option<u64>,
}

impl Solver {
    pub fn kind(&self) -> SolverKind {
        match self {
            Solver::Oracle => SolverKind::Oracle,
            Solver::Ga(_) => SolverKind::Ga,
            Solver::Hybrid(_) => SolverKind::Hybrid,
        }
    }

    pub fn snapshot(&self) -> SolverSnapshot {
        let mut snap = SolverSnapshot {
            kind: self.kind(),
            ga: None,
            approach: None,
            injection_fraction: None,
            model_epochs: None,
            model_seed: None,
        };
        match self {
            Solver::Oracle => {}
            Solver::Ga(ga) => snap.ga = Some(*ga),
            Solver::Hybrid(h) => {
                snap.ga = Some(h.ga);
                snap.approach = Some(h.approach);
                snap.injection_fraction = Some(h.injection_fraction);
                snap.model_epochs = Some(h.model.metadata.epochs);
                snap.model_seed = Some(h.model.metadata.seed);
            }
        }
        snap
    }

    /// The same solver with its base seed replaced.
    pub fn with_seed(&self, seed: u64) -> Solver {
        match self {
            Solver::Oracle => Solver::Oracle,
            Solver::Ga(ga) => Solver::Ga(GaConfig { seed, ..*ga }),
            Solver::Hybrid(h) => Solver::Hybrid(HybridConfig {
                ga: GaConfig { seed, ..h.ga },
                ..h.clone()
            }),
        }
    }

    /// Solves the table for `hour`. Stochastic solvers run with a seed
    /// derived from their base seed and the hour, and also return their trace.
    pub fn run(&self, table: &CandidateTable, hour: u8) -> Result<SolveOutcome> {
        let hour_seed = |base: u64| derive_indexed(base, "hour", u64::from(hour));
        match self {
            Solver::Oracle => {
                let r = solve_exhaustive(table);
                Ok(SolveOutcome {
                    selection: r.best_selection,
                    fitness: r.best_fitness,
                    trace: None,
                })
            }
            Solver::Ga(ga) => {
                let run = run_ga(table, &GaConfig { seed: hour_seed(ga.seed), ..*ga })?;
                Ok(SolveOutcome {
                    selection: run.best,
                    fitness: run.best_fitness,
                    trace: Some(run.trace),
                })
            }
            Solver::Hybrid(h) => {
                let cfg = HybridConfig {
                    ga: GaConfig { seed: hour_seed(h.ga.seed), ..h.ga },
                    ..h.clone()
                };
                let run = run_hybrid(table, &cfg)?;
                Ok(SolveOutcome {
                    selection: run.best,
                    fitness: run.best_fitness,
                    trace: Some(run.trace),
                })
            }
        }
    }

    pub fn solve(&self, table: &CandidateTable, hour: u8) -> Result<(SelectionVector, f64)> {
        self.run(table, hour).map(|o| (o.selection, o.fitness))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub selection: SelectionVector,
    pub fitness: f64,
    pub trace: Option<GaTrace>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourlySchedule {
    pub hour: u8,
    pub selection: SelectionVector,
    pub n_flights: u32,
    pub fitness: f64,
    pub solver: SolverKind,
    /// Selected destinations in table row order.
    pub destinations: Vec<String>,
    /// Evacuating airport's capability at this hour.
    pub capability: f64,
}

impl HourlySchedule {
    pub fn new(table: &CandidateTable, selection: SelectionVector, solver: SolverKind) -> Self {
        HourlySchedule {
            hour: table.depart_hour,
            selection,
            n_flights: selection.count_ones(),
            fitness: fitness(selection, table).score,
            solver,
            destinations: selection.selected().map(|i| table.rows[i].dest_id.clone()).collect(),
            capability: table.capability,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataWindow {
    pub first_date: Option<NaiveDate>,
    pub last_date: Option<NaiveDate>,
    pub n_days: usize,
}

impl DataWindow {
    pub fn of(history: &History, airport: &str) -> Self {
        let dates: std::collections::BTreeSet<NaiveDate> = history
            .operations
            .iter()
            .filter(|r| r.airport == airport)
            .map(|r| r.date)
            .collect();
        DataWindow {
            first_date: dates.first().copied(),
            last_date: dates.last().copied(),
            n_days: dates.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DaySchedule {
    pub evac_airport: String,
    pub solver: SolverSnapshot,
    pub data_window: DataWindow,
    pub hours: Vec<HourlySchedule>,
}

impl DaySchedule {
    pub fn total_fitness(&self) -> f64 {
        self.hours.iter().map(|h| h.fitness).sum()
    }

    pub fn flight_counts(&self) -> Vec<u32> {
        self.hours.iter().map(|h| h.n_flights).collect()
    }

    /// Plot-ready `hour,n_flights,fitness,selection,destinations`;
    /// destinations are `;`-separated.
    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["hour", "n_flights", "fitness", "selection", "destinations"])?;
        for h in &self.hours {
            w.write_record([
                h.hour.to_string(),
                h.n_flights.to_string(),
                h.fitness.to_string(),
                h.selection.to_string(),
                h.destinations.join(";"),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<schedule>", e))?;
        Ok(())
    }
}

/// Solves each of the 24 tables (ordered by depart hour) with `solver`.
pub fn schedule_tables(
    evac_airport: &str,
    tables: &[CandidateTable],
    solver: &Solver,
    data_window: DataWindow,
) -> Result<DaySchedule> {
    if tables.len() != HOURS_PER_DAY || tables.iter().enumerate().any(|(h, t)| usize::from(t.depart_hour) != h) {
        return Err(Error::Config("a day schedule needs one table per hour 0..23".into()));
    }
    let hours = tables
        .iter()
        .map(|t| {
            let (selection, _) = solver.solve(t, t.depart_hour)?;
            Ok(HourlySchedule::new(t, selection, solver.kind()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DaySchedule {
        evac_airport: evac_airport.to_owned(),
        solver: solver.snapshot(),
        data_window,
        hours,
    })
}

/// Builds the 24 hourly tables for `evac_airport` and solves each.
pub fn build_day_schedule(evac_airport: &str, history: &History, solver: &Solver) -> Result<DaySchedule> {
    let tables = history.candidate_tables(evac_airport)?;
    schedule_tables(evac_airport, &tables, solver, DataWindow::of(history, evac_airport))
}

/// One solver run at one hour with one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub hour: u8,
    pub config: String,
    pub seed_index: usize,
    pub seed: u64,
    pub fitness: f64,
    pub oracle_fitness: f64,
    pub n_flights: u32,
    pub selection: SelectionVector,
    /// Hamming distance to the first configuration's selection for the same
    /// hour and seed.
    pub hamming_to_reference: u32,
    pub capability: f64,
    /// Days of history behind the hour's capability statistics.
    pub n_days: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// `None` aggregates over all hours.
    pub hour: Option<u8>,
    pub config: String,
    pub runs: usize,
    pub mean_fitness: f64,
    /// Population standard deviation over seeds.
    pub std_fitness: f64,
    pub mean_oracle_fitness: f64,
    pub mean_flights: f64,
    pub mean_hamming_to_reference: f64,
    /// Share of runs that reached the oracle optimum.
    pub optimal_rate: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub evac_airport: String,
    pub configs: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

impl ComparisonReport {
    /// Per-(hour, config) aggregates followed by whole-day aggregates per
    /// config. For the whole-day rows the spread is across seeds of the
    /// day-mean fitness.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut groups: BTreeMap<(Option<u8>, usize), Vec<&ComparisonRow>> = BTreeMap::new();
        let config_index: BTreeMap<&str, usize> =
            self.configs.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        for r in &self.rows {
            let ci = config_index[r.config.as_str()];
            groups.entry((Some(r.hour), ci)).or_default().push(r);
        }
        for r in &self.rows {
            let ci = config_index[r.config.as_str()];
            groups.entry((None, ci)).or_default().push(r);
        }
        let mut out: Vec<SummaryRow> = groups
            .into_iter()
            .map(|((hour, ci), rows)| {
                let fit: Vec<f64> = rows.iter().map(|r| r.fitness).collect();
                let per_seed: Vec<f64> = if hour.is_some() {
                    fit.clone()
                } else {
                    let mut by_seed: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
                    for r in &rows {
                        by_seed.entry(r.seed_index).or_default().push(r.fitness);
                    }
                    by_seed.values().map(|v| mean(v)).collect()
                };
                let m = mean(&per_seed);
                let var = per_seed.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / per_seed.len() as f64;
                SummaryRow {
                    hour,
                    config: self.configs[ci].clone(),
                    runs: rows.len(),
                    mean_fitness: mean(&fit),
                    std_fitness: var.sqrt(),
                    mean_oracle_fitness: mean(&rows.iter().map(|r| r.oracle_fitness).collect::<Vec<_>>()),
                    mean_flights: mean(&rows.iter().map(|r| f64::from(r.n_flights)).collect::<Vec<_>>()),
                    mean_hamming_to_reference: mean(
                        &rows.iter().map(|r| f64::from(r.hamming_to_reference)).collect::<Vec<_>>(),
                    ),
                    optimal_rate: rows.iter().filter(|r| r.fitness >= r.oracle_fitness).count() as f64
                        / rows.len() as f64,
                }
            })
            .collect();
        // Whole-day rows last.
        out.sort_by_key(|r| (r.hour.is_none(), r.hour, config_index[r.config.as_str()]));
        out
    }

    pub fn mean_fitness(&self, config: &str) -> Option<f64> {
        let v: Vec<f64> = self.rows.iter().filter(|r| r.config == config).map(|r| r.fitness).collect();
        (!v.is_empty()).then(|| mean(&v))
    }

    /// One row per (hour, config, seed).
    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "hour",
            "config",
            "seed_index",
            "seed",
            "fitness",
            "oracle_fitness",
            "n_flights",
            "selection",
            "hamming_to_reference",
            "capability",
            "n_days",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.hour.to_string(),
                r.config.clone(),
                r.seed_index.to_string(),
                r.seed.to_string(),
                r.fitness.to_string(),
                r.oracle_fitness.to_string(),
                r.n_flights.to_string(),
                r.selection.to_string(),
                r.hamming_to_reference.to_string(),
                r.capability.to_string(),
                r.n_days.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<comparison>", e))?;
        Ok(())
    }

    pub fn write_summary_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "hour",
            "config",
            "runs",
            "mean_fitness",
            "std_fitness",
            "mean_oracle_fitness",
            "mean_flights",
            "mean_hamming_to_reference",
            "optimal_rate",
        ])?;
        for s in self.summary() {
            w.write_record([
                s.hour.map_or_else(|| "all".to_owned(), |h| h.to_string()),
                s.config,
                s.runs.to_string(),
                s.mean_fitness.to_string(),
                s.std_fitness.to_string(),
                s.mean_oracle_fitness.to_string(),
                s.mean_flights.to_string(),
                s.mean_hamming_to_reference.to_string(),
                s.optimal_rate.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<summary>", e))?;
        Ok(())
    }
}

/// Runs every labeled solver on every table for `seeds` repeats.
///
/// Repeat `i` gives every configuration the same base seed, derived from
/// `base_seed` and `i`, so a configuration compared with itself agrees
/// exactly.
pub fn compare_tables(
    evac_airport: &str,
    tables: &[CandidateTable],
    n_days: usize,
    configs: &[(String, Solver)],
    seeds: usize,
    base_seed: u64,
) -> Result<ComparisonReport> {
    if configs.len() < 2 {
        return Err(Error::Config("a comparison needs at least two solver configurations".into()));
    }
    if seeds == 0 {
        return Err(Error::Config("a comparison needs at least one seed".into()));
    }
    let oracle: Vec<f64> = tables.iter().map(|t| solve_exhaustive(t).best_fitness).collect();
    let mut rows = Vec::with_capacity(tables.len() * configs.len() * seeds);
    for (t, &oracle_fitness) in tables.iter().zip(&oracle) {
        for seed_index in 0..seeds {
            let seed = derive_indexed(base_seed, "repeat", seed_index as u64);
            let mut reference = None;
            for (label, solver) in configs {
                let (selection, fit) = solver.with_seed(seed).solve(t, t.depart_hour)?;
                let reference = *reference.get_or_insert(selection);
                rows.push(ComparisonRow {
                    hour: t.depart_hour,
                    config: label.clone(),
                    seed_index,
                    seed,
                    fitness: fit,
                    oracle_fitness,
                    n_flights: selection.count_ones(),
                    selection,
                    hamming_to_reference: selection.hamming(reference),
                    capability: t.capability,
                    n_days,
                });
            }
        }
    }
    Ok(ComparisonReport {
        evac_airport: evac_airport.to_owned(),
        configs: configs.iter().map(|(l, _)| l.clone()).collect(),
        rows,
    })
}

/// [`compare_tables`] over the 24 hourly tables of `evac_airport`.
pub fn compare_solvers(
    evac_airport: &str,
    history: &History,
    configs: &[(String, Solver)],
    seeds: usize,
    base_seed: u64,
) -> Result<ComparisonReport> {
    let tables = history.candidate_tables(evac_airport)?;
    let n_days = DataWindow::of(history, evac_airport).n_days;
    compare_tables(evac_airport, &tables, n_days, configs, seeds, base_seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synthetic::{generate_synthetic_history, SyntheticConfig};

    fn history() -> History {
        let cfg = SyntheticConfig {
            days: 20,
            ..SyntheticConfig::default()
        };
        generate_synthetic_history(&cfg, 21).unwrap()
    }

    #[test]
    fn oracle_schedule_delegates() {
        let h = history();
        let day = build_day_schedule("DAB", &h, &Solver::Oracle).unwrap();
        assert_eq!(day.hours.len(), 24);
        let tables = h.candidate_tables("DAB").unwrap();
        for (hs, t) in day.hours.iter().zip(&tables) {
            assert_eq!(hs.fitness, solve_exhaustive(t).best_fitness);
            assert_eq!(hs.n_flights, hs.selection.count_ones());
            let expected: Vec<String> = hs.selection.selected().map(|i| t.rows[i].dest_id.clone()).collect();
            assert_eq!(hs.destinations, expected);
        }
        assert_eq!(day.data_window.n_days, 20);
    }

    #[test]
    fn oracle_day_dominates_ga_day() {
        let h = history();
        let oracle = build_day_schedule("TPA", &h, &Solver::Oracle).unwrap();
        let ga = build_day_schedule("TPA", &h, &Solver::Ga(GaConfig::new(16, 5, 3))).unwrap();
        assert!(oracle.total_fitness() >= ga.total_fitness());
        for (o, g) in oracle.hours.iter().zip(&ga.hours) {
            assert!(o.fitness >= g.fitness);
        }
        let again = build_day_schedule("TPA", &h, &Solver::Ga(GaConfig::new(16, 5, 3))).unwrap();
        assert_eq!(ga, again);
    }

    #[test]
    fn self_comparison_has_zero_hamming() {
        let h = history();
        let ga = Solver::Ga(GaConfig::new(10, 3, 0));
        let configs = vec![("a".to_owned(), ga.clone()), ("b".to_owned(), ga)];
        let report = compare_solvers("MCO", &h, &configs, 3, 5).unwrap();
        assert_eq!(report.rows.len(), 24 * 2 * 3);
        assert!(report.rows.iter().all(|r| r.hamming_to_reference == 0));
        let summary = report.summary();
        assert_eq!(summary.len(), 24 * 2 + 2);
        assert!(summary.last().unwrap().hour.is_none());
    }

    #[test]
    fn oracle_column_dominates() {
        let h = history();
        let configs = vec![
            ("oracle".to_owned(), Solver::Oracle),
            ("ga".to_owned(), Solver::Ga(GaConfig::new(6, 2, 0))),
        ];
        let report = compare_solvers("JAX", &h, &configs, 2, 0).unwrap();
        for r in &report.rows {
            assert!(r.oracle_fitness >= r.fitness);
            if r.config == "oracle" {
                assert_eq!(r.fitness, r.oracle_fitness);
            }
        }
        assert!(compare_solvers("JAX", &h, &configs[..1], 2, 0).is_err());
    }

    #[test]
    fn csv_layouts() {
        let h = history();
        let day = build_day_schedule("DAB", &h, &Solver::Oracle).unwrap();
        let mut out = Vec::new();
        day.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("hour,n_flights,fitness,selection,destinations\n"));
        assert_eq!(text.lines().count(), 25);
    }
}
