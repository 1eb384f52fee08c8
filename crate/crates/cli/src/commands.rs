use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use evac_core::data::synthetic::generate_synthetic_history;
use evac_core::data::{self, History};
use evac_core::ga::GaConfig;
use evac_core::hybrid::{Approach, HybridConfig};
use evac_core::mlp::{self, MlpModel, TrainConfig};
use evac_core::scheduler::{build_day_schedule, compare_solvers, ComparisonReport, Solver};
use evac_core::seed::derive_seed;
use serde::Serialize;

use crate::config::{RunConfig, SearchConfig};
use crate::{
    ApproachName, Cli, Command, CompareArgs, DataArgs, IngestArgs, ScheduleArgs, SolverName, Sweep, SynthArgs,
    TrainArgs,
};

pub const SNAPSHOT_FILE: &str = "run_config.json";

pub fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    match cli.command {
        Command::Generate(args) => generate(cfg, args),
        Command::Ingest(args) => ingest(cfg, args),
        Command::SynthData(args) => synth_data(cfg, args),
        Command::Train(args) => train(cfg, args),
        Command::Schedule(args) => schedule(cfg, args),
        Command::Compare(args) => compare(cfg, args),
    }
}

#[derive(Serialize)]
struct Snapshot<'a> {
    command: &'a str,
    timestamp: String,
    config: &'a RunConfig,
}

fn prepare_out(cfg: &RunConfig, command: &str) -> Result<PathBuf> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let snapshot = Snapshot {
        command,
        timestamp: chrono::Utc::now().to_rfc3339(),
        config: cfg,
    };
    write_with(&cfg.out.join(SNAPSHOT_FILE), |w| {
        serde_json::to_writer_pretty(&mut *w, &snapshot)?;
        writeln!(w)?;
        Ok(())
    })?;
    Ok(cfg.out.clone())
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    f(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

/// Resolves data flags into the config so the snapshot records them.
fn apply_data_args(cfg: &mut RunConfig, args: &DataArgs) {
    if let Some(p) = &args.operations {
        cfg.data.operations = Some(p.clone());
    }
    if let Some(p) = &args.flights {
        cfg.data.flights = Some(p.clone());
    }
    if let Some(days) = args.days {
        cfg.data.synthetic.days = days;
    }
}

fn load_history(cfg: &RunConfig) -> Result<History> {
    match (&cfg.data.operations, &cfg.data.flights) {
        (Some(ops), Some(flights)) => Ok(History::new(
            data::ingest_operations(ops)?,
            data::ingest_flight_history(flights)?,
        )),
        (None, None) => Ok(generate_synthetic_history(
            &cfg.data.synthetic,
            derive_seed(cfg.seed, "synthetic"),
        )?),
        _ => bail!("give both an operations file and a flight-history file, or neither for synthetic data"),
    }
}

fn generate(mut cfg: RunConfig, args: DataArgs) -> Result<()> {
    if args.operations.is_some() || args.flights.is_some() {
        bail!("generate writes synthetic data; it does not take input files");
    }
    apply_data_args(&mut cfg, &args);
    let history = load_history(&cfg)?;
    let out = prepare_out(&cfg, "generate")?;
    write_with(&out.join("operations.csv"), |w| Ok(data::write_operations(&history.operations, w)?))?;
    write_with(&out.join("flights.csv"), |w| Ok(data::write_flight_history(&history.flights, w)?))?;
    println!(
        "wrote {} operations records and {} flights to {}",
        history.operations.len(),
        history.flights.len(),
        out.display()
    );
    Ok(())
}

fn ingest(mut cfg: RunConfig, args: IngestArgs) -> Result<()> {
    cfg.data.operations = Some(args.operations.clone());
    cfg.data.flights = args.flights.clone();
    let operations = data::ingest_operations(&args.operations)?;
    let flights = args.flights.as_ref().map(data::ingest_flight_history).transpose()?;
    let history = History::new(operations, flights.unwrap_or_default());

    let airports: Vec<String> = match &args.airport {
        Some(a) => vec![a.clone()],
        None => history.airports(),
    };
    let mut profiles = Vec::new();
    for a in &airports {
        profiles.push(history.capability(a)?);
    }
    let mut destinations = Vec::new();
    if args.flights.is_some() {
        let origins: Vec<String> = match &args.airport {
            Some(a) => vec![a.clone()],
            None => history.origins(),
        };
        for o in origins {
            destinations.push((o.clone(), history.top_destinations(&o)?));
        }
    }

    let out = prepare_out(&cfg, "ingest")?;
    write_with(&out.join("capability.csv"), |w| {
        writeln!(w, "airport,hour,c,s,n_days")?;
        for p in &profiles {
            for h in &p.hours {
                writeln!(w, "{},{},{},{},{}", p.airport, h.hour, h.c, h.s, h.n_days)?;
            }
        }
        Ok(())
    })?;
    if !destinations.is_empty() {
        write_with(&out.join("destinations.csv"), |w| {
            writeln!(w, "origin,rank,dest,popularity,duration_hours")?;
            for (origin, dests) in &destinations {
                for (rank, d) in dests.iter().enumerate() {
                    writeln!(w, "{origin},{rank},{},{},{}", d.dest_id, d.popularity_raw, d.duration_hours)?;
                }
            }
            Ok(())
        })?;
    }
    println!("capability profiles for {} airport(s) written to {}", profiles.len(), out.display());
    Ok(())
}

fn synth_data(mut cfg: RunConfig, args: SynthArgs) -> Result<()> {
    apply_data_args(&mut cfg, &args.data);
    let history = load_history(&cfg)?;
    let rows = mlp::synthesize_from_history(&history, args.exclude.as_deref())?;
    let out = prepare_out(&cfg, "synth-data")?;
    write_with(&out.join("dataset.csv"), |w| Ok(mlp::write_dataset(&rows, w)?))?;
    println!("{} rows written to {}", rows.len(), out.join("dataset.csv").display());
    Ok(())
}

fn train_config(cfg: &RunConfig) -> TrainConfig {
    TrainConfig {
        epochs: cfg.nn.epochs,
        learning_rate: cfg.nn.learning_rate,
        batch_size: cfg.nn.batch_size,
        hidden: cfg.nn.hidden.clone(),
        seed: derive_seed(cfg.seed, "nn"),
    }
}

fn write_model(out: &Path, model: &MlpModel) -> Result<()> {
    write_with(&out.join("model.txt"), |w| Ok(model.write(w)?))?;
    write_with(&out.join("loss.csv"), |w| {
        writeln!(w, "epoch,loss")?;
        for (i, l) in model.metadata.loss_curve.iter().enumerate() {
            writeln!(w, "{},{l}", i + 1)?;
        }
        Ok(())
    })
}

fn train(mut cfg: RunConfig, args: TrainArgs) -> Result<()> {
    if let Some(e) = args.epochs {
        cfg.nn.epochs = e;
    }
    if let Some(lr) = args.learning_rate {
        cfg.nn.learning_rate = lr;
    }
    if let Some(b) = args.batch_size {
        cfg.nn.batch_size = b;
    }
    if let Some(h) = args.hidden {
        cfg.nn.hidden = h;
    }
    let tc = train_config(&cfg);
    tc.validate()?;
    let file = File::open(&args.dataset).with_context(|| format!("opening {}", args.dataset.display()))?;
    let rows = mlp::read_dataset(std::io::BufReader::new(file), &args.dataset)?;
    let model = mlp::train_with(&rows, &tc)?;
    let out = prepare_out(&cfg, "train")?;
    write_model(&out, &model)?;
    println!(
        "trained {} epochs on {} rows; final loss {:.6}",
        tc.epochs,
        rows.len(),
        model.metadata.loss_curve.last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}

fn search_seed(cfg: &RunConfig) -> u64 {
    derive_seed(cfg.seed, "search")
}

fn ga_config(search: &SearchConfig, seed: u64) -> GaConfig {
    GaConfig {
        population_size: search.population_size,
        num_generations: search.num_generations,
        crossover_rate: search.crossover_rate,
        mutation_rate: search.mutation_rate,
        seed,
    }
}

/// Loads the configured model, or trains one on every origin except the
/// evacuating airport (and writes it to the output directory).
fn hybrid_model(cfg: &RunConfig, history: &History, out: &Path) -> Result<Arc<MlpModel>> {
    if let Some(path) = &cfg.hybrid.model {
        let file = File::open(path).with_context(|| format!("opening model {}", path.display()))?;
        return Ok(Arc::new(MlpModel::read(std::io::BufReader::new(file))?));
    }
    let rows = mlp::synthesize_from_history(history, Some(&cfg.airport))?;
    let model = mlp::train_with(&rows, &train_config(cfg))?;
    write_model(out, &model)?;
    Ok(Arc::new(model))
}

fn hybrid_solver(cfg: &RunConfig, model: Arc<MlpModel>, approach: Approach) -> Solver {
    let h = &cfg.hybrid;
    let search = SearchConfig {
        population_size: h.population_size,
        num_generations: h.num_generations,
        crossover_rate: h.crossover_rate,
        mutation_rate: h.mutation_rate,
    };
    Solver::Hybrid(HybridConfig {
        ga: ga_config(&search, search_seed(cfg)),
        injection_fraction: h.injection_fraction,
        approach,
        model,
    })
}

fn approach_of(name: ApproachName) -> Approach {
    match name {
        ApproachName::Random => Approach::RandomReplace,
        ApproachName::Worst => Approach::WorstReplace,
    }
}

fn schedule(mut cfg: RunConfig, args: ScheduleArgs) -> Result<()> {
    apply_data_args(&mut cfg, &args.data);
    if let Some(a) = &args.airport {
        cfg.airport = a.clone();
    }
    // Search flags apply to whichever stochastic solver is selected.
    let (pop, gens, cx, mu) = match args.solver {
        SolverName::Hybrid => (
            &mut cfg.hybrid.population_size,
            &mut cfg.hybrid.num_generations,
            &mut cfg.hybrid.crossover_rate,
            &mut cfg.hybrid.mutation_rate,
        ),
        _ => (
            &mut cfg.ga.population_size,
            &mut cfg.ga.num_generations,
            &mut cfg.ga.crossover_rate,
            &mut cfg.ga.mutation_rate,
        ),
    };
    if let Some(v) = args.pop {
        *pop = v;
    }
    if let Some(v) = args.gens {
        *gens = v;
    }
    if let Some(v) = args.crossover {
        *cx = v;
    }
    if let Some(v) = args.mutation {
        *mu = v;
    }
    if let Some(a) = args.approach {
        cfg.hybrid.approach = approach_of(a);
    }
    if let Some(f) = args.injection {
        cfg.hybrid.injection_fraction = f;
    }
    if let Some(m) = &args.model {
        cfg.hybrid.model = Some(m.clone());
    }
    if let Some(e) = args.epochs {
        cfg.nn.epochs = e;
    }

    let history = load_history(&cfg)?;
    let out = prepare_out(&cfg, "schedule")?;
    let solver = match args.solver {
        SolverName::Oracle => Solver::Oracle,
        SolverName::Ga => Solver::Ga(ga_config(&cfg.ga, search_seed(&cfg))),
        SolverName::Hybrid => {
            let model = hybrid_model(&cfg, &history, &out)?;
            hybrid_solver(&cfg, model, cfg.hybrid.approach)
        }
    };
    let day = build_day_schedule(&cfg.airport, &history, &solver)?;
    write_json(&out.join("schedule.json"), &day)?;
    write_with(&out.join("schedule.csv"), |w| Ok(day.write_csv(w)?))?;

    if !matches!(solver, Solver::Oracle) {
        let traces = out.join("traces");
        fs::create_dir_all(&traces).with_context(|| format!("creating {}", traces.display()))?;
        for table in history.candidate_tables(&cfg.airport)? {
            let outcome = solver.run(&table, table.depart_hour)?;
            if let Some(trace) = outcome.trace {
                write_with(&traces.join(format!("hour_{:02}.csv", table.depart_hour)), |w| {
                    Ok(trace.write_csv(w)?)
                })?;
            }
        }
    }
    println!(
        "{} schedule for {}: {} flights, total fitness {:.4}",
        solver.kind(),
        cfg.airport,
        day.flight_counts().iter().sum::<u32>(),
        day.total_fitness()
    );
    Ok(())
}

fn compare(mut cfg: RunConfig, args: CompareArgs) -> Result<()> {
    apply_data_args(&mut cfg, &args.data);
    if let Some(a) = &args.airport {
        cfg.airport = a.clone();
    }
    if let Some(s) = args.seeds {
        cfg.compare.seeds = s;
    }
    if let Some(m) = &args.model {
        cfg.hybrid.model = Some(m.clone());
    }
    let history = load_history(&cfg)?;
    let out = prepare_out(&cfg, "compare")?;
    let seed = search_seed(&cfg);
    let ga = |pop: usize, gens: usize| {
        let search = SearchConfig {
            population_size: pop,
            num_generations: gens,
            ..cfg.ga
        };
        (format!("ga-p{pop}-g{gens}"), Solver::Ga(ga_config(&search, seed)))
    };
    let hybrid_label = |c: &RunConfig, approach: Approach| {
        format!(
            "hybrid-{approach}-p{}-g{}",
            c.hybrid.population_size, c.hybrid.num_generations
        )
    };

    let mut configs = vec![("oracle".to_owned(), Solver::Oracle)];
    match args.sweep {
        Sweep::PopGen => {
            for pop in [15, 30, 75] {
                for gens in [5, 10, 25] {
                    configs.push(ga(pop, gens));
                }
            }
        }
        Sweep::Epochs => {
            configs.push(ga(cfg.hybrid.population_size, cfg.hybrid.num_generations));
            let mut c = cfg.clone();
            c.hybrid.model = None;
            for epochs in [5, 15, 25] {
                c.nn.epochs = epochs;
                let rows = mlp::synthesize_from_history(&history, Some(&cfg.airport))?;
                let model = Arc::new(mlp::train_with(&rows, &train_config(&c))?);
                configs.push((
                    format!("{}-e{epochs}", hybrid_label(&c, c.hybrid.approach)),
                    hybrid_solver(&c, model, c.hybrid.approach),
                ));
            }
        }
        Sweep::Approaches | Sweep::Schedule | Sweep::Injection => {
            let model = hybrid_model(&cfg, &history, &out)?;
            match args.sweep {
                Sweep::Approaches => {
                    configs.push(ga(cfg.hybrid.population_size, cfg.hybrid.num_generations));
                    for approach in [Approach::RandomReplace, Approach::WorstReplace] {
                        configs.push((hybrid_label(&cfg, approach), hybrid_solver(&cfg, model.clone(), approach)));
                    }
                }
                Sweep::Schedule => {
                    configs.push(ga(cfg.ga.population_size, cfg.ga.num_generations));
                    configs.push((
                        hybrid_label(&cfg, cfg.hybrid.approach),
                        hybrid_solver(&cfg, model, cfg.hybrid.approach),
                    ));
                }
                _ => {
                    for fraction in [0.1, 0.2, 0.4] {
                        let mut c = cfg.clone();
                        c.hybrid.injection_fraction = fraction;
                        configs.push((
                            format!("{}-f{fraction}", hybrid_label(&c, c.hybrid.approach)),
                            hybrid_solver(&c, model.clone(), c.hybrid.approach),
                        ));
                    }
                }
            }
        }
    }

    let report = compare_solvers(&cfg.airport, &history, &configs, cfg.compare.seeds, derive_seed(cfg.seed, "compare"))?;
    write_with(&out.join("comparison.csv"), |w| Ok(report.write_csv(w)?))?;
    write_with(&out.join("summary.csv"), |w| Ok(report.write_summary_csv(w)?))?;
    write_with(&out.join("flights.csv"), |w| write_flight_pivot(&report, w))?;
    for s in report.summary().iter().filter(|s| s.hour.is_none()) {
        println!(
            "{:<28} mean fitness {:>8.4} (oracle {:.4}), optimal {:>5.1}%, mean flights {:.2}",
            s.config,
            s.mean_fitness,
            s.mean_oracle_fitness,
            100.0 * s.optimal_rate,
            s.mean_flights
        );
    }
    Ok(())
}

/// `hour,capability,<config>...` with the mean flight count per config.
fn write_flight_pivot(report: &ComparisonReport, w: &mut impl Write) -> Result<()> {
    let summary = report.summary();
    write!(w, "hour,capability")?;
    for c in &report.configs {
        write!(w, ",{c}")?;
    }
    writeln!(w)?;
    for hour in 0..24u8 {
        let capability = report
            .rows
            .iter()
            .find(|r| r.hour == hour)
            .map_or(f64::NAN, |r| r.capability);
        write!(w, "{hour},{capability}")?;
        for c in &report.configs {
            let s = summary
                .iter()
                .find(|s| s.hour == Some(hour) && &s.config == c)
                .map_or(f64::NAN, |s| s.mean_flights);
            write!(w, ",{s}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
