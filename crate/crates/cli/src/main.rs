//! `evacsched`: ingest flight data, synthesize training data, train the
//! predictor, and build or compare hourly evacuation schedules.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "evacsched", version, about = "Hourly evacuation flight scheduling")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Global seed for every stochastic component.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write synthetic operations and flight-history files.
    Generate(DataArgs),
    /// Compute per-airport hourly capability (and top destinations when a
    /// flight history is given).
    Ingest(IngestArgs),
    /// Build the oracle-labeled 41-column training dataset.
    SynthData(SynthArgs),
    /// Train the selection predictor on a dataset file.
    Train(TrainArgs),
    /// Build the 24-hour evacuation schedule for one airport.
    Schedule(ScheduleArgs),
    /// Compare solver configurations over several seeds.
    Compare(CompareArgs),
}

#[derive(Debug, Args, Default)]
pub struct DataArgs {
    /// Operations file (`airport,date,hour,class,count`).
    #[arg(long)]
    pub operations: Option<PathBuf>,
    /// Flight-history file (`origin,dest,date,duration_hours`).
    #[arg(long)]
    pub flights: Option<PathBuf>,
    /// Days of synthetic history when no files are given.
    #[arg(long)]
    pub days: Option<u32>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, required = true)]
    pub operations: PathBuf,
    #[arg(long)]
    pub flights: Option<PathBuf>,
    /// Only emit rows for this airport.
    #[arg(long)]
    pub airport: Option<String>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Hold-out airport left out of the dataset.
    #[arg(long)]
    pub exclude: Option<String>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Hidden layer widths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub hidden: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverName {
    Oracle,
    Ga,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ApproachName {
    Random,
    Worst,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub airport: Option<String>,
    #[arg(long, value_enum, default_value = "oracle")]
    pub solver: SolverName,
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub gens: Option<usize>,
    #[arg(long)]
    pub crossover: Option<f64>,
    #[arg(long)]
    pub mutation: Option<f64>,
    #[arg(long, value_enum)]
    pub approach: Option<ApproachName>,
    /// Share of the population replaced by NN samples each generation.
    #[arg(long)]
    pub injection: Option<f64>,
    /// Trained model file for the hybrid solver.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Epochs when the hybrid model is trained on the fly.
    #[arg(long)]
    pub epochs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    /// GA population {15,30,75} x generations {5,10,25}.
    PopGen,
    /// Hybrid with models trained for {5,15,25} epochs, plus GA(15,5).
    Epochs,
    /// GA(15,5) against both injection approaches.
    Approaches,
    /// GA(75,25) against Hybrid(15,5).
    Schedule,
    /// Hybrid injection fraction {0.1,0.2,0.4}.
    Injection,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub airport: Option<String>,
    #[arg(long, value_enum, default_value = "approaches")]
    pub sweep: Sweep,
    /// Repeats per configuration.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Trained model for the hybrid configurations (except the epoch sweep).
    #[arg(long)]
    pub model: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
