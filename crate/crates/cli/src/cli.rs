//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tdm_reductions::FaultModel;

use crate::reduce::{InputClass, ReduceKind};

#[derive(Debug, Parser)]
#[command(
    name = "tdm",
    version,
    about = "Sample, benchmark and test trapdoored matrices; run the worst-case reductions"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "TDM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Print only the JSON report; no human summary on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one trapdoor and write it as TDM1.
    Sample(SampleArgs),
    /// Measure matrix-vector cost against dense multiplication.
    Bench(BenchArgs),
    /// Run the sanity tests on many samples.
    Stats(StatsArgs),
    /// Run a worst-case reduction against a simulated oracle.
    Reduce(ReduceArgs),
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: usize,
    /// Field modulus; ignored by real families.
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Walk length of Kac-based families.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub family: String,
    /// Comma-separated, strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Field modulus (an NTT-friendly prime by default).
    #[arg(long, default_value_t = 998_244_353)]
    pub p: u32,
    /// Timed repetitions per size; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Largest size at which the dense control is stored and timed.
    #[arg(long, default_value_t = 4096)]
    pub dense_cap: usize,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Significance level.
    #[arg(long, default_value_t = 1e-3)]
    pub alpha: f64,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pub kind: ReduceKind,
    /// honest, exactprob:<eps>, corrupt:<rate>, alwayswrong or singular.
    #[arg(long, default_value = "honest")]
    pub model: FaultModel,
    /// Family supplying the masks.
    #[arg(long, default_value = "lpn")]
    pub family: String,
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub p: u32,
    /// Advantage parameter of the oracle hypothesis.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = InputClass::Structured)]
    pub input: InputClass,
    /// Overrides the computed repetition count.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Write one JSON line per oracle call here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}
