mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use config::{FileConfig, UsageError};

/// Time-domain popcount and argmax experiments for asynchronous Tsetlin Machine inference.
#[derive(Parser, Debug)]
#[command(name = "tdpop", version)]
struct Cli {
    /// TOML or JSON file with one section per subcommand; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every random draw; required by stochastic runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Delay versus Hamming weight of one delay line, with Spearman's rho.
    Characterize(CharacterizeArgs),
    /// Simulate asynchronous inference over a dataset.
    Infer(InferArgs),
    /// Latency, resource and toggle trends over clauses or classes.
    Sweep(SweepArgs),
    /// Four-architecture latency and resource table for one model shape.
    Compare(CompareArgs),
    /// Placement, pin and routing constraint script.
    Flowgen(FlowgenArgs),
    /// Convert a raw feature table to Boolean features.
    Booleanize(BooleanizeArgs),
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterizeArgs {
    /// Delay elements in the line [default: 150].
    #[arg(long)]
    pub elements: Option<usize>,
    /// d_high - d_low in ps; repeat or comma-separate for several runs.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub delta: Vec<f64>,
    /// Low-latency net delay in ps [default: 384.5].
    #[arg(long)]
    pub d_low: Option<f64>,
    /// High-latency net delay in ps, used when no --delta is given [default: 617.6].
    #[arg(long)]
    pub d_high: Option<f64>,
    /// Per-element static offset sigma in ps [default: 0].
    #[arg(long)]
    pub sigma_static: Option<f64>,
    /// Per-element per-transition jitter sigma in ps [default: 0].
    #[arg(long)]
    pub sigma_dynamic: Option<f64>,
    /// Launch overhead in ps [default: 0].
    #[arg(long)]
    pub base: Option<f64>,
    /// Measurements per weight [default: 1].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Weight step from 0 to the line length [default: 1].
    #[arg(long)]
    pub weight_step: Option<usize>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferArgs {
    /// Model JSON; omit to synthesize one from --classes/--clauses/--features.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long)]
    pub clauses: Option<usize>,
    #[arg(long)]
    pub features: Option<usize>,
    /// Literal inclusion probability of a synthesized model [default: 1.5 / F].
    #[arg(long)]
    pub include_prob: Option<f64>,
    /// Boolean dataset (CSV or JSON); omit to draw --samples random inputs.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Measured net delays: iris10, iris50, mnist50 or mnist100.
    #[arg(long)]
    pub calibration: Option<String>,
    #[arg(long)]
    pub d_low: Option<f64>,
    #[arg(long)]
    pub d_high: Option<f64>,
    #[arg(long)]
    pub sigma_static: Option<f64>,
    #[arg(long)]
    pub sigma_dynamic: Option<f64>,
    #[arg(long)]
    pub base: Option<f64>,
    /// Clause bundling delay in ps [default: 2000].
    #[arg(long)]
    pub bundle_delay: Option<f64>,
    #[arg(long)]
    pub latch_delay: Option<f64>,
    #[arg(long)]
    pub ack_delay: Option<f64>,
    #[arg(long)]
    pub xnor_delay: Option<f64>,
    /// Arbiter level delay in ps [default: 100].
    #[arg(long)]
    pub d_arb: Option<f64>,
    /// Metastability window in ps [default: 10].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Polarity of the first cycle: rising or falling.
    #[arg(long)]
    pub phase0: Option<String>,
    /// Cross-check every prediction against integer inference.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepArgs {
    /// clauses or classes [default: clauses].
    #[arg(long)]
    pub vary: Option<String>,
    #[arg(long)]
    pub from: Option<usize>,
    #[arg(long)]
    pub to: Option<usize>,
    #[arg(long)]
    pub step: Option<usize>,
    /// Classes while sweeping clauses [default: 6].
    #[arg(long)]
    pub fixed_classes: Option<usize>,
    /// Clauses per class while sweeping classes [default: 100].
    #[arg(long)]
    pub fixed_clauses: Option<usize>,
    /// Simulated cycles per toggle count [default: 1000].
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Architectures to include [default: all].
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub archs: Vec<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareArgs {
    /// iris10, iris50, mnist50 or mnist100 [default: mnist50].
    #[arg(long)]
    pub design: Option<String>,
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long)]
    pub clauses: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct FlowgenArgs {
    #[arg(long)]
    pub num_pdls: Option<usize>,
    #[arg(long)]
    pub elements: Option<usize>,
    #[arg(long)]
    pub origin_column: Option<u32>,
    #[arg(long)]
    pub origin_row: Option<u32>,
    #[arg(long)]
    pub bel: Option<String>,
    #[arg(long)]
    pub column_stride: Option<u32>,
    /// Low-latency net maximum delay in ps.
    #[arg(long)]
    pub low_max: Option<f64>,
    #[arg(long)]
    pub high_min: Option<f64>,
    #[arg(long)]
    pub high_max: Option<f64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleanizeArgs {
    /// Raw CSV with the label in the first column.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// quantile or threshold [default: quantile].
    #[arg(long)]
    pub mode: Option<String>,
    /// Quantile bins per feature [default: 3].
    #[arg(long)]
    pub bins: Option<usize>,
    /// Pixel threshold; bit = pixel > threshold [default: 75].
    #[arg(long)]
    pub threshold: Option<u8>,
    /// Fraction of rows used to fit quantile edges [default: 0.8].
    #[arg(long)]
    pub train_fraction: Option<f64>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let ctx = commands::Context {
        seed: cli.seed.or(file.seed),
        outputs: config::Outputs::new(
            cli.out.clone().or(file.out.clone()).unwrap_or_else(|| PathBuf::from("out")),
            cli.force,
        ),
    };
    match &cli.command {
        Command::Characterize(a) => {
            commands::characterize(&ctx, config::merge(a, file.characterize.as_ref(), "characterize")?)
        }
        Command::Infer(a) => commands::infer(&ctx, config::merge(a, file.infer.as_ref(), "infer")?),
        Command::Sweep(a) => commands::sweep(&ctx, config::merge(a, file.sweep.as_ref(), "sweep")?),
        Command::Compare(a) => commands::compare(&ctx, config::merge(a, file.compare.as_ref(), "compare")?),
        Command::Flowgen(a) => commands::flowgen(&ctx, a, file.flowgen.as_ref()),
        Command::Booleanize(a) => {
            commands::booleanize(&ctx, config::merge(a, file.booleanize.as_ref(), "booleanize")?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
