//! Command implementations behind the `qchan` binary.
//!
//! Every command returns an [`Outcome`]: the text destined for stdout (or
//! `--out`), an optional diagnostic for stderr and the exit code
//! (0 success, 2 refuted / not realizable / invariance violated, 1 error).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod analyze;
mod gauge;
mod region;
mod sample;
mod synthesize;

pub use analyze::{cmd_analyze, AnalysisReport};
pub use gauge::cmd_gauge;
pub use region::cmd_region;
pub use sample::cmd_sample;
pub use synthesize::cmd_synthesize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qchan", version, about = "Gauge-invariant spectral analysis of quantum channels")]
pub struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Slack on the minimal Choi eigenvalue (default 1e-10·d).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, CP criteria, metrics and the Choi check for a channel or spectrum file.
    Analyze(AnalyzeArgs),
    /// Canonical qubit channel for {"x": .., "z": [re, im]} or {"real": [l1, l2, l3]}.
    Synthesize(SynthesizeArgs),
    /// CSV of the admissible complex eigenvalue region for a fixed real eigenvalue.
    Region(RegionArgs),
    /// Statistics over random CPTP channels.
    Sample(SampleArgs),
    /// Checks that sequence probabilities and spectra are gauge invariant.
    Gauge(GaugeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    /// Random starts for the feasibility search.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SynthesizeArgs {
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x: f64,
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Hilbert-space dimensions to sample (repeatable).
    #[arg(long = "dim", default_values_t = [2])]
    pub dims: Vec<usize>,
    /// Kraus rank; defaults to d² for each dimension.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Random starts per feasibility search on qubit samples.
    #[arg(long, default_value_t = 16)]
    pub z_samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GaugeArgs {
    /// Gate files in channel format.
    #[arg(long, num_args = 1.., required = true)]
    pub gates: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.3)]
    pub strength: f64,
    #[arg(long, default_value_t = 3)]
    pub max_len: usize,
    /// Use a gauge whose first row is not (1, 0, …, 0); the check must fail.
    #[arg(long)]
    pub break_gauge: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub message: Option<String>,
    pub code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self { output, message: None, code: EXIT_OK }
    }
}

/// Global flags shared by all commands.
#[derive(Debug, Clone, Copy, Default)]
pub struct Globals {
    pub seed: u64,
    pub tol: Option<f64>,
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let g = Globals { seed: cli.seed, tol: cli.tol };
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, g),
        Command::Synthesize(a) => cmd_synthesize(a),
        Command::Region(a) => cmd_region(a),
        Command::Sample(a) => cmd_sample(a, g),
        Command::Gauge(a) => cmd_gauge(a, g),
    }
}

fn read(path: &std::path::Path) -> anyhow::Result<String> {
    use anyhow::Context;
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn to_json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
