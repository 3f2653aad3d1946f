use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use weylbound::CompletionMode;

#[derive(Debug, Parser)]
#[command(
    name = "weylbound",
    version,
    about = "Weyl sums and the dimension of their large values"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// Worker threads (0 uses every core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Write a run record JSON file into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// key=value file supplying defaults for flags not given on the command line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Literal,
    #[default]
    Symmetrized,
}

impl From<Mode> for CompletionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Literal => CompletionMode::Literal,
            Mode::Symmetrized => CompletionMode::Symmetrized,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentFunctional {
    /// |S_d(x; N)|^{2s}
    #[default]
    Weyl,
    /// W_d(x; N)^{2 s(d)}
    Completed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weights {
    #[default]
    Unit,
    /// Independent uniform unimodular weights drawn from the seed.
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Weyl sum S_d(x; N).
    Sum(SumArgs),
    /// Evaluate the completed sum W_d(x; N).
    Completed(CompletedArgs),
    /// Monte Carlo moments over the torus.
    Moment(MomentArgs),
    /// Exact solution count of the Vinogradov system.
    Vinogradov(VinogradovArgs),
    /// Count superlevel boxes of W_d along a dyadic schedule.
    Boxes(BoxesArgs),
    /// Probe the stability of large values of W_d on small rectangles.
    Stability(StabilityArgs),
    /// Upper bound u(d, alpha) for the dimension of the exceptional set.
    Dimbound(DimboundArgs),
    /// Tabulate u(d, alpha) and the simplified bounds over a grid.
    Table(TableArgs),
    /// Re-run a recorded experiment and compare outputs.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sum(_) => "sum",
            Command::Completed(_) => "completed",
            Command::Moment(_) => "moment",
            Command::Vinogradov(_) => "vinogradov",
            Command::Boxes(_) => "boxes",
            Command::Stability(_) => "stability",
            Command::Dimbound(_) => "dimbound",
            Command::Table(_) => "table",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SumArgs {
    #[arg(short = 'd', long)]
    pub degree: usize,
    #[arg(short = 'N', long)]
    pub len: usize,
    /// Comma-separated coordinates, decimals or fractions p/q.
    #[arg(short = 'x', long, allow_hyphen_values = true)]
    pub point: String,
    /// Term-by-term evaluation with a trigonometric call per term.
    #[arg(long, conflicts_with = "fast")]
    pub direct: bool,
    /// Difference-table recurrence (the default).
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CompletedArgs {
    #[arg(short = 'd', long)]
    pub degree: usize,
    #[arg(short = 'N', long)]
    pub len: usize,
    #[arg(short = 'x', long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, value_enum, default_value_t)]
    pub mode: Mode,
    /// Include the per-frequency magnitudes.
    #[arg(long)]
    pub spectrum: bool,
    /// Also report max_{M <= N} |S_d(x; M)| / W_d(x; N).
    #[arg(long)]
    pub domination: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MomentArgs {
    #[arg(short = 'd', long)]
    pub degree: usize,
    /// Moment half-order; defaults to s(d) = d(d+1)/2.
    #[arg(short = 's', long)]
    pub s: Option<usize>,
    /// One or more sum lengths, comma-separated.
    #[arg(short = 'N', long, value_delimiter = ',', required = true)]
    pub len: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub functional: MomentFunctional,
    #[arg(long, value_enum, default_value_t)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t)]
    pub weights: Weights,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct VinogradovArgs {
    #[arg(short = 'd', long)]
    pub degree: usize,
    #[arg(short = 's', long)]
    pub s: usize,
    #[arg(short = 'N', long)]
    pub len: usize,
    /// Largest admissible N^{2s}.
    #[arg(long, default_value_t = weylbound::meanvalue::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BoxesArgs {
    #[arg(short = 'd', long)]
    pub degree: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long)]
    pub i_min: u32,
    #[arg(long)]
    pub i_max: u32,
    #[arg(long, value_enum, default_value_t = Mode::Literal)]
    pub mode: Mode,
    /// Largest admissible number of boxes per grid.
    #[arg(long, default_value_t = 100_000_000)]
    pub cap: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct StabilityArgs {
    #[arg(short = 'd', long)]
    pub degree: usize,
    /// Sum length for a single-base check.
    #[arg(short = 'N', long, required_unless_present = "i_min")]
    pub len: Option<usize>,
    /// Base point; without it random bases are surveyed.
    #[arg(short = 'x', long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub probes: usize,
    /// Random bases per N when no base point is given.
    #[arg(long, default_value_t = 50)]
    pub bases: usize,
    /// Dyadic scan instead of a single N.
    #[arg(long, requires = "i_max", conflicts_with = "len")]
    pub i_min: Option<u32>,
    #[arg(long, requires = "i_min")]
    pub i_max: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Literal)]
    pub mode: Mode,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DimboundArgs {
    #[arg(short = 'd', long)]
    pub degree: usize,
    #[arg(long)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TableArgs {
    #[arg(long, default_value_t = 2)]
    pub d_min: usize,
    #[arg(long, default_value_t = 12)]
    pub d_max: usize,
    #[arg(long, default_value_t = 0.01)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub alpha_max: f64,
    /// Number of equally spaced alpha values.
    #[arg(long, default_value_t = 99)]
    pub alpha_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Run record JSON file.
    pub record: PathBuf,
}
