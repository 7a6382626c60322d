//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "RGG_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rgg", version, about = "Random geometric graph experiments", args_override_self = true)]
pub struct Cli {
    /// Key-value file whose entries act as flags; explicit flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Master seed; a random one is drawn and printed when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,

    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    /// Packed adjacency (only for `sample`).
    Binary,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Draw one graph and write it as an edge list.
    Sample(SampleArgs),
    /// Exact and asymptotic unsigned and signed weights of a pattern.
    Expect(ExpectArgs),
    /// Signed weight, expected signed count and its bound.
    SignedExpect(SignedExpectArgs),
    /// Monte Carlo mean of a signed count against its prediction.
    McVerify(McVerifyArgs),
    /// Signed-cycle test on a graph file or a fresh sample.
    Detect(DetectArgs),
    /// Type I / Type II rates over a dimension grid.
    Power(PowerArgs),
    /// Nearest-mean dimension estimate.
    EstimateDim(EstimateArgs),
    /// Regime boundaries in exponent coordinates.
    PhaseDiagram(PhaseArgs),
    /// Indistinguishability bound evaluators.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Low-degree advantage over small patterns.
    Advantage(AdvantageArgs),
    /// Invariant checks across all modules.
    Selftest(SelftestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::Expect(_) => "expect",
            Command::SignedExpect(_) => "signed-expect",
            Command::McVerify(_) => "mc-verify",
            Command::Detect(_) => "detect",
            Command::Power(_) => "power",
            Command::EstimateDim(_) => "estimate-dim",
            Command::PhaseDiagram(_) => "phase-diagram",
            Command::Bounds(b) => b.name(),
            Command::Advantage(_) => "advantage",
            Command::Selftest(_) => "selftest",
        }
    }
}

pub const COMMANDS: &[&str] = &[
    "sample",
    "expect",
    "signed-expect",
    "mc-verify",
    "detect",
    "power",
    "estimate-dim",
    "phase-diagram",
    "bounds",
    "advantage",
    "selftest",
];

pub const BOUNDS_COMMANDS: &[&str] =
    &["moments", "kl", "gamma", "small-ball", "influence", "hypercube-tv"];

#[derive(Clone, Debug, Args, Serialize)]
pub struct ModelArgs {
    /// Vertex count.
    #[arg(long)]
    pub n: usize,
    /// Torus dimension.
    #[arg(long)]
    pub d: usize,
    /// `inf` or a finite q >= 1.
    #[arg(long, default_value = "inf")]
    pub q: String,
    /// Edge density.
    #[arg(long)]
    pub p: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphModel {
    Rgg,
    Er,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    /// Every block satisfies `lambda (2|V| - 1) < 1`.
    Nowrap,
    /// `|V| <= 1/(8 lambda)`.
    Stated,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = GraphModel::Rgg)]
    pub graph: GraphModel,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ExpectArgs {
    /// Builtin name (C4, K23, bowtie, theta, P3, K4) or edges like `0-1 1-2 2-0`.
    #[arg(long)]
    pub pattern: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Validity::Nowrap)]
    pub validity: Validity,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SignedExpectArgs {
    #[arg(long)]
    pub pattern: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Polylog exponent in the signed weight bound.
    #[arg(long, default_value_t = 2.0)]
    pub bound_c: f64,
    #[arg(long, value_enum, default_value_t = Validity::Nowrap)]
    pub validity: Validity,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct McVerifyArgs {
    #[arg(long)]
    pub pattern: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = GraphModel::Rgg)]
    pub graph: GraphModel,
    /// Sampled tuples per graph for patterns other than C3 and C4.
    #[arg(long, default_value_t = 100_000)]
    pub tuples: u64,
    #[arg(long, value_enum, default_value_t = Validity::Nowrap)]
    pub validity: Validity,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DetectArgs {
    /// Edge-list file; a graph is sampled when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Vertex count of the sampled graph.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of the alternative.
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value = "C3")]
    pub stat: String,
    #[arg(long, value_enum, default_value_t = GraphModel::Rgg)]
    pub graph: GraphModel,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct PowerArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "C3,C4")]
    pub stats: Vec<String>,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct EstimateArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// True dimension of sampled graphs.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value = "C4")]
    pub stat: String,
    #[arg(long)]
    pub d_min: usize,
    #[arg(long)]
    pub d_max: usize,
    /// Samples in a recovery experiment.
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct PhaseArgs {
    /// `linfty` or `lq`.
    #[arg(long)]
    pub model: String,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsCommand {
    /// Moments of the self-convolution for t = 1..=t-max.
    Moments(MomentArgs),
    /// KL tensorization bound.
    Kl(KlArgs),
    /// Nested Monte Carlo moment of gamma.
    Gamma(GammaArgs),
    /// Small-ball probabilities of sum U^q against the closed-form bound.
    SmallBall(SmallBallArgs),
    /// Exact influences of a hypercube connection function.
    Influence(InfluenceArgs),
    /// Influence ratio for the hypercube model.
    HypercubeTv(HypercubeTvArgs),
}

impl BoundsCommand {
    pub fn name(&self) -> &'static str {
        match self {
            BoundsCommand::Moments(_) => "bounds moments",
            BoundsCommand::Kl(_) => "bounds kl",
            BoundsCommand::Gamma(_) => "bounds gamma",
            BoundsCommand::SmallBall(_) => "bounds small-ball",
            BoundsCommand::Influence(_) => "bounds influence",
            BoundsCommand::HypercubeTv(_) => "bounds hypercube-tv",
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MomentArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 4)]
    pub t_max: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct KlArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<usize>,
    #[arg(long)]
    pub p: f64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GammaArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "inf")]
    pub q: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, default_value_t = 2000)]
    pub outer: u64,
    #[arg(long, default_value_t = 1000)]
    pub inner: u64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SmallBallArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub q: f64,
    /// Interval as `a,b`; random intervals around the median when absent.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub interval: Option<Vec<f64>>,
    #[arg(long, default_value_t = 20)]
    pub intervals: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct InfluenceArgs {
    /// `dictator`, `threshold:TAU` or `constant:C`.
    #[arg(long)]
    pub sigma: String,
    #[arg(long)]
    pub dim: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct HypercubeTvArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub sigma: String,
    #[arg(long)]
    pub dim: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct AdvantageArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    /// Largest edge count D.
    #[arg(long, default_value_t = 6)]
    pub max_edges: usize,
    #[arg(long, default_value_t = 6)]
    pub vmax: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SelftestArgs {
    /// Use the full Monte Carlo budgets.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false")]
    pub full: bool,
}
