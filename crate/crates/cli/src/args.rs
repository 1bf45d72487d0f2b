use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "trimode", version, about = "Separability of three-mode Gaussian states under symmetric amplification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one parameter point (or a grid of them with --grid).
    Classify(ClassifyArgs),
    /// Trace the covariance entries and class over t'.
    Evolve(EvolveArgs),
    /// Closed-form separability boundaries in n'^2 and nbar.
    Boundary(BoundaryArgs),
    /// Regenerate the data behind figure 1, 2 or 3.
    Figure(FigureArgs),
    /// Run the oracle cross-check suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Plain-text `key = value` file with defaults for any flag.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output CSV path (standard output if omitted, where allowed).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Tolerance for PPT and feasibility decisions.
    #[arg(long, value_name = "REAL")]
    pub tol: Option<f64>,
    /// Worker threads (0 picks one per core).
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eta0p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta1p: Option<f64>,
    /// Mean thermal occupation of the bath.
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Scaled time Gamma t / 2, or `inf`.
    #[arg(long)]
    pub tprime: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Swept axis AXIS:MIN:MAX:COUNT; repeat for a second axis.
    #[arg(long, value_name = "AXIS:MIN:MAX:COUNT", allow_hyphen_values = true)]
    pub grid: Vec<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Last t' of the trace.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of rows, including t' = 0.
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Fullsep,
    Bisep,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct BoundaryArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_name = "AXIS:MIN:MAX:COUNT", allow_hyphen_values = true)]
    pub grid: Vec<String>,
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    /// Also locate each boundary by bisection over classification.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number: 1, 2 or 3.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub n: u8,
    /// Samples per axis.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub level: Option<LevelArg>,
    #[command(flatten)]
    pub common: CommonArgs,
}
