use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "heilbronn", version, about = "Point-line configurations, triangles, incidences and tubes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Random seed, echoed into every output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output path: the CSV report, or the generated file for `gen`.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a configuration, point set, line set or tube family.
    Gen(GenArgs),
    /// Check a .plc, .pts or .tubes file.
    Validate(ValidateArgs),
    /// Minimum configuration distance d(X).
    Dx(ConfigArg),
    /// Minimum-area triangle of a point set.
    MinTriangle(MinTriangleArgs),
    /// Triangle found through the point-line reduction.
    PairPipeline(PointsArg),
    /// Concentration numbers over a dyadic ladder.
    Conc(ConcArgs),
    /// Katz-Tao exponent fit of lines or tubes.
    KatzTao(KatzTaoArgs),
    /// Slab-concentration check in space.
    PlaneCheck(PlaneCheckArgs),
    /// Uniformize a configuration and print its certificate.
    Uniformize(UniformizeArgs),
    /// Dyadic scan of the normalized incidence count.
    ScanB(ScanArgs),
    /// One high-low inequality at one scale.
    HighlowCheck(HighlowArgs),
    /// Initial estimate at scale w.
    InitialEst(ScaleArgs),
    /// Double-counting estimate at scale w.
    DoubleCount(ScaleArgs),
    /// Two-ends decomposition of planar tubes.
    TwoEnds(TwoEndsArgs),
    /// Hairbrush union-volume lower bound.
    BrushCheck(BrushArgs),
    /// Simulated annealing for d(X) or the smallest triangle.
    Anneal(AnnealArgs),
    /// Log-log exponent over a ladder of rungs and seeds.
    Exponent(ExponentArgs),
    /// Run a TOML manifest, writing CSVs and a run log.
    Run(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Validate(_) => "validate",
            Command::Dx(_) => "dx",
            Command::MinTriangle(_) => "min-triangle",
            Command::PairPipeline(_) => "pair-pipeline",
            Command::Conc(_) => "conc",
            Command::KatzTao(_) => "katz-tao",
            Command::PlaneCheck(_) => "plane-check",
            Command::Uniformize(_) => "uniformize",
            Command::ScanB(_) => "scan-b",
            Command::HighlowCheck(_) => "highlow-check",
            Command::InitialEst(_) => "initial-est",
            Command::DoubleCount(_) => "double-count",
            Command::TwoEnds(_) => "two-ends",
            Command::BrushCheck(_) => "brush-check",
            Command::Anneal(_) => "anneal",
            Command::Exponent(_) => "exponent",
            Command::Run(_) => "run",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Vertical,
    Bush,
    Plane,
    StGrid,
    Parabola,
    RandomPoints,
    RandomConfig,
    KatzTao,
}

impl GenKind {
    pub fn extension(self) -> &'static str {
        match self {
            GenKind::Parabola | GenKind::RandomPoints => "pts",
            GenKind::KatzTao => "tubes",
            _ => "plc",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Target size (st-grid, parabola, random sets, tube count).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub bushes: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t2: f64,
    /// Where to write the points of a point-and-line family.
    #[arg(long)]
    pub points_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    #[arg(long = "config", short = 'x')]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct PointsArg {
    #[arg(long, short = 'p')]
    pub points: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TriangleMethod {
    Fast,
    Brute,
}

#[derive(Debug, Args)]
pub struct MinTriangleArgs {
    #[arg(long, short = 'p')]
    pub points: PathBuf,
    #[arg(long, value_enum, default_value_t = TriangleMethod::Fast)]
    pub method: TriangleMethod,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConcMode {
    Points,
    Lines,
    Full,
}

#[derive(Debug, Args)]
pub struct ConcArgs {
    #[arg(long = "config", short = 'x')]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = ConcMode::Full)]
    pub mode: ConcMode,
    #[arg(long, default_value_t = 0.0625)]
    pub wmin: f64,
    #[arg(long, default_value_t = 1.0)]
    pub wmax: f64,
}

#[derive(Debug, Args)]
pub struct KatzTaoArgs {
    #[arg(long = "config", short = 'x', conflicts_with = "tubes", required_unless_present = "tubes")]
    pub config: Option<PathBuf>,
    #[arg(long, short = 't')]
    pub tubes: Option<PathBuf>,
    #[arg(long)]
    pub delta: f64,
    /// Exponents for the reported Katz-Tao constant.
    #[arg(long, requires = "t2")]
    pub t1: Option<f64>,
    #[arg(long, requires = "t1")]
    pub t2: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PlaneCheckArgs {
    #[arg(long = "config", short = 'x')]
    pub config: PathBuf,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct UniformizeArgs {
    #[arg(long = "config", short = 'x')]
    pub config: PathBuf,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
    /// Separation gap in grid cells.
    #[arg(long, default_value_t = 1)]
    pub gap: usize,
    /// Where to write the uniformized configuration.
    #[arg(long)]
    pub config_out: Option<PathBuf>,
}

/// Points and lines, either separately or from one configuration.
#[derive(Debug, Args)]
pub struct IncidenceInput {
    #[arg(long, short = 'p', requires = "lines", conflicts_with = "config")]
    pub points: Option<PathBuf>,
    #[arg(long, short = 'l', requires = "points")]
    pub lines: Option<PathBuf>,
    #[arg(long = "config", short = 'x', required_unless_present = "points")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: IncidenceInput,
    #[arg(long, default_value_t = 0.25)]
    pub wmax: f64,
    #[arg(long)]
    pub wmin: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HighlowVariant {
    Basic,
    Refined,
    FewDirections,
    Wellspaced,
}

#[derive(Debug, Args)]
pub struct HighlowArgs {
    #[arg(value_enum)]
    pub variant: HighlowVariant,
    #[command(flatten)]
    pub input: IncidenceInput,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t2: f64,
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    #[arg(long = "config", short = 'x')]
    pub config: PathBuf,
    #[arg(long)]
    pub w: f64,
    #[arg(long, default_value_t = 0)]
    pub anchor: usize,
}

#[derive(Debug, Args)]
pub struct TwoEndsArgs {
    #[arg(long, short = 't')]
    pub tubes: PathBuf,
    #[arg(long)]
    pub delta: f64,
    #[arg(long = "Delta")]
    pub big_delta: f64,
    #[arg(long, default_value_t = 4.0)]
    pub c1: f64,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub net_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BrushArgs {
    #[arg(long, short = 't')]
    pub tubes: PathBuf,
    /// Defaults to the width (plane) or radius (space) of the first tube.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Planar Katz-Tao exponent.
    #[arg(long = "t", default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t2: f64,
    #[arg(long)]
    pub k: f64,
    /// Shaded fraction of every tube.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1)]
    pub pieces: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub resolution: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AnnealTarget {
    Dx,
    Triangle,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 2000)]
    pub moves: usize,
    #[arg(long, default_value_t = 0.95)]
    pub cooling: f64,
    #[arg(long)]
    pub t0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnnealArgs {
    #[arg(value_enum)]
    pub target: AnnealTarget,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Where to write the best configuration or point set.
    #[arg(long)]
    pub config_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    /// vertical, triangle-pipeline, anneal-dx or anneal-triangle.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Comma-separated rungs; `1/16` style fractions are accepted.
    #[arg(long)]
    pub ladder: String,
    /// Comma-separated seeds; defaults to the global seed.
    #[arg(long)]
    pub seeds: Option<String>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}
