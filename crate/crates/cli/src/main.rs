//! `apes`: sample, score and benchmark point clouds from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::{PossibleValuesParser, TypedValueParser as _};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Flag combinations clap cannot express; reported with exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] apes_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "apes", version, about = "Edge-aware point cloud sampling")]
struct Cli {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, env = "APES_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Select a subset of points.
    Sample(SampleArgs),
    /// Write per-point scores without selecting.
    Score(ScoreArgs),
    /// Generate a synthetic shape with edge labels.
    GenShape(GenShapeArgs),
    /// Compare samplers over a corpus of labeled clouds.
    Bench(BenchArgs),
    /// Edge map of a grayscale PGM image.
    ImageEdge(ImageEdgeArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Neighborhood size, the query point included.
    #[arg(long, default_value_t = 32)]
    pub k: usize,
    /// `identity`, `seeded_gaussian:<seed>:<d>`, or a JSON weights file.
    #[arg(long, default_value = "identity")]
    pub weights: String,
    /// Per-point features (one row per line); defaults to the coordinates.
    #[arg(long)]
    pub features: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// rs, fps, grid, idis, apes-local, apes-global, fps+apes-local, fps+apes-global
    #[arg(long)]
    pub method: String,
    /// Number of points to keep (not used by grid).
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// FPS start index.
    #[arg(long, conflicts_with = "start_seed")]
    pub start: Option<usize>,
    /// Draw the FPS start index from this seed.
    #[arg(long)]
    pub start_seed: Option<u64>,
    /// Successive stage sizes, e.g. 512,256.
    #[arg(long, value_delimiter = ',')]
    pub stages: Option<Vec<usize>>,
    /// Voxel edge length (grid only).
    #[arg(long)]
    pub voxel: Option<f64>,
    /// Selected indices, one per line.
    #[arg(long)]
    pub out: PathBuf,
    /// Sampled points as .xyz or .ply.
    #[arg(long)]
    pub out_cloud: Option<PathBuf>,
    /// Per-point scores as CSV (score-based methods only).
    #[arg(long)]
    pub out_scores: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScoreMethod {
    ApesLocal,
    ApesGlobal,
    Idis,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: ScoreMethod,
    #[command(flatten)]
    pub model: ModelArgs,
    /// CSV `index,score`.
    #[arg(long)]
    pub out: PathBuf,
    /// Cloud colored blue (lowest score) to red (highest).
    #[arg(long)]
    pub out_ply: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Cube,
    Sphere,
    Cylinder,
}

#[derive(Debug, Args)]
pub struct GenShapeArgs {
    #[arg(value_enum)]
    pub shape: Shape,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge band half-width (cube and cylinder).
    #[arg(long)]
    pub edge_eps: Option<f64>,
    /// Cloud as .xyz or .ply.
    #[arg(long)]
    pub out: PathBuf,
    /// Edge mask, one 0/1 per line.
    #[arg(long)]
    pub out_mask: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Generated corpus, e.g. cube,cylinder.
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        conflicts_with = "input",
        requires = "n"
    )]
    pub shapes: Vec<Shape>,
    /// Points per generated shape.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub edge_eps: Option<f64>,
    /// Seed for the generated corpus.
    #[arg(long, default_value_t = 0)]
    pub shape_seed: u64,
    /// Corpus clouds from files, each paired with a --mask.
    #[arg(long = "in")]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub mask: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub methods: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "512,256,128,64,32")]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 32)]
    pub k: usize,
    #[arg(long, default_value = "identity")]
    pub weights: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Write 0 in the ms column so the report is reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// Successive-vs-direct overlap report.
    #[arg(long)]
    pub overlap_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("rule").required(true).args(["top", "threshold"])))]
pub struct ImageEdgeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Odd patch size.
    #[arg(long, value_parser = PossibleValuesParser::new(["3", "5"]).map(|s| s.parse::<usize>().unwrap()))]
    pub patch: usize,
    /// Keep this fraction of pixels with the highest scores.
    #[arg(long)]
    pub top: Option<f64>,
    /// Keep pixels whose score is at least this value.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Binary edge map (PBM).
    #[arg(long)]
    pub out: PathBuf,
    /// Scores scaled to 0..255 (PGM).
    #[arg(long)]
    pub out_sigma: Option<PathBuf>,
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    match cli.command {
        Command::Sample(a) => commands::sample(&a),
        Command::Score(a) => commands::score(&a),
        Command::GenShape(a) => commands::gen_shape(&a),
        Command::Bench(a) => commands::bench(&a),
        Command::ImageEdge(a) => commands::image_edge(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Core(_) => ExitCode::from(1),
            }
        }
    }
}
