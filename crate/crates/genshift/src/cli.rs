//! Command-line definitions and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use genshift_core::filters::DEFAULT_MAX_ITERATIONS;
use genshift_core::pipeline::{FilterMode, ScalarGuide, ScalarMode, SpherePartition};

use crate::cmd;
use crate::config::{take_config_flag, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "genshift", version, about = "Generalized bilateral and mean-shift filtering of images, meshes and point clouds")]
#[command(after_help = "Any command also accepts --config FILE with `flag-name = value` lines; command-line flags take precedence.")]
pub struct Cli {
    /// Worker threads (default: available parallelism). `bench` takes a
    /// comma-separated list and runs once per entry.
    #[arg(long, global = true, env = "GENSHIFT_THREADS", value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Vec<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter a PGM/PPM image, optionally against the dense oracle.
    ImageBilateral(ImageArgs),
    /// Filter a per-vertex scalar on a mesh.
    MeshScalar(MeshScalarArgs),
    /// Denoise a mesh by filtering face normals and rebuilding vertices.
    MeshDenoise(MeshDenoiseArgs),
    /// Filter the normals of an oriented point cloud.
    CloudNormals(CloudArgs),
    /// Extract local histograms of mesh normals or a per-vertex scalar.
    Histogram(HistogramArgs),
    /// Exaggerate surface detail with an unsharp range-aware kernel.
    Enhance(EnhanceArgs),
    /// Time the phases of one bilateral normal pass per thread count.
    Bench(BenchArgs),
    /// Write a built-in test mesh.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Bilateral,
    Meanshift,
}

impl From<ModeArg> for FilterMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bilateral => FilterMode::Bilateral,
            ModeArg::Meanshift => FilterMode::MeanShift,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalarModeArg {
    Blur,
    Bilateral,
    Meanshift,
}

impl From<ScalarModeArg> for ScalarMode {
    fn from(m: ScalarModeArg) -> Self {
        match m {
            ScalarModeArg::Blur => ScalarMode::Blur,
            ScalarModeArg::Bilateral => ScalarMode::Bilateral,
            ScalarModeArg::Meanshift => ScalarMode::MeanShift,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CrossArg {
    /// Range weights from the scalar itself.
    #[value(name = "self")]
    SelfGuided,
    /// Range weights from vertex normals.
    Normals,
}

impl From<CrossArg> for ScalarGuide {
    fn from(c: CrossArg) -> Self {
        match c {
            CrossArg::SelfGuided => ScalarGuide::SelfGuided,
            CrossArg::Normals => ScalarGuide::Normals,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    /// Cube with each face split into an n x n grid of quads.
    Cube,
    /// Subdivided icosahedron; `--size` is the subdivision level.
    Icosphere,
    /// Convex hull of `--size` Fibonacci points on the unit sphere.
    Fibonacci,
    /// Two planes meeting at a right-angle crease, `--size` quads per side.
    Wedge,
    /// Grayscale test image (ramp, disc, bar), `--size` pixels square;
    /// `--noise` is the Gaussian noise std. Written as PGM.
    Image,
}

/// Filter settings shared by the normal-filtering commands.
#[derive(Debug, Clone, Args)]
pub struct NormalFilterArgs {
    #[arg(long, value_enum, default_value = "meanshift")]
    pub mode: ModeArg,
    /// Spatial width in mean edge lengths (graph units for clouds).
    #[arg(long, default_value_t = 2.0)]
    pub sigma_s: f64,
    /// Von Mises-Fisher width on the sphere of normals.
    #[arg(long, default_value_t = 0.1)]
    pub sigma_r: f64,
    /// Icosphere subdivision level of the normal samples (0: 12, 1: 42, 2: 162).
    #[arg(long, default_value_t = 1, conflicts_with = "meshless_samples")]
    pub samples_level: usize,
    /// Use this many Fibonacci samples with meshless bumps instead of icosphere hats.
    #[arg(long)]
    pub meshless_samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iters: usize,
    /// Mean-shift stopping angle in degrees.
    #[arg(long, default_value_t = 0.01)]
    pub tolerance_deg: f64,
}

impl NormalFilterArgs {
    pub fn partition(&self) -> SpherePartition {
        match self.meshless_samples {
            Some(samples) => SpherePartition::Meshless { samples },
            None => SpherePartition::Hat { level: self.samples_level },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ImageArgs {
    /// PGM or PPM image (P2, P3, P5, P6; maxval 255).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Spatial Gaussian width in pixels.
    #[arg(long)]
    pub sigma_s: f64,
    /// Range Gaussian width in intensity units (0..1).
    #[arg(long)]
    pub sigma_r: f64,
    /// Range samples per channel.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "bilateral")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iters: usize,
    /// Mean-shift tolerance in intensity units.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
    /// Also evaluate the dense double sum and print the error against it.
    #[arg(long)]
    pub exact: bool,
    /// Write raw (P5/P6) instead of plain (P2/P3) output.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MeshScalarArgs {
    /// OBJ or PLY mesh.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV with one value per vertex.
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long, value_enum, default_value = "self")]
    pub cross: CrossArg,
    #[arg(long, value_enum, default_value = "bilateral")]
    pub mode: ScalarModeArg,
    /// Spatial width in mean edge lengths.
    #[arg(long, default_value_t = 2.0)]
    pub sigma_s: f64,
    /// Range width: a fraction of the signal span, or a normal-space width with `--cross normals`.
    #[arg(long, default_value_t = 0.1)]
    pub sigma_r: f64,
    /// Interval samples for self-guided filters.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Icosphere level of the normal samples for `--cross normals`.
    #[arg(long, default_value_t = 1)]
    pub samples_level: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iters: usize,
    /// Mean-shift tolerance as a fraction of the signal span.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MeshDenoiseArgs {
    /// OBJ or PLY mesh.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub filter: NormalFilterArgs,
    /// Jacobi iterations of vertex reconstruction.
    #[arg(long, default_value_t = 20)]
    pub recon_iters: usize,
    /// Uniform vertex noise amplitude in mean edge lengths, added before filtering.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long, default_value_t = 0, requires = "noise")]
    pub seed: u64,
    /// Also write the noisy input mesh here.
    #[arg(long, requires = "noise")]
    pub noisy_output: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CloudArgs {
    /// Text file of `x y z nx ny nz` lines.
    #[arg(long)]
    pub input: PathBuf,
    /// Neighbors per point in the graph.
    #[arg(short = 'k', long = "neighbors", default_value_t = 10)]
    pub k: usize,
    /// Graph edge weight width: weights are exp(-d^2 / t).
    #[arg(short = 't', long = "graph-width")]
    pub t: f64,
    #[command(flatten)]
    pub filter: NormalFilterArgs,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Clone, Args)]
pub struct HistogramArgs {
    /// OBJ or PLY mesh.
    #[arg(long)]
    pub input: PathBuf,
    /// `normals` for face normals, or a CSV path with one value per vertex.
    #[arg(long, default_value = "normals")]
    pub signal: String,
    /// Spatial width in mean edge lengths.
    #[arg(long, default_value_t = 2.0)]
    pub sigma_s: f64,
    /// Range kernel width.
    #[arg(long, default_value_t = 0.1)]
    pub sigma_r: f64,
    /// Icosphere level of the normal bins.
    #[arg(long, default_value_t = 1)]
    pub samples_level: usize,
    /// Interval bins for a scalar signal.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EnhanceArgs {
    /// OBJ or PLY mesh.
    #[arg(long)]
    pub input: PathBuf,
    /// Unsharp gain; 0 leaves the mesh unchanged.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Spatial width in mean edge lengths.
    #[arg(long, default_value_t = 1.5)]
    pub sigma_s: f64,
    /// Gaussian width on the sphere of vertex normals.
    #[arg(long, default_value_t = 0.3)]
    pub sigma_r: f64,
    #[arg(long, default_value_t = 1)]
    pub samples_level: usize,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// OBJ or PLY mesh.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub samples_level: usize,
    #[arg(long, default_value_t = 2.0)]
    pub sigma_s: f64,
    #[arg(long, default_value_t = 0.1)]
    pub sigma_r: f64,
    /// Runs per thread count; the fastest is reported.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeats: u32,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    #[arg(long)]
    pub size: usize,
    /// Uniform vertex noise amplitude in mean edge lengths.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

/// Outcome of argument handling that is not a normal run.
#[derive(Debug)]
pub enum Exit {
    /// Help or version text was requested; print it and exit 0.
    Info(String),
    /// Bad invocation; one line, exit 2.
    Usage(String),
    /// Runtime failure; one line, exit 1.
    Failure(String),
}

/// Parses `args` (program name first), applies `--config` and runs the
/// command, writing reports to `out`.
pub fn run(mut args: Vec<OsString>, out: &mut dyn Write) -> std::result::Result<(), Exit> {
    let config = take_config_flag(&mut args).map_err(Exit::Usage)?;
    if let Some(path) = config {
        let cfg = RunConfig::read(path.as_ref()).map_err(|e| Exit::Usage(format!("config: {e}")))?;
        cfg.merge_into(&mut args);
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return Err(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Exit::Info(e.to_string()),
                _ => Exit::Usage(condense_usage(&e.to_string())),
            });
        }
    };
    let bench = matches!(cli.command, Command::Bench(_));
    if !bench && cli.threads.len() > 1 {
        return Err(Exit::Usage("--threads takes a single count except for `bench`".into()));
    }
    execute(cli, out).map_err(|e| Exit::Failure(one_line(&format!("{e:#}"))))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    if let Command::Bench(a) = &cli.command {
        return cmd::bench::run(a, &cli.threads, out);
    }
    let threads = cli.threads.first().map(|&t| t as usize);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .context("cannot start worker threads")?;
    // Reports are buffered so the writer need not cross threads.
    let mut buf = Vec::new();
    let result = pool.install(|| {
        let out: &mut dyn Write = &mut buf;
        match cli.command {
            Command::ImageBilateral(a) => cmd::image::run(&a, out),
            Command::MeshScalar(a) => cmd::scalar::run(&a, out),
            Command::MeshDenoise(a) => cmd::denoise::run(&a, out),
            Command::CloudNormals(a) => cmd::cloud::run(&a, out),
            Command::Histogram(a) => cmd::histogram::run(&a, out),
            Command::Enhance(a) => cmd::enhance::run(&a, out),
            Command::Bench(_) => unreachable!("handled above"),
            Command::Generate(a) => cmd::generate::run(&a),
        }
    });
    out.write_all(&buf).context("writing report")?;
    result
}

/// Joins a clap error up to its usage block into one line, without the `error: ` prefix.
fn condense_usage(message: &str) -> String {
    let body: Vec<&str> = message
        .lines()
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if body.is_empty() {
        return "invalid arguments".into();
    }
    one_line(body.join(" ").trim_start_matches("error: "))
}

fn one_line(message: &str) -> String {
    message.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Checks the widths and counts common to every filter command.
pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value <= 0.0 || !value.is_finite() {
        bail!("--{name} must be a positive number, got {value}");
    }
    Ok(())
}
