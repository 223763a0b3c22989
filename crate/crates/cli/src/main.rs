//! `radial-gauss`: reproduce radial CLT experiments as data files and run the
//! constant-time box-spline blur on PGM images.
//!
//! Exit codes: 0 success, 2 usage, 3 infeasible covariance, 4 dimension
//! mismatch, 5 I/O or parse failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radial_gauss::clt::Normalization;
use radial_gauss::filter::Boundary;
use radial_gauss::Error;

#[derive(Parser, Debug)]
#[command(name = "radial-gauss", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo of the rotated sum Z_n; writes summary statistics.
    Sim(SimArgs),
    /// Histogram of Z_n samples as a CSV density grid.
    Density(DensityArgs),
    /// Rasterize a box-spline kernel to CSV, optionally against a Gaussian.
    Kernel(KernelArgs),
    /// Print the box widths for a covariance or an isotropic sigma.
    Widths(WidthsArgs),
    /// Four-directional constant-time blur of a PGM image.
    Blur(BlurArgs),
    /// Space-variant blur driven by per-pixel width or sigma maps.
    Varblur(VarblurArgs),
    /// Time the blur at several sigmas on a synthetic image.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct SimulationArgs {
    /// Number of directions n (angles k·π/n radians).
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Number of independent realizations (trials).
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Generator seed (ChaCha8, one stream per 4096 trials).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Scaling of the sum: sqrt-n (divide by √n) or standardized (×√(2/n)).
    #[arg(long, default_value = "sqrt-n", value_parser = parse_normalization)]
    normalization: Normalization,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[command(flatten)]
    sim: SimulationArgs,
    /// Statistics output (key,value CSV); stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Raw samples output (x,y CSV, one trial per line).
    #[arg(long)]
    samples_out: Option<std::path::PathBuf>,
    /// Half-side a of the test square [-a, a]² (plane units).
    #[arg(long, default_value_t = 1.0)]
    square: f64,
    /// Print the statistics as one JSON object on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    sim: SimulationArgs,
    /// Half-width of the square histogram window (plane units).
    #[arg(long, default_value_t = 3.0)]
    extent: f64,
    /// Cells per axis.
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..))]
    bins: u64,
    /// Density grid output (CSV).
    #[arg(long)]
    out: std::path::PathBuf,
    /// Print a summary as JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct ShapeArgs {
    /// Target covariance "cxx,cxy,cyy" (squared pixels / plane units).
    #[arg(long, conflicts_with = "sigma")]
    cov: Option<String>,
    /// Isotropic standard deviation (pixels / plane units).
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Number of equally spaced directions for --sigma.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Sample spacing (plane units).
    #[arg(long, default_value_t = 0.25)]
    h: f64,
    /// Half-width of the sampled window (plane units); chosen to cover the
    /// support when omitted.
    #[arg(long)]
    extent: Option<f64>,
    /// Kernel output (CSV).
    #[arg(long)]
    out: std::path::PathBuf,
    /// Also rasterize the Gaussian with the same covariance and report the
    /// distance; the Gaussian grid is written next to --out.
    #[arg(long)]
    compare_gaussian: bool,
    /// Print metadata as JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct WidthsArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Number of equally spaced directions for --sigma.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Edge handling: replicate, reflect or zero.
    #[arg(long, default_value = "replicate", value_parser = parse_boundary)]
    boundary: Boundary,
    /// Output PGM maxval: 65535 (16-bit) or 255.
    #[arg(long, default_value_t = 65535)]
    maxval: u16,
}

#[derive(Args, Debug)]
struct BlurArgs {
    /// Input image (PGM P2 or P5).
    #[arg(long)]
    input: std::path::PathBuf,
    /// Output image (PGM P5).
    #[arg(long)]
    output: std::path::PathBuf,
    #[command(flatten)]
    shape: ShapeArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Report the filtering wall time in milliseconds on stderr.
    #[arg(long)]
    bench: bool,
}

#[derive(Args, Debug)]
struct VarblurArgs {
    /// Input image (PGM P2 or P5).
    #[arg(long)]
    input: std::path::PathBuf,
    /// Output image (PGM P5).
    #[arg(long)]
    output: std::path::PathBuf,
    /// Four CSV width maps (pixels) for horizontal, vertical, diagonal-up,
    /// diagonal-down, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..=4, conflicts_with = "sigma_map")]
    width_maps: Option<Vec<std::path::PathBuf>>,
    /// CSV map of per-pixel isotropic sigma (pixels).
    #[arg(long)]
    sigma_map: Option<std::path::PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Side of the square synthetic image (pixels).
    #[arg(long, default_value_t = 512)]
    size: usize,
    /// Sigmas to time (pixels), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,20")]
    sigmas: Vec<f64>,
    /// Timed runs per sigma; the median is reported.
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long)]
    json: bool,
}

fn parse_normalization(s: &str) -> Result<Normalization, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Maps library errors onto the documented exit codes.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InfeasibleCovariance { .. } => 3,
        Error::DimensionMismatch { .. } => 4,
        Error::Io(_) | Error::Pgm { .. } | Error::Csv { .. } => 5,
        _ => 2,
    }
}

fn configure_threads() {
    let Ok(value) = std::env::var("RADIAL_GAUSS_THREADS") else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            // Fails only if a pool already exists, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        Err(_) => eprintln!("warning: ignoring RADIAL_GAUSS_THREADS={value:?}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match cli.command {
        Command::Sim(a) => commands::sim(a),
        Command::Density(a) => commands::density(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Widths(a) => commands::widths(a),
        Command::Blur(a) => commands::blur(a),
        Command::Varblur(a) => commands::varblur(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
