//! `seamcarve`: content-aware retargeting and saliency-map evaluation.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data error.
//! Log verbosity follows `RUST_LOG` (default `warn`).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use seamcarve_core::raster::DEFAULT_MASK_THRESHOLD;
use seamcarve_core::ImportanceSource;

#[derive(Debug, Parser)]
#[command(
    name = "seamcarve",
    version,
    about = "Seam-carving retargeting and evaluation harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Shrink one image to a target width and/or height.
    Retarget(RetargetArgs),
    /// Shrink one image to a square of side min(width, height).
    Square(SquareArgs),
    /// Square every image of a dataset and score it against its mask.
    Evaluate(EvaluateArgs),
    /// Correlate user ratings with dataset-level MAR and MSSD.
    Correlate(CorrelateArgs),
}

/// Options shared by the single-image commands.
#[derive(Debug, Args)]
struct CarveArgs {
    /// Input image (PNG or JPEG).
    #[arg(long)]
    input: PathBuf,
    /// Output image; the format follows the extension.
    #[arg(long)]
    out: PathBuf,
    /// Importance source: sobel, grad, mask or external:<path>.
    #[arg(long, default_value = "sobel")]
    importance: ImportanceSource,
    /// Ground-truth mask carved in lockstep with the image.
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Where to write the carved mask.
    #[arg(long, requires = "mask")]
    mask_out: Option<PathBuf>,
    /// Mask pixels with 8-bit luma above this value are salient.
    #[arg(long, default_value_t = DEFAULT_MASK_THRESHOLD)]
    mask_threshold: u8,
    /// Write the removed seams as a text trace.
    #[arg(long)]
    emit_seams: Option<PathBuf>,
    /// Compute sobel/grad maps once instead of after every removal.
    #[arg(long)]
    static_importance: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).multiple(true).args(["width", "height"])))]
struct RetargetArgs {
    #[command(flatten)]
    carve: CarveArgs,
    /// Target width in pixels (at most the input width).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    width: Option<u32>,
    /// Target height in pixels (at most the input height).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    height: Option<u32>,
}

#[derive(Debug, Args)]
struct SquareArgs {
    #[command(flatten)]
    carve: CarveArgs,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Directory of images (and masks, unless --mask-dir is given).
    #[arg(long)]
    dataset: PathBuf,
    /// Directory holding the ground-truth masks.
    #[arg(long)]
    mask_dir: Option<PathBuf>,
    #[arg(long, default_value = ".jpg")]
    image_suffix: String,
    #[arg(long, default_value = ".png")]
    mask_suffix: String,
    /// Importance source; external:<dir> reads <dir>/<id><map-suffix>.
    #[arg(long, default_value = "sobel")]
    importance: ImportanceSource,
    /// Suffix of per-image maps for external:<dir> sources.
    #[arg(long, default_value = ".png")]
    map_suffix: String,
    /// Boundary points sampled per silhouette.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(2..))]
    n_points: u32,
    #[arg(long, default_value_t = DEFAULT_MASK_THRESHOLD)]
    mask_threshold: u8,
    /// Worker threads (default: available parallelism).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Per-image rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Aggregate as JSON; printed to stdout when omitted.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record per-image seconds in the CSV (makes output run-dependent).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    static_importance: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("scores").required(true).multiple(true).args(["metrics", "aggregate"])))]
struct CorrelateArgs {
    /// CSV with header `method,rating`.
    #[arg(long)]
    ratings: PathBuf,
    /// CSV with header `method,mar,mssd`.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Aggregate JSON written by `evaluate`, as PATH or NAME=PATH. Without
    /// NAME the aggregate's source string names the method. Repeatable.
    #[arg(long)]
    aggregate: Vec<String>,
    /// Decimals in the printed matrix.
    #[arg(long, default_value_t = 3)]
    precision: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let result = match cli.command {
        Command::Retarget(a) => commands::retarget(&a),
        Command::Square(a) => commands::square(&a),
        Command::Evaluate(a) => commands::evaluate(&a),
        Command::Correlate(a) => commands::correlate(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("seamcarve: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
