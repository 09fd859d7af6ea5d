use std::fmt;
use std::fs;
use std::path::Path;

use log::info;
use seamcarve_core::bench::{
    correlate_reports, evaluate_dataset, read_aggregate, read_metric_table, read_ratings, scan_dataset,
    scan_dataset_split, EvalConfig, MethodScores,
};
use seamcarve_core::carve::{carve_to_size_with, format_seam_trace, make_it_square_with, TraceSection};
use seamcarve_core::raster::save_mask;
use seamcarve_core::{
    load_image, load_mask, save_image, BinaryMask, CarveOptions, Error, ErrorClass, MetricsConfig,
    Orientation, RasterImage,
};

use crate::{CarveArgs, CorrelateArgs, EvaluateArgs, RetargetArgs, SquareArgs};

#[derive(Debug)]
pub enum CliError {
    /// Arguments parsed but are inconsistent.
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e.class() {
                ErrorClass::Io => 2,
                ErrorClass::Data => 3,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult = Result<(), CliError>;

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn same_extension(a: &Path, b: &Path) -> bool {
    let ext = |p: &Path| p.extension().map(|e| e.to_ascii_lowercase());
    ext(a).is_some() && ext(a) == ext(b)
}

struct Loaded {
    image: RasterImage,
    mask: Option<BinaryMask>,
    opts: CarveOptions,
}

fn load(args: &CarveArgs) -> Result<Loaded, Error> {
    let image = load_image(&args.input)?;
    let mask = match &args.mask {
        Some(p) => Some(load_mask(p, args.mask_threshold)?),
        None => None,
    };
    let opts = CarveOptions {
        static_derived: args.static_importance,
    };
    Ok(Loaded { image, mask, opts })
}

/// Writes the carved image, mask and seam trace. An image that lost no
/// seams is copied byte for byte when the container format is unchanged.
fn write_outputs(
    args: &CarveArgs,
    input: &RasterImage,
    image: &RasterImage,
    mask: Option<&BinaryMask>,
    trace: &[TraceSection],
) -> Result<(), Error> {
    if image == input && same_extension(&args.input, &args.out) {
        fs::copy(&args.input, &args.out).map_err(|e| Error::io(&args.out, e))?;
    } else {
        save_image(image, &args.out)?;
    }
    if let (Some(path), Some(mask)) = (&args.mask_out, mask) {
        save_mask(mask, path)?;
    }
    if let Some(path) = &args.emit_seams {
        write_text(path, &format_seam_trace(trace))?;
    }
    info!(
        "{}: {}x{} -> {}x{}, {} seams",
        args.input.display(),
        input.width(),
        input.height(),
        image.width(),
        image.height(),
        trace.iter().map(|s| s.seams.len()).sum::<usize>()
    );
    Ok(())
}

pub fn retarget(args: &RetargetArgs) -> CliResult {
    let c = &args.carve;
    let l = load(c)?;
    let out = carve_to_size_with(
        &l.image,
        l.mask.as_ref(),
        &c.importance,
        args.width.map(|w| w as usize),
        args.height.map(|h| h as usize),
        &l.opts,
    )?;
    write_outputs(c, &l.image, &out.image, out.mask.as_ref(), &out.trace)?;
    Ok(())
}

pub fn square(args: &SquareArgs) -> CliResult {
    let c = &args.carve;
    let l = load(c)?;
    let out = make_it_square_with(&l.image, l.mask.as_ref(), &c.importance, &l.opts)?;
    let (w, h) = (l.image.width(), l.image.height());
    let frame = match out.orientation {
        Orientation::Vertical => (w, h),
        Orientation::Transposed => (h, w),
    };
    let trace = [TraceSection::from_result(&out, frame.0, frame.1)];
    write_outputs(c, &l.image, &out.image, out.mask.as_ref(), &trace)?;
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs) -> CliResult {
    let scan = match &args.mask_dir {
        Some(masks) => scan_dataset_split(&args.dataset, masks, &args.image_suffix, &args.mask_suffix)?,
        None => scan_dataset(&args.dataset, &args.image_suffix, &args.mask_suffix)?,
    };
    let cfg = EvalConfig {
        metrics: MetricsConfig {
            n_points: args.n_points as usize,
            ..MetricsConfig::default()
        },
        carve: CarveOptions {
            static_derived: args.static_importance,
        },
        mask_threshold: args.mask_threshold,
        map_suffix: args.map_suffix.clone(),
        timings: args.timings,
    };

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n as usize);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let report = pool.install(|| evaluate_dataset(&scan.entries, &args.importance, &cfg))?;

    let json = report.aggregate().to_json();
    if let Some(path) = &args.csv {
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        report.write_rows_csv(std::io::BufWriter::new(file))?;
    }
    match &args.json {
        Some(path) => write_text(path, &json)?,
        None => print!("{json}"),
    }
    info!(
        "{} images, {} excluded, {} skipped",
        report.rows.len(),
        report.n_excluded,
        scan.skipped.len()
    );
    Ok(())
}

pub fn correlate(args: &CorrelateArgs) -> CliResult {
    let ratings = read_ratings(&args.ratings)?;
    let mut scores: Vec<MethodScores> = match &args.metrics {
        Some(path) => read_metric_table(path)?,
        None => Vec::new(),
    };
    for arg in &args.aggregate {
        let (name, path) = match arg.split_once('=') {
            Some((name, path)) if !name.is_empty() => (Some(name), path),
            _ => (None, arg.as_str()),
        };
        let mut s = MethodScores::try_from(read_aggregate(path)?)?;
        if let Some(name) = name {
            s.method = name.to_string();
        }
        scores.push(s);
    }
    let matrix = correlate_reports(&scores, &ratings)?;
    print!("{}", matrix.render(args.precision));
    Ok(())
}
