//! Batch evaluation over image/mask datasets: every image is squared with
//! its mask carved in lockstep, then scored by area ratio and shape
//! distortion.

mod correlate;
mod report;

pub use correlate::{
    correlate_reports, correlation_matrix, read_metric_table, read_ratings, CorrelationMatrix, MethodScores,
};
pub use report::{format_float, read_aggregate, Aggregate};

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;

use crate::carve::{make_it_square_with, CarveOptions};
use crate::error::{Error, Result};
use crate::importance::ImportanceSource;
use crate::metrics::{area_ratio, mssd_pair_with, MetricsConfig};
use crate::raster::{load_image, load_mask, DEFAULT_MASK_THRESHOLD};

/// One image and its ground-truth mask, paired by file stem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub id: String,
    pub image: PathBuf,
    pub mask: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetScan {
    pub entries: Vec<DatasetEntry>,
    /// Stems that had only one of the two files.
    pub skipped: Vec<String>,
}

fn stems(dir: &Path, suffix: &str) -> Result<BTreeMap<String, PathBuf>> {
    let listing = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = BTreeMap::new();
    for entry in listing {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        if let Some(stem) = name.strip_suffix(suffix) {
            if !stem.is_empty() && entry.path().is_file() {
                out.insert(stem.to_string(), entry.path());
            }
        }
    }
    Ok(out)
}

/// Pairs `<stem><image_suffix>` with `<stem><mask_suffix>` in one directory.
pub fn scan_dataset(dir: impl AsRef<Path>, image_suffix: &str, mask_suffix: &str) -> Result<DatasetScan> {
    let dir = dir.as_ref();
    scan_dataset_split(dir, dir, image_suffix, mask_suffix)
}

/// Like [`scan_dataset`], with images and masks in separate directories.
/// Entries are ordered by stem.
pub fn scan_dataset_split(
    image_dir: impl AsRef<Path>,
    mask_dir: impl AsRef<Path>,
    image_suffix: &str,
    mask_suffix: &str,
) -> Result<DatasetScan> {
    let (image_dir, mask_dir) = (image_dir.as_ref(), mask_dir.as_ref());
    if image_dir == mask_dir && image_suffix == mask_suffix {
        return Err(Error::Dataset(format!(
            "image and mask suffix are both `{image_suffix}` in the same directory"
        )));
    }
    let mut images = stems(image_dir, image_suffix)?;
    let mut masks = stems(mask_dir, mask_suffix)?;

    let mut all: Vec<String> = images.keys().chain(masks.keys()).cloned().collect();
    all.sort();
    all.dedup();

    let mut scan = DatasetScan {
        entries: Vec::new(),
        skipped: Vec::new(),
    };
    for id in all {
        match (images.remove(&id), masks.remove(&id)) {
            (Some(image), Some(mask)) => scan.entries.push(DatasetEntry { id, image, mask }),
            (Some(_), None) => {
                warn!("{id}: image without mask, skipped");
                scan.skipped.push(id);
            }
            (None, Some(_)) => {
                warn!("{id}: mask without image, skipped");
                scan.skipped.push(id);
            }
            (None, None) => unreachable!(),
        }
    }
    if scan.entries.is_empty() {
        return Err(Error::Dataset(format!(
            "no `*{image_suffix}` / `*{mask_suffix}` pairs found in {}",
            image_dir.display()
        )));
    }
    Ok(scan)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub metrics: MetricsConfig,
    pub carve: CarveOptions,
    pub mask_threshold: u8,
    /// For `External(dir)` sources: the per-entry map is `dir/<id><suffix>`.
    pub map_suffix: String,
    /// Record per-image wall time. Off by default so reports are
    /// byte-reproducible.
    pub timings: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            metrics: MetricsConfig::default(),
            carve: CarveOptions::default(),
            mask_threshold: DEFAULT_MASK_THRESHOLD,
            map_suffix: ".png".into(),
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub id: String,
    pub orig_w: usize,
    pub orig_h: usize,
    pub target_w: usize,
    pub target_h: usize,
    /// `None` when excluded from the MAR aggregate.
    pub area_ratio: Option<f64>,
    /// `None` when excluded from the MSSD aggregate.
    pub ssd: Option<f64>,
    /// Why a metric is missing, `;`-separated; empty when both are present.
    pub excluded: String,
    pub seconds: Option<f64>,
}

impl EvalRow {
    pub fn is_excluded(&self) -> bool {
        !self.excluded.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub source: String,
    pub rows: Vec<EvalRow>,
    /// Mean included area ratio; `None` if every row was excluded.
    pub mar: Option<f64>,
    pub mssd: Option<f64>,
    pub n_excluded: usize,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

impl EvalReport {
    pub fn from_rows(source: impl Into<String>, rows: Vec<EvalRow>) -> Self {
        let mar = mean(rows.iter().filter_map(|r| r.area_ratio));
        let mssd = mean(rows.iter().filter_map(|r| r.ssd));
        let n_excluded = rows.iter().filter(|r| r.is_excluded()).count();
        Self {
            source: source.into(),
            rows,
            mar,
            mssd,
            n_excluded,
        }
    }

    pub fn aggregate(&self) -> Aggregate {
        Aggregate {
            source: self.source.clone(),
            n_images: self.rows.len(),
            n_excluded: self.n_excluded,
            mar: self.mar,
            mssd: self.mssd,
        }
    }
}

fn source_for(entry: &DatasetEntry, src: &ImportanceSource, cfg: &EvalConfig) -> ImportanceSource {
    match src {
        ImportanceSource::External(dir) => {
            ImportanceSource::External(dir.join(format!("{}{}", entry.id, cfg.map_suffix)))
        }
        other => other.clone(),
    }
}

fn evaluate_entry(entry: &DatasetEntry, src: &ImportanceSource, cfg: &EvalConfig) -> EvalRow {
    let started = Instant::now();
    let mut row = EvalRow {
        id: entry.id.clone(),
        orig_w: 0,
        orig_h: 0,
        target_w: 0,
        target_h: 0,
        area_ratio: None,
        ssd: None,
        excluded: String::new(),
        seconds: None,
    };

    let outcome = (|| -> Result<()> {
        let img = load_image(&entry.image)?;
        let gt = load_mask(&entry.mask, cfg.mask_threshold)?;
        row.orig_w = img.width();
        row.orig_h = img.height();
        let carved = make_it_square_with(&img, Some(&gt), &source_for(entry, src, cfg), &cfg.carve)?;
        row.target_w = carved.image.width();
        row.target_h = carved.image.height();
        let carved_gt = carved.mask.expect("mask carved in lockstep");

        let mut reasons = Vec::new();
        match area_ratio(&gt, &carved_gt) {
            Ok(r) => row.area_ratio = Some(r),
            Err(Error::EmptyGroundTruth) => reasons.push("empty_mask"),
            Err(e) => return Err(e),
        }
        match mssd_pair_with(&gt, &carved_gt, &cfg.metrics) {
            Ok(v) => row.ssd = Some(v),
            Err(Error::DegenerateShape { .. }) => reasons.push("degenerate_shape"),
            Err(e) => return Err(e),
        }
        row.excluded = reasons.join(";");
        Ok(())
    })();

    if let Err(e) = outcome {
        row.area_ratio = None;
        row.ssd = None;
        row.excluded = format!("error: {e}");
    }
    if cfg.timings {
        row.seconds = Some(started.elapsed().as_secs_f64());
    }
    if row.is_excluded() {
        warn!("{}: excluded ({})", row.id, row.excluded);
    } else {
        info!(
            "{}: {}x{} -> {}x{}",
            row.id, row.orig_w, row.orig_h, row.target_w, row.target_h
        );
    }
    row
}

/// Squares every entry and scores it. Entries run in parallel on the current
/// rayon pool; rows come back in entry order. Per-entry failures are recorded
/// in their row and never abort the batch.
pub fn evaluate_dataset(
    entries: &[DatasetEntry],
    src: &ImportanceSource,
    cfg: &EvalConfig,
) -> Result<EvalReport> {
    if entries.is_empty() {
        return Err(Error::Dataset("no entries to evaluate".into()));
    }
    let rows: Vec<EvalRow> = entries.par_iter().map(|e| evaluate_entry(e, src, cfg)).collect();
    Ok(EvalReport::from_rows(src.to_string(), rows))
}
