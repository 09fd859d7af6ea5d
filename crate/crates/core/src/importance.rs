//! Importance maps: where seams should not go.
//!
//! Two gradient detectors are built in. Any other map (edge detectors,
//! fixation predictors, salient-object models) enters as a grayscale file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::raster::{load_gray_map, BinaryMask, GrayMap, RasterImage};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImportanceSource {
    /// 3x3 Sobel gradient magnitude.
    Sobel,
    /// `|dx| + |dy|` from central differences.
    GradientL1,
    /// A precomputed map read from disk.
    External(PathBuf),
    /// The ground-truth mask itself, 1 on salient pixels.
    GroundTruthMask,
}

impl ImportanceSource {
    /// Derived sources are recomputed from the current image after each
    /// removal; the rest are fixed maps carved alongside the image.
    pub fn is_derived(&self) -> bool {
        matches!(self, ImportanceSource::Sobel | ImportanceSource::GradientL1)
    }
}

impl FromStr for ImportanceSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sobel" => Ok(Self::Sobel),
            "grad" => Ok(Self::GradientL1),
            "mask" => Ok(Self::GroundTruthMask),
            _ => match s.strip_prefix("external:") {
                Some(p) if !p.is_empty() => Ok(Self::External(PathBuf::from(p))),
                _ => Err(Error::InvalidSource(s.to_string())),
            },
        }
    }
}

impl fmt::Display for ImportanceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sobel => f.write_str("sobel"),
            Self::GradientL1 => f.write_str("grad"),
            Self::GroundTruthMask => f.write_str("mask"),
            Self::External(p) => write!(f, "external:{}", p.display()),
        }
    }
}

/// Sobel gradient magnitude of the grayscale image, border-replicated,
/// rescaled so the maximum is 1.
pub fn sobel_map(img: &RasterImage) -> GrayMap {
    let gray = img.to_grayscale();
    let (w, h) = (gray.width(), gray.height());
    let at = |r: isize, c: isize| {
        let r = r.clamp(0, h as isize - 1) as usize;
        let c = c.clamp(0, w as isize - 1) as usize;
        gray.get(r, c)
    };

    let mut mags = Vec::with_capacity(w * h);
    for r in 0..h as isize {
        for c in 0..w as isize {
            let gx = (at(r - 1, c + 1) + 2.0 * at(r, c + 1) + at(r + 1, c + 1))
                - (at(r - 1, c - 1) + 2.0 * at(r, c - 1) + at(r + 1, c - 1));
            let gy = (at(r + 1, c - 1) + 2.0 * at(r + 1, c) + at(r + 1, c + 1))
                - (at(r - 1, c - 1) + 2.0 * at(r - 1, c) + at(r - 1, c + 1));
            mags.push((gx * gx + gy * gy).sqrt());
        }
    }
    GrayMap::from_magnitudes(w, h, mags)
}

/// Derivative of `line` at `i`: central inside, one-sided at the ends.
fn diff(line: impl Fn(usize) -> f64, len: usize, i: usize) -> f64 {
    if len < 2 {
        0.0
    } else if i == 0 {
        line(1) - line(0)
    } else if i == len - 1 {
        line(len - 1) - line(len - 2)
    } else {
        (line(i + 1) - line(i - 1)) / 2.0
    }
}

/// `|dx| + |dy|` of the grayscale image, rescaled so the maximum is 1.
pub fn gradient_l1_map(img: &RasterImage) -> GrayMap {
    let gray = img.to_grayscale();
    let (w, h) = (gray.width(), gray.height());
    let mut mags = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            let dx = diff(|j| gray.get(r, j), w, c);
            let dy = diff(|i| gray.get(i, c), h, r);
            mags.push(dx.abs() + dy.abs());
        }
    }
    GrayMap::from_magnitudes(w, h, mags)
}

fn ensure_same_dims(img: &RasterImage, w: usize, h: usize) -> Result<()> {
    if (w, h) != (img.width(), img.height()) {
        return Err(Error::DimensionMismatch {
            expected_w: img.width(),
            expected_h: img.height(),
            actual_w: w,
            actual_h: h,
        });
    }
    Ok(())
}

/// Produces the importance map for `img` from `src`.
pub fn importance_for(
    img: &RasterImage,
    mask: Option<&BinaryMask>,
    src: &ImportanceSource,
) -> Result<GrayMap> {
    match src {
        ImportanceSource::Sobel => Ok(sobel_map(img)),
        ImportanceSource::GradientL1 => Ok(gradient_l1_map(img)),
        ImportanceSource::External(path) => {
            let map = load_gray_map(path)?;
            ensure_same_dims(img, map.width(), map.height())?;
            Ok(map)
        }
        ImportanceSource::GroundTruthMask => {
            let mask = mask.ok_or(Error::MissingMask)?;
            ensure_same_dims(img, mask.width(), mask.height())?;
            Ok(mask.to_gray_map())
        }
    }
}
