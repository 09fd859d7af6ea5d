//! Pixel grids shared by the engine: 8-bit RGB images, real-valued
//! importance maps and boolean masks, plus PNG/JPEG file I/O.
//!
//! All three grids are row-major. A pixel at row `r`, column `c` lives at
//! index `r * width + c`.

use std::path::Path;

use image::{ImageReader, RgbImage};

use crate::error::{Error, Result};

/// Default mask binarization threshold on the 0..=255 luma scale.
pub const DEFAULT_MASK_THRESHOLD: u8 = 127;

pub type Rgb = [u8; 3];

/// An 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

/// Per-pixel importance in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

/// Pixel-accurate salient-region ground truth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    salient: Vec<bool>,
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage);
    }
    let expected = width * height;
    if len != expected {
        return Err(Error::BufferLength {
            width,
            height,
            expected,
            actual: len,
        });
    }
    Ok(())
}

impl RasterImage {
    pub fn new(width: usize, height: usize, pixels: Vec<Rgb>) -> Result<Self> {
        check_dims(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image from interleaved RGB bytes.
    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width * height * 3 {
            return Err(Error::BufferLength {
                width,
                height,
                expected: width * height * 3,
                actual: bytes.len(),
            });
        }
        let pixels = bytes.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(width, height, pixels)
    }

    pub fn filled(width: usize, height: usize, color: Rgb) -> Result<Self> {
        Self::new(width, height, vec![color; width * height])
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> Rgb) -> Result<Self> {
        let pixels = (0..height)
            .flat_map(|r| (0..width).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel(&self, row: usize, col: usize) -> Rgb {
        self.pixels[row * self.width + col]
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    /// Interleaved RGB bytes, `width * height * 3` long.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    pub fn to_grayscale(&self) -> GrayMap {
        GrayMap {
            width: self.width,
            height: self.height,
            values: self.pixels.iter().map(|&p| luma(p)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            width: self.height,
            height: self.width,
            pixels: transpose_cells(self.width, self.height, &self.pixels),
        }
    }

    pub(crate) fn without_path(&self, cols: &[usize]) -> Self {
        Self {
            width: self.width - 1,
            height: self.height,
            pixels: remove_path(self.width, self.height, &self.pixels, cols),
        }
    }
}

impl GrayMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_dims(width, height, values.len())?;
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::ValueOutOfRange { index, value });
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0.0; width * height])
    }

    /// Rescales non-negative magnitudes so the maximum maps to 1. An all-zero
    /// input stays all-zero.
    pub(crate) fn from_magnitudes(width: usize, height: usize, mut values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        let max = values.iter().copied().fold(0.0_f64, f64::max);
        if max > 0.0 {
            for v in &mut values {
                *v = (*v / max).min(1.0);
            }
        }
        Self {
            width,
            height,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.width..(row + 1) * self.width]
    }

    pub fn transpose(&self) -> Self {
        Self {
            width: self.height,
            height: self.width,
            values: transpose_cells(self.width, self.height, &self.values),
        }
    }

    pub(crate) fn without_path(&self, cols: &[usize]) -> Self {
        Self {
            width: self.width - 1,
            height: self.height,
            values: remove_path(self.width, self.height, &self.values, cols),
        }
    }
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, salient: Vec<bool>) -> Result<Self> {
        check_dims(width, height, salient.len())?;
        Ok(Self {
            width,
            height,
            salient,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let salient = (0..height)
            .flat_map(|r| (0..width).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Self::new(width, height, salient)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.salient[row * self.width + col]
    }

    pub fn cells(&self) -> &[bool] {
        &self.salient
    }

    pub fn salient_count(&self) -> usize {
        self.salient.iter().filter(|&&s| s).count()
    }

    /// The mask as a 0/1 importance map.
    pub fn to_gray_map(&self) -> GrayMap {
        GrayMap {
            width: self.width,
            height: self.height,
            values: self.salient.iter().map(|&s| if s { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            width: self.height,
            height: self.width,
            salient: transpose_cells(self.width, self.height, &self.salient),
        }
    }

    pub(crate) fn without_path(&self, cols: &[usize]) -> Self {
        Self {
            width: self.width - 1,
            height: self.height,
            salient: remove_path(self.width, self.height, &self.salient, cols),
        }
    }
}

/// BT.601 luma scaled to `[0, 1]`.
pub fn luma(p: Rgb) -> f64 {
    let y = (0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64) / 255.0;
    y.clamp(0.0, 1.0)
}

/// BT.601 luma on the integer 0..=255 scale, rounded to nearest. Exact for
/// gray pixels.
fn luma8(p: Rgb) -> u8 {
    let y = 299 * p[0] as u32 + 587 * p[1] as u32 + 114 * p[2] as u32;
    ((y + 500) / 1000) as u8
}

pub(crate) fn transpose_cells<T: Copy>(width: usize, height: usize, cells: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(cells.len());
    for c in 0..width {
        for r in 0..height {
            out.push(cells[r * width + c]);
        }
    }
    out
}

/// Drops `cols[r]` from every row `r` and closes the gap.
pub(crate) fn remove_path<T: Copy>(width: usize, height: usize, cells: &[T], cols: &[usize]) -> Vec<T> {
    debug_assert_eq!(cols.len(), height);
    let mut out = Vec::with_capacity((width - 1) * height);
    for (row, &skip) in cells.chunks_exact(width).zip(cols) {
        out.extend_from_slice(&row[..skip]);
        out.extend_from_slice(&row[skip + 1..]);
    }
    out
}

fn decode(path: &Path) -> Result<RgbImage> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let decoded = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    if decoded.width() == 0 || decoded.height() == 0 {
        return Err(Error::EmptyImage);
    }
    Ok(decoded.to_rgb8())
}

fn from_rgb(img: RgbImage) -> Result<RasterImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    RasterImage::from_bytes(w, h, img.as_raw())
}

pub fn load_image(path: impl AsRef<Path>) -> Result<RasterImage> {
    from_rgb(decode(path.as_ref())?)
}

/// Loads a mask file; a pixel is salient iff its luma exceeds `threshold`.
pub fn load_mask(path: impl AsRef<Path>, threshold: u8) -> Result<BinaryMask> {
    let img = from_rgb(decode(path.as_ref())?)?;
    let salient = img.pixels().iter().map(|&p| luma8(p) > threshold).collect();
    BinaryMask::new(img.width(), img.height(), salient)
}

/// Loads a grayscale (or RGB, by luma) map file as importance values.
pub fn load_gray_map(path: impl AsRef<Path>) -> Result<GrayMap> {
    Ok(load_image(path)?.to_grayscale())
}

fn encode(
    path: &Path,
    width: usize,
    height: usize,
    bytes: &[u8],
    color: image::ExtendedColorType,
) -> Result<()> {
    image::save_buffer(path, bytes, width as u32, height as u32, color).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Encode {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    })
}

/// Writes the image; the format follows the file extension.
pub fn save_image(img: &RasterImage, path: impl AsRef<Path>) -> Result<()> {
    encode(
        path.as_ref(),
        img.width,
        img.height,
        &img.to_bytes(),
        image::ExtendedColorType::Rgb8,
    )
}

/// Writes the mask as an 8-bit grayscale file (0 / 255).
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let bytes: Vec<u8> = mask.salient.iter().map(|&s| if s { 255 } else { 0 }).collect();
    encode(
        path.as_ref(),
        mask.width,
        mask.height,
        &bytes,
        image::ExtendedColorType::L8,
    )
}

pub fn save_gray_map(map: &GrayMap, path: impl AsRef<Path>) -> Result<()> {
    let bytes: Vec<u8> = map.values.iter().map(|&v| (v * 255.0).round() as u8).collect();
    encode(
        path.as_ref(),
        map.width,
        map.height,
        &bytes,
        image::ExtendedColorType::L8,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one(p: Rgb) -> f64 {
        RasterImage::filled(1, 1, p).unwrap().to_grayscale().get(0, 0)
    }

    #[test]
    fn luma_reference_colors() {
        assert_eq!(one([255, 255, 255]), 1.0);
        assert_eq!(one([0, 0, 0]), 0.0);
        assert!((one([255, 0, 0]) - 0.299).abs() < 1e-12);
        assert!((one([0, 255, 0]) - 0.587).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_buffers() {
        assert!(matches!(RasterImage::new(0, 3, vec![]), Err(Error::EmptyImage)));
        assert!(matches!(
            RasterImage::new(2, 2, vec![[0; 3]; 3]),
            Err(Error::BufferLength {
                expected: 4,
                actual: 3,
                ..
            })
        ));
        assert!(matches!(
            GrayMap::new(1, 2, vec![0.5, 1.5]),
            Err(Error::ValueOutOfRange { index: 1, .. })
        ));
        assert!(GrayMap::new(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn transpose_small() {
        let one = RasterImage::filled(1, 1, [9, 8, 7]).unwrap();
        assert_eq!(one.transpose(), one);

        // 2 wide, 3 tall
        let img = RasterImage::from_fn(2, 3, |r, c| [(r * 10 + c) as u8, 0, 0]).unwrap();
        let t = img.transpose();
        assert_eq!((t.width(), t.height()), (3, 2));
        for r in 0..3 {
            for c in 0..2 {
                assert_eq!(t.pixel(c, r), img.pixel(r, c));
            }
        }
    }

    #[test]
    fn remove_path_closes_rows() {
        let cells: Vec<u32> = (0..9).collect();
        assert_eq!(remove_path(3, 3, &cells, &[1, 1, 1]), vec![0, 2, 3, 5, 6, 8]);
        assert_eq!(remove_path(3, 3, &cells, &[0, 1, 2]), vec![1, 2, 3, 5, 6, 7]);
    }

    #[test]
    fn mask_roundtrip_and_threshold() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.png");
        let gray = image::GrayImage::from_fn(3, 2, |x, y| {
            image::Luma([match (x, y) {
                (0, 0) => 200,
                (1, 0) => 127,
                (2, 0) => 128,
                _ => 0,
            }])
        });
        gray.save(&path).unwrap();
        let m = load_mask(&path, DEFAULT_MASK_THRESHOLD).unwrap();
        assert_eq!(m.cells(), &[true, false, true, false, false, false]);

        let white = dir.path().join("w.png");
        image::GrayImage::from_pixel(4, 4, image::Luma([255]))
            .save(&white)
            .unwrap();
        assert_eq!(load_mask(&white, 127).unwrap().salient_count(), 16);
        let black = dir.path().join("b.png");
        image::GrayImage::from_pixel(4, 4, image::Luma([0]))
            .save(&black)
            .unwrap();
        assert_eq!(load_mask(&black, 127).unwrap().salient_count(), 0);
    }

    #[test]
    fn load_errors_are_distinct() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.png");
        assert!(matches!(load_image(&missing), Err(Error::MissingFile(_))));

        let junk = dir.path().join("junk.png");
        std::fs::write(&junk, b"definitely not a png").unwrap();
        assert!(matches!(load_image(&junk), Err(Error::Decode { .. })));
    }

    #[test]
    fn reads_jpeg() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.jpg");
        image::RgbImage::from_pixel(8, 5, image::Rgb([120, 120, 120]))
            .save(&path)
            .unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!((img.width(), img.height()), (8, 5));
    }

    fn arb_image() -> impl Strategy<Value = RasterImage> {
        (1usize..9, 1usize..9).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<[u8; 3]>(), w * h)
                .prop_map(move |px| RasterImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn grayscale_in_unit_interval(img in arb_image()) {
            prop_assert!(img.to_grayscale().values().iter().all(|v| (0.0..=1.0).contains(v)));
        }

        #[test]
        fn transpose_is_involution(img in arb_image()) {
            let t = img.transpose();
            let mut a = img.pixels().to_vec();
            let mut b = t.pixels().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(t.transpose(), img);
        }

        #[test]
        fn png_roundtrip_is_lossless(img in arb_image()) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("x.png");
            save_image(&img, &path).unwrap();
            prop_assert_eq!(load_image(&path).unwrap(), img);
        }
    }
}
