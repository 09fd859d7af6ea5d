use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Filesystem or codec failure.
    Io,
    /// Inputs were readable but semantically unusable.
    Data,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("i/o error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode {}: {message}", .path.display())]
    Decode { path: PathBuf, message: String },

    #[error("cannot encode {}: {message}", .path.display())]
    Encode { path: PathBuf, message: String },

    #[error("zero-sized image")]
    EmptyImage,

    #[error("buffer length {actual} does not match {width}x{height} (expected {expected})")]
    BufferLength {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },

    #[error("importance value {value} at index {index} is outside [0, 1]")]
    ValueOutOfRange { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected_w}x{expected_h}, got {actual_w}x{actual_h}")]
    DimensionMismatch {
        expected_w: usize,
        expected_h: usize,
        actual_w: usize,
        actual_h: usize,
    },

    #[error("ground-truth importance requested but no mask was supplied")]
    MissingMask,

    #[error("invalid importance source `{0}` (expected sobel, grad, mask or external:<path>)")]
    InvalidSource(String),

    #[error("invalid seam: {0}")]
    InvalidSeam(String),

    #[error("target width {target} outside [1, {current}]")]
    TargetOutOfRange { target: usize, current: usize },

    #[error("cannot remove a seam from a width-1 image")]
    TooNarrow,

    #[error("ground truth mask has no salient pixels")]
    EmptyGroundTruth,

    #[error("degenerate shape: {boundary} boundary pixel(s), need at least 3")]
    DegenerateShape { boundary: usize },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("sequence is constant; correlation undefined")]
    ConstantInput,

    #[error("need at least 2 values, got {0}")]
    TooShort(usize),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Wraps a filesystem error, mapping `NotFound` to [`Error::MissingFile`].
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path)
        } else {
            Error::Io { path, source }
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::MissingFile(_) | Error::Io { .. } | Error::Decode { .. } | Error::Encode { .. } => {
                ErrorClass::Io
            }
            _ => ErrorClass::Data,
        }
    }
}
