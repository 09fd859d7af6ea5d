//! Seam-carving image retargeting with pluggable importance maps, plus
//! shape-preservation metrics and a batch harness for evaluating it.

pub mod bench;
pub mod carve;
pub mod error;
pub mod importance;
pub mod metrics;
pub mod raster;

pub use carve::{
    carve_to_width, make_it_square, optimal_vertical_seam, remove_seam, remove_seam_mask, CarveOptions,
    CarveResult, Orientation, Seam, SizedCarve,
};
pub use error::{Error, ErrorClass, Result};
pub use importance::{importance_for, ImportanceSource};
pub use metrics::{area_ratio, match_shapes, mssd_pair, pearson_cc, ssd, MetricsConfig};
pub use raster::{load_image, load_mask, save_image, BinaryMask, GrayMap, RasterImage};
