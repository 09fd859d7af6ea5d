//! Retargeting quality metrics.
//!
//! Both metrics compare a ground-truth saliency mask with the same mask after
//! it has been carved in lockstep with the image:
//!
//! * area ratio: the fraction of salient pixels that survived, averaged over
//!   a dataset into the mean area ratio (MAR);
//! * shape distortion: boundary points of both masks are matched through
//!   shape-context descriptors and the mean squared distance between matched
//!   points is taken, averaged over a dataset into MSSD.
//!
//! Pearson correlation is provided for checking agreement of these scores with
//! other rankings such as user ratings.

pub mod assignment;
pub mod boundary;
pub mod pearson;
pub mod shape_context;

pub use boundary::{extract_shape_points, trace_boundaries, PointSet};
pub use pearson::pearson_cc;
pub use shape_context::{shape_context, shape_context_with, ShapeContextConfig, ShapeDescriptor};

use crate::error::{Error, Result};
use crate::raster::BinaryMask;

pub const DEFAULT_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsConfig {
    /// Boundary sample count per shape (lowered to the shorter boundary).
    pub n_points: usize,
    pub shape_context: ShapeContextConfig,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            n_points: DEFAULT_POINTS,
            shape_context: ShapeContextConfig::default(),
        }
    }
}

/// Surviving fraction of salient pixels.
pub fn area_ratio(gt: &BinaryMask, carved_gt: &BinaryMask) -> Result<f64> {
    let total = gt.salient_count();
    if total == 0 {
        return Err(Error::EmptyGroundTruth);
    }
    Ok(carved_gt.salient_count() as f64 / total as f64)
}

/// A point-to-point matching between two equally sized shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    /// `perm[i]` is the point of the second shape matched to point `i` of
    /// the first.
    pub perm: Vec<usize>,
    /// Total chi-square cost of the matching.
    pub cost: f64,
}

/// Row-major chi-square cost matrix between every histogram of `a` and `b`.
pub fn cost_matrix(a: &ShapeDescriptor, b: &ShapeDescriptor) -> Vec<f64> {
    let n = a.len();
    let mut cost = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            cost.push(shape_context::chi_square(a.histogram(i), b.histogram(j)));
        }
    }
    cost
}

/// Minimum-cost bijection between the points of two descriptors.
///
/// When several matchings reach the minimum cost, the one with the smallest
/// total squared distance between matched points is returned, so identical
/// shapes always match point-for-point.
pub fn match_shapes(a: &ShapeDescriptor, b: &ShapeDescriptor) -> Result<Correspondence> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: b.len(),
        });
    }
    let cost = cost_matrix(a, b);
    let (pa, pb) = (a.points().points(), b.points().points());
    let spatial: Vec<f64> = (0..n * n)
        .map(|k| squared_distance(pa[k / n], pb[k % n]))
        .collect();
    let perm = assignment::solve_lexicographic(&cost, &spatial, n);
    Ok(Correspondence {
        cost: assignment::total_cost(&cost, n, &perm),
        perm,
    })
}

fn squared_distance(p: [f64; 2], q: [f64; 2]) -> f64 {
    let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
    dx * dx + dy * dy
}

/// Mean squared distance between matched points.
pub fn ssd(a: &PointSet, b: &PointSet, corr: &Correspondence) -> Result<f64> {
    let n = a.len();
    if b.len() != n || corr.perm.len() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: if b.len() != n { b.len() } else { corr.perm.len() },
        });
    }
    let (pa, pb) = (a.points(), b.points());
    let total: f64 = corr
        .perm
        .iter()
        .enumerate()
        .map(|(i, &j)| squared_distance(pa[i], pb[j]))
        .sum();
    Ok(total / n as f64)
}

/// Shape distortion between a mask and its carved version.
pub fn mssd_pair(gt: &BinaryMask, carved_gt: &BinaryMask, n: usize) -> Result<f64> {
    mssd_pair_with(
        gt,
        carved_gt,
        &MetricsConfig {
            n_points: n,
            ..MetricsConfig::default()
        },
    )
}

pub fn mssd_pair_with(gt: &BinaryMask, carved_gt: &BinaryMask, cfg: &MetricsConfig) -> Result<f64> {
    let (a, b) = boundary::extract_pair(gt, carved_gt, cfg.n_points)?;
    let da = shape_context_with(&a, &cfg.shape_context);
    let db = shape_context_with(&b, &cfg.shape_context);
    let corr = match_shapes(&da, &db)?;
    ssd(&a, &b, &corr)
}
