//! Log-polar shape-context histograms.

use std::f64::consts::TAU;

use super::boundary::PointSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeContextConfig {
    pub radial_bins: usize,
    pub angular_bins: usize,
    /// Inner and outer radius as multiples of the mean pairwise distance.
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl Default for ShapeContextConfig {
    fn default() -> Self {
        Self {
            radial_bins: 5,
            angular_bins: 12,
            inner_radius: 0.125,
            outer_radius: 2.0,
        }
    }
}

impl ShapeContextConfig {
    pub fn bins(&self) -> usize {
        self.radial_bins * self.angular_bins
    }

    /// Radial bin for a distance already divided by the mean pairwise
    /// distance. Closer than the inner radius lands in bin 0, beyond the
    /// outer radius in the last bin.
    fn radial_bin(&self, d: f64) -> usize {
        let last = self.radial_bins - 1;
        if d < self.inner_radius {
            0
        } else if d >= self.outer_radius {
            last
        } else {
            let t = (d / self.inner_radius).ln() / (self.outer_radius / self.inner_radius).ln();
            ((t * self.radial_bins as f64) as usize).min(last)
        }
    }

    fn angular_bin(&self, dx: f64, dy: f64) -> usize {
        let mut theta = dy.atan2(dx);
        if theta < 0.0 {
            theta += TAU;
        }
        ((theta / (TAU / self.angular_bins as f64)) as usize).min(self.angular_bins - 1)
    }
}

/// One histogram per point, `radial * angular_bins + angular` indexed.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeDescriptor {
    points: PointSet,
    bins: usize,
    hist: Vec<u32>,
}

impl ShapeDescriptor {
    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn histogram(&self, i: usize) -> &[u32] {
        &self.hist[i * self.bins..(i + 1) * self.bins]
    }

    /// Builds a descriptor from explicit histograms, e.g. for matching tests.
    pub fn from_parts(points: PointSet, bins: usize, hist: Vec<u32>) -> Self {
        assert_eq!(hist.len(), points.len() * bins);
        Self { points, bins, hist }
    }
}

pub fn shape_context(ps: &PointSet) -> ShapeDescriptor {
    shape_context_with(ps, &ShapeContextConfig::default())
}

pub fn shape_context_with(ps: &PointSet, cfg: &ShapeContextConfig) -> ShapeDescriptor {
    let pts = ps.points();
    let n = pts.len();
    let dist = |a: [f64; 2], b: [f64; 2]| (b[0] - a[0]).hypot(b[1] - a[1]);

    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += dist(pts[i], pts[j]);
            }
        }
    }
    let pairs = (n * (n - 1)) as f64;
    let mean = if pairs > 0.0 { total / pairs } else { 1.0 };

    let bins = cfg.bins();
    let mut hist = vec![0u32; n * bins];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (dx, dy) = (pts[j][0] - pts[i][0], pts[j][1] - pts[i][1]);
            let r = if mean > 0.0 {
                dist(pts[i], pts[j]) / mean
            } else {
                0.0
            };
            let k = cfg.radial_bin(r) * cfg.angular_bins + cfg.angular_bin(dx, dy);
            hist[i * bins + k] += 1;
        }
    }
    ShapeDescriptor {
        points: ps.clone(),
        bins,
        hist,
    }
}

/// Chi-square distance between two count histograms; bins empty in both
/// contribute nothing.
pub fn chi_square(a: &[u32], b: &[u32]) -> f64 {
    0.5 * a
        .iter()
        .zip(b)
        .filter(|(&x, &y)| x + y > 0)
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d / (x + y) as f64
        })
        .sum::<f64>()
}
