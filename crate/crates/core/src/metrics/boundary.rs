//! Outer-boundary extraction from binary masks and point-set normalization.

use crate::error::{Error, Result};
use crate::raster::BinaryMask;

/// Clockwise on screen (rows grow downward), starting west.
const DIRS: [(isize, isize); 8] = [
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
];

fn dir_index(dr: isize, dc: isize) -> usize {
    DIRS.iter()
        .position(|&d| d == (dr, dc))
        .expect("offset between ring neighbours is a unit step")
}

/// Labels 8-connected components and returns, for each component in raster
/// order of its first pixel, that first (top-most, then left-most) pixel.
fn component_starts(mask: &BinaryMask) -> Vec<(usize, usize)> {
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut starts = Vec::new();
    let mut stack = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !mask.get(r, c) || seen[r * w + c] {
                continue;
            }
            starts.push((r, c));
            seen[r * w + c] = true;
            stack.push((r, c));
            while let Some((pr, pc)) = stack.pop() {
                for (dr, dc) in DIRS {
                    let (nr, nc) = (pr as isize + dr, pc as isize + dc);
                    if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                        continue;
                    }
                    let (nr, nc) = (nr as usize, nc as usize);
                    if mask.get(nr, nc) && !seen[nr * w + nc] {
                        seen[nr * w + nc] = true;
                        stack.push((nr, nc));
                    }
                }
            }
        }
    }
    starts
}

/// Moore-neighbour tracing from the component's top-left pixel, with its
/// west neighbour as the initial backtrack. Tracing stops when the first
/// move (pixel and backtrack) repeats, which also handles one-pixel-wide
/// parts that are walked in both directions.
fn trace_from(mask: &BinaryMask, start: (usize, usize)) -> Vec<(usize, usize)> {
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    let inside = |r: isize, c: isize| r >= 0 && c >= 0 && r < h && c < w && mask.get(r as usize, c as usize);

    let step = |cur: (isize, isize), back: usize| {
        (1..=8).map(|k| (back + k) % 8).find_map(|d| {
            let p = (cur.0 + DIRS[d].0, cur.1 + DIRS[d].1);
            if !inside(p.0, p.1) {
                return None;
            }
            let prev = (d + 7) % 8;
            let q = (cur.0 + DIRS[prev].0, cur.1 + DIRS[prev].1);
            Some((p, dir_index(q.0 - p.0, q.1 - p.1)))
        })
    };

    let mut path = vec![start];
    let Some(first) = step((start.0 as isize, start.1 as isize), 0) else {
        // isolated pixel
        return path;
    };
    let mut state = first;
    // the first move always recurs; the cap only guards against a bug
    let cap = 8 * (w * h) as usize + 8;
    for _ in 0..cap {
        path.push((state.0 .0 as usize, state.0 .1 as usize));
        state = step(state.0, state.1).expect("traced pixel has a foreground neighbour");
        if state == first {
            path.pop();
            break;
        }
    }
    path
}

/// Outer boundaries of every 8-connected component, concatenated in raster
/// order of the components, as `(row, col)` pixels. Holes are not traced.
pub fn trace_boundaries(mask: &BinaryMask) -> Vec<(usize, usize)> {
    component_starts(mask)
        .into_iter()
        .flat_map(|s| trace_from(mask, s))
        .collect()
}

/// Picks `n` entries by uniform index stride (`floor(i * len / n)`).
pub fn subsample<T: Copy>(seq: &[T], n: usize) -> Vec<T> {
    let len = seq.len();
    (0..n).map(|i| seq[i * len / n]).collect()
}

/// Shape sample points in a translation- and scale-normalized frame:
/// centroid at the origin, mean distance to the centroid equal to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<[f64; 2]>,
}

impl PointSet {
    /// Normalizes raw `[x, y]` coordinates.
    pub fn normalized(raw: &[[f64; 2]]) -> Result<Self> {
        let n = raw.len();
        if n < 2 {
            return Err(Error::DegenerateShape { boundary: n });
        }
        let cx = raw.iter().map(|p| p[0]).sum::<f64>() / n as f64;
        let cy = raw.iter().map(|p| p[1]).sum::<f64>() / n as f64;
        let centered: Vec<[f64; 2]> = raw.iter().map(|p| [p[0] - cx, p[1] - cy]).collect();
        let scale = centered.iter().map(|p| p[0].hypot(p[1])).sum::<f64>() / n as f64;
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::DegenerateShape { boundary: n });
        }
        Ok(Self {
            points: centered.iter().map(|p| [p[0] / scale, p[1] / scale]).collect(),
        })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn pixels_to_xy(pixels: &[(usize, usize)]) -> Vec<[f64; 2]> {
    pixels.iter().map(|&(r, c)| [c as f64, r as f64]).collect()
}

/// Traces the mask boundary, subsamples exactly `n` points and normalizes.
pub fn extract_shape_points(mask: &BinaryMask, n: usize) -> Result<PointSet> {
    let boundary = trace_boundaries(mask);
    if boundary.len() < 3 {
        return Err(Error::DegenerateShape {
            boundary: boundary.len(),
        });
    }
    PointSet::normalized(&pixels_to_xy(&subsample(&boundary, n.max(3))))
}

/// Samples both masks with the same point count: `n`, lowered to the shorter
/// boundary when either has fewer pixels.
pub fn extract_pair(a: &BinaryMask, b: &BinaryMask, n: usize) -> Result<(PointSet, PointSet)> {
    let (ba, bb) = (trace_boundaries(a), trace_boundaries(b));
    let shortest = ba.len().min(bb.len());
    if shortest < 3 {
        return Err(Error::DegenerateShape { boundary: shortest });
    }
    let n = n.max(3).min(shortest);
    Ok((
        PointSet::normalized(&pixels_to_xy(&subsample(&ba, n)))?,
        PointSet::normalized(&pixels_to_xy(&subsample(&bb, n)))?,
    ))
}
