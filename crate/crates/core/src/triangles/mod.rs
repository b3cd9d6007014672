//! Minimum-area triangles and the reduction from triangles to point-line
//! configurations.

mod brute;
mod fast;
mod pairs;
mod pipeline;

pub use brute::{min_triangle_brute, min_triangle_brute_reversed, triangle_area};
pub use fast::min_triangle_fast;
pub use pairs::{greedy_close_pairs, ClosePairs};
pub use pipeline::{triangle_via_pointline, PipelineReport};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::vec3::Vec3;

/// A triangle of a point set, by sorted indices, with its area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleWitness {
    pub indices: (usize, usize, usize),
    pub area: f64,
}

impl TriangleWitness {
    pub(crate) fn new(i: usize, j: usize, k: usize, area: f64) -> TriangleWitness {
        let mut v = [i, j, k];
        v.sort_unstable();
        TriangleWitness {
            indices: (v[0], v[1], v[2]),
            area,
        }
    }

    /// Total order: area first, then the index triple.
    pub(crate) fn better_than(&self, other: &TriangleWitness) -> bool {
        (self.area, self.indices) < (other.area, other.indices)
    }

    pub(crate) fn worst() -> TriangleWitness {
        TriangleWitness {
            indices: (usize::MAX, usize::MAX, usize::MAX),
            area: f64::INFINITY,
        }
    }

    pub(crate) fn min(a: TriangleWitness, b: TriangleWitness) -> TriangleWitness {
        if b.better_than(&a) {
            b
        } else {
            a
        }
    }
}

pub(crate) fn check_points(pts: &[Point], needed: usize) -> Result<Vec<Vec3>> {
    if pts.len() < needed {
        return Err(Error::TooFewItems {
            needed,
            got: pts.len(),
        });
    }
    let dim = pts[0].dim();
    for p in pts {
        dim.check(p.dim())?;
    }
    Ok(pts.iter().map(|p| p.vec()).collect())
}
