use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::metric::dist_to_line;
use crate::geom::{Dim, Line, Point};
use crate::vec3::Vec3;

use super::kernel::EtaKernel;

/// Pairs below this many candidates are scanned directly.
const DIRECT_LIMIT: usize = 4_000_000;

pub(crate) fn check_family(points: &[Point], lines: &[Line]) -> Result<Dim> {
    let dim = points
        .first()
        .map(|p| p.dim())
        .or_else(|| lines.first().map(|l| l.dim()))
        .ok_or_else(|| Error::EmptyConfiguration("no points and no lines".into()))?;
    for p in points {
        dim.check(p.dim())?;
    }
    for l in lines {
        dim.check(l.dim())?;
    }
    Ok(dim)
}

/// Sum with a fixed binary tree, independent of thread scheduling.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Bucket grid over the points with a given cell side.
struct PointGrid {
    lo: Vec3,
    cell: f64,
    g: [i64; 3],
    start: Vec<usize>,
    items: Vec<usize>,
}

impl PointGrid {
    fn new(pts: &[Vec3], cell: f64, dim: usize) -> PointGrid {
        let mut lo = pts[0];
        let mut hi = pts[0];
        for p in pts {
            for k in 0..3 {
                lo.0[k] = lo.0[k].min(p[k]);
                hi.0[k] = hi.0[k].max(p[k]);
            }
        }
        let mut g = [1i64; 3];
        for k in 0..dim {
            g[k] = ((hi[k] - lo[k]) / cell).floor() as i64 + 1;
        }
        let ncell = (g[0] * g[1] * g[2]) as usize;
        let mut grid = PointGrid {
            lo,
            cell,
            g,
            start: vec![0; ncell + 1],
            items: vec![0; pts.len()],
        };
        let ids: Vec<usize> = pts.iter().map(|p| grid.id(grid.cell_of(*p).unwrap())).collect();
        for &c in &ids {
            grid.start[c + 1] += 1;
        }
        for c in 0..ncell {
            grid.start[c + 1] += grid.start[c];
        }
        let mut fill = grid.start.clone();
        for (i, &c) in ids.iter().enumerate() {
            grid.items[fill[c]] = i;
            fill[c] += 1;
        }
        grid
    }

    fn cell_of(&self, p: Vec3) -> Option<[i64; 3]> {
        let mut c = [0i64; 3];
        for k in 0..3 {
            let v = ((p[k] - self.lo[k]) / self.cell).floor();
            if !(v >= -1.0 && v <= self.g[k] as f64) {
                return None;
            }
            c[k] = (v as i64).clamp(0, self.g[k] - 1);
        }
        Some(c)
    }

    fn id(&self, c: [i64; 3]) -> usize {
        ((c[2] * self.g[1] + c[1]) * self.g[0] + c[0]) as usize
    }

    /// Ids of the cells the line passes through, plus their neighbours.
    fn cells_near_line(&self, l: &Line) -> Vec<usize> {
        // Parameter range of the line inside the (padded) grid box.
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for k in 0..3 {
            let a = self.lo[k] - self.cell;
            let b = self.lo[k] + (self.g[k] + 1) as f64 * self.cell;
            let (o, s) = (l.base()[k], l.dir()[k]);
            if s.abs() < 1e-15 {
                if o < a || o > b {
                    return Vec::new();
                }
                continue;
            }
            let (t0, t1) = ((a - o) / s, (b - o) / s);
            lo = lo.max(t0.min(t1));
            hi = hi.min(t0.max(t1));
        }
        if !(lo <= hi) {
            return Vec::new();
        }
        let step = 0.5 * self.cell;
        let n = ((hi - lo) / step).ceil() as usize + 1;
        let mut out = Vec::new();
        for s in 0..=n {
            let x = l.at(lo + (s as f64 * step).min(hi - lo));
            let Some(c) = self.cell_of(x) else { continue };
            for dz in -1..=1 {
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let q = [c[0] + dx, c[1] + dy, c[2] + dz];
                        if (0..3).all(|k| q[k] >= 0 && q[k] < self.g[k]) {
                            out.push(self.id(q));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn bucket(&self, id: usize) -> &[usize] {
        &self.items[self.start[id]..self.start[id + 1]]
    }
}

/// Smoothed incidence count `I(w; P, L) = w^{d−1} Σ_{p,ℓ} ∫_ℓ η_w(x − p) dx`.
///
/// Each term depends only on `d(p, ℓ)/w` and is evaluated by Simpson
/// quadrature along the line; pairs beyond the kernel support are pruned by
/// a point grid of cell `3w`.
pub fn incidence_count(w: f64, points: &[Point], lines: &[Line]) -> Result<f64> {
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::InvalidParameter(format!("scale w must lie in (0, 1], got {w}")));
    }
    if points.is_empty() || lines.is_empty() {
        return Ok(0.0);
    }
    let dim = check_family(points, lines)?;
    let kernel = EtaKernel::get(dim);
    let reach = kernel.support * w;
    let pts: Vec<Vec3> = points.iter().map(|p| p.vec()).collect();
    let term = |p: Vec3, l: &Line| -> f64 {
        let d = dist_to_line(p, l);
        if d >= reach {
            0.0
        } else {
            kernel.line_integral(d / w)
        }
    };
    let per_line: Vec<f64> = if pts.len().saturating_mul(lines.len()) <= DIRECT_LIMIT {
        lines
            .par_iter()
            .map(|l| {
                let v: Vec<f64> = pts.iter().map(|&p| term(p, l)).collect();
                pairwise_sum(&v)
            })
            .collect()
    } else {
        let grid = PointGrid::new(&pts, 3.0 * w, dim.get());
        lines
            .par_iter()
            .map(|l| {
                let mut v = Vec::new();
                for id in grid.cells_near_line(l) {
                    for &i in grid.bucket(id) {
                        let t = term(pts[i], l);
                        if t != 0.0 {
                            v.push(t);
                        }
                    }
                }
                pairwise_sum(&v)
            })
            .collect()
    };
    Ok(pairwise_sum(&per_line))
}

/// `B(w) = I(w; P, L) / (w^{d−1} |P| |L|)`.
pub fn normalized_b(w: f64, points: &[Point], lines: &[Line]) -> Result<f64> {
    if points.is_empty() || lines.is_empty() {
        return Err(Error::EmptyConfiguration("B(w) needs points and lines".into()));
    }
    let dim = check_family(points, lines)?;
    let i = incidence_count(w, points, lines)?;
    Ok(i / (w.powi(dim.get() as i32 - 1) * points.len() as f64 * lines.len() as f64))
}
