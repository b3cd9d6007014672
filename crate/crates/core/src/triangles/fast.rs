use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::Result;
use crate::geom::Point;
use crate::vec3::Vec3;

use super::brute::triangle_area;
use super::{check_points, TriangleWitness};

/// Uniform bucket grid over the bounding box of a point set.
struct Grid {
    lo: Vec3,
    h: f64,
    g: [usize; 3],
    start: Vec<usize>,
    items: Vec<usize>,
}

impl Grid {
    fn new(v: &[Vec3], dim: usize) -> Grid {
        let mut lo = v[0];
        let mut hi = v[0];
        for p in v {
            for k in 0..3 {
                lo.0[k] = lo.0[k].min(p[k]);
                hi.0[k] = hi.0[k].max(p[k]);
            }
        }
        let span = (0..dim).map(|k| hi[k] - lo[k]).fold(0.0, f64::max).max(1e-12);
        let per = ((v.len() as f64).powf(1.0 / dim as f64).ceil() as usize).clamp(1, 256);
        let h = span / per as f64;
        let mut g = [1usize; 3];
        for (k, gk) in g.iter_mut().enumerate().take(dim) {
            *gk = (((hi[k] - lo[k]) / h).floor() as usize + 1).min(per + 1);
        }
        let ncell = g[0] * g[1] * g[2];
        let mut grid = Grid {
            lo,
            h,
            g,
            start: vec![0; ncell + 1],
            items: vec![0; v.len()],
        };
        let ids: Vec<usize> = v.iter().map(|p| grid.id(grid.cell_of(*p))).collect();
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

    #[inline]
    fn coord(&self, x: f64, k: usize) -> isize {
        (((x - self.lo[k]) / self.h).floor() as isize).clamp(0, self.g[k] as isize - 1)
    }

    #[inline]
    fn cell_of(&self, p: Vec3) -> [isize; 3] {
        [self.coord(p[0], 0), self.coord(p[1], 1), self.coord(p[2], 2)]
    }

    #[inline]
    fn id(&self, c: [isize; 3]) -> usize {
        (c[2] as usize * self.g[1] + c[1] as usize) * self.g[0] + c[0] as usize
    }

    #[inline]
    fn bucket(&self, id: usize) -> &[usize] {
        &self.items[self.start[id]..self.start[id + 1]]
    }

    /// Calls `f` on every point of every cell meeting the cube `c ± r`.
    #[inline]
    fn for_each_near(&self, c: Vec3, r: f64, mut f: impl FnMut(usize)) {
        let lo = self.cell_of(c - Vec3::new(r, r, r));
        let hi = self.cell_of(c + Vec3::new(r, r, r));
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    for &i in self.bucket(self.id([x, y, z])) {
                        f(i);
                    }
                }
            }
        }
    }
}

/// Triangle area with indices sorted, matching the brute-force evaluation.
#[inline]
fn witness(v: &[Vec3], i: usize, j: usize, k: usize) -> TriangleWitness {
    let mut s = [i, j, k];
    s.sort_unstable();
    TriangleWitness::new(s[0], s[1], s[2], triangle_area(v[s[0]], v[s[1]], v[s[2]]))
}

/// Incumbent from triangles among each point and its nearest grid neighbours.
fn local_incumbent(v: &[Vec3], grid: &Grid) -> TriangleWitness {
    const K: usize = 8;
    (0..v.len())
        .into_par_iter()
        .map(|a| {
            let mut near: Vec<(f64, usize)> = Vec::new();
            let mut r = grid.h;
            while near.len() < K.min(v.len() - 1) {
                near.clear();
                grid.for_each_near(v[a], r, |i| {
                    if i != a {
                        near.push((v[a].dist(v[i]), i));
                    }
                });
                r *= 2.0;
            }
            near.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            near.truncate(K);
            let mut best = TriangleWitness::worst();
            for (s, &(_, b)) in near.iter().enumerate() {
                for &(_, c) in &near[s + 1..] {
                    best = TriangleWitness::min(best, witness(v, a, b, c));
                }
            }
            best
        })
        .reduce(TriangleWitness::worst, TriangleWitness::min)
}

/// Exact minimum-area triangle with grid pruning.
///
/// Every triangle of area `A` with longest side `ab` has its third vertex
/// within `2A/|ab|` of the segment `ab`. Starting from a local incumbent, each
/// pair `(a, b)` only inspects grid cells near its segment. Triangles tying
/// the incumbent are kept, so the result (value and witness) equals
/// [`super::min_triangle_brute`].
pub fn min_triangle_fast(pts: &[Point]) -> Result<TriangleWitness> {
    let v = check_points(pts, 3)?;
    let n = v.len();
    let dim = pts[0].dim().get();
    let grid = Grid::new(&v, dim);
    let start = local_incumbent(&v, &grid);
    let incumbent = AtomicU64::new(start.area.to_bits());
    let found = (0..n - 1)
        .into_par_iter()
        .map(|a| {
            let mut best = start;
            for b in a + 1..n {
                let s = v[a].dist(v[b]);
                let bound = f64::from_bits(incumbent.load(Ordering::Relaxed));
                if s == 0.0 {
                    // Coincident points: every third point gives area 0.
                    for c in 0..n {
                        if c != a && c != b {
                            best = TriangleWitness::min(best, witness(&v, a, b, c));
                        }
                    }
                    continue;
                }
                let r = 2.0 * bound / s * (1.0 + 1e-9) + 1e-300;
                let steps = (s / grid.h).ceil().max(1.0) as usize;
                let step = s / steps as f64;
                let dir = (v[b] - v[a]) / s;
                let reach = r + 0.5 * step;
                let mut local = TriangleWitness::worst();
                for t in 0..=steps {
                    let c0 = v[a] + dir * (t as f64 * step);
                    grid.for_each_near(c0, reach, |c| {
                        if c == a || c == b {
                            return;
                        }
                        // Only triangles whose longest side is ab.
                        if v[a].dist(v[c]) > s || v[b].dist(v[c]) > s {
                            return;
                        }
                        let w = witness(&v, a, b, c);
                        if w.area <= bound {
                            local = TriangleWitness::min(local, w);
                        }
                    });
                }
                if local.area < bound {
                    incumbent.fetch_min(local.area.to_bits(), Ordering::Relaxed);
                }
                best = TriangleWitness::min(best, local);
            }
            best
        })
        .reduce(|| start, TriangleWitness::min);
    Ok(found)
}
