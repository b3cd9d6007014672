//! Exact multiplicity counting on the lattice net `hZ²` by row sweeps.
//!
//! Each region is a rectangle minus a union of rectangles; its trace on a
//! horizontal line is a finite union of intervals, so counts on a row reduce to
//! sorting interval endpoints.

use rayon::prelude::*;

use crate::vec3::Vec3;

use super::tube2d::Tube2D;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Rect {
    cx: f64,
    cy: f64,
    dx: f64,
    dy: f64,
    hl: f64,
    hw: f64,
}

impl Rect {
    pub(crate) fn of(t: &Tube2D) -> Rect {
        Rect {
            cx: t.center().x(),
            cy: t.center().y(),
            dx: t.dir().x(),
            dy: t.dir().y(),
            hl: 0.5 * t.length(),
            hw: 0.5 * t.width(),
        }
    }

    fn y_range(&self) -> (f64, f64) {
        let e = self.hl * self.dy.abs() + self.hw * self.dx.abs();
        (self.cy - e, self.cy + e)
    }

    /// `{x : (x, y) ∈ rect}`.
    fn row(&self, y: f64) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        // along-axis and across-axis slabs, each `a·x + b ∈ [-h, h]`
        for (a, b, h) in [
            (self.dx, -self.cx * self.dx + (y - self.cy) * self.dy, self.hl),
            (-self.dy, self.cx * self.dy + (y - self.cy) * self.dx, self.hw),
        ] {
            if a.abs() < 1e-15 {
                if b.abs() > h {
                    return None;
                }
                continue;
            }
            let (p, q) = ((-h - b) / a, (h - b) / a);
            let (p, q) = if p <= q { (p, q) } else { (q, p) };
            lo = lo.max(p);
            hi = hi.min(q);
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// A rectangle with rectangular holes.
#[derive(Debug, Clone)]
pub(crate) struct Holed {
    pub base: Rect,
    pub holes: Vec<Rect>,
}

impl Holed {
    fn row_pieces(&self, y: f64, out: &mut Vec<(f64, f64)>) {
        out.clear();
        let Some(iv) = self.base.row(y) else { return };
        out.push(iv);
        for h in &self.holes {
            let Some((a, b)) = h.row(y) else { continue };
            let mut next = Vec::with_capacity(out.len() + 1);
            for &(p, q) in out.iter() {
                if b < p || a > q {
                    next.push((p, q));
                    continue;
                }
                // Holes are open so their boundary stays in the region.
                if p < a {
                    next.push((p, a));
                }
                if b < q {
                    next.push((b, q));
                }
            }
            *out = next;
            if out.is_empty() {
                return;
            }
        }
    }

    pub(crate) fn contains(&self, x: Vec3) -> bool {
        let mut v = Vec::new();
        self.row_pieces(x.y(), &mut v);
        v.iter().any(|&(a, b)| a <= x.x() && x.x() <= b)
    }
}

/// Outcome of a sweep: the maximal multiplicity and, when a threshold was
/// given, all net points reaching it.
#[derive(Debug, Clone, Default)]
pub(crate) struct SweepOutcome {
    pub max: usize,
    pub rich: Vec<Vec3>,
}

const ROW_CHUNK: i64 = 64;

pub(crate) fn sweep(regions: &[Holed], h: f64, threshold: Option<usize>) -> SweepOutcome {
    if regions.is_empty() {
        return SweepOutcome::default();
    }
    let ranges: Vec<(f64, f64)> = regions.iter().map(|r| r.base.y_range()).collect();
    let j0 = ranges.iter().map(|r| (r.0 / h).ceil() as i64).min().unwrap();
    let j1 = ranges.iter().map(|r| (r.1 / h).floor() as i64).max().unwrap();
    if j1 < j0 {
        return SweepOutcome::default();
    }
    let chunks: Vec<i64> = (j0..=j1).step_by(ROW_CHUNK as usize).collect();
    let parts: Vec<SweepOutcome> = chunks
        .par_iter()
        .map(|&c0| {
            let c1 = (c0 + ROW_CHUNK - 1).min(j1);
            let (ylo, yhi) = (c0 as f64 * h, c1 as f64 * h);
            let active: Vec<usize> = (0..regions.len())
                .filter(|&i| ranges[i].1 >= ylo - 1e-12 && ranges[i].0 <= yhi + 1e-12)
                .collect();
            let mut out = SweepOutcome::default();
            let mut pieces = Vec::new();
            let mut events: Vec<(i64, i32)> = Vec::new();
            for j in c0..=c1 {
                let y = j as f64 * h;
                events.clear();
                for &i in &active {
                    regions[i].row_pieces(y, &mut pieces);
                    for &(a, b) in &pieces {
                        let (ka, kb) = ((a / h - 1e-9).ceil() as i64, (b / h + 1e-9).floor() as i64);
                        if ka <= kb {
                            events.push((ka, 1));
                            events.push((kb + 1, -1));
                        }
                    }
                }
                if events.is_empty() {
                    continue;
                }
                // At equal keys the closing events come first.
                events.sort_unstable();
                let mut cur = 0i64;
                let mut e = 0;
                while e < events.len() {
                    let k = events[e].0;
                    while e < events.len() && events[e].0 == k {
                        cur += events[e].1 as i64;
                        e += 1;
                    }
                    let c = cur as usize;
                    out.max = out.max.max(c);
                    if let Some(r) = threshold {
                        if c >= r && e < events.len() {
                            let next = events[e].0;
                            for kk in k..next {
                                out.rich.push(Vec3::new(kk as f64 * h, y, 0.0));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut all = SweepOutcome::default();
    for p in parts {
        all.max = all.max.max(p.max);
        all.rich.extend(p.rich);
    }
    all
}
