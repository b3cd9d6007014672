use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::metric::clip;
use crate::geom::{Dim, Line, Prism};
use crate::vec3::Vec3;

/// A line or segment `base + t·dir`, `t ∈ [lo, hi]`, with `dir` a unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub base: Vec3,
    pub dir: Vec3,
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    pub fn line(l: &Line) -> Segment {
        Segment {
            base: l.base(),
            dir: l.dir(),
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn new(base: Vec3, dir: Vec3, lo: f64, hi: f64) -> Result<Segment> {
        let dir = dir
            .normalized()
            .ok_or_else(|| Error::Degenerate("zero segment direction".into()))?;
        if !(lo <= hi) {
            return Err(Error::InvalidParameter(format!("segment bounds {lo} > {hi}")));
        }
        Ok(Segment { base, dir, lo, hi })
    }

    fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    fn closest_param(&self, x: Vec3) -> f64 {
        (x - self.base).dot(self.dir).clamp(self.lo, self.hi)
    }

    fn closest(&self, x: Vec3) -> Vec3 {
        self.base + self.dir * self.closest_param(x)
    }

    /// Midpoint of closest approach between the two carrier lines, clamped to
    /// the segments. Parallel carriers use the projection of `at`.
    fn meeting_point(&self, other: &Segment, at: Vec3) -> Vec3 {
        let (u, v) = (self.dir, other.dir);
        let w0 = self.base - other.base;
        let c = u.dot(v);
        let denom = 1.0 - c * c;
        if denom < 1e-12 {
            return (at + other.closest(at)) * 0.5;
        }
        let d = u.dot(w0);
        let e = v.dot(w0);
        let s = ((c * e - d) / denom).clamp(self.lo, self.hi);
        let t = ((e - c * d) / denom).clamp(other.lo, other.hi);
        (self.base + u * s + other.base + v * t) * 0.5
    }
}

/// Knobs for the candidate-box search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxSearch {
    /// Anchors beyond this count are subsampled with a fixed stride.
    pub max_anchors: usize,
    /// Nearest other members used to orient and position boxes per anchor.
    pub partners: usize,
    /// Long side of the box; a member counts if its chord is at least half of it.
    pub long_side: f64,
}

impl Default for BoxSearch {
    fn default() -> Self {
        BoxSearch {
            max_anchors: 256,
            partners: 6,
            long_side: 1.0,
        }
    }
}

/// Best box found and the number of members it captures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxHit {
    pub count: usize,
    pub prism: Prism,
    pub anchor: usize,
}

/// Approximate `M_L(u×w×1)`. In the plane the box is a `u×1` rectangle and
/// `w` is ignored.
pub fn m_lines(lines: &[Line], u: f64, w: f64) -> Result<usize> {
    Ok(m_lines_witness(lines, u, w, BoxSearch::default())?.map_or(0, |h| h.count))
}

/// `m_lines` together with the maximizing candidate box.
pub fn m_lines_witness(lines: &[Line], u: f64, w: f64, opts: BoxSearch) -> Result<Option<BoxHit>> {
    let Some(first) = lines.first() else {
        check_scales(u, w)?;
        return Ok(None);
    };
    let dim = first.dim();
    for l in lines {
        dim.check(l.dim())?;
    }
    let segs: Vec<Segment> = lines.iter().map(Segment::line).collect();
    m_segments_witness(&segs, dim, u, w, opts)
}

fn check_scales(u: f64, w: f64) -> Result<()> {
    if !(u > 0.0 && w > 0.0) {
        return Err(Error::InvalidParameter(format!("box scales must be > 0, got {u}, {w}")));
    }
    if u > w {
        return Err(Error::InvalidParameter(format!("box needs u <= w, got {u} > {w}")));
    }
    Ok(())
}

/// Candidate-box maximum for lines or segments.
pub fn m_segments_witness(
    segs: &[Segment],
    dim: Dim,
    u: f64,
    w: f64,
    opts: BoxSearch,
) -> Result<Option<BoxHit>> {
    check_scales(u, w)?;
    let len = opts.long_side;
    if !(len > 0.0) || w > len {
        return Err(Error::InvalidParameter(format!("box long side {len} below w={w}")));
    }
    if segs.is_empty() {
        return Ok(None);
    }
    let n = segs.len();
    let stride = n.div_ceil(opts.max_anchors.max(1));
    let anchors: Vec<usize> = (0..n).step_by(stride).collect();
    let best = anchors
        .par_iter()
        .filter_map(|&a| best_for_anchor(segs, dim, a, u, w, &opts))
        .reduce_with(|x, y| {
            if y.count > x.count || (y.count == x.count && y.anchor < x.anchor) {
                y
            } else {
                x
            }
        });
    Ok(best)
}

/// Number of lines meeting `prism` in a chord of at least half its long side.
pub fn lines_in_prism(lines: &[Line], prism: &Prism) -> usize {
    let segs: Vec<Segment> = lines.iter().map(Segment::line).collect();
    count_in(&segs, prism, 0.5 * prism.extents()[2])
}

/// Segment version of `lines_in_prism`.
pub fn segments_in_prism(segs: &[Segment], prism: &Prism) -> usize {
    count_in(segs, prism, 0.5 * prism.extents()[2])
}

fn count_in(segs: &[Segment], prism: &Prism, need: f64) -> usize {
    let [eu, ew, _] = *prism.frame();
    let [hu, hw, _] = prism.half_extents();
    // A chord of length `need` inside a slab of half-width h tilts at most 2h/need.
    let (su, sw) = (2.0 * hu / need, 2.0 * hw / need);
    segs.iter()
        .filter(|s| {
            s.dir.dot(eu).abs() <= su * (1.0 + 1e-12)
                && s.dir.dot(ew).abs() <= sw * (1.0 + 1e-12)
                && clip(s.base, s.dir, s.lo, s.hi, prism) >= need * (1.0 - 1e-12)
        })
        .count()
}

fn best_for_anchor(
    segs: &[Segment],
    dim: Dim,
    a: usize,
    u: f64,
    w: f64,
    opts: &BoxSearch,
) -> Option<BoxHit> {
    let sa = &segs[a];
    let len = opts.long_side;
    let need = 0.5 * len;
    let ca = if sa.is_finite() {
        sa.base + sa.dir * (0.5 * (sa.lo + sa.hi))
    } else {
        let mid = match dim {
            Dim::Two => Vec3::new(0.5, 0.5, 0.0),
            Dim::Three => Vec3::new(0.5, 0.5, 0.5),
        };
        sa.closest(mid)
    };

    let mut near: Vec<(f64, usize)> = segs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != a)
        .map(|(i, s)| (s.closest(ca).dist(ca), i))
        .collect();
    let k = opts.partners.min(near.len());
    if k > 0 && k < near.len() {
        near.select_nth_unstable_by(k - 1, |x, y| x.partial_cmp(y).unwrap());
    }
    near.truncate(k);
    near.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let axis = sa.dir;
    let mut base_orients = Vec::new();
    match dim {
        Dim::Two => base_orients.push(Vec3::new(0.0, 0.0, 1.0)),
        Dim::Three => {
            let e1 = axis.any_orthogonal();
            base_orients.push(e1);
            base_orients.push(axis.cross(e1));
        }
    }
    let mut all_orients = base_orients.clone();
    let mut per_partner: Vec<(Vec<Vec3>, Vec<Vec3>)> = Vec::new();
    let mut centroid = ca;
    for &(_, b) in &near {
        let sb = &segs[b];
        let qb = sb.closest(ca);
        centroid = centroid + qb;
        let centers = vec![sa.meeting_point(sb, ca), (ca + qb) * 0.5];
        let mut orients = base_orients.clone();
        if dim == Dim::Three {
            let off = qb - ca;
            let off = off - axis * off.dot(axis);
            if let Some(n1) = axis.cross(sb.dir).normalized() {
                orients.push(axis.cross(n1));
            }
            if let Some(o) = off.normalized() {
                orients.push(o);
                orients.push(axis.cross(o));
            }
        }
        all_orients.extend_from_slice(&orients[base_orients.len()..]);
        per_partner.push((centers, orients));
    }
    centroid = centroid * (1.0 / (near.len() + 1) as f64);

    let (wu, ww) = match dim {
        Dim::Two => (u, len),
        Dim::Three => (u, w),
    };
    let mut best: Option<BoxHit> = None;
    let mut consider = |c: Vec3, o: Vec3| {
        let Ok(prism) = Prism::oriented(c, axis, o, wu, ww, len) else {
            return;
        };
        let count = count_in(segs, &prism, need);
        if best.map_or(true, |h| count > h.count) {
            best = Some(BoxHit { count, prism, anchor: a });
        }
    };
    for &o in &all_orients {
        consider(ca, o);
    }
    for (centers, orients) in &per_partner {
        for &c in centers {
            for &o in orients {
                consider(c, o);
            }
        }
    }
    for &o in &base_orients {
        consider(centroid, o);
    }
    best
}
