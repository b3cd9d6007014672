use crate::error::{Error, Result};
use crate::vec3::Vec3;

use super::primitives::{Line, Point};
use super::shapes::Prism;

/// Euclidean distance from `p` to the infinite line `l`.
pub fn point_line_distance(p: &Point, l: &Line) -> Result<f64> {
    p.dim().check(l.dim())?;
    Ok(dist_to_line(p.vec(), l))
}

#[inline]
pub(crate) fn dist_to_line(x: Vec3, l: &Line) -> f64 {
    let r = x - l.base();
    let t = r.dot(l.dir());
    (r - l.dir() * t).norm()
}

/// `min(|a - b|, |a + b|)` for unit vectors: the chordal distance between
/// the two unoriented directions.
#[inline]
pub fn direction_distance(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm().min((a + b).norm())
}

/// Minimal distance between points of two infinite lines.
pub fn line_distance(a: &Line, b: &Line) -> Result<f64> {
    a.dim().check(b.dim())?;
    Ok(raw_line_distance(a, b))
}

pub(crate) fn raw_line_distance(a: &Line, b: &Line) -> f64 {
    // Evaluate in a fixed argument order so the result is exactly symmetric.
    let key = |l: &Line| (l.dir().0, l.base().0);
    let (a, b) = match key(a).partial_cmp(&key(b)) {
        Some(std::cmp::Ordering::Greater) => (b, a),
        _ => (a, b),
    };
    let (u, v) = (a.dir(), b.dir());
    let w0 = a.base() - b.base();
    let c = u.dot(v);
    let denom = 1.0 - c * c;
    // Parallel or nearly so: the distance from one base to the other line is exact.
    if denom < 1e-14 {
        return dist_to_line(a.base(), b);
    }
    let d = u.dot(w0);
    let e = v.dot(w0);
    let s = (c * e - d) / denom;
    let t = (e - c * d) / denom;
    let gap = (w0 + u * s - v * t).norm();
    // In the plane non-parallel lines always meet.
    match a.dim() {
        super::Dim::Two => 0.0,
        super::Dim::Three => gap,
    }
}

/// Line-space metric `d(θ, ±θ') + min distance between the lines`.
pub fn line_metric(a: &Line, b: &Line) -> Result<f64> {
    a.dim().check(b.dim())?;
    Ok(raw_line_metric(a, b))
}

#[inline]
pub(crate) fn raw_line_metric(a: &Line, b: &Line) -> f64 {
    direction_distance(a.dir(), b.dir()) + raw_line_distance(a, b)
}

/// Length of `l ∩ Π` for the infinite line `l`.
pub fn line_box_chord(l: &Line, prism: &Prism) -> Result<f64> {
    prism.check_nondegenerate()?;
    Ok(clip(l.base(), l.dir(), f64::NEG_INFINITY, f64::INFINITY, prism))
}

/// Length of the intersection of the segment `base + t·dir`, `t ∈ [t0, t1]`,
/// with `Π`. `dir` must be a unit vector.
pub fn segment_box_chord(base: Vec3, dir: Vec3, t0: f64, t1: f64, prism: &Prism) -> Result<f64> {
    prism.check_nondegenerate()?;
    if !(t0 <= t1) {
        return Err(Error::InvalidParameter(format!(
            "segment bounds out of order: {t0} > {t1}"
        )));
    }
    Ok(clip(base, dir, t0, t1, prism))
}

/// Slab clipping in the prism frame.
#[inline]
pub(crate) fn clip(base: Vec3, dir: Vec3, mut lo: f64, mut hi: f64, prism: &Prism) -> f64 {
    let rel = base - prism.center();
    for k in 0..3 {
        let axis = prism.frame()[k];
        let h = prism.half_extents()[k];
        let o = rel.dot(axis);
        let s = dir.dot(axis);
        if s.abs() < 1e-300 {
            if o.abs() > h {
                return 0.0;
            }
            continue;
        }
        let a = (-h - o) / s;
        let b = (h - o) / s;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        lo = lo.max(a);
        hi = hi.min(b);
        if lo >= hi {
            return 0.0;
        }
    }
    (hi - lo).max(0.0)
}
