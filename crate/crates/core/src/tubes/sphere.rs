use crate::error::{Error, Result};
use crate::geom::SphericalRectangle;
use crate::vec3::Vec3;

use super::tube2d::Tube2D;
use super::two_ends::{two_ends_decompose, TwoEndsParams, TwoEndsResult};

/// Cap radius of the cover of the sphere.
const CAP: f64 = 0.1;
/// Allowed projection distortion.
const DISTORTION: f64 = 0.1;
/// Constant in `δ ≤ cΔb` and `Δ < c`.
const C: f64 = 0.1;

/// Sub-family handled in one cap.
#[derive(Debug, Clone, PartialEq)]
pub struct CapReport {
    pub center: Vec3,
    /// Indices of the pieces assigned to this cap.
    pub pieces: Vec<usize>,
    pub result: TwoEndsResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalTwoEnds {
    /// Lifted `𝕌`: spherical rectangles of width `≈ 4δ·b/ℓ` and length `≈ Δℓ`.
    pub tubes: Vec<SphericalRectangle>,
    /// `𝕌(T)` per input rectangle, indices into `tubes`.
    pub selection: Vec<Vec<usize>>,
    /// Input rectangle of each piece.
    pub piece_owner: Vec<usize>,
    pub caps: Vec<CapReport>,
    /// Plane scale: projected coordinates are multiplied by this.
    pub scale: f64,
}

impl SphericalTwoEnds {
    /// Largest residual overlap over the caps.
    pub fn overlap(&self) -> usize {
        self.caps.iter().map(|c| c.result.overlap).max().unwrap_or(0)
    }

    pub fn max_selection(&self) -> usize {
        self.selection.iter().map(Vec::len).max().unwrap_or(0)
    }
}

fn tangent_frame(q: Vec3) -> (Vec3, Vec3) {
    let e1 = q.any_orthogonal();
    (e1, q.cross(e1))
}

/// Gnomonic projection to the tangent plane at `q`, in frame coordinates.
fn project(x: Vec3, q: Vec3, frame: (Vec3, Vec3)) -> Option<[f64; 2]> {
    let c = x.dot(q);
    if c <= 1e-9 {
        return None;
    }
    let p = x * (1.0 / c);
    Some([p.dot(frame.0), p.dot(frame.1)])
}

fn unproject(p: [f64; 2], q: Vec3, frame: (Vec3, Vec3)) -> Vec3 {
    (q + frame.0 * p[0] + frame.1 * p[1]).normalized().unwrap_or(q)
}

/// The nominal planar `2a × b` rectangle of `rect` in the tangent plane at
/// `pole`: centre and direction of the projected arc.
pub fn gnomonic_rectangle(rect: &SphericalRectangle, pole: Vec3) -> Result<Tube2D> {
    let q = pole
        .normalized()
        .ok_or_else(|| Error::Degenerate("zero projection pole".into()))?;
    let frame = tangent_frame(q);
    let hemisphere = || Error::InvalidParameter("rectangle not in the open hemisphere of the pole".into());
    let c = project(rect.center(), q, frame).ok_or_else(hemisphere)?;
    let eps = 1e-6;
    let a = project(rect.arc_point(-eps), q, frame).ok_or_else(hemisphere)?;
    let b = project(rect.arc_point(eps), q, frame).ok_or_else(hemisphere)?;
    Tube2D::new(c, [b[0] - a[0], b[1] - a[1]], 2.0 * rect.width(), rect.length())
}

/// Fibonacci points on the sphere with covering radius below `CAP / 2`.
fn cap_centers() -> Vec<Vec3> {
    let n = (8.0 / (0.25 * CAP * CAP)).ceil() as usize;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            Vec3::new(r * t.cos(), r * t.sin(), z)
        })
        .collect()
}

fn split(rect: &SphericalRectangle, max_len: f64) -> Result<Vec<SphericalRectangle>> {
    let k = ((rect.length() / max_len) - 1e-9).ceil().max(1.0) as usize;
    let piece = rect.length() / k as f64;
    (0..k)
        .map(|j| {
            let s = -0.5 * rect.length() + (j as f64 + 0.5) * piece;
            let tangent = rect.axis() * s.cos() - rect.center() * s.sin();
            SphericalRectangle::new(rect.arc_point(s), tangent, piece, rect.width().min(piece))
        })
        .collect()
}

/// Two-ends decomposition of `δ × b` spherical rectangles, cap by cap.
pub fn spherical_two_ends(
    rects: &[SphericalRectangle],
    delta: f64,
    big_delta: f64,
    b: f64,
    params: &TwoEndsParams,
) -> Result<SphericalTwoEnds> {
    if !(delta > 0.0 && b > 0.0 && delta <= C * big_delta * b && big_delta < C) {
        return Err(Error::InvalidParameter(format!(
            "spherical two-ends needs δ ≤ {C}·Δ·b and Δ < {C}, got δ={delta}, Δ={big_delta}, b={b}"
        )));
    }
    for r in rects {
        if r.width() > delta * (1.0 + 1e-9) || r.length() > b * (1.0 + 1e-9) {
            return Err(Error::InvalidParameter(format!(
                "rectangle {} × {} exceeds δ × b = {delta} × {b}",
                r.width(),
                r.length()
            )));
        }
    }
    let ell = b.min(CAP / 8.0);
    let mut pieces = Vec::new();
    let mut owner = Vec::new();
    for (i, r) in rects.iter().enumerate() {
        for p in split(r, ell)? {
            pieces.push(p);
            owner.push(i);
        }
    }

    // Greedy grouping: repeatedly take the cap containing most unassigned pieces.
    let centers = cap_centers();
    let fits = |p: &SphericalRectangle, q: Vec3| {
        p.center().dot(q).clamp(-1.0, 1.0).acos() + 0.5 * p.length() + p.width() <= CAP
    };
    let holders: Vec<Vec<usize>> = pieces
        .iter()
        .map(|p| (0..centers.len()).filter(|&k| fits(p, centers[k])).collect())
        .collect();
    let mut count = vec![0usize; centers.len()];
    for h in &holders {
        for &k in h {
            count[k] += 1;
        }
    }
    let mut assigned = vec![false; pieces.len()];
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    while assigned.iter().any(|a| !a) {
        let (best, &c) = count
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .unwrap();
        if c == 0 {
            return Err(Error::Degenerate("piece not covered by any cap".into()));
        }
        let members: Vec<usize> = (0..pieces.len())
            .filter(|&i| !assigned[i] && holders[i].contains(&best))
            .collect();
        for &i in &members {
            assigned[i] = true;
            for &k in &holders[i] {
                count[k] -= 1;
            }
        }
        groups.push((best, members));
    }

    let scale = 1.0 / ((1.0 - DISTORTION) * ell);
    let plane_delta = 2.0 * delta / ell;
    let mut tubes = Vec::new();
    let mut selection: Vec<Vec<usize>> = vec![Vec::new(); rects.len()];
    let mut caps = Vec::new();
    for (k, members) in groups {
        let q = centers[k];
        let frame = tangent_frame(q);
        let planar: Vec<Tube2D> = members
            .iter()
            .map(|&i| to_plane(&pieces[i], q, scale))
            .collect::<Result<_>>()?;
        let result = two_ends_decompose(&planar, plane_delta, big_delta, params)?;
        let offset = tubes.len();
        for u in &result.tubes {
            tubes.push(lift(u, q, frame, scale)?);
        }
        for (slot, &i) in members.iter().enumerate() {
            let sel = &mut selection[owner[i]];
            for &j in &result.selection[slot] {
                if !sel.contains(&(offset + j)) {
                    sel.push(offset + j);
                }
            }
        }
        caps.push(CapReport {
            center: q,
            pieces: members,
            result,
        });
    }
    Ok(SphericalTwoEnds {
        tubes,
        selection,
        piece_owner: owner,
        caps,
        scale,
    })
}

fn to_plane(piece: &SphericalRectangle, q: Vec3, scale: f64) -> Result<Tube2D> {
    let t = gnomonic_rectangle(piece, q)?;
    let c = t.center() * scale;
    let f = (1.0 - DISTORTION) * scale;
    Tube2D::new([c.x(), c.y()], [t.dir().x(), t.dir().y()], t.width() * f, t.length() * f)
}

fn lift(u: &Tube2D, q: Vec3, frame: (Vec3, Vec3), scale: f64) -> Result<SphericalRectangle> {
    let at = |s: f64| {
        let p = (u.center() + u.dir() * s) * (1.0 / scale);
        unproject([p.x(), p.y()], q, frame)
    };
    let center = at(0.0);
    let ahead = at(1e-3 * u.length());
    let length = u.length() / scale;
    let width = (0.5 * u.width() / scale).min(length);
    SphericalRectangle::new(center, ahead - center, length, width)
}
