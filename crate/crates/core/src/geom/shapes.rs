use crate::error::{Error, Result};
use crate::vec3::Vec3;

use super::metric::dist_to_line;
use super::primitives::Line;

const FRAME_TOL: f64 = 1e-10;

/// A rectangular box with side lengths `a ≤ b ≤ c` along an orthonormal frame.
///
/// The `u×w×1` prisms of the concentration numbers are `Prism`s with extents
/// `(u, w, 1)`; planar rectangles are represented with a unit extent along `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prism {
    center: Vec3,
    half: [f64; 3],
    frame: [Vec3; 3],
}

impl Prism {
    /// `extents` are full side lengths, ascending, matching `frame` row by row.
    pub fn new(center: Vec3, extents: [f64; 3], frame: [Vec3; 3]) -> Result<Prism> {
        if !center.is_finite() || extents.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::InvalidParameter("prism extents must be finite and ≥ 0".into()));
        }
        if !(extents[0] <= extents[1] && extents[1] <= extents[2]) {
            return Err(Error::InvalidParameter(format!(
                "prism extents must be ascending, got {extents:?}"
            )));
        }
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                if (frame[i].dot(frame[j]) - want).abs() > FRAME_TOL {
                    return Err(Error::InvalidParameter("prism frame is not orthonormal".into()));
                }
            }
        }
        Ok(Prism {
            center,
            half: extents.map(|e| 0.5 * e),
            frame,
        })
    }

    /// Box of size `u × w × len` whose long side points along `axis`; the
    /// orientation of the two short sides is arbitrary.
    pub fn aligned(center: Vec3, axis: Vec3, u: f64, w: f64, len: f64) -> Result<Prism> {
        let axis = axis
            .normalized()
            .ok_or_else(|| Error::Degenerate("zero prism axis".into()))?;
        Prism::oriented(center, axis, axis.any_orthogonal(), u, w, len)
    }

    /// Box with long side along `axis` and middle side along the part of
    /// `width_dir` orthogonal to `axis`.
    pub fn oriented(
        center: Vec3,
        axis: Vec3,
        width_dir: Vec3,
        u: f64,
        w: f64,
        len: f64,
    ) -> Result<Prism> {
        let axis = axis
            .normalized()
            .ok_or_else(|| Error::Degenerate("zero prism axis".into()))?;
        let ew = (width_dir - axis * width_dir.dot(axis))
            .normalized()
            .unwrap_or_else(|| axis.any_orthogonal());
        let eu = axis.cross(ew);
        Prism::new(center, [u, w, len], [eu, ew, axis])
    }

    /// Axis-aligned cube.
    pub fn axis_aligned_cube(center: Vec3, side: f64) -> Result<Prism> {
        Prism::new(
            center,
            [side; 3],
            [
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
            ],
        )
    }

    #[inline]
    pub fn center(&self) -> Vec3 {
        self.center
    }

    #[inline]
    pub fn half_extents(&self) -> [f64; 3] {
        self.half
    }

    pub fn extents(&self) -> [f64; 3] {
        self.half.map(|h| 2.0 * h)
    }

    #[inline]
    pub fn frame(&self) -> &[Vec3; 3] {
        &self.frame
    }

    pub fn volume(&self) -> f64 {
        8.0 * self.half[0] * self.half[1] * self.half[2]
    }

    /// Homothetic copy about the centre.
    pub fn scaled(&self, factor: f64) -> Result<Prism> {
        if !(factor > 0.0) {
            return Err(Error::InvalidParameter(format!("scale factor {factor}")));
        }
        Ok(Prism {
            half: self.half.map(|h| h * factor),
            ..*self
        })
    }

    /// Coordinates of `x` in the box frame, relative to the centre.
    #[inline]
    pub fn local(&self, x: Vec3) -> Vec3 {
        let r = x - self.center;
        Vec3::new(r.dot(self.frame[0]), r.dot(self.frame[1]), r.dot(self.frame[2]))
    }

    #[inline]
    pub fn contains(&self, x: Vec3) -> bool {
        let l = self.local(x);
        (0..3).all(|k| l[k].abs() <= self.half[k] + 1e-12)
    }

    pub(crate) fn check_nondegenerate(&self) -> Result<()> {
        if self.half.iter().any(|&h| h <= 0.0) {
            Err(Error::Degenerate("box with a zero extent".into()))
        } else {
            Ok(())
        }
    }
}

/// The radius-`δ` neighbourhood of a segment (or of a whole line).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tube {
    axis: Line,
    radius: f64,
    length: Option<f64>,
}

impl Tube {
    /// A tube around the segment of `axis` of the given length centred at the
    /// axis base point; `None` means the full line.
    pub fn new(axis: Line, radius: f64, length: Option<f64>) -> Result<Tube> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!("tube radius {radius}")));
        }
        if let Some(len) = length {
            if !(len >= radius) || !len.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "tube length {len} below radius {radius}"
                )));
            }
        }
        Ok(Tube {
            axis,
            radius,
            length,
        })
    }

    #[inline]
    pub fn axis(&self) -> &Line {
        &self.axis
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    #[inline]
    pub fn length(&self) -> Option<f64> {
        self.length
    }

    pub fn contains(&self, x: Vec3) -> bool {
        if let Some(len) = self.length {
            let t = (x - self.axis.base()).dot(self.axis.dir());
            if t.abs() > 0.5 * len {
                return false;
            }
        }
        dist_to_line(x, &self.axis) <= self.radius
    }
}

/// The `a`-neighbourhood, in the sphere metric, of a great-circle arc of
/// length `b` centred at `center` and tangent to `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalRectangle {
    center: Vec3,
    axis: Vec3,
    length: f64,
    width: f64,
}

impl SphericalRectangle {
    pub fn new(center: Vec3, axis: Vec3, length: f64, width: f64) -> Result<SphericalRectangle> {
        let center = center
            .normalized()
            .ok_or_else(|| Error::Degenerate("zero rectangle centre".into()))?;
        let axis = (axis - center * axis.dot(center))
            .normalized()
            .ok_or_else(|| Error::Degenerate("rectangle axis parallel to its centre".into()))?;
        if !(width >= 0.0 && width <= length && length <= 2.0 * std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "spherical rectangle needs a ≤ b ≤ 2π, got a={width}, b={length}"
            )));
        }
        Ok(SphericalRectangle {
            center,
            axis,
            length,
            width,
        })
    }

    #[inline]
    pub fn center(&self) -> Vec3 {
        self.center
    }

    #[inline]
    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Point of the arc at signed arclength `s` from the centre.
    pub fn arc_point(&self, s: f64) -> Vec3 {
        self.center * s.cos() + self.axis * s.sin()
    }

    /// Geodesic distance from the unit vector `x` to the arc.
    pub fn distance_to_arc(&self, x: Vec3) -> f64 {
        let n = self.center.cross(self.axis);
        let phi = x.dot(self.axis).atan2(x.dot(self.center));
        let half = 0.5 * self.length;
        if phi.abs() <= half {
            x.dot(n).clamp(-1.0, 1.0).abs().asin()
        } else {
            let end = self.arc_point(half.copysign(phi));
            x.dot(end).clamp(-1.0, 1.0).acos()
        }
    }

    pub fn contains(&self, x: Vec3) -> bool {
        match x.normalized() {
            Some(u) => self.distance_to_arc(u) <= self.width,
            None => false,
        }
    }
}
