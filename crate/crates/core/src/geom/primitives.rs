use std::fmt;

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Ambient dimension of a geometric object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn from_usize(d: usize) -> Result<Dim> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub(crate) fn check(self, other: Dim) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.get(),
                got: other.get(),
            })
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// A point of R² or R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    v: Vec3,
    dim: Dim,
}

impl Point {
    /// Builds a point from its coordinates; the slice length fixes the dimension.
    pub fn new(coords: &[f64]) -> Result<Point> {
        let dim = Dim::from_usize(coords.len())?;
        let mut v = [0.0; 3];
        v[..coords.len()].copy_from_slice(coords);
        let p = Point { v: Vec3(v), dim };
        if !p.v.is_finite() {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        Ok(p)
    }

    #[inline]
    pub fn xy(x: f64, y: f64) -> Point {
        Point {
            v: Vec3::new(x, y, 0.0),
            dim: Dim::Two,
        }
    }

    #[inline]
    pub fn xyz(x: f64, y: f64, z: f64) -> Point {
        Point {
            v: Vec3::new(x, y, z),
            dim: Dim::Three,
        }
    }

    /// Embeds a vector; in two dimensions the `z` component is dropped.
    #[inline]
    pub fn from_vec(v: Vec3, dim: Dim) -> Point {
        let v = match dim {
            Dim::Two => Vec3::new(v.x(), v.y(), 0.0),
            Dim::Three => v,
        };
        Point { v, dim }
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn vec(&self) -> Vec3 {
        self.v
    }

    pub fn coords(&self) -> &[f64] {
        &self.v.0[..self.dim.get()]
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.v.dist(other.v)
    }

    /// True when every coordinate lies in `[-tol, 1 + tol]`.
    pub fn in_unit_cube(&self, tol: f64) -> bool {
        self.coords().iter().all(|&c| c >= -tol && c <= 1.0 + tol)
    }
}

/// An infinite line stored as a base point and a unit direction.
///
/// The direction is sign-normalised so that its first non-zero coordinate is
/// positive; two lines with opposite direction vectors therefore compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    base: Vec3,
    dir: Vec3,
    dim: Dim,
}

impl Line {
    pub fn new(base: Point, dir: Vec3) -> Result<Line> {
        let dir = match base.dim {
            Dim::Two => {
                if dir.z() != 0.0 {
                    return Err(Error::DimensionMismatch {
                        expected: 2,
                        got: 3,
                    });
                }
                dir
            }
            Dim::Three => dir,
        };
        // Already-unit directions are kept bit-for-bit so that rebuilding a
        // line from its own direction is the identity.
        let dir = if (dir.norm_sq() - 1.0).abs() <= 4.0 * f64::EPSILON {
            dir
        } else {
            dir.normalized()
                .ok_or_else(|| Error::Degenerate("zero line direction".into()))?
        };
        Ok(Line {
            base: base.vec(),
            dir: canonical_sign(dir),
            dim: base.dim,
        })
    }

    /// The line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Result<Line> {
        p.dim.check(q.dim)?;
        Line::new(*p, q.vec() - p.vec())
    }

    #[inline]
    pub fn base(&self) -> Vec3 {
        self.base
    }

    #[inline]
    pub fn base_point(&self) -> Point {
        Point::from_vec(self.base, self.dim)
    }

    #[inline]
    pub fn dir(&self) -> Vec3 {
        self.dir
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn at(&self, t: f64) -> Vec3 {
        self.base + self.dir * t
    }

    /// Orthogonal projection of `x` onto the line.
    #[inline]
    pub fn project(&self, x: Vec3) -> Vec3 {
        self.at((x - self.base).dot(self.dir))
    }

    /// The same line with its base moved to the foot of `x`.
    pub fn rebased_at(&self, x: Vec3) -> Line {
        Line {
            base: self.project(x),
            ..*self
        }
    }

    pub(crate) fn from_parts(base: Vec3, dir: Vec3, dim: Dim) -> Line {
        Line { base, dir, dim }
    }
}

/// Flips `v` so that its first non-zero coordinate is positive.
pub(crate) fn canonical_sign(v: Vec3) -> Vec3 {
    for c in v.0 {
        if c != 0.0 {
            return if c < 0.0 { -v } else { v };
        }
    }
    v
}
