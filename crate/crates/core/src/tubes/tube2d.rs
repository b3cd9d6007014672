use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Prism, SphericalRectangle, Tube};
use crate::vec3::Vec3;

/// A planar `width × length` rectangle around a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tube2D {
    center: Vec3,
    dir: Vec3,
    width: f64,
    length: f64,
}

impl Tube2D {
    pub fn new(center: [f64; 2], dir: [f64; 2], width: f64, length: f64) -> Result<Tube2D> {
        let dir = Vec3::new(dir[0], dir[1], 0.0)
            .normalized()
            .ok_or_else(|| Error::Degenerate("zero tube direction".into()))?;
        if !(width > 0.0 && width <= length && length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tube needs 0 < width <= length, got {width} x {length}"
            )));
        }
        if !(center[0].is_finite() && center[1].is_finite()) {
            return Err(Error::InvalidParameter("non-finite tube centre".into()));
        }
        Ok(Tube2D {
            center: Vec3::new(center[0], center[1], 0.0),
            dir,
            width,
            length,
        })
    }

    #[inline]
    pub fn center(&self) -> Vec3 {
        self.center
    }

    #[inline]
    pub fn dir(&self) -> Vec3 {
        self.dir
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.width
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    /// `c·T`: same centre and axis, both sides scaled by `c`.
    pub fn scaled(&self, c: f64) -> Tube2D {
        Tube2D {
            width: self.width * c,
            length: self.length * c,
            ..*self
        }
    }

    /// Tube with the same axis, centred at axis parameter `s`.
    pub fn coaxial(&self, s: f64, width: f64, length: f64) -> Tube2D {
        Tube2D {
            center: self.center + self.dir * s,
            dir: self.dir,
            width,
            length,
        }
    }

    /// Signed axis parameter of `x` relative to the centre.
    #[inline]
    pub fn axis_param(&self, x: Vec3) -> f64 {
        (x - self.center).dot(self.dir)
    }

    #[inline]
    pub fn normal(&self) -> Vec3 {
        Vec3::new(-self.dir.y(), self.dir.x(), 0.0)
    }

    pub fn contains(&self, x: Vec3) -> bool {
        let r = x - self.center;
        r.dot(self.dir).abs() <= 0.5 * self.length && r.dot(self.normal()).abs() <= 0.5 * self.width
    }
}

/// A set that can be tested for membership.
pub trait Region {
    fn contains_point(&self, x: Vec3) -> bool;
}

impl Region for Tube2D {
    fn contains_point(&self, x: Vec3) -> bool {
        self.contains(x)
    }
}

impl Region for Tube {
    fn contains_point(&self, x: Vec3) -> bool {
        self.contains(x)
    }
}

impl Region for Prism {
    fn contains_point(&self, x: Vec3) -> bool {
        self.contains(x)
    }
}

impl Region for SphericalRectangle {
    fn contains_point(&self, x: Vec3) -> bool {
        self.contains(x)
    }
}

/// Indices of the net points lying in at least `r` of the sets.
pub fn rich_points<R: Region + Sync>(net: &[Vec3], sets: &[R], r: usize) -> Result<Vec<usize>> {
    if r == 0 {
        return Err(Error::InvalidParameter("richness threshold must be >= 1".into()));
    }
    if r > sets.len() {
        return Ok(Vec::new());
    }
    Ok(net
        .par_iter()
        .enumerate()
        .filter(|(_, &p)| {
            let mut c = 0;
            for s in sets {
                if s.contains_point(p) {
                    c += 1;
                    if c >= r {
                        return true;
                    }
                }
            }
            false
        })
        .map(|(i, _)| i)
        .collect())
}

/// A straight tube of finite length: a planar rectangle (`dim = 2`, the
/// half-width plays the radius) or a round tube in space.
pub trait SolidTube {
    fn dim(&self) -> usize;
    fn center(&self) -> Vec3;
    fn dir(&self) -> Vec3;
    fn radius(&self) -> f64;
    fn length(&self) -> f64;

    fn measure(&self) -> f64 {
        match self.dim() {
            2 => 2.0 * self.radius() * self.length(),
            _ => std::f64::consts::PI * self.radius().powi(2) * self.length(),
        }
    }
}

impl SolidTube for Tube2D {
    fn dim(&self) -> usize {
        2
    }
    fn center(&self) -> Vec3 {
        self.center
    }
    fn dir(&self) -> Vec3 {
        self.dir
    }
    fn radius(&self) -> f64 {
        0.5 * self.width
    }
    fn length(&self) -> f64 {
        self.length
    }
}

impl SolidTube for Tube {
    fn dim(&self) -> usize {
        3
    }
    fn center(&self) -> Vec3 {
        self.axis().base()
    }
    fn dir(&self) -> Vec3 {
        self.axis().dir()
    }
    fn radius(&self) -> f64 {
        Tube::radius(self)
    }
    fn length(&self) -> f64 {
        Tube::length(self).unwrap_or(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rich_point_trivia() {
        let t = Tube2D::new([0.5, 0.5], [1.0, 0.0], 0.1, 1.0).unwrap();
        let net: Vec<Vec3> = (0..11).map(|i| Vec3::new(i as f64 * 0.1, 0.52, 0.0)).collect();
        assert_eq!(rich_points(&net, &[t], 1).unwrap().len(), 11);
        assert!(rich_points(&net, &[t], 2).unwrap().is_empty());
        assert!(rich_points(&net, &[t], 0).is_err());
    }

    #[test]
    fn rich_points_match_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let tubes: Vec<Tube2D> = (0..60)
            .map(|_| {
                let a: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                Tube2D::new([rng.gen(), rng.gen()], [a.cos(), a.sin()], 0.05, 1.0).unwrap()
            })
            .collect();
        let net: Vec<Vec3> = (0..2000).map(|_| Vec3::new(rng.gen(), rng.gen(), 0.0)).collect();
        for r in [1, 3, 6] {
            let got = rich_points(&net, &tubes, r).unwrap();
            let want: Vec<usize> = (0..net.len())
                .filter(|&i| tubes.iter().filter(|t| t.contains(net[i])).count() >= r)
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn validation() {
        assert!(Tube2D::new([0.0, 0.0], [0.0, 0.0], 0.1, 1.0).is_err());
        assert!(Tube2D::new([0.0, 0.0], [1.0, 0.0], 2.0, 1.0).is_err());
    }
}
