use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geom::{point_line_distance, Dim, Line, Point};
use crate::vec3::Vec3;

/// Largest point-to-line offset that is silently snapped away.
pub const SNAP_TOL: f64 = 1e-9;

/// A point together with a line through it.
///
/// The line is stored with its base at the point, so incidence is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLinePair {
    p: Point,
    line: Line,
}

impl PointLinePair {
    /// Pairs `p` with `line`, projecting `p` onto the line. Offsets above
    /// `SNAP_TOL` are rejected.
    pub fn new(p: Point, line: Line) -> Result<PointLinePair> {
        let off = point_line_distance(&p, &line)?;
        if off > SNAP_TOL {
            return Err(Error::InvalidParameter(format!(
                "point is {off:e} away from its line"
            )));
        }
        let line = line.rebased_at(p.vec());
        Ok(PointLinePair {
            p: line.base_point(),
            line,
        })
    }

    /// The pair `(p, p + R·dir)`.
    pub fn from_dir(p: Point, dir: Vec3) -> Result<PointLinePair> {
        let line = Line::new(p, dir)?;
        Ok(PointLinePair { p, line })
    }

    #[inline]
    pub fn point(&self) -> &Point {
        &self.p
    }

    #[inline]
    pub fn line(&self) -> &Line {
        &self.line
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.p.dim()
    }

    fn key(&self) -> [u64; 6] {
        let p = self.p.vec().0;
        let v = self.line.dir().0;
        [
            p[0].to_bits(),
            p[1].to_bits(),
            p[2].to_bits(),
            v[0].to_bits(),
            v[1].to_bits(),
            v[2].to_bits(),
        ]
    }
}

/// Generator name and seed that produced a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
}

/// A finite set of point-line pairs inside the unit cube.
#[derive(Debug, Clone, PartialEq)]
pub struct PointLineConfiguration {
    dim: Dim,
    pairs: Vec<PointLinePair>,
    provenance: Option<Provenance>,
}

/// Coordinate slack for the unit-cube range check.
const RANGE_TOL: f64 = 1e-9;

impl PointLineConfiguration {
    pub fn new(dim: Dim, pairs: Vec<PointLinePair>) -> Result<PointLineConfiguration> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for (i, pr) in pairs.iter().enumerate() {
            dim.check(pr.dim())?;
            if !pr.p.in_unit_cube(RANGE_TOL) {
                return Err(Error::InvalidParameter(format!(
                    "pair {i}: point {:?} outside the unit cube",
                    pr.p.coords()
                )));
            }
            if !seen.insert(pr.key()) {
                return Err(Error::InvalidParameter(format!("pair {i} is a duplicate")));
            }
        }
        Ok(PointLineConfiguration {
            dim,
            pairs,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, generator: &str, seed: u64) -> Self {
        self.provenance = Some(Provenance {
            generator: generator.to_string(),
            seed,
        });
        self
    }

    /// Builds a configuration, dropping exact duplicate pairs.
    pub(crate) fn dedup(dim: Dim, pairs: Vec<PointLinePair>) -> Result<PointLineConfiguration> {
        let mut seen = HashSet::with_capacity(pairs.len());
        let pairs = pairs.into_iter().filter(|p| seen.insert(p.key())).collect();
        PointLineConfiguration::new(dim, pairs)
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    #[inline]
    pub fn pairs(&self) -> &[PointLinePair] {
        &self.pairs
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// `P[X]`.
    pub fn points(&self) -> Vec<Point> {
        self.pairs.iter().map(|p| p.p).collect()
    }

    /// `L[X]`.
    pub fn lines(&self) -> Vec<Line> {
        self.pairs.iter().map(|p| p.line).collect()
    }

    /// `θ[X]`, one canonical unit vector per pair.
    pub fn directions(&self) -> Vec<Vec3> {
        self.pairs.iter().map(|p| p.line.dir()).collect()
    }

    /// Sub-configuration on the given indices.
    pub fn subset(&self, idx: &[usize]) -> PointLineConfiguration {
        PointLineConfiguration {
            dim: self.dim,
            pairs: idx.iter().map(|&i| self.pairs[i]).collect(),
            provenance: self.provenance.clone(),
        }
    }
}
