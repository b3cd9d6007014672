use rayon::prelude::*;

use crate::config::PointLineConfiguration;
use crate::error::{Error, Result};
use crate::geom::metric::raw_line_distance;
use crate::geom::{direction_distance, Line, Point};

/// Which concentration number a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Points,
    LinesInBox,
    Full,
}

/// Scales and mode of a concentration evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationQuery {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub mode: Mode,
}

impl ConcentrationQuery {
    pub fn new(u: f64, v: f64, w: f64, mode: Mode) -> Result<ConcentrationQuery> {
        for (name, s) in [("u", u), ("v", v), ("w", w)] {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::InvalidParameter(format!("scale {name}={s} outside (0,1]")));
            }
        }
        if mode == Mode::LinesInBox && u > w {
            return Err(Error::InvalidParameter(format!("box needs u <= w, got {u} > {w}")));
        }
        Ok(ConcentrationQuery { u, v, w, mode })
    }
}

/// Precomputed member data for repeated `M_X` evaluations.
///
/// A scale `>= 1` puts no constraint on its coordinate, so the unit triple
/// counts the whole configuration.
#[derive(Debug, Clone)]
pub struct ConfigIndex {
    points: Vec<Point>,
    lines: Vec<Line>,
}

impl ConfigIndex {
    pub fn new(x: &PointLineConfiguration) -> ConfigIndex {
        ConfigIndex {
            points: x.points(),
            lines: x.lines(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether member `y` lies in the `(u, v, w)` neighbourhood of member `x`.
    #[inline]
    pub fn within(&self, x: usize, y: usize, u: f64, v: f64, w: f64) -> bool {
        if u < 1.0 && self.points[x].dist(&self.points[y]) > u {
            return false;
        }
        let dd = direction_distance(self.lines[x].dir(), self.lines[y].dir());
        if v < 1.0 && dd > v {
            return false;
        }
        if w < 1.0 && dd + raw_line_distance(&self.lines[x], &self.lines[y]) > w {
            return false;
        }
        true
    }

    /// Local count around member `x`.
    pub fn count_at(&self, x: usize, u: f64, v: f64, w: f64) -> usize {
        (0..self.len()).filter(|&y| self.within(x, y, u, v, w)).count()
    }

    /// Maximum local count over the given anchors.
    pub fn max_at(&self, anchors: &[usize], u: f64, v: f64, w: f64) -> usize {
        anchors
            .par_iter()
            .map(|&a| self.count_at(a, u, v, w))
            .max()
            .unwrap_or(0)
    }
}

fn check_scales(u: f64, v: f64, w: f64) -> Result<()> {
    for (name, s) in [("u", u), ("v", v), ("w", w)] {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("scale {name}={s} must be positive")));
        }
    }
    Ok(())
}

/// `M_X(u, v, w)` maximized over anchors taken from `X`.
pub fn m_config(x: &PointLineConfiguration, u: f64, v: f64, w: f64) -> Result<usize> {
    check_scales(u, v, w)?;
    let idx = ConfigIndex::new(x);
    let all: Vec<usize> = (0..idx.len()).collect();
    Ok(idx.max_at(&all, u, v, w))
}

/// `M_X(u, v, w)` restricted to the listed anchors.
pub fn m_config_at(
    x: &PointLineConfiguration,
    anchors: &[usize],
    u: f64,
    v: f64,
    w: f64,
) -> Result<usize> {
    check_scales(u, v, w)?;
    if let Some(&a) = anchors.iter().find(|&&a| a >= x.len()) {
        return Err(Error::InvalidParameter(format!("anchor {a} out of range")));
    }
    Ok(ConfigIndex::new(x).max_at(anchors, u, v, w))
}
