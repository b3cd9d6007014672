use crate::conc::{katz_tao_constant_segments, Segment};
use crate::error::{Error, Result};
use crate::geom::{Dim, Tube};

use super::shading::Shading;
use super::tube2d::{SolidTube, Tube2D};
use super::volume::shading_union_volume;

/// Measured union volume against a brush lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BrushReport {
    pub measured: f64,
    pub bound: f64,
    /// Smallest shading density.
    pub lambda: f64,
    /// Measured Katz–Tao constant of the family.
    pub katz_tao_measured: f64,
    /// Power of `|𝕋|` in the bound.
    pub exponent: f64,
    /// `bound / measured`: the constant needed for the inequality.
    pub constant: f64,
    pub max_constant: f64,
}

impl BrushReport {
    pub fn holds(&self) -> bool {
        self.constant <= self.max_constant
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarBrushParams {
    pub delta: f64,
    pub t: f64,
    pub k: f64,
    pub eps: f64,
    /// Width scale for the `δ^t u^{1−t}` variant.
    pub u: Option<f64>,
    /// Grid side; `None` means `δ/8`.
    pub resolution: Option<f64>,
    pub max_constant: f64,
}

impl PlanarBrushParams {
    pub fn new(delta: f64, t: f64, k: f64) -> Self {
        PlanarBrushParams {
            delta,
            t,
            k,
            eps: 0.1,
            u: None,
            resolution: None,
            max_constant: 1e3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceBrushParams {
    pub delta: f64,
    pub t1: f64,
    pub t2: f64,
    pub k: f64,
    pub eps: f64,
    /// Grid side; `None` means `δ/4`.
    pub resolution: Option<f64>,
    pub max_constant: f64,
}

impl SpaceBrushParams {
    pub fn new(delta: f64, t1: f64, t2: f64, k: f64) -> Self {
        SpaceBrushParams {
            delta,
            t1,
            t2,
            k,
            eps: 0.1,
            resolution: None,
            max_constant: 1e3,
        }
    }

    /// `(2 + t₁) / (2t₁ + 2t₂)`.
    pub fn exponent(&self) -> f64 {
        (2.0 + self.t1) / (2.0 * self.t1 + 2.0 * self.t2)
    }
}

fn axis_segments<T: SolidTube>(tubes: &[T]) -> Vec<Segment> {
    tubes
        .iter()
        .map(|t| Segment {
            base: t.center(),
            dir: t.dir(),
            lo: -0.5 * t.length(),
            hi: 0.5 * t.length(),
        })
        .collect()
}

fn hypotheses<T: SolidTube>(
    tubes: &[T],
    y: &Shading,
    delta: f64,
    dim: Dim,
    t1: f64,
    t2: f64,
    k: f64,
) -> Result<(f64, f64)> {
    if tubes.is_empty() {
        return Err(Error::EmptyConfiguration("no tubes".into()));
    }
    if !(delta > 0.0 && delta < 1.0) || !(k >= 1.0) {
        return Err(Error::InvalidParameter(format!("δ={delta}, K={k}")));
    }
    let lambda = y.min_density();
    if lambda < delta {
        return Err(Error::Hypothesis(format!("shading density {lambda} below δ={delta}")));
    }
    let kt = katz_tao_constant_segments(&axis_segments(tubes), delta, t1, t2, dim)?;
    if kt > k * (1.0 + 1e-9) {
        return Err(Error::Hypothesis(format!(
            "Katz–Tao constant {kt} exceeds K={k} at exponents ({t1}, {t2})"
        )));
    }
    Ok((lambda, kt))
}

/// `|∪Y(T)| ≳ δ^ε K^{-1} λ² δ^t |𝕋|` (times `u^{1−t}` when `u` is set).
pub fn check_planar_brush(tubes: &[Tube2D], y: &Shading, p: &PlanarBrushParams) -> Result<BrushReport> {
    let (lambda, kt) = hypotheses(tubes, y, p.delta, Dim::Two, p.t, 0.0, p.k)?;
    let h = p.resolution.unwrap_or(p.delta / 8.0);
    let measured = shading_union_volume(tubes, y, h)?;
    let mut bound = p.delta.powf(p.eps) / p.k * lambda * lambda * p.delta.powf(p.t) * tubes.len() as f64;
    if let Some(u) = p.u {
        bound *= u.powf(1.0 - p.t);
    }
    Ok(report(measured, bound, lambda, kt, 1.0, p.max_constant))
}

/// `|∪Y(T)| ≳ δ^ε K^{-e} λ^{5/2} δ² |𝕋|^e` with `e = (2+t₁)/(2t₁+2t₂)`.
pub fn check_space_brush(tubes: &[Tube], y: &Shading, p: &SpaceBrushParams) -> Result<BrushReport> {
    let (lambda, kt) = hypotheses(tubes, y, p.delta, Dim::Three, p.t1, p.t2, p.k)?;
    let h = p.resolution.unwrap_or(p.delta / 4.0);
    let measured = shading_union_volume(tubes, y, h)?;
    let e = p.exponent();
    let bound = p.delta.powf(p.eps) * p.k.powf(-e) * lambda.powf(2.5) * p.delta * p.delta * (tubes.len() as f64).powf(e);
    Ok(report(measured, bound, lambda, kt, e, p.max_constant))
}

fn report(measured: f64, bound: f64, lambda: f64, kt: f64, exponent: f64, max_constant: f64) -> BrushReport {
    BrushReport {
        measured,
        bound,
        lambda,
        katz_tao_measured: kt,
        exponent,
        constant: if measured > 0.0 { bound / measured } else { f64::INFINITY },
        max_constant,
    }
}
