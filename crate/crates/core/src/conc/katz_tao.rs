use crate::config::{min_config_distance, slab_restriction, PointLineConfiguration};
use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::geom::{Dim, Line};

use super::boxes::{m_lines_witness, m_segments_witness, BoxSearch, Segment};
use super::dyadic_ladder;

/// One `(u, w)` cell of a Katz–Tao regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatzTaoCell {
    pub u: f64,
    pub w: f64,
    pub count: usize,
    /// `ln M − fitted ln M`.
    pub residual: f64,
}

/// Fitted model `M_L(u×w×1) ≈ C (u/δ)^{t₁} (w/δ)^{t₂}`. In the plane only
/// `t₁` is fitted and `t₂ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KatzTaoFit {
    pub dim: Dim,
    pub t1: f64,
    pub t2: f64,
    /// `exp` of the regression intercept.
    pub fitted_constant: f64,
    /// Smallest `C` for which the fitted exponents bound every cell.
    pub constant: f64,
    pub cells: Vec<KatzTaoCell>,
}

impl KatzTaoFit {
    pub fn max_abs_residual(&self) -> f64 {
        self.cells.iter().fold(0.0, |a, c| a.max(c.residual.abs()))
    }
}

fn box_cells(delta: f64, dim: Dim) -> Vec<(f64, f64)> {
    let ladder = dyadic_ladder(1.0, delta);
    match dim {
        Dim::Two => ladder.iter().map(|&u| (u, 1.0)).collect(),
        Dim::Three => ladder
            .iter()
            .flat_map(|&w| ladder.iter().filter(move |&&u| u <= w).map(move |&u| (u, w)))
            .collect(),
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0,1), got {delta}")));
    }
    Ok(())
}

fn check_lines(lines: &[Line], dim: Dim) -> Result<()> {
    for l in lines {
        dim.check(l.dim())?;
    }
    Ok(())
}

fn cell_counts(segs: &[Segment], dim: Dim, delta: f64) -> Result<Vec<KatzTaoCell>> {
    box_cells(delta, dim)
        .into_iter()
        .map(|(u, w)| {
            let count = m_segments_witness(segs, dim, u, w, BoxSearch::default())?.map_or(0, |h| h.count);
            Ok(KatzTaoCell { u, w, count, residual: 0.0 })
        })
        .collect()
}

/// Least-squares fit of `ln M_L(u×w×1)` against `ln(u/δ)`, `ln(w/δ)` over
/// the dyadic cells `δ ≤ u ≤ w ≤ 1`.
pub fn katz_tao_fit(lines: &[Line], delta: f64, dim: Dim) -> Result<KatzTaoFit> {
    check_lines(lines, dim)?;
    let segs: Vec<Segment> = lines.iter().map(Segment::line).collect();
    katz_tao_fit_segments(&segs, delta, dim)
}

/// `katz_tao_fit` for finite tubes given by their axis segments.
pub fn katz_tao_fit_segments(segs: &[Segment], delta: f64, dim: Dim) -> Result<KatzTaoFit> {
    check_delta(delta)?;
    let mut cells: Vec<KatzTaoCell> = cell_counts(segs, dim, delta)?
        .into_iter()
        .filter(|c| c.count > 0)
        .collect();
    if cells.len() < 4 {
        return Err(Error::Degenerate(format!(
            "only {} populated cells, need 4",
            cells.len()
        )));
    }
    let ys: Vec<f64> = cells.iter().map(|c| (c.count as f64).ln()).collect();
    let xs: Vec<Vec<f64>> = cells
        .iter()
        .map(|c| match dim {
            Dim::Two => vec![(c.u / delta).ln()],
            Dim::Three => vec![(c.u / delta).ln(), (c.w / delta).ln()],
        })
        .collect();
    let f = least_squares(&xs, &ys)?;
    let t1 = f.coefficients[1];
    let t2 = if dim == Dim::Three { f.coefficients[2] } else { 0.0 };
    for (c, r) in cells.iter_mut().zip(&f.residuals) {
        c.residual = *r;
    }
    let constant = envelope(&cells, delta, t1, t2);
    Ok(KatzTaoFit {
        dim,
        t1,
        t2,
        fitted_constant: f.intercept().exp(),
        constant,
        cells,
    })
}

fn envelope(cells: &[KatzTaoCell], delta: f64, t1: f64, t2: f64) -> f64 {
    cells
        .iter()
        .map(|c| c.count as f64 / ((c.u / delta).powf(t1) * (c.w / delta).powf(t2)))
        .fold(0.0, f64::max)
}

/// Smallest `C` such that every dyadic box satisfies
/// `M_L(u×w×1) ≤ C (u/δ)^{t₁} (w/δ)^{t₂}` (planar: `t₂` unused).
pub fn katz_tao_constant(lines: &[Line], delta: f64, t1: f64, t2: f64, dim: Dim) -> Result<f64> {
    check_lines(lines, dim)?;
    let segs: Vec<Segment> = lines.iter().map(Segment::line).collect();
    katz_tao_constant_segments(&segs, delta, t1, t2, dim)
}

/// `katz_tao_constant` for finite tubes given by their axis segments.
pub fn katz_tao_constant_segments(segs: &[Segment], delta: f64, t1: f64, t2: f64, dim: Dim) -> Result<f64> {
    check_delta(delta)?;
    let t2 = if dim == Dim::Two { 0.0 } else { t2 };
    Ok(envelope(&cell_counts(segs, dim, delta)?, delta, t1, t2))
}

/// One `(u, w)` cell of the plane-reduction report.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneReductionRow {
    pub u: f64,
    pub w: f64,
    pub measured: usize,
    /// `δ^{-3} u^{1+γ} w^{2−γ}`.
    pub bound: f64,
    /// Size of the planar configuration obtained from the witness box.
    pub restricted: usize,
    /// `(u/w)^{-2+γ}`.
    pub restricted_reference: f64,
}

impl PlaneReductionRow {
    pub fn ratio(&self) -> f64 {
        self.measured as f64 / self.bound
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneReductionReport {
    pub delta: f64,
    pub gamma: f64,
    /// Measured `d(X)`; the bound is only claimed when it is `≥ δ`.
    pub separation: f64,
    pub separation_ok: bool,
    pub rows: Vec<PlaneReductionRow>,
    /// Largest `measured / bound`.
    pub constant: f64,
}

/// Measured `M_{L[X]}(u×w×1)` against `δ^{-3} u^{1+γ} w^{2−γ}` on dyadic
/// cells with `uw ≥ δ`, plus the collapsed planar configuration of each
/// witness box.
pub fn plane_reduction_check(
    x: &PointLineConfiguration,
    delta: f64,
    gamma: f64,
) -> Result<PlaneReductionReport> {
    check_delta(delta)?;
    if x.dim() != Dim::Three {
        return Err(Error::UnsupportedDimension(x.dim().get()));
    }
    let separation = min_config_distance(x)?;
    let lines = x.lines();
    let mut rows = Vec::new();
    for (u, w) in box_cells(delta, Dim::Three) {
        if u * w < delta * (1.0 - 1e-9) {
            continue;
        }
        let hit = m_lines_witness(&lines, u, w, BoxSearch::default())?;
        let (measured, restricted) = match hit {
            Some(h) if u < w || u < 1.0 => {
                let r = match slab_restriction(x, &h.prism) {
                    Ok(c) => c.len(),
                    Err(Error::EmptyConfiguration(_)) => 0,
                    Err(e) => return Err(e),
                };
                (h.count, r)
            }
            Some(h) => (h.count, 0),
            None => (0, 0),
        };
        rows.push(PlaneReductionRow {
            u,
            w,
            measured,
            bound: delta.powi(-3) * u.powf(1.0 + gamma) * w.powf(2.0 - gamma),
            restricted,
            restricted_reference: (u / w).powf(-2.0 + gamma),
        });
    }
    let constant = rows.iter().map(|r| r.ratio()).fold(0.0, f64::max);
    Ok(PlaneReductionReport {
        delta,
        gamma,
        separation,
        separation_ok: separation >= delta * (1.0 - 1e-12),
        rows,
        constant,
    })
}
