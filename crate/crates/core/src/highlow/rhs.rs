use crate::conc::{
    dyadic_ladder, katz_tao_constant, lines_in_prism, m_lines, m_points,
};
use crate::error::{Error, Result};
use crate::geom::{direction_distance, farthest_point_net, Dim, Line, Point, Prism};
use crate::vec3::Vec3;

use super::incidence::{check_family, normalized_b};

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0,1), got {delta}")));
    }
    Ok(())
}

fn family(points: &[Point], lines: &[Line]) -> Result<Dim> {
    if points.is_empty() || lines.is_empty() {
        return Err(Error::EmptyConfiguration("high-low needs points and lines".into()));
    }
    check_family(points, lines)
}

/// `|θ(L)|_w`, greedy covering number of the directions.
pub fn direction_cover(lines: &[Line], w: f64) -> Result<usize> {
    if !(w > 0.0) {
        return Err(Error::InvalidParameter(format!("covering scale must be > 0, got {w}")));
    }
    Ok(farthest_point_net(lines.len(), w, |a, b| direction_distance(lines[a].dir(), lines[b].dir())).count(w))
}

/// Basic right-hand side and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicRhs {
    pub value: f64,
    pub m_points: usize,
    pub m_lines: usize,
    /// `3(d−1) + ε`, the power of `1/δ`.
    pub exponent: f64,
}

/// `δ^{-3(d−1)−ε} · M_P(δ)/|P| · M_L(δ×…×δ×1)/|L|`.
pub fn rhs_basic(delta: f64, points: &[Point], lines: &[Line], eps: f64) -> Result<BasicRhs> {
    check_delta(delta)?;
    let dim = family(points, lines)?;
    let mp = m_points(points, delta)?;
    let ml = m_lines(lines, delta, delta)?;
    let exponent = 3.0 * (dim.get() as f64 - 1.0) + eps;
    Ok(BasicRhs {
        value: delta.powf(-exponent) * mp as f64 / points.len() as f64 * ml as f64 / lines.len() as f64,
        m_points: mp,
        m_lines: ml,
        exponent,
    })
}

/// Refined right-hand side with the maximizing `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedRhs {
    pub value: f64,
    pub u_star: f64,
    pub theta_cover: usize,
    /// `(u, min{|θ|^{1/2}δ, u}·u·M_L(δ×δ/u×1)/|L|)` for each dyadic `u`.
    pub terms: Vec<(f64, f64)>,
}

/// `δ^{-3(d−1)−ε} M_P(δ)/|P| · max_u min{|θ(L)|_δ^{1/2} δ, u}·u·M_L(δ×δ/u×1)/|L|`
/// over dyadic `u ∈ (δ, 1]`. In the plane the box is `δ×1` for every `u`.
pub fn rhs_refined(delta: f64, points: &[Point], lines: &[Line], eps: f64) -> Result<RefinedRhs> {
    check_delta(delta)?;
    let dim = family(points, lines)?;
    let mp = m_points(points, delta)?;
    let theta = direction_cover(lines, delta)?;
    let cap = (theta as f64).sqrt() * delta;
    let mut terms = Vec::new();
    for u in dyadic_ladder(1.0, delta) {
        if u <= delta * (1.0 + 1e-9) {
            continue;
        }
        let ml = m_lines(lines, delta, delta / u)?;
        terms.push((u, cap.min(u) * u * ml as f64 / lines.len() as f64));
    }
    let (u_star, best) = terms
        .iter()
        .copied()
        .fold((1.0, f64::NEG_INFINITY), |acc, t| if t.1 > acc.1 { t } else { acc });
    let exponent = 3.0 * (dim.get() as f64 - 1.0) + eps;
    Ok(RefinedRhs {
        value: delta.powf(-exponent) * mp as f64 / points.len() as f64 * best.max(0.0),
        u_star,
        theta_cover: theta,
        terms,
    })
}

/// `ν^{κ/4} δ^{-3(d−1)−ε} M_P(δ)/|P| · M/|L|`, after checking
/// `|θ(L)|_δ ≤ νδ^{-2}` and `M_L(δ×δ/u×1) ≤ u^{-2+κ}M` on dyadic `u ∈ (δ,1]`.
#[allow(clippy::too_many_arguments)]
pub fn rhs_few_directions(
    delta: f64,
    points: &[Point],
    lines: &[Line],
    nu: f64,
    kappa: f64,
    m: f64,
    eps: f64,
) -> Result<f64> {
    check_delta(delta)?;
    let dim = family(points, lines)?;
    if !(nu > 0.0) || !(0.0..=1.0).contains(&kappa) || !(m >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need ν > 0, κ ∈ [0,1], M ≥ 1; got {nu}, {kappa}, {m}"
        )));
    }
    let mut problems = Vec::new();
    let theta = direction_cover(lines, delta)?;
    if theta as f64 > nu * delta.powi(-2) * (1.0 + 1e-12) {
        problems.push(format!("|θ(L)|_δ = {theta} exceeds νδ^-2 = {}", nu * delta.powi(-2)));
    }
    let mut bad_u = Vec::new();
    for u in dyadic_ladder(1.0, delta) {
        if u <= delta * (1.0 + 1e-9) {
            continue;
        }
        let ml = m_lines(lines, delta, delta / u)? as f64;
        if ml > u.powf(-2.0 + kappa) * m * (1.0 + 1e-12) {
            bad_u.push(u);
        }
    }
    if !bad_u.is_empty() {
        problems.push(format!("M_L(δ×δ/u×1) > u^(-2+κ)·M at u = {bad_u:?}"));
    }
    if !problems.is_empty() {
        return Err(Error::Hypothesis(problems.join("; ")));
    }
    let mp = m_points(points, delta)?;
    let exponent = 3.0 * (dim.get() as f64 - 1.0) + eps;
    Ok(nu.powf(kappa / 4.0) * delta.powf(-exponent) * mp as f64 / points.len() as f64 * m
        / lines.len() as f64)
}

/// `(t₁ + 2) / (2t₁ + 2t₂)`.
pub fn wellspaced_alpha(t1: f64, t2: f64) -> f64 {
    (t1 + 2.0) / (2.0 * t1 + 2.0 * t2)
}

/// The 9/2-power right-hand side with the measured left-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSpacedRhs {
    pub value: f64,
    pub alpha: f64,
    /// `|B(δ/2) − B(δ)|^{9/2}`.
    pub lhs: f64,
    pub m_lines_coarse: usize,
    pub m_lines_fine: usize,
    pub katz_tao_constant: f64,
}

/// Hypothesis thresholds of the well-spaced estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSpacedParams {
    pub t1: f64,
    pub t2: f64,
    pub k: f64,
    pub a: f64,
    pub c0: f64,
    pub eps: f64,
}

/// `C₀ δ^{-ε} δ^{-5/2} K^α A^{7/2} M_L(δ^{1/2}×δ^{1/2}×1)^{1−α} M_L(δ×δ×1)^α / |L|`
/// in space, after checking `M_P(δ) ≤ Aδ³|P|`, `C₀`-uniformity of `L` at
/// scale `δ`, and the `(t₁, t₂, K)` Katz–Tao bound.
pub fn rhs_wellspaced(
    delta: f64,
    points: &[Point],
    lines: &[Line],
    params: WellSpacedParams,
) -> Result<WellSpacedRhs> {
    check_delta(delta)?;
    let dim = family(points, lines)?;
    if dim != Dim::Three {
        return Err(Error::UnsupportedDimension(dim.get()));
    }
    let WellSpacedParams { t1, t2, k, a, c0, eps } = params;
    if !(t1 > 0.0 && t2 > 0.0 && k > 0.0 && a >= 1.0 && c0 >= 1.0) {
        return Err(Error::InvalidParameter("need t₁, t₂, K > 0 and A, C₀ ≥ 1".into()));
    }
    let mut problems = Vec::new();
    let mp = m_points(points, delta)?;
    if mp as f64 > a * delta.powi(3) * points.len() as f64 * (1.0 + 1e-12) {
        problems.push(format!("M_P(δ) = {mp} exceeds Aδ³|P|"));
    }
    let fine = m_lines(lines, delta, delta)?;
    let thin = lines_around(lines, delta)?;
    if let Some((i, c)) = thin.iter().copied().enumerate().find(|&(_, c)| (c as f64) * c0 < fine as f64) {
        problems.push(format!("line {i} has {c} neighbours, below M_L(δ×δ×1)/C₀ = {}", fine as f64 / c0));
    }
    let kt = katz_tao_constant(lines, delta, t1, t2, dim)?;
    if kt > k * (1.0 + 1e-12) {
        problems.push(format!("Katz–Tao constant {kt} exceeds K = {k}"));
    }
    if !problems.is_empty() {
        return Err(Error::Hypothesis(problems.join("; ")));
    }
    let alpha = wellspaced_alpha(t1, t2);
    let s = delta.sqrt();
    let coarse = m_lines(lines, s, s)?;
    let value = c0
        * delta.powf(-eps - 2.5)
        * k.powf(alpha)
        * a.powf(3.5)
        * (coarse as f64).powf(1.0 - alpha)
        * (fine as f64).powf(alpha)
        / lines.len() as f64;
    let b1 = normalized_b(delta, points, lines)?;
    let b2 = normalized_b(0.5 * delta, points, lines)?;
    Ok(WellSpacedRhs {
        value,
        alpha,
        lhs: (b2 - b1).abs().powf(4.5),
        m_lines_coarse: coarse,
        m_lines_fine: fine,
        katz_tao_constant: kt,
    })
}

/// For each line, the number of lines in the `δ×δ×1` box along it, centred
/// at its point nearest the centre of the unit cube.
pub fn lines_around(lines: &[Line], delta: f64) -> Result<Vec<usize>> {
    use rayon::prelude::*;
    let Some(first) = lines.first() else {
        return Ok(Vec::new());
    };
    let dim = first.dim();
    lines
        .par_iter()
        .map(|l| {
            let prism = match dim {
                Dim::Two => {
                    let c = l.project(Vec3::new(0.5, 0.5, 0.0));
                    Prism::oriented(c, l.dir(), Vec3::new(0.0, 0.0, 1.0), delta, 1.0, 1.0)?
                }
                Dim::Three => Prism::aligned(l.project(Vec3::new(0.5, 0.5, 0.5)), l.dir(), delta, delta, 1.0)?,
            };
            Ok(lines_in_prism(lines, &prism))
        })
        .collect()
}
