use crate::config::{min_config_distance_witness, PointLineConfiguration, PointLinePair};
use crate::error::Result;
use crate::geom::{Dim, Line, Point};

use super::brute::triangle_area;
use super::pairs::greedy_close_pairs;
use super::{check_points, TriangleWitness};

/// Summary of a [`triangle_via_pointline`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    /// Number of extracted pairs.
    pub m: usize,
    /// `δ = min_{i≠j} d(p_i, ℓ_j)` over the pair lines.
    pub delta: f64,
    /// Longest extracted pair.
    pub max_pair_length: f64,
    /// `C` with every pair length `≤ 2C·n^{-1/3}`, measured by the pairing step.
    pub pair_constant: f64,
    /// `max_pair_length · δ / 2`.
    pub area_bound: f64,
    /// True when a zero-length pair short-circuited the search.
    pub degenerate: bool,
}

/// Pairs nearby points, turns each pair `{p_i, q_i}` into the configuration
/// pair `(p_i, p_i q_i)`, and returns the triangle `p_i p_j q_j` at the
/// minimising `d(p_i, ℓ_j)`.
pub fn triangle_via_pointline(pts: &[Point]) -> Result<(TriangleWitness, PipelineReport)> {
    let v = check_points(pts, 8)?;
    Dim::Three.check(pts[0].dim())?;
    let cp = greedy_close_pairs(pts)?;
    let max_len = cp.distances.iter().cloned().fold(0.0, f64::max);
    let mut report = PipelineReport {
        m: cp.pairs.len(),
        delta: 0.0,
        max_pair_length: max_len,
        pair_constant: cp.constant_n,
        area_bound: 0.0,
        degenerate: false,
    };
    if let Some(k) = cp.distances.iter().position(|&d| d == 0.0) {
        let (i, j) = cp.pairs[k];
        let other = (0..v.len()).find(|&c| c != i && c != j).unwrap();
        report.degenerate = true;
        let w = TriangleWitness::new(i, j, other, 0.0);
        return Ok((w, report));
    }
    let cfg_pairs = cp
        .pairs
        .iter()
        .map(|&(i, j)| PointLinePair::new(pts[i], Line::through(&pts[i], &pts[j])?))
        .collect::<Result<Vec<_>>>()?;
    let x = PointLineConfiguration::new(Dim::Three, cfg_pairs)?;
    let (delta, a, b) = min_config_distance_witness(&x)?;
    let (pi, _) = cp.pairs[a];
    let (pj, qj) = cp.pairs[b];
    let w = TriangleWitness::new(pi, pj, qj, 0.0);
    let (i, j, k) = w.indices;
    let w = TriangleWitness {
        area: triangle_area(v[i], v[j], v[k]),
        ..w
    };
    report.delta = delta;
    report.area_bound = max_len * delta / 2.0;
    Ok((w, report))
}
