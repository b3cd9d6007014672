use crate::config::{rescale_config, PointLineConfiguration};
use crate::error::{Error, Result};
use crate::geom::metric::raw_line_metric;
use crate::geom::{direction_distance, farthest_point_net};

use super::config::ConfigIndex;

/// Covering numbers of `P[X]`, `L[X]`, `θ[X]` at one scale, with the
/// concentration numbers they are compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringRow {
    pub w: f64,
    pub points: usize,
    pub lines: usize,
    pub directions: usize,
    /// `M_X(w,1,1)`, `M_X(1,1,w)`, `M_X(1,w,1)`.
    pub m_points: usize,
    pub m_lines: usize,
    pub m_directions: usize,
    pub size: usize,
}

impl CoveringRow {
    /// `|A|_w · M / |X|` for points, lines and directions. The sandwich
    /// asks each to lie in `[1/C, C·K]`.
    pub fn ratios(&self) -> [f64; 3] {
        let n = self.size.max(1) as f64;
        [
            self.points as f64 * self.m_points as f64 / n,
            self.lines as f64 * self.m_lines as f64 / n,
            self.directions as f64 * self.m_directions as f64 / n,
        ]
    }

    pub fn sandwich_holds(&self, k: f64, c: f64) -> bool {
        self.ratios().iter().all(|&r| r >= 1.0 / c && r <= c * k)
    }
}

/// Greedy covering numbers of points, lines (line metric) and directions at
/// every scale of `ladder`.
pub fn covering_profiles(x: &PointLineConfiguration, ladder: &[f64]) -> Result<Vec<CoveringRow>> {
    if let Some(&w) = ladder.iter().find(|&&w| !(w > 0.0)) {
        return Err(Error::InvalidParameter(format!("covering scale must be > 0, got {w}")));
    }
    let w_min = ladder.iter().cloned().fold(f64::INFINITY, f64::min);
    let pts = x.points();
    let lines = x.lines();
    let n = x.len();
    let pnet = farthest_point_net(n, w_min, |i, j| pts[i].dist(&pts[j]));
    let lnet = farthest_point_net(n, w_min, |i, j| raw_line_metric(&lines[i], &lines[j]));
    let dnet = farthest_point_net(n, w_min, |i, j| direction_distance(lines[i].dir(), lines[j].dir()));
    let idx = ConfigIndex::new(x);
    let all: Vec<usize> = (0..n).collect();
    Ok(ladder
        .iter()
        .map(|&w| CoveringRow {
            w,
            points: pnet.count(w),
            lines: lnet.count(w),
            directions: dnet.count(w),
            m_points: idx.max_at(&all, w, 1.0, 1.0),
            m_lines: idx.max_at(&all, 1.0, 1.0, w),
            m_directions: idx.max_at(&all, 1.0, w, 1.0),
            size: n,
        })
        .collect())
}

/// The sequence `β_j` with `w^{β_j} = w²·|θ[X_{w^j}]|_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionProfile {
    pub w: f64,
    pub betas: Vec<f64>,
    /// `|X_{w^j}|` for each computed level.
    pub sizes: Vec<usize>,
    /// Set when a rescaled configuration came out empty before `⌊log_w δ⌋`.
    pub truncated: bool,
}

impl DirectionProfile {
    /// Largest drop `β_j − β_{j+1}` along the sequence (0 if nondecreasing).
    pub fn max_decrease(&self) -> f64 {
        self.betas
            .windows(2)
            .map(|p| p[0] - p[1])
            .fold(0.0, f64::max)
    }
}

/// `β_j` for `j = 0..=⌊log_w δ⌋`, rescaling around member `anchor`.
pub fn direction_profile(
    x: &PointLineConfiguration,
    w: f64,
    delta: f64,
    anchor: usize,
) -> Result<DirectionProfile> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::InvalidParameter(format!("profile scale must lie in (0,1), got {w}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0,1], got {delta}")));
    }
    if x.is_empty() {
        return Err(Error::EmptyConfiguration("direction profile of an empty set".into()));
    }
    let jmax = (delta.ln() / w.ln() + 1e-9).floor() as i32;
    let mut betas = Vec::new();
    let mut sizes = Vec::new();
    let mut truncated = false;
    for j in 0..=jmax {
        let xj = if j == 0 {
            x.clone()
        } else {
            // The anchor's own pair always survives, so errors here are real.
            match rescale_config(x, w.powi(j), anchor) {
                Ok(c) => c,
                Err(Error::EmptyConfiguration(_)) => {
                    truncated = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        };
        let lines = xj.lines();
        let net = farthest_point_net(lines.len(), w, |a, b| direction_distance(lines[a].dir(), lines[b].dir()));
        let theta = net.count(w) as f64;
        betas.push(2.0 + theta.ln() / w.ln());
        sizes.push(xj.len());
    }
    Ok(DirectionProfile {
        w,
        betas,
        sizes,
        truncated,
    })
}
