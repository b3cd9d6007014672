use crate::conc::{dyadic_ladder, m_lines, m_points};
use crate::config::{rescale_config, PointLineConfiguration};
use crate::error::{Error, Result};
use crate::geom::metric::raw_line_metric;
use crate::geom::{farthest_point_net, Line, Point};

use super::incidence::normalized_b;
use super::rhs::{direction_cover, rhs_basic, rhs_refined};

/// One dyadic scale of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub w: f64,
    pub b: f64,
    /// `|B(w) − B(2w)|`, absent on the coarsest row.
    pub diff: Option<f64>,
    pub m_points: usize,
    pub m_lines: usize,
    pub rhs_basic: f64,
    pub rhs_refined: f64,
}

impl ScanRow {
    /// `diff² / rhs_basic`, the high-low ratio at this scale.
    pub fn ratio(&self) -> Option<f64> {
        self.diff.map(|d| d * d / self.rhs_basic)
    }
}

/// Rows ordered by strictly decreasing `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiscaleReport {
    pub rows: Vec<ScanRow>,
}

impl MultiscaleReport {
    /// `Σ |B(w) − B(2w)|` over the scan.
    pub fn total_variation(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.diff).sum()
    }
}

/// `B(w)`, successive differences, concentration numbers and right-hand
/// sides at `w = w_max, w_max/2, …` down to `w_min`.
pub fn dyadic_scan(points: &[Point], lines: &[Line], w_min: f64, w_max: f64) -> Result<MultiscaleReport> {
    if !(w_min > 0.0 && w_min < w_max && w_max <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < w_min < w_max <= 1, got {w_min}, {w_max}"
        )));
    }
    let mut rows: Vec<ScanRow> = Vec::new();
    for w in dyadic_ladder(w_max, w_min) {
        let b = normalized_b(w, points, lines)?;
        // The right-hand sides need δ < 1.
        let (rb, rr) = if w < 1.0 {
            let basic = rhs_basic(w, points, lines, 0.0)?;
            (basic.value, rhs_refined(w, points, lines, 0.0)?.value)
        } else {
            (f64::NAN, f64::NAN)
        };
        rows.push(ScanRow {
            w,
            b,
            diff: rows.last().map(|r| (b - r.b).abs()),
            m_points: m_points(points, w)?,
            m_lines: m_lines(lines, w, w)?,
            rhs_basic: rb,
            rhs_refined: rr,
        });
    }
    Ok(MultiscaleReport { rows })
}

fn ladder_scale(x: &PointLineConfiguration, w: f64) -> Result<()> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::InvalidParameter(format!("scale must lie in (0,1), got {w}")));
    }
    if x.is_empty() {
        return Err(Error::EmptyConfiguration("empty configuration".into()));
    }
    Ok(())
}

fn point_cover(x: &PointLineConfiguration, w: f64) -> usize {
    let p = x.points();
    farthest_point_net(p.len(), w, |a, b| p[a].dist(&p[b])).count(w)
}

fn line_cover(x: &PointLineConfiguration, w: f64) -> usize {
    let l = x.lines();
    farthest_point_net(l.len(), w, |a, b| raw_line_metric(&l[a], &l[b])).count(w)
}

/// `B(w)` against `|θ[X_w]|_w / (w^{d−1}|L[X]|_w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialEstimate {
    pub w: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub theta_rescaled: usize,
    pub line_cover: usize,
}

impl InitialEstimate {
    /// `rhs / lhs`: the slack needed for `lhs ≥ rhs / slack`.
    pub fn slack(&self) -> f64 {
        self.rhs / self.lhs
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.lhs * slack >= self.rhs
    }
}

/// Initial estimate at scale `w`, rescaling around member `anchor`.
pub fn initial_estimate_check(x: &PointLineConfiguration, w: f64, anchor: usize) -> Result<InitialEstimate> {
    ladder_scale(x, w)?;
    let xw = rescale_config(x, w, anchor)?;
    let theta = direction_cover(&xw.lines(), w)?;
    let lc = line_cover(x, w);
    let d = x.dim().get() as i32;
    let lhs = normalized_b(w, &x.points(), &x.lines())?;
    Ok(InitialEstimate {
        w,
        lhs,
        rhs: theta as f64 / (w.powi(d - 1) * lc as f64),
        theta_rescaled: theta,
        line_cover: lc,
    })
}

/// `|L[X]|_w` against `w·|θ[X_w]|_w·|P[X]|_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleCount {
    pub w: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl DoubleCount {
    pub fn slack(&self) -> f64 {
        self.rhs / self.lhs
    }

    pub fn holds(&self, slack: f64) -> bool {
        self.lhs * slack >= self.rhs
    }
}

/// Double-counting bound at scale `w`, rescaling around member `anchor`.
pub fn double_count_check(x: &PointLineConfiguration, w: f64, anchor: usize) -> Result<DoubleCount> {
    ladder_scale(x, w)?;
    let xw = rescale_config(x, w, anchor)?;
    let theta = direction_cover(&xw.lines(), w)?;
    Ok(DoubleCount {
        w,
        lhs: line_cover(x, w) as f64,
        rhs: w * theta as f64 * point_cover(x, w) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{generate_vertical, PointLinePair};
    use crate::geom::Dim;
    use crate::highlow::EtaKernel;
    use crate::Vec3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points_lines(n: usize, seed: u64) -> (Vec<Point>, Vec<Line>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = (0..n).map(|_| Point::xyz(rng.gen(), rng.gen(), rng.gen())).collect();
        let lines = (0..n)
            .map(|_| {
                let b = Point::xyz(rng.gen(), rng.gen(), rng.gen());
                let d = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                Line::new(b, d).unwrap()
            })
            .collect();
        (pts, lines)
    }

    #[test]
    fn scan_shape_and_telescoping() {
        let (p, l) = random_points_lines(300, 8);
        let rep = dyadic_scan(&p, &l, 0.1, 0.2).unwrap();
        assert_eq!(rep.rows.len(), 2);
        assert!(rep.rows[0].diff.is_none() && rep.rows[1].diff.is_some());
        let rep = dyadic_scan(&p, &l, 1.0 / 32.0, 0.5).unwrap();
        let first = rep.rows.first().unwrap().b;
        let last = rep.rows.last().unwrap().b;
        assert!(rep.total_variation() >= (first - last).abs() - 1e-12);
        assert!(rep.rows.windows(2).all(|r| r[0].w > r[1].w));
        assert!(rep.rows.iter().all(|r| r.b >= 0.0 && r.rhs_basic.is_finite()));
    }

    #[test]
    fn separated_configuration_counts_only_own_pairs() {
        let delta = 1.0 / 8.0;
        let x = generate_vertical(delta, Dim::Three).unwrap();
        let w = delta / 6.0;
        let b = normalized_b(w, &x.points(), &x.lines()).unwrap();
        let own = EtaKernel::get(Dim::Three).line_integral(0.0);
        let expect = own / (w * w * x.len() as f64);
        assert!((b - expect).abs() <= 1e-9 * expect);
        assert!(b <= 36.0 * own / (delta * delta * x.len() as f64) * (1.0 + 1e-9));
    }

    #[test]
    fn single_pair_double_count() {
        let p = PointLinePair::from_dir(Point::xyz(0.3, 0.3, 0.3), Vec3::new(0.0, 0.0, 1.0)).unwrap();
        let x = PointLineConfiguration::new(Dim::Three, vec![p]).unwrap();
        let dc = double_count_check(&x, 0.25, 0).unwrap();
        assert_eq!(dc.lhs, 1.0);
        assert_eq!(dc.rhs, 0.25);
        assert!(dc.holds(1.0));
    }

    #[test]
    fn vertical_initial_estimate() {
        let x = generate_vertical(1.0 / 16.0, Dim::Three).unwrap();
        let ie = initial_estimate_check(&x, 0.25, 0).unwrap();
        assert_eq!(ie.theta_rescaled, 1);
        assert!(ie.holds(2.0), "{ie:?}");
    }
}
