use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::direction_distance;
use crate::vec3::Vec3;

use super::sweep::{sweep, Holed, Rect};
use super::tube2d::Tube2D;

/// Runtime constants of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoEndsParams {
    /// Rich threshold `r = c1·Δ^{-2}·|𝕋|^{1/2}`.
    pub c1: f64,
    /// Number of rounds; `None` means `⌈3·log_{2/Δ}(1/δ)⌉`.
    pub rounds: Option<usize>,
    /// Net spacing; `None` means `δ/10`.
    pub net_step: Option<f64>,
}

impl Default for TwoEndsParams {
    fn default() -> Self {
        TwoEndsParams {
            c1: 4.0,
            rounds: None,
            net_step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoEndsResult {
    pub delta: f64,
    pub big_delta: f64,
    pub n_tubes: usize,
    /// The family `𝕌` of `Δ × 8δ` tubes.
    pub tubes: Vec<Tube2D>,
    /// `𝕌(T)` as indices into `tubes`.
    pub selection: Vec<Vec<usize>>,
    pub c1: f64,
    pub r: usize,
    pub rounds: usize,
    pub rounds_run: usize,
    /// `|𝒫_r(𝕋_i)|` for each round that was evaluated.
    pub rich_per_round: Vec<usize>,
    /// Max multiplicity of `{2T ∖ ∪𝕌(T)}` on the net.
    pub overlap: usize,
    pub net_step: f64,
}

impl TwoEndsResult {
    /// `Δ^{-2}|𝕋|^{1/2}`.
    pub fn overlap_bound(&self) -> f64 {
        (self.n_tubes as f64).sqrt() / (self.big_delta * self.big_delta)
    }

    pub fn overlap_constant(&self) -> f64 {
        self.overlap as f64 / self.overlap_bound()
    }

    /// `log_{2/Δ}(1/δ)`.
    pub fn log_scale(&self) -> f64 {
        log_scale(self.delta, self.big_delta)
    }

    pub fn max_selection(&self) -> usize {
        self.selection.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn selection_constant(&self) -> f64 {
        self.max_selection() as f64 / self.log_scale()
    }

    /// True when the loop stopped because no rich points were left.
    pub fn exhausted(&self) -> bool {
        self.rich_per_round.last().map_or(true, |&c| c == 0) || self.r > self.n_tubes
    }
}

fn log_scale(delta: f64, big_delta: f64) -> f64 {
    (1.0 / delta).ln() / (2.0 / big_delta).ln()
}

/// Iterative two-ends decomposition of a planar tube family.
pub fn two_ends_decompose(
    tubes: &[Tube2D],
    delta: f64,
    big_delta: f64,
    params: &TwoEndsParams,
) -> Result<TwoEndsResult> {
    if !(delta > 0.0 && delta < big_delta && big_delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "two-ends needs 0 < δ < Δ < 1, got δ={delta}, Δ={big_delta}"
        )));
    }
    if !(params.c1 > 0.0) {
        return Err(Error::InvalidParameter(format!("rich constant c1={}", params.c1)));
    }
    let h = params.net_step.unwrap_or(delta / 10.0);
    if !(h > 0.0) || h > delta / 4.0 {
        return Err(Error::InvalidParameter(format!(
            "net step {h} too coarse for δ={delta} (need ≤ δ/4)"
        )));
    }
    let n = tubes.len();
    let r = ((params.c1 * (n as f64).sqrt() / (big_delta * big_delta)).ceil() as usize).max(1);
    let rounds = params
        .rounds
        .unwrap_or_else(|| (3.0 * log_scale(delta, big_delta) - 1e-9).ceil().max(1.0) as usize);

    let mut short: Vec<Vec<Tube2D>> = vec![Vec::new(); n];
    let mut rich_per_round = Vec::new();
    let mut rounds_run = 0;
    if r <= n {
        for i in 0..rounds {
            let regions: Vec<Holed> = (0..n)
                .map(|t| {
                    if i == 0 {
                        Holed { base: Rect::of(&tubes[t].scaled(2.0)), holes: Vec::new() }
                    } else {
                        Holed {
                            base: Rect::of(&tubes[t].scaled(4.0)),
                            holes: short[t].iter().map(Rect::of).collect(),
                        }
                    }
                })
                .collect();
            let rich = sweep(&regions, h, Some(r)).rich;
            rich_per_round.push(rich.len());
            if rich.is_empty() {
                break;
            }
            let picks: Vec<Option<Tube2D>> = (0..n)
                .into_par_iter()
                .map(|t| best_short_tube(&tubes[t], &regions[t], &rich, delta, big_delta))
                .collect();
            rounds_run += 1;
            let mut any = false;
            for (t, p) in picks.into_iter().enumerate() {
                if let Some(u) = p {
                    short[t].push(u);
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
    }

    // Lift each short tube to a Δ × 8δ tube, reusing an essentially equal one
    // that already contains it in its 0.9-dilate.
    let mut family: Vec<Tube2D> = Vec::new();
    let mut selection: Vec<Vec<usize>> = vec![Vec::new(); n];
    let half_width = 4.0 * delta;
    let half_angle = 4.0 * delta / big_delta;
    for t in 0..n {
        for u in &short[t] {
            let found = family.iter().position(|v| {
                v.center().dist(u.center()) < half_width
                    && direction_distance(v.dir(), u.dir()) < half_angle
                    && inside(u, &v.scaled(0.9))
            });
            let idx = found.unwrap_or_else(|| {
                family.push(u.coaxial(0.0, 8.0 * delta, big_delta));
                family.len() - 1
            });
            if !selection[t].contains(&idx) {
                selection[t].push(idx);
            }
        }
    }

    let residual: Vec<Holed> = (0..n)
        .map(|t| Holed {
            base: Rect::of(&tubes[t].scaled(2.0)),
            holes: selection[t].iter().map(|&k| Rect::of(&family[k])).collect(),
        })
        .collect();
    let overlap = sweep(&residual, h, None).max;

    Ok(TwoEndsResult {
        delta,
        big_delta,
        n_tubes: n,
        tubes: family,
        selection,
        c1: params.c1,
        r,
        rounds,
        rounds_run,
        rich_per_round,
        overlap,
        net_step: h,
    })
}

/// Coaxial `½Δ × 4δ` tube maximising the rich points of `region` inside its
/// half; centres on the `δ`-lattice of the axis, ties to the smallest.
fn best_short_tube(t: &Tube2D, region: &Holed, rich: &[Vec3], delta: f64, big_delta: f64) -> Option<Tube2D> {
    let reach = 2.0 * t.length();
    let mut s: Vec<f64> = rich
        .iter()
        .filter(|&&p| {
            let q = p - t.center();
            q.dot(t.normal()).abs() <= delta && q.dot(t.dir()).abs() <= reach && region.contains(p)
        })
        .map(|&p| t.axis_param(p))
        .collect();
    if s.is_empty() {
        return None;
    }
    s.sort_by(f64::total_cmp);
    let half = big_delta / 8.0;
    let k0 = (-reach / delta).ceil() as i64;
    let k1 = (reach / delta).floor() as i64;
    let mut best = (0usize, 0.0);
    for k in k0..=k1 {
        let c = k as f64 * delta;
        let lo = s.partition_point(|&v| v < c - half);
        let hi = s.partition_point(|&v| v <= c + half);
        if hi - lo > best.0 {
            best = (hi - lo, c);
        }
    }
    (best.0 > 0).then(|| t.coaxial(best.1, 4.0 * delta, 0.5 * big_delta))
}

fn inside(a: &Tube2D, b: &Tube2D) -> bool {
    let (hl, hw) = (0.5 * a.length(), 0.5 * a.width());
    [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
        .iter()
        .all(|&(p, q)| b.contains(a.center() + a.dir() * (p * hl) + a.normal() * (q * hw)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pencil(n: usize, delta: f64) -> Vec<Tube2D> {
        (0..n)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / n as f64;
                Tube2D::new([0.0, 0.0], [a.cos(), a.sin()], delta, 1.0).unwrap()
            })
            .collect()
    }

    fn random_tubes(n: usize, delta: f64, seed: u64) -> Vec<Tube2D> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let a: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                Tube2D::new([rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)], [a.cos(), a.sin()], delta, 1.0)
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn parallel_disjoint_tubes() {
        let delta = 1.0 / 64.0;
        let tubes: Vec<Tube2D> = (0..10)
            .map(|k| Tube2D::new([0.0, k as f64 * 0.1], [1.0, 0.0], delta, 1.0).unwrap())
            .collect();
        let res = two_ends_decompose(&tubes, delta, 0.25, &TwoEndsParams::default()).unwrap();
        assert_eq!(res.overlap, 1);
        assert!(res.tubes.is_empty());
        assert!(res.exhausted());
    }

    #[test]
    fn pencil_center_is_excised() {
        let (delta, big) = (1.0 / 256.0, 1.0 / 8.0);
        let tubes = pencil(200, delta);
        let before = two_ends_decompose(&tubes, delta, big, &TwoEndsParams::default()).unwrap();
        // With the default constant nothing is rich; the centre point is in all 2T.
        assert_eq!(before.overlap, 200);
        assert!(before.overlap_constant() <= 100.0);
        let params = TwoEndsParams { c1: 0.05, ..Default::default() };
        let res = two_ends_decompose(&tubes, delta, big, &params).unwrap();
        assert!(res.rounds_run >= 1);
        assert!(res.exhausted());
        assert!(res.overlap < res.r, "{} vs r={}", res.overlap, res.r);
        assert!(res.overlap_constant() <= 100.0);
        assert!(res.selection_constant() <= 10.0);
        // Every tube dropped a neighbourhood of the common point.
        for (t, sel) in res.selection.iter().enumerate() {
            assert!(!sel.is_empty(), "tube {t}");
            assert!(sel.iter().any(|&k| res.tubes[k].contains(Vec3::ZERO)));
        }
    }

    #[test]
    fn random_family_certificate() {
        let (delta, big) = (1.0 / 128.0, 1.0 / 8.0);
        let tubes = random_tubes(500, delta, 7);
        for c1 in [4.0, 0.02] {
            let params = TwoEndsParams { c1, ..Default::default() };
            let res = two_ends_decompose(&tubes, delta, big, &params).unwrap();
            assert!(res.overlap_constant() <= 100.0);
            assert!(res.selection_constant() <= 10.0, "{}", res.selection_constant());
            assert!(res.selection.iter().all(|s| s.len() <= res.rounds));
        }
    }

    #[test]
    fn deterministic() {
        let (delta, big) = (1.0 / 128.0, 1.0 / 8.0);
        let tubes = random_tubes(150, delta, 8);
        let params = TwoEndsParams { c1: 0.03, ..Default::default() };
        let a = two_ends_decompose(&tubes, delta, big, &params).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| two_ends_decompose(&tubes, delta, big, &params).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        let t = pencil(3, 0.01);
        let p = TwoEndsParams::default();
        assert!(two_ends_decompose(&t, 0.1, 0.05, &p).is_err());
        assert!(two_ends_decompose(&t, 0.01, 1.0, &p).is_err());
        let coarse = TwoEndsParams { net_step: Some(0.005), ..p };
        assert!(two_ends_decompose(&t, 0.01, 0.1, &coarse).is_err());
    }
}
