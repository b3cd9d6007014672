use std::collections::HashMap;

use rayon::prelude::*;

use crate::config::PointLineConfiguration;
use crate::error::{Error, Result};
use crate::geom::metric::raw_line_distance;
use crate::geom::direction_distance;

use super::config::ConfigIndex;
use super::k_ladder;

/// Parameters of `uniformize`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformizeOptions {
    pub delta: f64,
    pub k: f64,
    /// Selected cubes at level `j` are at least `gap·K^{-j}` apart.
    pub separation_gap: usize,
    /// Ladder levels (1-based) at which separation is enforced; `None` means all.
    pub separation_levels: Option<Vec<usize>>,
}

impl UniformizeOptions {
    pub fn new(delta: f64, k: f64) -> UniformizeOptions {
        UniformizeOptions {
            delta,
            k,
            separation_gap: 1,
            separation_levels: None,
        }
    }
}

/// Outcome for one scale triple `(K^{-i}, K^{-j}, K^{-k})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityCheck {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub min_count: usize,
    pub max_count: usize,
}

impl UniformityCheck {
    pub fn ratio(&self) -> f64 {
        self.min_count as f64 / self.max_count.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformityCertificate {
    pub k: f64,
    pub delta: f64,
    /// `K^{-1}, …, K^{-m}`.
    pub scales: Vec<f64>,
    pub checks: Vec<UniformityCheck>,
    pub separation_levels: Vec<usize>,
    pub separation_gap: usize,
    pub size_before: usize,
    pub size_after: usize,
    /// Indices into the input of the kept pairs, ascending.
    pub kept: Vec<usize>,
}

impl UniformityCertificate {
    pub fn worst_ratio(&self) -> f64 {
        self.checks.iter().map(|c| c.ratio()).fold(1.0, f64::min)
    }

    pub fn is_valid(&self) -> bool {
        self.worst_ratio() >= 1.0 / self.k
    }

    /// `P` with `|X'| = |X| / (ln 1/δ)^P`.
    pub fn log_exponent(&self) -> f64 {
        let l = (1.0 / self.delta).ln().ln();
        (self.size_before as f64 / self.size_after as f64).ln() / l
    }
}

/// Per-pair level indices: level `t` means the distance is within `K^{-t}`.
struct Levels {
    n: usize,
    m: usize,
    data: Vec<[u8; 3]>,
}

impl Levels {
    fn new(idx: &ConfigIndex, x: &PointLineConfiguration, scales: &[f64]) -> Levels {
        let n = x.len();
        let pts = x.points();
        let lines = x.lines();
        let level = |d: f64| scales.iter().take_while(|&&s| d <= s).count() as u8;
        let data: Vec<[u8; 3]> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let (pts, lines) = (&pts, &lines);
                (0..n).map(move |b| {
                    let dd = direction_distance(lines[a].dir(), lines[b].dir());
                    [
                        level(pts[a].dist(&pts[b])),
                        level(dd),
                        level(dd + raw_line_distance(&lines[a], &lines[b])),
                    ]
                })
            })
            .collect();
        debug_assert_eq!(idx.len(), n);
        Levels { n, m: scales.len(), data }
    }

    /// Counts `c[i][j][k]` (flattened, levels `1..=m`) around `a` among `alive`.
    fn counts(&self, a: usize, alive: &[usize]) -> Vec<usize> {
        let s = self.m + 1;
        let mut h = vec![0usize; s * s * s];
        for &b in alive {
            let [p, d, l] = self.data[a * self.n + b];
            h[(p as usize * s + d as usize) * s + l as usize] += 1;
        }
        // Suffix sums along each axis.
        for p in (0..s).rev() {
            for d in (0..s).rev() {
                for l in (0..s).rev() {
                    let at = |p: usize, d: usize, l: usize| (p * s + d) * s + l;
                    let mut v = h[at(p, d, l)];
                    if p + 1 < s {
                        v += h[at(p + 1, d, l)];
                    }
                    if d + 1 < s {
                        v += h[at(p, d + 1, l)];
                    }
                    if l + 1 < s {
                        v += h[at(p, d, l + 1)];
                    }
                    if p + 1 < s && d + 1 < s {
                        v -= h[at(p + 1, d + 1, l)];
                    }
                    if p + 1 < s && l + 1 < s {
                        v -= h[at(p + 1, d, l + 1)];
                    }
                    if d + 1 < s && l + 1 < s {
                        v -= h[at(p, d + 1, l + 1)];
                    }
                    if p + 1 < s && d + 1 < s && l + 1 < s {
                        v += h[at(p + 1, d + 1, l + 1)];
                    }
                    h[at(p, d, l)] = v;
                }
            }
        }
        h
    }
}

fn triples(m: usize) -> Vec<(usize, usize, usize)> {
    (1..=m)
        .flat_map(|i| (1..=m).flat_map(move |j| (1..=m).map(move |k| (i, j, k))))
        .collect()
}

/// Keeps the parity class of `side`-grid cubes holding the most points, so
/// that distinct kept cubes are at least `gap·side` apart.
fn separate(x: &PointLineConfiguration, alive: &[usize], side: f64, gap: usize) -> Vec<usize> {
    let d = x.dim().get();
    let pts = x.points();
    let q = gap as i64 + 1;
    let cell = |a: usize| -> [i64; 3] {
        let mut c = [0i64; 3];
        for (k, v) in pts[a].coords().iter().enumerate() {
            c[k] = (v / side).floor() as i64;
        }
        c
    };
    // Already separated: no two occupied cells closer than `gap` cells.
    let occupied: Vec<[i64; 3]> = {
        let mut v: Vec<[i64; 3]> = alive.iter().map(|&a| cell(a)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let set: std::collections::HashSet<[i64; 3]> = occupied.iter().copied().collect();
    let close = occupied.iter().any(|c| {
        let r = gap as i64;
        let mut off = [0i64; 3];
        let span = 2 * r + 1;
        let total = span.pow(d as u32);
        (0..total).any(|mut t| {
            for o in off.iter_mut().take(d) {
                *o = t % span - r;
                t /= span;
            }
            off.iter().any(|&o| o != 0) && set.contains(&[c[0] + off[0], c[1] + off[1], c[2] + off[2]])
        })
    });
    if !close {
        return alive.to_vec();
    }
    let mut classes: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for &a in alive {
        let c = cell(a);
        classes.entry(c.map(|v| v.rem_euclid(q))).or_default().push(a);
    }
    let mut best: Option<([i64; 3], Vec<usize>)> = None;
    for (key, v) in classes {
        let better = match &best {
            None => true,
            Some((bk, bv)) => v.len() > bv.len() || (v.len() == bv.len() && key < *bk),
        };
        if better {
            best = Some((key, v));
        }
    }
    let mut v = best.map(|b| b.1).unwrap_or_default();
    v.sort_unstable();
    v
}

/// Passes to a subset that is `K`-uniform on `K^{-1}, …, K^{-m}` and whose
/// points are covered by separated cubes at the chosen levels.
///
/// Separation is enforced first, coarse to fine. Then, while some triple has
/// a member whose count is below `1/K` of the maximum, the members are
/// bucketed by `⌊log₂ count⌋` for the worst triple and the largest bucket is
/// kept. Each round removes at least one pair.
pub fn uniformize(
    x: &PointLineConfiguration,
    opts: &UniformizeOptions,
) -> Result<(PointLineConfiguration, UniformityCertificate)> {
    if !(opts.k >= 2.0) {
        return Err(Error::InvalidParameter(format!("uniformize needs K >= 2, got {}", opts.k)));
    }
    if !(opts.delta > 0.0 && opts.delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0,1), got {}", opts.delta)));
    }
    if x.is_empty() {
        return Err(Error::EmptyConfiguration("uniformize of an empty configuration".into()));
    }
    let scales: Vec<f64> = k_ladder(opts.k, opts.delta).into_iter().skip(1).collect();
    let m = scales.len();
    if m > 250 {
        return Err(Error::InvalidParameter("scale ladder too long".into()));
    }
    let levels: Vec<usize> = match &opts.separation_levels {
        Some(v) => {
            if let Some(&bad) = v.iter().find(|&&j| j == 0 || j > m) {
                return Err(Error::InvalidParameter(format!("separation level {bad} not in 1..={m}")));
            }
            let mut v = v.clone();
            v.sort_unstable();
            v.dedup();
            v
        }
        None => (1..=m).collect(),
    };

    let mut alive: Vec<usize> = (0..x.len()).collect();
    for &j in &levels {
        alive = separate(x, &alive, scales[j - 1], opts.separation_gap);
    }

    let idx = ConfigIndex::new(x);
    let lv = Levels::new(&idx, x, &scales);
    let ts = triples(m);
    let s = m + 1;
    let flat = |(i, j, k): (usize, usize, usize)| (i * s + j) * s + k;
    let checks = loop {
        let counts: Vec<Vec<usize>> = alive.par_iter().map(|&a| lv.counts(a, &alive)).collect();
        let mut checks = Vec::with_capacity(ts.len());
        let mut worst: Option<(f64, usize)> = None;
        for (t, &tr) in ts.iter().enumerate() {
            let f = flat(tr);
            let max_count = counts.iter().map(|c| c[f]).max().unwrap_or(0);
            let min_count = counts.iter().map(|c| c[f]).min().unwrap_or(0);
            let chk = UniformityCheck { i: tr.0, j: tr.1, k: tr.2, min_count, max_count };
            if chk.ratio() < 1.0 / opts.k && worst.map_or(true, |(r, _)| chk.ratio() < r) {
                worst = Some((chk.ratio(), t));
            }
            checks.push(chk);
        }
        let Some((_, t)) = worst else {
            break checks;
        };
        let f = flat(ts[t]);
        let mut buckets: HashMap<u32, Vec<usize>> = HashMap::new();
        for (pos, &a) in alive.iter().enumerate() {
            buckets.entry(counts[pos][f].max(1).ilog2()).or_default().push(a);
        }
        let (_, keep) = buckets
            .into_iter()
            .max_by(|(ka, va), (kb, vb)| va.len().cmp(&vb.len()).then(ka.cmp(kb)))
            .expect("nonempty");
        debug_assert!(keep.len() < alive.len());
        alive = keep;
        alive.sort_unstable();
    };
    if alive.is_empty() {
        return Err(Error::EmptyConfiguration("uniformization removed every pair".into()));
    }
    let out = x.subset(&alive);
    let cert = UniformityCertificate {
        k: opts.k,
        delta: opts.delta,
        scales,
        checks,
        separation_levels: levels,
        separation_gap: opts.separation_gap,
        size_before: x.len(),
        size_after: out.len(),
        kept: alive,
    };
    Ok((out, cert))
}

/// Independent re-check of a certificate by direct counting: `M_X` at each
/// triple is recomputed over all members, and the local counts at `anchors`
/// must reach `M_X / K`.
pub fn verify_uniformity(
    x: &PointLineConfiguration,
    cert: &UniformityCertificate,
    anchors: &[usize],
) -> Result<Vec<UniformityCheck>> {
    if let Some(&a) = anchors.iter().find(|&&a| a >= x.len()) {
        return Err(Error::InvalidParameter(format!("anchor {a} out of range")));
    }
    let idx = ConfigIndex::new(x);
    let all: Vec<usize> = (0..x.len()).collect();
    let m = cert.scales.len();
    Ok(triples(m)
        .into_iter()
        .map(|(i, j, k)| {
            let (u, v, w) = (cert.scales[i - 1], cert.scales[j - 1], cert.scales[k - 1]);
            let max_count = idx.max_at(&all, u, v, w);
            let min_count = anchors
                .par_iter()
                .map(|&a| idx.count_at(a, u, v, w))
                .min()
                .unwrap_or(max_count);
            UniformityCheck { i, j, k, min_count, max_count }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conc::testutil::random_config;
    use crate::config::{generate_vertical, PointLinePair};
    use crate::geom::{Dim, Point};
    use crate::Vec3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_anchors(n: usize, count: usize, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| rng.gen_range(0..n)).collect()
    }

    #[test]
    fn level_counts_match_direct() {
        let x = random_config(150, 21);
        let scales = vec![0.5, 0.25, 0.125];
        let idx = ConfigIndex::new(&x);
        let lv = Levels::new(&idx, &x, &scales);
        let alive: Vec<usize> = (0..x.len()).collect();
        let s = 4;
        for a in [0, 7, 99] {
            let c = lv.counts(a, &alive);
            for (i, j, k) in triples(3) {
                let direct = idx.count_at(a, scales[i - 1], scales[j - 1], scales[k - 1]);
                assert_eq!(c[(i * s + j) * s + k], direct);
            }
        }
    }

    #[test]
    fn perfect_grid_is_kept() {
        let x = generate_vertical(1.0 / 16.0, Dim::Three).unwrap();
        let mut opts = UniformizeOptions::new(1.0 / 16.0, 8.0);
        opts.separation_levels = Some(vec![]);
        let (y, cert) = uniformize(&x, &opts).unwrap();
        assert_eq!(y, x);
        assert!(cert.is_valid());
    }

    #[test]
    fn random_certificate_rechecks() {
        let x = random_config(1000, 22);
        let opts = UniformizeOptions::new(1.0 / 64.0, 8.0);
        let (y, cert) = uniformize(&x, &opts).unwrap();
        assert!(cert.is_valid());
        let anchors = sample_anchors(y.len(), 100, 1);
        let checks = verify_uniformity(&y, &cert, &anchors).unwrap();
        assert!(checks.iter().all(|c| c.ratio() >= 1.0 / cert.k), "{checks:?}");
        assert!(cert.log_exponent().is_finite());
    }

    #[test]
    fn half_clustered_selects_a_regime() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pairs = Vec::new();
        for i in 0..600 {
            let p = if i % 2 == 0 {
                Point::xyz(
                    0.5 + 0.01 * rng.gen::<f64>(),
                    0.5 + 0.01 * rng.gen::<f64>(),
                    0.5 + 0.01 * rng.gen::<f64>(),
                )
            } else {
                Point::xyz(rng.gen(), rng.gen(), rng.gen())
            };
            let d = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 1.0);
            pairs.push(PointLinePair::from_dir(p, d).unwrap());
        }
        let x = PointLineConfiguration::new(Dim::Three, pairs).unwrap();
        let mut opts = UniformizeOptions::new(1.0 / 64.0, 4.0);
        opts.separation_levels = Some(vec![]);
        let (y, cert) = uniformize(&x, &opts).unwrap();
        assert!(cert.is_valid());
        let clustered = cert.kept.iter().filter(|&&i| i % 2 == 0).count();
        assert!(clustered == 0 || clustered * 10 >= 9 * y.len(), "{clustered} of {}", y.len());
    }

    #[test]
    fn separation_by_parity() {
        let x = random_config(500, 23);
        let opts = UniformizeOptions::new(1.0 / 16.0, 4.0);
        let (y, cert) = uniformize(&x, &opts).unwrap();
        let side = cert.scales[0];
        let cells: Vec<[i64; 3]> = y
            .points()
            .iter()
            .map(|p| {
                let c = p.coords();
                [(c[0] / side).floor() as i64, (c[1] / side).floor() as i64, (c[2] / side).floor() as i64]
            })
            .collect();
        for a in &cells {
            for b in &cells {
                let cheb = (0..3).map(|k| (a[k] - b[k]).abs()).max().unwrap();
                assert!(cheb == 0 || cheb >= 2);
            }
        }
    }

    #[test]
    fn rejects_small_k() {
        let x = random_config(10, 1);
        assert!(uniformize(&x, &UniformizeOptions::new(0.1, 1.5)).is_err());
    }
}
