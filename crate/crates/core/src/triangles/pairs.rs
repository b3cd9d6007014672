use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::vec3::Vec3;

use super::check_points;

/// Output of [`greedy_close_pairs`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClosePairs {
    /// Extracted pairs `(i, j)`, `i < j`, in extraction order.
    pub pairs: Vec<(usize, usize)>,
    pub distances: Vec<f64>,
    /// Smallest `C` with `d_k ≤ 2C·r_k^{-1/d}` for every round, `r_k` the
    /// number of points still available before round `k`.
    pub constant: f64,
    /// Smallest `C` with `d_k ≤ 2C·n^{-1/d}` for every round.
    pub constant_n: f64,
}

#[derive(PartialEq)]
struct Cand(f64, usize, usize);

impl Eq for Cand {}

impl Ord for Cand {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0
            .total_cmp(&o.0)
            .then(self.1.cmp(&o.1))
            .then(self.2.cmp(&o.2))
    }
}

impl PartialOrd for Cand {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// All pairs of `alive` points within distance `r`, via a bucket grid of side `r`.
fn pairs_within(v: &[Vec3], alive: &[usize], r: f64, dim: usize) -> Vec<Cand> {
    use std::collections::HashMap;
    let key = |p: Vec3| -> [i64; 3] {
        let mut k = [0i64; 3];
        for (c, kc) in k.iter_mut().enumerate().take(dim) {
            *kc = (p[c] / r).floor() as i64;
        }
        k
    };
    let mut cells: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for &i in alive {
        cells.entry(key(v[i])).or_default().push(i);
    }
    let zr = if dim == 3 { 1 } else { 0 };
    let mut out = Vec::new();
    for &i in alive {
        let k = key(v[i]);
        for dz in -zr..=zr {
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if let Some(b) = cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        for &j in b {
                            if j > i {
                                let d = v[i].dist(v[j]);
                                if d <= r {
                                    out.push(Cand(d, i, j));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Repeatedly removes the closest pair of still-available points until
/// `⌊n/4⌋` disjoint pairs are extracted.
///
/// Candidate pairs within a radius `R` sit in a heap; when it runs dry every
/// available pair is longer than `R`, so `R` doubles and the heap is rebuilt.
pub fn greedy_close_pairs(pts: &[Point]) -> Result<ClosePairs> {
    let v = check_points(pts, 1)?;
    let n = v.len();
    if n < 8 {
        return Err(Error::TooFewItems { needed: 8, got: n });
    }
    let dim = pts[0].dim().get();
    let m = n / 4;
    let mut alive = vec![true; n];
    let mut r = (n as f64).powf(-1.0 / dim as f64);
    let mut out = ClosePairs {
        pairs: Vec::with_capacity(m),
        distances: Vec::with_capacity(m),
        constant: 0.0,
        constant_n: 0.0,
    };
    let mut heap = BinaryHeap::new();
    let mut built = false;
    while out.pairs.len() < m {
        if !built {
            let avail: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
            heap = pairs_within(&v, &avail, r, dim).into_iter().map(Reverse).collect();
            built = true;
        }
        match heap.pop() {
            Some(Reverse(Cand(d, i, j))) => {
                if !alive[i] || !alive[j] {
                    continue;
                }
                let remaining = n - 2 * out.pairs.len();
                out.constant = out
                    .constant
                    .max(0.5 * d * (remaining as f64).powf(1.0 / dim as f64));
                out.constant_n = out.constant_n.max(0.5 * d * (n as f64).powf(1.0 / dim as f64));
                alive[i] = false;
                alive[j] = false;
                out.pairs.push((i, j));
                out.distances.push(d);
            }
            None => {
                r *= 2.0;
                built = false;
            }
        }
    }
    Ok(out)
}
