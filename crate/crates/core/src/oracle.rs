//! Exhaustive reference computations for small instances.

/// Exact minimum number of closed `w`-balls centred at items that cover all
/// items, for the finite metric `dist` on `0..n`. Branch and bound on the
/// uncovered item with the fewest candidate centres; exponential in the worst
/// case, intended for `n` in the low hundreds with moderate overlap.
pub fn exact_cover<F>(n: usize, w: f64, dist: F) -> usize
where
    F: Fn(usize, usize) -> f64,
{
    let dm: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| dist(i, j)).collect()).collect();
    let nbrs: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| dm[i][j] <= w).collect())
        .collect();
    let mut s = Search { dm, nbrs, w, best: n };
    s.rec(&mut vec![0; n], 0);
    s.best
}

struct Search {
    dm: Vec<Vec<f64>>,
    nbrs: Vec<Vec<usize>>,
    w: f64,
    best: usize,
}

impl Search {
    fn lower_bound(&self, cover: &[u32]) -> usize {
        let unc: Vec<usize> = (0..cover.len()).filter(|&i| cover[i] == 0).collect();
        // Items pairwise more than 2w apart need distinct centres.
        let mut chosen: Vec<usize> = Vec::new();
        for &i in &unc {
            if chosen.iter().all(|&c| self.dm[c][i] > 2.0 * self.w) {
                chosen.push(i);
            }
        }
        // A centre c covers gain(c) uncovered items, so
        // Σ_v 1/max_{c∋v} gain(c) is at most the optimum.
        let gain: Vec<usize> = (0..cover.len())
            .map(|c| self.nbrs[c].iter().filter(|&&k| cover[k] == 0).count())
            .collect();
        let frac: f64 = unc
            .iter()
            .map(|&v| 1.0 / self.nbrs[v].iter().map(|&c| gain[c]).max().unwrap() as f64)
            .sum();
        chosen.len().max((frac - 1e-9).ceil() as usize)
    }

    fn rec(&mut self, cover: &mut Vec<u32>, used: usize) {
        let Some(v) = (0..cover.len())
            .filter(|&i| cover[i] == 0)
            .min_by_key(|&i| self.nbrs[i].len())
        else {
            self.best = self.best.min(used);
            return;
        };
        if used + self.lower_bound(cover) >= self.best {
            return;
        }
        let mut cands = self.nbrs[v].clone();
        cands.sort_by_key(|&c| {
            std::cmp::Reverse(self.nbrs[c].iter().filter(|&&k| cover[k] == 0).count())
        });
        for c in cands {
            for k in 0..self.nbrs[c].len() {
                cover[self.nbrs[c][k]] += 1;
            }
            self.rec(cover, used + 1);
            for k in 0..self.nbrs[c].len() {
                cover[self.nbrs[c][k]] -= 1;
            }
        }
    }
}
