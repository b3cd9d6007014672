use rayon::prelude::*;

/// Farthest-point (Gonzalez) ordering of a finite metric space.
///
/// `radii[k]` is the distance from the `k`-th selected centre to the earlier
/// centres (infinite for the first). Insertion radii are non-increasing, so the
/// greedy `w`-net is the prefix of centres with radius `> w`; it is maximal and
/// `w`-separated, which makes its size a covering number up to scale factor 2.
#[derive(Debug, Clone)]
pub struct FarthestPointNet {
    pub order: Vec<usize>,
    pub radii: Vec<f64>,
}

impl FarthestPointNet {
    /// Size of the greedy `w`-net.
    pub fn count(&self, w: f64) -> usize {
        self.radii.partition_point(|&r| r > w)
    }

    /// Indices of the greedy `w`-net.
    pub fn centers(&self, w: f64) -> &[usize] {
        &self.order[..self.count(w)]
    }
}

const PAR_THRESHOLD: usize = 4096;

/// Farthest-point ordering, stopped once every item is within `w_min` of a
/// centre. Ties go to the smallest index.
pub fn farthest_point_net<F>(n: usize, w_min: f64, dist: F) -> FarthestPointNet
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let mut order = Vec::new();
    let mut radii = Vec::new();
    if n == 0 {
        return FarthestPointNet { order, radii };
    }
    let mut near = vec![f64::INFINITY; n];
    let mut next = 0usize;
    let mut r = f64::INFINITY;
    loop {
        order.push(next);
        radii.push(r);
        let c = next;
        if n >= PAR_THRESHOLD {
            near.par_iter_mut().enumerate().for_each(|(i, d)| {
                let e = dist(c, i);
                if e < *d {
                    *d = e;
                }
            });
        } else {
            for (i, d) in near.iter_mut().enumerate() {
                let e = dist(c, i);
                if e < *d {
                    *d = e;
                }
            }
        }
        near[c] = 0.0;
        let (mut best, mut bi) = (-1.0, 0);
        for (i, &d) in near.iter().enumerate() {
            if d > best {
                best = d;
                bi = i;
            }
        }
        if best <= w_min || order.len() == n {
            break;
        }
        next = bi;
        r = best;
    }
    FarthestPointNet { order, radii }
}

/// Greedy covering number `|A|_w` of `items` under `dist`.
pub fn covering_number<T, F>(items: &[T], w: f64, dist: F) -> crate::Result<usize>
where
    T: Sync,
    F: Fn(&T, &T) -> f64 + Sync,
{
    if !(w > 0.0) {
        return Err(crate::error::invalid(format!("covering scale must be > 0, got {w}")));
    }
    Ok(farthest_point_net(items.len(), w, |i, j| dist(&items[i], &items[j])).count(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::Vec3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn d(a: &Vec3, b: &Vec3) -> f64 {
        a.dist(*b)
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(covering_number::<Vec3, _>(&[], 0.1, d).unwrap(), 0);
        assert_eq!(covering_number(&[Vec3::ZERO], 0.1, d).unwrap(), 1);
        let pts: Vec<Vec3> = (0..7).map(|k| Vec3::new(k as f64 * 0.25, 0.0, 0.0)).collect();
        assert_eq!(covering_number(&pts, 0.1, d).unwrap(), 7);
        assert!(covering_number(&pts, 0.0, d).is_err());
    }

    #[test]
    fn sandwiched_by_exact_cover() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let pts: Vec<Vec3> = (0..100)
                .map(|_| Vec3::new(rng.gen(), rng.gen(), 0.0))
                .collect();
            let w = 0.2;
            let greedy = covering_number(&pts, w, d).unwrap();
            let exact = crate::oracle::exact_cover(pts.len(), w, |i, j| pts[i].dist(pts[j]));
            // A maximal w-net is a w-cover; within a factor 2 of the optimum.
            assert!(exact <= greedy);
            assert!(greedy <= 2 * exact, "{greedy} vs {exact}");
        }
    }

    #[test]
    fn antitone_in_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pts: Vec<Vec3> = (0..400)
            .map(|_| Vec3::new(rng.gen(), rng.gen(), rng.gen()))
            .collect();
        let net = farthest_point_net(pts.len(), 0.0, |i, j| pts[i].dist(pts[j]));
        let mut last = usize::MAX;
        for k in 0..60 {
            let c = net.count(0.01 * 1.08f64.powi(k));
            assert!(c <= last);
            last = c;
        }
        let centers = net.centers(0.3);
        for (a, &i) in centers.iter().enumerate() {
            for &j in &centers[..a] {
                assert!(pts[i].dist(pts[j]) > 0.3);
            }
        }
        assert!(pts.iter().all(|p| centers.iter().any(|&c| p.dist(pts[c]) <= 0.3)));
    }
}
