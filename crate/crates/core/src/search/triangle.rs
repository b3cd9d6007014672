use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Dim, Point};
use crate::triangles::triangle_area;
use crate::vec3::Vec3;

use super::anneal::{accept, in_cube, jitter, random_point, AnnealResult, AnnealSchedule};

/// Position of the sorted triple `a < b < c` in the combinatorial order.
#[inline]
fn tri_index(a: usize, b: usize, c: usize) -> usize {
    c * (c - 1) * (c - 2) / 6 + b * (b - 1) / 2 + a
}

fn sorted3(a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let mut v = [a, b, c];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

struct State {
    pts: Vec<Vec3>,
    areas: Vec<f64>,
    min: f64,
    argmin: (usize, usize, usize),
}

impl State {
    fn new(pts: Vec<Vec3>) -> State {
        let n = pts.len();
        let mut areas = vec![0.0; n * (n - 1) * (n - 2) / 6];
        for c in 2..n {
            for b in 1..c {
                for a in 0..b {
                    areas[tri_index(a, b, c)] = triangle_area(pts[a], pts[b], pts[c]);
                }
            }
        }
        let mut s = State { pts, areas, min: f64::INFINITY, argmin: (0, 1, 2) };
        let (m, t) = s.scan(None);
        s.min = m;
        s.argmin = t;
        s
    }

    /// Minimum over all triangles, optionally skipping those through `skip`.
    fn scan(&self, skip: Option<usize>) -> (f64, (usize, usize, usize)) {
        let n = self.pts.len();
        let mut best = (f64::INFINITY, (0, 1, 2));
        let mut idx = 0;
        for c in 2..n {
            for b in 1..c {
                for a in 0..b {
                    let v = self.areas[idx];
                    idx += 1;
                    if skip.is_some_and(|k| k == a || k == b || k == c) {
                        continue;
                    }
                    if v < best.0 {
                        best = (v, (a, b, c));
                    }
                }
            }
        }
        best
    }
}

/// Anneal the minimum triangle area of `n` points from a uniform random start.
pub fn anneal_max_triangle(n: usize, dim: Dim, schedule: &AnnealSchedule) -> Result<AnnealResult<Vec<Point>>> {
    if n < 3 {
        return Err(Error::TooFewItems { needed: 3, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed ^ 0x9e37_79b9_7f4a_7c15);
    let start: Vec<Point> = (0..n).map(|_| Point::from_vec(random_point(&mut rng, dim), dim)).collect();
    anneal_max_triangle_from(&start, schedule)
}

/// Anneal the minimum triangle area from given points in the unit cube.
pub fn anneal_max_triangle_from(start: &[Point], schedule: &AnnealSchedule) -> Result<AnnealResult<Vec<Point>>> {
    schedule.validate()?;
    if start.len() < 3 {
        return Err(Error::TooFewItems { needed: 3, got: start.len() });
    }
    let dim = start[0].dim();
    for p in start {
        dim.check(p.dim())?;
        if !in_cube(p.vec(), dim) {
            return Err(Error::InvalidParameter(format!("point {:?} outside the unit cube", p.coords())));
        }
    }
    let n = start.len();
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
    let mut s = State::new(start.iter().map(|p| p.vec()).collect());
    let mut best = s.min;
    let mut best_pts = start.to_vec();
    let t0 = schedule.t0.unwrap_or(0.1 * best.max(1e-9));
    let mut temp = t0;
    let mut trace = Vec::with_capacity(schedule.epochs);
    let mut accepted = 0;
    let mut fresh = vec![0.0; n * n];
    for _ in 0..schedule.epochs {
        let sigma = (temp / t0).max(0.01) * 0.25;
        for _ in 0..schedule.moves_per_epoch {
            let k = if rng.gen_bool(0.5) {
                let (a, b, c) = s.argmin;
                [a, b, c][rng.gen_range(0..3)]
            } else {
                rng.gen_range(0..n)
            };
            let p = s.pts[k] + jitter(&mut rng, dim, sigma);
            if !in_cube(p, dim) {
                continue;
            }
            // Areas of the triangles through k at the new position.
            let mut through = (f64::INFINITY, (0, 1, 2));
            for b in 0..n {
                for a in 0..b {
                    if a == k || b == k {
                        continue;
                    }
                    let t = sorted3(a, b, k);
                    let at = |i: usize| if i == k { p } else { s.pts[i] };
                    let v = triangle_area(at(t.0), at(t.1), at(t.2));
                    fresh[a * n + b] = v;
                    if v < through.0 || (v == through.0 && t < through.1) {
                        through = (v, t);
                    }
                }
            }
            let (a, b, c) = s.argmin;
            let rest = if a != k && b != k && c != k { (s.min, s.argmin) } else { s.scan(Some(k)) };
            let next = if through.0 < rest.0 { through } else { rest };
            if accept(&mut rng, s.min, next.0, temp) {
                for b in 0..n {
                    for a in 0..b {
                        if a != k && b != k {
                            let (x, y, z) = sorted3(a, b, k);
                            s.areas[tri_index(x, y, z)] = fresh[a * n + b];
                        }
                    }
                }
                s.pts[k] = p;
                s.min = next.0;
                s.argmin = next.1;
                accepted += 1;
                if s.min > best {
                    best = s.min;
                    best_pts = s.pts.iter().map(|&v| Point::from_vec(v, dim)).collect();
                }
            }
        }
        trace.push(best);
        temp *= schedule.cooling;
    }
    Ok(AnnealResult {
        best: best_pts,
        objective: best,
        trace,
        accepted,
        moves: schedule.total_moves(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::generate_erdos_parabola;
    use crate::triangles::min_triangle_fast;

    #[test]
    fn index_is_a_bijection() {
        let n = 9;
        let mut seen = vec![false; n * (n - 1) * (n - 2) / 6];
        for c in 2..n {
            for b in 1..c {
                for a in 0..b {
                    assert!(!seen[tri_index(a, b, c)]);
                    seen[tri_index(a, b, c)] = true;
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn three_points_approach_half() {
        let res = anneal_max_triangle(3, Dim::Two, &AnnealSchedule::short(40, 500, 1)).unwrap();
        assert!(res.objective > 0.45, "{}", res.objective);
        assert!(res.objective <= 0.5 + 1e-12);
    }

    #[test]
    fn seeded_with_parabola_never_worse() {
        let start = generate_erdos_parabola(5).unwrap();
        let base = min_triangle_fast(&start).unwrap().area;
        let res = anneal_max_triangle_from(&start, &AnnealSchedule::short(10, 300, 2)).unwrap();
        assert!(res.objective >= base);
        let re = min_triangle_fast(&res.best).unwrap().area;
        assert!((re - res.objective).abs() <= 1e-12);
    }

    #[test]
    fn trace_and_determinism() {
        let sch = AnnealSchedule::short(8, 200, 4);
        let a = anneal_max_triangle(10, Dim::Three, &sch).unwrap();
        let b = anneal_max_triangle(10, Dim::Three, &sch).unwrap();
        assert_eq!(a, b);
        assert!(a.trace.windows(2).all(|w| w[0] <= w[1]));
        assert!((min_triangle_fast(&a.best).unwrap().area - a.objective).abs() <= 1e-12);
    }
}
