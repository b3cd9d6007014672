use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::Point;

/// `M_P(w)`: the largest number of points in a half-open grid cube of side
/// `w`, over the `2^d` grids offset by `w/2` in each coordinate. Any `w`-cube
/// meets at most `2^d` cells of one grid, so this is within `2^d` of the
/// maximum over all cubes.
pub fn m_points(points: &[Point], w: f64) -> Result<usize> {
    if !(w > 0.0) {
        return Err(Error::InvalidParameter(format!("cube side must be > 0, got {w}")));
    }
    let Some(first) = points.first() else {
        return Ok(0);
    };
    let d = first.dim().get();
    for p in points {
        first.dim().check(p.dim())?;
    }
    let mut best = 0;
    for mask in 0..(1u32 << d) {
        let mut cells: HashMap<[i64; 3], usize> = HashMap::new();
        for p in points {
            let mut key = [0i64; 3];
            for (k, c) in p.coords().iter().enumerate() {
                let off = if mask >> k & 1 == 1 { 0.5 * w } else { 0.0 };
                key[k] = ((c - off) / w).floor() as i64;
            }
            let e = cells.entry(key).or_insert(0);
            *e += 1;
            best = best.max(*e);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_cases() {
        let p = vec![Point::xyz(0.3, 0.3, 0.3); 7];
        assert_eq!(m_points(&p, 0.01).unwrap(), 7);
        assert_eq!(m_points(&[], 0.1).unwrap(), 0);
        let delta = 0.1;
        let grid: Vec<Point> = (0..10)
            .flat_map(|a| (0..10).map(move |b| Point::xy(a as f64 * delta, b as f64 * delta)))
            .collect();
        assert!(m_points(&grid, delta).unwrap() <= 4);
    }

    #[test]
    fn within_factor_of_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (dim3, n) in [(false, 200), (true, 90)] {
            let pts: Vec<Point> = (0..n)
                .map(|_| {
                    if dim3 {
                        Point::xyz(rng.gen(), rng.gen(), rng.gen())
                    } else {
                        Point::xy(rng.gen(), rng.gen())
                    }
                })
                .collect();
            let w = 0.2;
            let d = pts[0].dim().get();
            // A maximal closed cube can be slid until each lower face touches a point.
            let xs: Vec<f64> = pts.iter().map(|p| p.coords()[0]).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.coords()[1]).collect();
            let zs: Vec<f64> = if dim3 { pts.iter().map(|p| p.coords()[2]).collect() } else { vec![0.0] };
            let mut oracle = 0;
            for &x in &xs {
                for &y in &ys {
                    for &z in &zs {
                        let lo = [x, y, z];
                        let c = pts
                            .iter()
                            .filter(|b| (0..d).all(|k| (lo[k]..=lo[k] + w).contains(&b.coords()[k])))
                            .count();
                        oracle = oracle.max(c);
                    }
                }
            }
            let got = m_points(&pts, w).unwrap();
            assert!(got <= oracle && got << d >= oracle, "{got} vs {oracle}");
        }
    }
}
