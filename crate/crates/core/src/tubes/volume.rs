use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vec3::Vec3;

use super::shading::Shading;
use super::tube2d::SolidTube;

/// `|∪ Y(T)|` by counting grid cells of side `resolution` whose centres lie in
/// some shaded piece.
pub fn shading_union_volume<T: SolidTube + Sync>(tubes: &[T], y: &Shading, resolution: f64) -> Result<f64> {
    if tubes.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: tubes.len(),
            got: y.len(),
        });
    }
    if tubes.is_empty() {
        return Ok(0.0);
    }
    let dim = tubes[0].dim();
    if tubes.iter().any(|t| t.dim() != dim) {
        return Err(Error::InvalidParameter("mixed tube dimensions".into()));
    }
    // δ is the full width in the plane and the radius in space.
    let delta = tubes
        .iter()
        .map(|t| if dim == 2 { 2.0 * t.radius() } else { t.radius() })
        .fold(f64::INFINITY, f64::min);
    if !(resolution > 0.0) || resolution > delta / 4.0 * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} too coarse for δ={delta} (need ≤ δ/4)"
        )));
    }
    let cells: Vec<Vec<[i64; 3]>> = tubes
        .par_iter()
        .enumerate()
        .map(|(i, t)| rasterize(t, y.intervals(i), resolution, dim))
        .collect();
    let mut seen: HashSet<[i64; 3]> = HashSet::new();
    for c in cells {
        seen.extend(c);
    }
    Ok(seen.len() as f64 * resolution.powi(dim as i32))
}

fn rasterize<T: SolidTube>(t: &T, shade: &[(f64, f64)], h: f64, dim: usize) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    if shade.is_empty() {
        return out;
    }
    let (c, d, rho, len) = (t.center(), t.dir(), t.radius(), t.length());
    // Sweep along the coordinate where the axis is steepest.
    let k = (0..dim)
        .max_by(|&a, &b| d[a].abs().total_cmp(&d[b].abs()))
        .unwrap();
    let others: Vec<usize> = (0..dim).filter(|&a| a != k).collect();
    let mut e = Vec3::ZERO;
    e.0[k] = 1.0;
    let pe = e - d * d[k];
    let pe2 = pe.dot(pe);
    let range = |a: usize| {
        let s0 = c[a] - 0.5 * len * d[a];
        let s1 = c[a] + 0.5 * len * d[a];
        let (lo, hi) = (s0.min(s1) - rho, s0.max(s1) + rho);
        ((lo / h - 0.5).floor() as i64, (hi / h - 0.5).ceil() as i64)
    };
    let ranges: Vec<(i64, i64)> = others.iter().map(|&a| range(a)).collect();
    let (r1lo, r1hi) = if dim == 3 { ranges[1] } else { (0, 0) };
    for i0 in ranges[0].0..=ranges[0].1 {
        for i1 in r1lo..=r1hi {
            let mut p0 = Vec3::ZERO;
            p0.0[others[0]] = (i0 as f64 + 0.5) * h;
            if dim == 3 {
                p0.0[others[1]] = (i1 as f64 + 0.5) * h;
            }
            // Column p0 + s·e; distance to the axis ≤ ρ is a quadratic in s.
            let q = p0 - c;
            let pq = q - d * q.dot(d);
            let (a2, b1, c0) = (pe2, 2.0 * pq.dot(pe), pq.dot(pq) - rho * rho);
            let (smin, smax) = if a2 < 1e-18 {
                if c0 > 0.0 {
                    continue;
                }
                (f64::NEG_INFINITY, f64::INFINITY)
            } else {
                let disc = b1 * b1 - 4.0 * a2 * c0;
                if disc < 0.0 {
                    continue;
                }
                let sq = disc.sqrt();
                ((-b1 - sq) / (2.0 * a2), (-b1 + sq) / (2.0 * a2))
            };
            // Axis parameter measured from the tube start is affine in s.
            let base = q.dot(d) + 0.5 * len;
            for &(a, b) in shade {
                let (ta, tb) = ((a - base) / d[k], (b - base) / d[k]);
                let (ta, tb) = if ta <= tb { (ta, tb) } else { (tb, ta) };
                let (lo, hi) = (smin.max(ta), smax.min(tb));
                if lo > hi {
                    continue;
                }
                let (m0, m1) = (((lo - 0.5 * h) / h).ceil() as i64, ((hi - 0.5 * h) / h).floor() as i64);
                for m in m0..=m1 {
                    let mut cell = [0i64; 3];
                    cell[k] = m;
                    cell[others[0]] = i0;
                    if dim == 3 {
                        cell[others[1]] = i1;
                    }
                    out.push(cell);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Line, Point, Tube};
    use crate::tubes::Tube2D;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_tube_area() {
        let delta = 1.0 / 32.0;
        for a in [0.0f64, 0.3, 1.1, std::f64::consts::FRAC_PI_2] {
            let t = Tube2D::new([0.5, 0.5], [a.cos(), a.sin()], delta, 1.0).unwrap();
            let v = shading_union_volume(&[t], &Shading::full(&[1.0]), delta / 8.0).unwrap();
            assert!((v / delta - 1.0).abs() < 0.05, "{a}: {v}");
        }
        let t = Tube2D::new([0.0, 0.0], [1.0, 0.0], delta, 1.0).unwrap();
        assert!(shading_union_volume(&[t], &Shading::full(&[1.0]), delta / 2.0).is_err());
    }

    #[test]
    fn additivity_and_idempotence() {
        let delta = 1.0 / 32.0;
        let a = Tube2D::new([0.5, 0.2], [1.0, 0.2], delta, 1.0).unwrap();
        let b = Tube2D::new([0.5, 0.8], [0.3, 1.0], delta, 1.0).unwrap();
        let h = delta / 8.0;
        let va = shading_union_volume(&[a], &Shading::full(&[1.0]), h).unwrap();
        let vb = shading_union_volume(&[b], &Shading::full(&[1.0]), h).unwrap();
        let far = Tube2D::new([5.5, 0.8], [0.3, 1.0], delta, 1.0).unwrap();
        let vab = shading_union_volume(&[a, far], &Shading::full(&[1.0, 1.0]), h).unwrap();
        assert!((vab - va - vb).abs() / (va + vb) < 0.01);
        let vaa = shading_union_volume(&[a, a], &Shading::full(&[1.0, 1.0]), h).unwrap();
        assert_eq!(vaa, va);
    }

    #[test]
    fn space_tube_volume_and_shading() {
        let delta = 1.0 / 32.0;
        let l = Line::new(Point::xyz(0.5, 0.5, 0.5), Vec3::new(0.3, -0.5, 1.0)).unwrap();
        let t = Tube::new(l, delta, Some(1.0)).unwrap();
        let h = delta / 6.0;
        let v = shading_union_volume(&[t], &Shading::full(&[1.0]), h).unwrap();
        let want = std::f64::consts::PI * delta * delta;
        assert!((v / want - 1.0).abs() < 0.06, "{v} vs {want}");
        let half = Shading::regular(&[1.0], 0.5, 4, 0.0).unwrap();
        let vh = shading_union_volume(&[t], &half, h).unwrap();
        assert!((vh / v - 0.5).abs() < 0.05);
    }

    #[test]
    fn union_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let delta = 1.0 / 32.0;
        let tubes: Vec<Tube2D> = (0..30)
            .map(|_| {
                let a: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                Tube2D::new([rng.gen(), rng.gen()], [a.cos(), a.sin()], delta, 1.0).unwrap()
            })
            .collect();
        let h = delta / 8.0;
        let v = shading_union_volume(&tubes, &Shading::full(&vec![1.0; 30]), h).unwrap();
        let sum: f64 = tubes.iter().map(|t| t.measure()).sum();
        assert!(v <= sum * 1.03);
        assert!(v >= delta * 0.97);
    }
}
