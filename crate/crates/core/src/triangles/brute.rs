use rayon::prelude::*;

use crate::error::Result;
use crate::geom::Point;
use crate::vec3::Vec3;

use super::{check_points, TriangleWitness};

/// `½‖(b−a)×(c−a)‖`; in the plane this is half the absolute scalar cross.
///
/// When the plain cross product has lost more than 20 bits to cancellation,
/// each component is recomputed from six products of input coordinates,
/// split exactly with `mul_add` and summed with compensation, so nearly
/// collinear triples keep full relative accuracy.
#[inline]
pub fn triangle_area(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let (u, v) = (b - a, c - a);
    let plain = u.cross(v).norm();
    if plain > u.norm() * v.norm() * CANCELLATION {
        return 0.5 * plain;
    }
    let cross = |i: usize, j: usize| {
        let (a, b, c) = (a.0, b.0, c.0);
        accurate_sum([
            a[i] * b[j],
            -(a[i] * c[j]),
            b[i] * c[j],
            -(b[i] * a[j]),
            c[i] * a[j],
            -(c[i] * b[j]),
        ], [
            a[i].mul_add(b[j], -(a[i] * b[j])),
            -a[i].mul_add(c[j], -(a[i] * c[j])),
            b[i].mul_add(c[j], -(b[i] * c[j])),
            -b[i].mul_add(a[j], -(b[i] * a[j])),
            c[i].mul_add(a[j], -(c[i] * a[j])),
            -c[i].mul_add(b[j], -(c[i] * b[j])),
        ])
    };
    0.5 * Vec3::new(cross(1, 2), cross(2, 0), cross(0, 1)).norm()
}

const CANCELLATION: f64 = 1.0 / (1u64 << 20) as f64;

/// Compensated sum of products `hi` and their rounding errors `lo`.
#[inline]
fn accurate_sum(hi: [f64; 6], lo: [f64; 6]) -> f64 {
    let (mut s, mut comp) = (0.0f64, 0.0f64);
    for x in hi {
        let t = s + x;
        let bp = t - s;
        comp += (s - (t - bp)) + (x - bp);
        s = t;
    }
    s + (comp + lo.iter().sum::<f64>())
}

/// Exact minimum over all triples; ties go to the smallest index triple.
pub fn min_triangle_brute(pts: &[Point]) -> Result<TriangleWitness> {
    let v = check_points(pts, 3)?;
    let n = v.len();
    Ok((0..n - 2)
        .into_par_iter()
        .map(|i| {
            let mut best = TriangleWitness::worst();
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = triangle_area(v[i], v[j], v[k]);
                    if a < best.area {
                        best = TriangleWitness::new(i, j, k, a);
                    }
                }
            }
            best
        })
        .reduce(TriangleWitness::worst, TriangleWitness::min))
}

/// The same functional with the loops run backwards and single-threaded; an
/// independent oracle for [`min_triangle_brute`].
pub fn min_triangle_brute_reversed(pts: &[Point]) -> Result<TriangleWitness> {
    let v = check_points(pts, 3)?;
    let n = v.len();
    let mut best = TriangleWitness::worst();
    for k in (2..n).rev() {
        for j in (1..k).rev() {
            for i in (0..j).rev() {
                let cand = TriangleWitness::new(i, j, k, triangle_area(v[i], v[j], v[k]));
                if !best.better_than(&cand) {
                    best = cand;
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let line = [Point::xy(0.0, 0.0), Point::xy(0.5, 0.5), Point::xy(1.0, 1.0)];
        assert_eq!(min_triangle_brute(&line).unwrap().area, 0.0);
        let sq = [
            Point::xy(0.0, 0.0),
            Point::xy(1.0, 0.0),
            Point::xy(1.0, 1.0),
            Point::xy(0.0, 1.0),
        ];
        let w = min_triangle_brute(&sq).unwrap();
        assert_eq!(w.area, 0.5);
        assert_eq!(w.indices, (0, 1, 2));
        assert!(matches!(
            min_triangle_brute(&sq[..2]),
            Err(Error::TooFewItems { .. })
        ));
        assert!(min_triangle_brute(&[sq[0], sq[1], Point::xyz(0.0, 0.0, 1.0)]).is_err());
    }

    #[test]
    fn agrees_with_reversed_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..20 {
            let pts: Vec<Point> = (0..30)
                .map(|_| {
                    if trial % 2 == 0 {
                        Point::xy(rng.gen(), rng.gen())
                    } else {
                        Point::xyz(rng.gen(), rng.gen(), rng.gen())
                    }
                })
                .collect();
            assert_eq!(
                min_triangle_brute(&pts).unwrap(),
                min_triangle_brute_reversed(&pts).unwrap()
            );
        }
    }

    #[test]
    fn ties_break_lexicographically() {
        // Four collinear points: every triple has area 0.
        let pts: Vec<Point> = (0..4).map(|k| Point::xy(0.1 * k as f64, 0.0)).collect();
        assert_eq!(min_triangle_brute(&pts).unwrap().indices, (0, 1, 2));
        assert_eq!(min_triangle_brute_reversed(&pts).unwrap().indices, (0, 1, 2));
    }
}
