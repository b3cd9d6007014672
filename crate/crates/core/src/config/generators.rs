use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Dim, Line, Point};
use crate::vec3::Vec3;

use super::model::{PointLineConfiguration, PointLinePair};

/// `⌊1/(2δ)⌋^{d-1}`, the size of the vertical construction.
pub fn vertical_count(delta: f64, dim: Dim) -> usize {
    per_axis(delta).pow(dim.get() as u32 - 1)
}

fn per_axis(delta: f64) -> usize {
    // The nudge keeps exact reciprocals such as 1/(2·0.1) = 5 from rounding down.
    (1.0 / (2.0 * delta) + 1e-9).floor() as usize
}

/// Points on a `2δ`-spaced grid in `[0,1]^{d-1} × {0}`, each with the line
/// through it in the last coordinate direction.
pub fn generate_vertical(delta: f64, dim: Dim) -> Result<PointLineConfiguration> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be > 0, got {delta}")));
    }
    let k = per_axis(delta);
    if k == 0 || delta >= 0.5 {
        return Err(Error::EmptyConfiguration(format!(
            "delta = {delta} leaves no room for a pair"
        )));
    }
    let step = 2.0 * delta;
    let coord = |a: usize| (a as f64 + 0.5) * step;
    let mut pairs = Vec::with_capacity(vertical_count(delta, dim));
    match dim {
        Dim::Two => {
            for a in 0..k {
                pairs.push(PointLinePair::from_dir(Point::xy(coord(a), 0.0), Vec3::new(0.0, 1.0, 0.0))?);
            }
        }
        Dim::Three => {
            for a in 0..k {
                for b in 0..k {
                    pairs.push(PointLinePair::from_dir(
                        Point::xyz(coord(a), coord(b), 0.0),
                        Vec3::new(0.0, 0.0, 1.0),
                    )?);
                }
            }
        }
    }
    Ok(PointLineConfiguration::new(dim, pairs)?.with_provenance("vertical", 0))
}

/// `count` directions on the upper unit hemisphere from a Fibonacci spiral.
pub(crate) fn hemisphere_net(count: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (k as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Directions of one bush: `⌊1/δ⌋` equally spaced angles in the plane, or a
/// Fibonacci net of `⌈δ^{-2}⌉` points on the hemisphere in space.
pub(crate) fn bush_directions(delta: f64, dim: Dim) -> Vec<Vec3> {
    match dim {
        Dim::Two => {
            let m = (1.0 / delta + 1e-9).floor().max(1.0) as usize;
            (0..m)
                .map(|k| {
                    let a = PI * k as f64 / m as f64;
                    Vec3::new(a.cos(), a.sin(), 0.0)
                })
                .collect()
        }
        Dim::Three => hemisphere_net((delta.powi(-2) - 1e-9).ceil() as usize),
    }
}

/// `n_bushes` random centres in `[1/4, 3/4]^d`, each with a full bush of
/// directionally separated lines. The points are the centres.
pub fn generate_bush(
    delta: f64,
    dim: Dim,
    n_bushes: usize,
    seed: u64,
) -> Result<(Vec<Point>, Vec<Line>)> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("bush needs 0 < delta < 1/2, got {delta}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = bush_directions(delta, dim);
    let mut pts = Vec::with_capacity(n_bushes);
    let mut lines = Vec::with_capacity(n_bushes * dirs.len());
    for _ in 0..n_bushes {
        let c = Point::from_vec(
            Vec3::new(
                rng.gen_range(0.25..0.75),
                rng.gen_range(0.25..0.75),
                rng.gen_range(0.25..0.75),
            ),
            dim,
        );
        for &v in &dirs {
            lines.push(Line::new(c, v)?);
        }
        pts.push(c);
    }
    Ok((pts, lines))
}

/// A `δ`-grid of points and about `δ^{-2}` lines, all in the plane `z = 1/2`:
/// `⌊1/δ⌋` equally spaced directions, each with parallel lines `δ` apart
/// across the unit square.
pub fn generate_plane_example(delta: f64) -> Result<(Vec<Point>, Vec<Line>)> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameter(format!("plane example needs 0 < delta < 1/2, got {delta}")));
    }
    let k = (1.0 / delta + 1e-9).floor() as usize;
    let z = 0.5;
    let mut pts = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            pts.push(Point::xyz((a as f64 + 0.5) * delta, (b as f64 + 0.5) * delta, z));
        }
    }
    let mut lines = Vec::new();
    let centre = Vec3::new(0.5, 0.5, z);
    for a in 0..k {
        let ang = PI * a as f64 / k as f64;
        let dir = Vec3::new(ang.cos(), ang.sin(), 0.0);
        let normal = Vec3::new(-ang.sin(), ang.cos(), 0.0);
        // The square projects onto the normal as an interval of this half-width.
        let half = 0.5 * (ang.sin().abs() + ang.cos().abs());
        let m = (half / delta).floor() as isize;
        for o in -m..=m {
            let base = centre + normal * (o as f64 * delta);
            lines.push(Line::new(Point::from_vec(base, Dim::Three), dir)?);
        }
    }
    Ok((pts, lines))
}

/// `⌊N^{1/3}⌋`, computed in integers.
pub fn st_grid_side(n_target: usize) -> usize {
    let mut n = (n_target as f64).cbrt().round() as usize + 1;
    while n * n * n > n_target {
        n -= 1;
    }
    n
}

/// The grid-pencil family: points `{1..n} × {1..2n²}` and lines
/// `y = a x + b`, `a ∈ {1..n}`, `b ∈ {1..n²}`, with `n = ⌊N^{1/3}⌋`, scaled
/// by `x ↦ x/(n+1)`, `y ↦ y/(2n²+1)` into the unit square.
pub fn generate_st_grid(n_target: usize) -> Result<(Vec<Point>, Vec<Line>)> {
    if n_target < 8 {
        return Err(Error::TooFewItems {
            needed: 8,
            got: n_target,
        });
    }
    let n = st_grid_side(n_target);
    let sx = 1.0 / (n + 1) as f64;
    let sy = 1.0 / (2 * n * n + 1) as f64;
    let mut pts = Vec::with_capacity(2 * n * n * n);
    for x in 1..=n {
        for y in 1..=2 * n * n {
            pts.push(Point::xy(x as f64 * sx, y as f64 * sy));
        }
    }
    let mut lines = Vec::with_capacity(n * n * n);
    for a in 1..=n {
        for b in 1..=n * n {
            let base = Point::xy(0.0, b as f64 * sy);
            lines.push(Line::new(base, Vec3::new(sx, a as f64 * sy, 0.0))?);
        }
    }
    Ok((pts, lines))
}

/// Smallest prime `≥ n`, by trial division.
pub fn smallest_prime_at_least(n: u64) -> u64 {
    let is_prime = |k: u64| {
        if k < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= k {
            if k % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    };
    let mut k = n.max(2);
    while !is_prime(k) {
        k += 1;
    }
    k
}

/// The points `(i/p, (i² mod p)/p)` for `i < n`, `p` the smallest prime `≥ n`.
/// No three are collinear.
pub fn generate_erdos_parabola(n: usize) -> Result<Vec<Point>> {
    if n < 3 {
        return Err(Error::TooFewItems { needed: 3, got: n });
    }
    let p = smallest_prime_at_least(n as u64);
    Ok((0..n as u64)
        .map(|i| Point::xy(i as f64 / p as f64, ((i * i) % p) as f64 / p as f64))
        .collect())
}
