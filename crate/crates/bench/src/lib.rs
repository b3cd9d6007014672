//! Benchmark fixtures. All inputs are seeded so runs are comparable.

use heilbronn_core::config::{PointLineConfiguration, PointLinePair};
use heilbronn_core::tubes::Tube2D;
use heilbronn_core::{Dim, Line, Point, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_points(n: usize, dim: Dim, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| point(dim, &mut rng)).collect()
}

pub fn random_lines(n: usize, dim: Dim, seed: u64) -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let p = point(dim, &mut rng);
            Line::new(p, direction(dim, &mut rng)).unwrap()
        })
        .collect()
}

pub fn random_config(n: usize, dim: Dim, seed: u64) -> PointLineConfiguration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..n)
        .map(|_| {
            let p = point(dim, &mut rng);
            PointLinePair::from_dir(p, direction(dim, &mut rng)).unwrap()
        })
        .collect();
    PointLineConfiguration::new(dim, pairs).unwrap()
}

/// Unit-length planar tubes of width `delta` with uniform centres and angles.
pub fn random_tubes_2d(n: usize, delta: f64, seed: u64) -> Vec<Tube2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a = rng.gen_range(0.0..std::f64::consts::PI);
            Tube2D::new([rng.gen(), rng.gen()], [a.cos(), a.sin()], delta, 1.0).unwrap()
        })
        .collect()
}

fn point(dim: Dim, rng: &mut ChaCha8Rng) -> Point {
    match dim {
        Dim::Two => Point::xy(rng.gen(), rng.gen()),
        Dim::Three => Point::xyz(rng.gen(), rng.gen(), rng.gen()),
    }
}

fn direction(dim: Dim, rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let z = if dim == Dim::Three { rng.gen_range(-1.0..1.0) } else { 0.0 };
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), z);
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}
