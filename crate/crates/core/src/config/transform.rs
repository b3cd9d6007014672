use crate::error::{Error, Result};
use crate::geom::{line_box_chord, Dim, Line, Point, Prism};
use crate::vec3::Vec3;

use super::model::{PointLineConfiguration, PointLinePair};

/// Index of the `delta`-grid cell holding coordinate `c`; the last cell is
/// closed so that `c = 1` stays inside.
fn cell(c: f64, delta: f64) -> i64 {
    let last = ((1.0 / delta) - 1e-9).ceil() as i64 - 1;
    ((c / delta).floor() as i64).clamp(0, last.max(0))
}

/// `X_Δ`: the pairs whose point lies in the grid cube `Q_Δ` holding the
/// anchor's point, mapped homothetically onto the unit cube.
pub fn rescale_config(
    x: &PointLineConfiguration,
    delta: f64,
    anchor: usize,
) -> Result<PointLineConfiguration> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("rescale needs 0 < Δ ≤ 1, got {delta}")));
    }
    let a = x
        .pairs()
        .get(anchor)
        .ok_or_else(|| Error::InvalidParameter(format!("anchor {anchor} out of range")))?;
    let d = x.dim().get();
    let key: Vec<i64> = a.point().coords().iter().map(|&c| cell(c, delta)).collect();
    let mut corner = [0.0; 3];
    for k in 0..d {
        corner[k] = key[k] as f64 * delta;
    }
    let corner = Vec3(corner);
    let mut out = Vec::new();
    for pr in x.pairs() {
        let inside = pr
            .point()
            .coords()
            .iter()
            .zip(&key)
            .all(|(&c, &k)| cell(c, delta) == k);
        if !inside {
            continue;
        }
        let v = ((pr.point().vec() - corner) / delta).map(|c| c.clamp(0.0, 1.0));
        out.push(PointLinePair::from_dir(Point::from_vec(v, x.dim()), pr.line().dir())?);
    }
    if out.is_empty() {
        return Err(Error::EmptyConfiguration("no pair survives the rescaling".into()));
    }
    PointLineConfiguration::dedup(x.dim(), out)
}

/// Restriction of a spatial configuration to a prism `Π`, collapsed to the
/// plane: keeps pairs with `p ∈ Π` and `|ℓ ∩ Π| ≥ half the long side`, drops
/// the short coordinate, and rescales the other two onto `[0,1]²`.
///
/// Lines parallel to the collapsed side have no planar image and are skipped.
pub fn slab_restriction(x: &PointLineConfiguration, prism: &Prism) -> Result<PointLineConfiguration> {
    Dim::Three.check(x.dim())?;
    let [_, w, len] = prism.extents();
    let f = prism.frame();
    let mut out = Vec::new();
    for pr in x.pairs() {
        if !prism.contains(pr.point().vec()) {
            continue;
        }
        if line_box_chord(pr.line(), prism)? < 0.5 * len {
            continue;
        }
        let loc = prism.local(pr.point().vec());
        let px = (loc.y() / w + 0.5).clamp(0.0, 1.0);
        let py = (loc.z() / len + 0.5).clamp(0.0, 1.0);
        let dir = pr.line().dir();
        let img = Vec3::new(dir.dot(f[1]) / w, dir.dot(f[2]) / len, 0.0);
        if img.norm() < 1e-12 {
            continue;
        }
        let p = Point::xy(px, py);
        out.push(PointLinePair::new(p, Line::new(p, img)?)?);
    }
    PointLineConfiguration::dedup(Dim::Two, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{generate_vertical, min_config_distance};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_config(n: usize, dim: Dim, seed: u64) -> PointLineConfiguration {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = (0..n)
            .map(|_| {
                let p = Point::from_vec(Vec3::new(rng.gen(), rng.gen(), rng.gen()), dim);
                let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let v = if dim == Dim::Two { Vec3::new(v.x(), v.y(), 0.0) } else { v };
                PointLinePair::from_dir(p, v).unwrap()
            })
            .collect();
        PointLineConfiguration::new(dim, pairs).unwrap()
    }

    #[test]
    fn identity_rescaling() {
        let x = random_config(50, Dim::Three, 1);
        let y = rescale_config(&x, 1.0, 7).unwrap();
        assert_eq!(x.len(), y.len());
        for (a, b) in x.pairs().iter().zip(y.pairs()) {
            assert_eq!(a.point(), b.point());
            assert_eq!(a.line().dir(), b.line().dir());
        }
    }

    #[test]
    fn rescaling_scales_separation() {
        let x = generate_vertical(1.0 / 16.0, Dim::Three).unwrap();
        let y = rescale_config(&x, 0.5, 0).unwrap();
        assert_eq!(y.len(), 16);
        assert!(min_config_distance(&y).unwrap() >= 2.0 * min_config_distance(&x).unwrap());
    }

    #[test]
    fn rescaling_composes() {
        let x = random_config(400, Dim::Three, 2);
        for anchor in [0, 17, 123] {
            let once = rescale_config(&x, 0.5, anchor).unwrap();
            let pa = x.pairs()[anchor].point().vec();
            let image = pa.map(|c| (c - cell(c, 0.5) as f64 * 0.5) / 0.5);
            let a2 = once
                .pairs()
                .iter()
                .position(|p| p.point().vec().dist(image) < 1e-12)
                .unwrap();
            let twice = rescale_config(&once, 0.5, a2).unwrap();
            let direct = rescale_config(&x, 0.25, anchor).unwrap();
            assert_eq!(twice.len(), direct.len());
            for (a, b) in twice.pairs().iter().zip(direct.pairs()) {
                assert!(a.point().vec().dist(b.point().vec()) < 1e-9);
                assert_eq!(a.line().dir(), b.line().dir());
            }
        }
    }

    #[test]
    fn slab_of_vertical_construction() {
        let delta = 1.0 / 32.0;
        let x = generate_vertical(delta, Dim::Three).unwrap();
        let (u, w) = (delta, 0.5);
        let prism = Prism::oriented(
            Vec3::new(0.5 - delta, 0.5, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 0.0),
            u,
            w,
            1.0,
        )
        .unwrap();
        let y = slab_restriction(&x, &prism).unwrap();
        assert_eq!(y.dim(), Dim::Two);
        assert!(y.len() >= 2);
        assert!(min_config_distance(&y).unwrap() >= u / w);
    }

    #[test]
    fn slab_output_in_unit_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_config(300, Dim::Three, 4);
        for _ in 0..20 {
            let prism = Prism::aligned(
                Vec3::new(rng.gen(), rng.gen(), rng.gen()),
                Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 1.0),
                rng.gen_range(0.05..0.3),
                rng.gen_range(0.3..1.0),
                1.0,
            )
            .unwrap();
            let y = slab_restriction(&x, &prism).unwrap();
            for p in y.pairs() {
                assert!(p.point().in_unit_cube(1e-9));
            }
        }
        let cube = Prism::axis_aligned_cube(Vec3::new(0.5, 0.5, 0.5), 1.0).unwrap();
        assert!(slab_restriction(&x, &cube).is_ok());
    }
}
