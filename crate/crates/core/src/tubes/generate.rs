use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conc::{dyadic_ladder, segments_in_prism, Segment};
use crate::error::{Error, Result};
use crate::geom::{Dim, Line, Prism, Tube};
use crate::vec3::Vec3;

use super::tube2d::Tube2D;

/// Unit-length tubes accepted by rejection sampling against a Katz–Tao probe.
#[derive(Debug, Clone, PartialEq)]
pub struct KatzTaoFamily {
    pub dim: Dim,
    pub delta: f64,
    pub t1: f64,
    pub t2: f64,
    /// Constant of the probe inequality `|𝕋 ∩ B| ≤ C (u/δ)^{t₁} (w/δ)^{t₂}`.
    pub probe_constant: f64,
    pub segments: Vec<Segment>,
    /// False when the target count was not reached within `100·count` draws.
    pub complete: bool,
    pub attempts: usize,
}

impl KatzTaoFamily {
    /// Round tubes of radius `δ` (space only).
    pub fn tubes(&self) -> Result<Vec<Tube>> {
        if self.dim != Dim::Three {
            return Err(Error::UnsupportedDimension(2));
        }
        self.segments
            .iter()
            .map(|s| Tube::new(Line::from_parts(s.base, s.dir, Dim::Three), self.delta, Some(1.0)))
            .collect()
    }

    /// `δ × 1` rectangles (plane only).
    pub fn tubes_2d(&self) -> Result<Vec<Tube2D>> {
        if self.dim != Dim::Two {
            return Err(Error::UnsupportedDimension(3));
        }
        self.segments
            .iter()
            .map(|s| Tube2D::new([s.base.x(), s.base.y()], [s.dir.x(), s.dir.y()], self.delta, 1.0))
            .collect()
    }
}

/// Random tubes in space satisfying the `(t₁, t₂)` probe with constant 1.
pub fn generate_katz_tao_tubes(delta: f64, t1: f64, t2: f64, count: usize, seed: u64) -> Result<KatzTaoFamily> {
    generate(Dim::Three, delta, t1, t2, count, seed)
}

/// Planar variant: `(t)` probe over `u × 1` rectangles.
pub fn generate_katz_tao_tubes_2d(delta: f64, t: f64, count: usize, seed: u64) -> Result<KatzTaoFamily> {
    generate(Dim::Two, delta, t, 0.0, count, seed)
}

fn generate(dim: Dim, delta: f64, t1: f64, t2: f64, count: usize, seed: u64) -> Result<KatzTaoFamily> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0,1), got {delta}")));
    }
    if t1 < 1.0 || (dim == Dim::Three && t2 < 1.0) {
        return Err(Error::InvalidParameter(format!("Katz–Tao exponents must be ≥ 1, got ({t1}, {t2})")));
    }
    let c = 1.0;
    let ladder = dyadic_ladder(1.0, delta);
    let cells: Vec<(f64, f64)> = match dim {
        Dim::Two => ladder.iter().map(|&u| (u, 1.0)).collect(),
        Dim::Three => ladder
            .iter()
            .flat_map(|&w| ladder.iter().filter(move |&&u| u <= w).map(move |&u| (u, w)))
            .collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut segments: Vec<Segment> = Vec::with_capacity(count);
    let mut attempts = 0;
    let limit = 100 * count.max(1);
    while segments.len() < count && attempts < limit {
        attempts += 1;
        let center = match dim {
            Dim::Two => Vec3::new(rng.gen(), rng.gen(), 0.0),
            Dim::Three => Vec3::new(rng.gen(), rng.gen(), rng.gen()),
        };
        let dir = match dim {
            Dim::Two => {
                let a: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                Vec3::new(a.cos(), a.sin(), 0.0)
            }
            Dim::Three => loop {
                let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let n = v.norm();
                if n > 1e-3 && n <= 1.0 {
                    break v * (1.0 / n);
                }
            },
        };
        let cand = Segment::new(center, dir, -0.5, 0.5)?;
        if admissible(&cand, &segments, &cells, dim, delta, c, t1, t2)? {
            segments.push(cand);
        }
    }
    Ok(KatzTaoFamily {
        dim,
        delta,
        t1,
        t2,
        probe_constant: c,
        complete: segments.len() == count,
        segments,
        attempts,
    })
}

#[allow(clippy::too_many_arguments)]
fn admissible(
    cand: &Segment,
    accepted: &[Segment],
    cells: &[(f64, f64)],
    dim: Dim,
    delta: f64,
    c: f64,
    t1: f64,
    t2: f64,
) -> Result<bool> {
    let e = cand.dir.any_orthogonal();
    let orient: Vec<Vec3> = match dim {
        Dim::Two => vec![Vec3::new(0.0, 0.0, 1.0)],
        Dim::Three => vec![e, cand.dir.cross(e)],
    };
    for &(u, w) in cells {
        let cap = c * (u / delta).powf(t1) * (w / delta).powf(t2);
        if (accepted.len() + 1) as f64 <= cap {
            continue;
        }
        let w = if dim == Dim::Two { 1.0 } else { w };
        for &o in &orient {
            let p = Prism::oriented(cand.base, cand.dir, o, u, w, 1.0)?;
            if (segments_in_prism(accepted, &p) + 1) as f64 > cap {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conc::{katz_tao_constant_segments, katz_tao_fit_segments};

    #[test]
    fn single_tube_and_loose_exponents() {
        let one = generate_katz_tao_tubes(1.0 / 16.0, 1.0, 1.0, 1, 3).unwrap();
        assert!(one.complete);
        assert_eq!(one.segments.len(), 1);
        let loose = generate_katz_tao_tubes(1.0 / 16.0, 5.0, 5.0, 100, 3).unwrap();
        assert!(loose.complete);
        assert_eq!(loose.attempts, 100);
        assert!(generate_katz_tao_tubes(0.1, 0.5, 1.0, 10, 0).is_err());
    }

    #[test]
    fn certified_fit() {
        let delta = 1.0 / 64.0;
        let fam = generate_katz_tao_tubes(delta, 1.0, 1.0, 500, 9).unwrap();
        assert!(fam.complete, "{} after {}", fam.segments.len(), fam.attempts);
        let fit = katz_tao_fit_segments(&fam.segments, delta, Dim::Three).unwrap();
        // |𝕋| = 500 < (1/δ)^{1.6} caps the combined slope near ln 500 / ln 64.
        assert!(fit.t1 >= 0.8 && fit.t2 >= 0.4, "{} {}", fit.t1, fit.t2);
        let k = katz_tao_constant_segments(&fam.segments, delta, 1.0, 1.0, Dim::Three).unwrap();
        assert!(k <= 4.0, "{k}");
        assert_eq!(fam.tubes().unwrap().len(), 500);
    }

    #[test]
    fn planar_family() {
        let delta = 1.0 / 64.0;
        let fam = generate_katz_tao_tubes_2d(delta, 1.0, 200, 5).unwrap();
        assert!(fam.complete);
        let k = katz_tao_constant_segments(&fam.segments, delta, 1.0, 0.0, Dim::Two).unwrap();
        assert!(k <= 4.0, "{k}");
        assert_eq!(fam.tubes_2d().unwrap().len(), 200);
    }
}
