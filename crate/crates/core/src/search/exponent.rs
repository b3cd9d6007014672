use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::vertical_count;
use crate::error::{Error, Result};
use crate::fit::loglog_fit;
use crate::geom::{Dim, Point};
use crate::triangles::triangle_via_pointline;

use super::anneal::AnnealSchedule;
use super::dx::anneal_max_dx;
use super::triangle::anneal_max_triangle;

/// What is measured along the ladder.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `|X|` of the vertical construction against `δ`.
    Vertical { dim: Dim },
    /// Area of the point-line pipeline triangle of `n` uniform points in the
    /// unit cube, against `n`.
    TrianglePipeline,
    /// Largest `n` whose annealed `d(X)` reaches `δ` (sizes grow by 10% until
    /// two chains both fail), against `δ`. Moves per
    /// epoch are multiplied by `n²/256`, since a well-spread configuration
    /// needs every pair to be visited.
    AnnealDx { dim: Dim, schedule: AnnealSchedule },
    /// Annealed minimum triangle area of `n` points, against `n`.
    AnnealTriangle { dim: Dim, schedule: AnnealSchedule },
}

impl Family {
    /// `vertical`, `triangle-pipeline`, `anneal-dx` or `anneal-triangle`.
    pub fn from_tag(tag: &str, dim: Dim, schedule: AnnealSchedule) -> Result<Family> {
        Ok(match tag {
            "vertical" => Family::Vertical { dim },
            "triangle-pipeline" => Family::TrianglePipeline,
            "anneal-dx" => Family::AnnealDx { dim, schedule },
            "anneal-triangle" => Family::AnnealTriangle { dim, schedule },
            _ => return Err(Error::InvalidParameter(format!("unknown family tag {tag:?}"))),
        })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Family::Vertical { .. } => "vertical",
            Family::TrianglePipeline => "triangle-pipeline",
            Family::AnnealDx { .. } => "anneal-dx",
            Family::AnnealTriangle { .. } => "anneal-triangle",
        }
    }

    fn measure(&self, x: f64, seed: u64) -> Result<f64> {
        match self {
            Family::Vertical { dim } => Ok(vertical_count(x, *dim) as f64),
            Family::TrianglePipeline => {
                let n = rung_size(x)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pts: Vec<Point> = (0..n).map(|_| Point::xyz(rng.gen(), rng.gen(), rng.gen())).collect();
                Ok(triangle_via_pointline(&pts)?.0.area)
            }
            Family::AnnealDx { dim, schedule } => {
                if !(x > 0.0 && x < 0.5) {
                    return Err(Error::InvalidParameter(format!("δ rung {x} outside (0, 1/2)")));
                }
                let per_axis = (1.0 / x + 1e-9).floor() as usize;
                let mut n = per_axis.pow(dim.get() as u32 - 1).max(2);
                for _ in 0..20 {
                    let next = (n + 1).max((n as f64 * 1.1).ceil() as usize);
                    // Two chains per size; either one reaching δ counts.
                    let reached = (0..2u64).try_fold(false, |hit, c| -> Result<bool> {
                        if hit {
                            return Ok(true);
                        }
                        let sch = AnnealSchedule {
                            seed: seed.wrapping_mul(2).wrapping_add(c),
                            moves_per_epoch: schedule.moves_per_epoch * (next * next).div_ceil(256),
                            ..*schedule
                        };
                        Ok(anneal_max_dx(next, *dim, &sch)?.objective >= x)
                    })?;
                    if reached {
                        n = next;
                    } else {
                        break;
                    }
                }
                Ok(n as f64)
            }
            Family::AnnealTriangle { dim, schedule } => {
                let sch = AnnealSchedule { seed, ..*schedule };
                Ok(anneal_max_triangle(rung_size(x)?, *dim, &sch)?.objective)
            }
        }
    }
}

fn rung_size(x: f64) -> Result<usize> {
    if !(x >= 1.0 && x.fract() == 0.0) {
        return Err(Error::InvalidParameter(format!("size rung {x} is not a positive integer")));
    }
    Ok(x as usize)
}

/// Log-log regression of per-rung medians.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub family: String,
    /// Valid rungs only.
    pub ladder: Vec<f64>,
    pub values: Vec<f64>,
    /// Per-seed measurements of each valid rung.
    pub samples: Vec<Vec<f64>>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Measures `family` at each rung for every seed and fits `ln value` against
/// `ln rung`. A rung is valid when at least one seed gives a positive value.
pub fn exponent_estimate(family: &Family, ladder: &[f64], seeds: &[u64]) -> Result<ExponentFit> {
    if ladder.len() < 3 {
        return Err(Error::TooFewItems { needed: 3, got: ladder.len() });
    }
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("no seeds".into()));
    }
    let jobs: Vec<(usize, u64)> = (0..ladder.len()).flat_map(|r| seeds.iter().map(move |&s| (r, s))).collect();
    let results: Vec<Result<f64>> = jobs.par_iter().map(|&(r, s)| family.measure(ladder[r], s)).collect();
    let mut per_rung: Vec<Vec<f64>> = vec![Vec::new(); ladder.len()];
    for ((r, _), v) in jobs.iter().zip(results) {
        match v {
            Ok(v) if v > 0.0 && v.is_finite() => per_rung[*r].push(v),
            Ok(_) => {}
            Err(e @ Error::InvalidParameter(_)) => return Err(e),
            Err(_) => {}
        }
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut samples = Vec::new();
    for (r, mut v) in per_rung.into_iter().enumerate() {
        if v.is_empty() {
            continue;
        }
        samples.push(v.clone());
        xs.push(ladder[r]);
        ys.push(median(&mut v));
    }
    if xs.len() < 3 {
        return Err(Error::TooFewItems { needed: 3, got: xs.len() });
    }
    let f = loglog_fit(&xs, &ys)?;
    if !f.slope().is_finite() {
        return Err(Error::Degenerate("non-finite slope".into()));
    }
    Ok(ExponentFit {
        family: family.tag().to_string(),
        ladder: xs,
        values: ys,
        samples,
        slope: f.slope(),
        intercept: f.intercept(),
        r_squared: f.r_squared,
    })
}
