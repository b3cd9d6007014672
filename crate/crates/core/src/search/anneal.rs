use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::Dim;
use crate::vec3::Vec3;

/// Cooling schedule of a single chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    /// Starting temperature; `None` means `0.1 ×` the initial objective.
    pub t0: Option<f64>,
    pub cooling: f64,
    pub moves_per_epoch: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            t0: None,
            cooling: 0.95,
            moves_per_epoch: 2000,
            epochs: 100,
            seed: 0,
        }
    }
}

impl AnnealSchedule {
    pub fn short(epochs: usize, moves_per_epoch: usize, seed: u64) -> Self {
        AnnealSchedule {
            epochs,
            moves_per_epoch,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::InvalidParameter(format!("cooling {} outside (0,1)", self.cooling)));
        }
        if self.moves_per_epoch == 0 || self.epochs == 0 {
            return Err(Error::InvalidParameter("schedule counts must be ≥ 1".into()));
        }
        if let Some(t) = self.t0 {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("initial temperature {t}")));
            }
        }
        Ok(())
    }

    pub fn total_moves(&self) -> usize {
        self.epochs * self.moves_per_epoch
    }
}

/// Best-ever state of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealResult<T> {
    pub best: T,
    pub objective: f64,
    /// Best objective after each epoch; non-decreasing.
    pub trace: Vec<f64>,
    pub accepted: usize,
    pub moves: usize,
}

/// Metropolis rule on the maximised objective; exact ties pass half the time.
pub(crate) fn accept(rng: &mut ChaCha8Rng, current: f64, proposed: f64, temp: f64) -> bool {
    if proposed > current {
        true
    } else if proposed == current {
        rng.gen_bool(0.5)
    } else {
        temp > 0.0 && rng.gen::<f64>() < ((proposed - current) / temp).exp()
    }
}

pub(crate) fn random_point(rng: &mut ChaCha8Rng, dim: Dim) -> Vec3 {
    match dim {
        Dim::Two => Vec3::new(rng.gen(), rng.gen(), 0.0),
        Dim::Three => Vec3::new(rng.gen(), rng.gen(), rng.gen()),
    }
}

pub(crate) fn random_direction(rng: &mut ChaCha8Rng, dim: Dim) -> Vec3 {
    match dim {
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
    }
}

/// Uniform offset in the `σ`-cube of the ambient dimension.
pub(crate) fn jitter(rng: &mut ChaCha8Rng, dim: Dim, sigma: f64) -> Vec3 {
    let mut v = Vec3::new(rng.gen_range(-sigma..sigma), rng.gen_range(-sigma..sigma), 0.0);
    if dim == Dim::Three {
        v = v + Vec3::new(0.0, 0.0, rng.gen_range(-sigma..sigma));
    }
    v
}

pub(crate) fn in_cube(p: Vec3, dim: Dim) -> bool {
    (0..dim.get()).all(|k| (0.0..=1.0).contains(&p[k]))
}
