//! Point-line configurations and the named constructions built on them.

mod distance;
mod generators;
mod model;
mod transform;

pub use distance::{min_config_distance, min_config_distance_witness, naive_min_config_distance};
pub use generators::{
    generate_bush, generate_erdos_parabola, generate_plane_example, generate_st_grid,
    generate_vertical, smallest_prime_at_least, st_grid_side, vertical_count,
};
#[cfg(test)]
pub(crate) use generators::hemisphere_net;
pub use model::{PointLineConfiguration, PointLinePair, Provenance, SNAP_TOL};
pub use transform::{rescale_config, slab_restriction};

/// Pigeonhole bound `10·δ^{-d}` on any configuration with `d(X) ≥ δ`.
pub fn trivial_bound(delta: f64, dim: crate::Dim) -> f64 {
    10.0 * delta.powi(-(dim.get() as i32))
}
