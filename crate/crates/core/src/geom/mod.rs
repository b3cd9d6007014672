//! Geometric primitives and the metrics used throughout the crate.
//!
//! All geometry is double precision. Planar objects are embedded in the
//! `z = 0` plane of R³ and carry a [`Dim`] tag so mixed-dimension inputs are
//! rejected instead of silently combined.

mod covering;
pub(crate) mod metric;
mod primitives;
mod shapes;

pub use covering::{covering_number, farthest_point_net, FarthestPointNet};
pub use metric::{
    direction_distance, line_box_chord, line_distance, line_metric, point_line_distance,
    segment_box_chord,
};
pub use primitives::{Dim, Line, Point};
pub use shapes::{Prism, SphericalRectangle, Tube};

/// Absolute tolerance for geometric equality tests.
pub const GEOM_TOL: f64 = 1e-9;
