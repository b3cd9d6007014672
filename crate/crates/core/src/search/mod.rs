//! Stochastic search for extremal configurations and log-log exponent fits.

mod anneal;
mod dx;
mod exponent;
mod triangle;

pub use anneal::{AnnealResult, AnnealSchedule};
pub use dx::{anneal_max_dx, anneal_max_dx_from, envelope, grid_start, Envelope};
pub use exponent::{exponent_estimate, ExponentFit, Family};
pub use triangle::{anneal_max_triangle, anneal_max_triangle_from};
