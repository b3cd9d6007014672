//! Tube families: two-ends decomposition, shadings, union volumes and
//! hairbrush checks.

mod brush;
mod generate;
mod shading;
mod sphere;
mod sweep;
mod tube2d;
mod two_ends;
mod volume;

pub use brush::{check_planar_brush, check_space_brush, BrushReport, PlanarBrushParams, SpaceBrushParams};
pub use generate::{generate_katz_tao_tubes, generate_katz_tao_tubes_2d, KatzTaoFamily};
pub use shading::Shading;
pub use sphere::{
    gnomonic_rectangle, spherical_two_ends, CapReport, SphericalTwoEnds,
};
pub use tube2d::{rich_points, Region, SolidTube, Tube2D};
pub use two_ends::{two_ends_decompose, TwoEndsParams, TwoEndsResult};
pub use volume::shading_union_volume;
