//! Algorithms for the Heilbronn triangle problem in the plane and in space:
//! minimum-area triangles, point-line configurations, multiscale incidence
//! statistics, tube arrangements and stochastic search.

pub mod conc;
pub mod config;
pub mod error;
pub mod fit;
pub mod geom;
pub mod highlow;
pub mod io;
pub mod oracle;
pub mod search;
pub mod triangles;
pub mod tubes;
pub mod vec3;

pub use error::{Error, Result};
pub use geom::{Dim, Line, Point, Prism, SphericalRectangle, Tube};
pub use vec3::Vec3;
