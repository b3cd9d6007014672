//! Smoothed incidence counts and the high-low right-hand sides.

mod incidence;
mod kernel;
mod report;
mod rhs;

pub use incidence::{incidence_count, normalized_b};
pub use kernel::{eta_kernel, BumpProfile, EtaKernel};
pub use report::{
    double_count_check, dyadic_scan, initial_estimate_check, DoubleCount, InitialEstimate,
    MultiscaleReport, ScanRow,
};
pub use rhs::{
    direction_cover, lines_around, rhs_basic, rhs_few_directions, rhs_refined, rhs_wellspaced,
    wellspaced_alpha, BasicRhs, RefinedRhs, WellSpacedParams, WellSpacedRhs,
};
