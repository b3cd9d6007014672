//! Concentration numbers, covering profiles, Katz–Tao diagnostics and
//! uniformization.

mod boxes;
mod config;
mod katz_tao;
mod points;
mod profiles;
mod uniform;

pub use boxes::{
    lines_in_prism, m_lines, m_lines_witness, m_segments_witness, segments_in_prism, BoxHit,
    BoxSearch, Segment,
};
pub use config::{m_config, m_config_at, ConfigIndex, ConcentrationQuery, Mode};
pub use katz_tao::{
    katz_tao_constant, katz_tao_constant_segments, katz_tao_fit, katz_tao_fit_segments, plane_reduction_check, KatzTaoFit, PlaneReductionReport,
    PlaneReductionRow,
};
pub use points::m_points;
pub use profiles::{covering_profiles, direction_profile, CoveringRow, DirectionProfile};
pub use uniform::{
    uniformize, verify_uniformity, UniformityCertificate, UniformizeOptions, UniformityCheck,
};

/// Dyadic ladder `hi, hi/2, …` down to `lo` (inclusive up to rounding).
pub fn dyadic_ladder(hi: f64, lo: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut s = hi;
    while s >= lo * (1.0 - 1e-9) {
        out.push(s);
        s *= 0.5;
    }
    out
}

/// Ladder `1, K^{-1}, …, K^{-m}` with `m = ⌊log_K(1/δ)⌋`.
pub fn k_ladder(k: f64, delta: f64) -> Vec<f64> {
    let m = ((1.0 / delta).ln() / k.ln() + 1e-9).floor().max(0.0) as i32;
    (0..=m).map(|j| k.powi(-j)).collect()
}
