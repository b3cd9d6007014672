//! The radial bump `χ`, the kernel `η = χ * χ_{1/2}` and its line integrals.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geom::Dim;
use crate::vec3::Vec3;

/// Quintic smoothstep `10t³ − 15t⁴ + 6t⁵`: `C²` at both ends.
#[inline]
fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
}

/// Composite Simpson rule on `[a, b]` with `n` (rounded up to even) intervals.
pub(crate) fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let x = a + h * k as f64;
        s += if k % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    s * h / 3.0
}

/// Surface measure of the unit sphere in `R^dim`.
fn sphere_measure(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

/// Radial bump: `1` on `|x| ≤ r₁`, a quintic `C²` join down to `0` at
/// `r₂ = 2r₁`, with `r₁` fixed by `∫_{R^dim} χ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    pub dim: usize,
    pub r1: f64,
    pub r2: f64,
    /// Degree of the join polynomial.
    pub degree: u32,
}

impl BumpProfile {
    pub fn new(dim: usize) -> Result<BumpProfile> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        // Mass of the profile with r₁ = 1; mass scales like r₁^dim.
        let unit = sphere_measure(dim)
            * simpson(0.0, 2.0, 20_000, |r| {
                (1.0 - smoothstep(r - 1.0)) * r.powi(dim as i32 - 1)
            });
        let r1 = unit.powf(-1.0 / dim as f64);
        Ok(BumpProfile {
            dim,
            r1,
            r2: 2.0 * r1,
            degree: 5,
        })
    }

    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        1.0 - smoothstep((r.abs() - self.r1) / (self.r2 - self.r1))
    }

    /// `∫_{R^dim} χ`, by radial quadrature.
    pub fn mass(&self) -> f64 {
        sphere_measure(self.dim)
            * simpson(0.0, self.r2, 20_000, |r| self.value(r) * r.powi(self.dim as i32 - 1))
    }
}

/// Tabulated radial profile of `η = χ * χ_{1/2}` for unit scale, plus its
/// X-ray transform `R(s) = ∫_R η(√(s² + t²)) dt`.
#[derive(Debug, Clone)]
pub struct EtaKernel {
    pub profile: BumpProfile,
    /// Support radius of `η` (in units of the scale `w`).
    pub support: f64,
    step: f64,
    table: Vec<f64>,
    xray_step: f64,
    xray: Vec<f64>,
}

const TABLE_LEN: usize = 2048;

impl EtaKernel {
    fn build(dim: usize) -> EtaKernel {
        let profile = BumpProfile::new(dim).expect("dimension 2 or 3");
        let f = |r: f64| profile.value(r);
        // χ_{1/2}(x) = 2^d χ(2x).
        let scale = (1u32 << dim) as f64;
        let g = |r: f64| scale * profile.value(2.0 * r);
        let rf = profile.r2;
        let rg = 0.5 * profile.r2;
        let support = rf + rg;
        let step = support / (TABLE_LEN - 1) as f64;
        let table: Vec<f64> = if dim == 3 {
            // (f * g)(ρ) = (2π/ρ) ∫ f(r) r ∫_{|ρ−r|}^{ρ+r} g(s) s ds dr.
            let gn = 8192;
            let gh = rg / gn as f64;
            let mut cum = vec![0.0; gn + 1];
            for k in 0..gn {
                let (a, b) = (k as f64 * gh, (k + 1) as f64 * gh);
                let m = 0.5 * (a + b);
                cum[k + 1] = cum[k] + gh / 6.0 * (g(a) * a + 4.0 * g(m) * m + g(b) * b);
            }
            let big_g = |s: f64| -> f64 {
                if s >= rg {
                    return cum[gn];
                }
                let x = s / gh;
                let k = x.floor() as usize;
                let fr = x - k as f64;
                cum[k] + fr * (cum[k + 1] - cum[k])
            };
            (0..TABLE_LEN)
                .map(|i| {
                    let rho = i as f64 * step;
                    if rho < 1e-9 {
                        4.0 * PI * simpson(0.0, rg, 4000, |r| f(r) * g(r) * r * r)
                    } else {
                        let lo = (rho - rg).max(0.0);
                        let hi = (rho + rg).min(rf);
                        if lo >= hi {
                            return 0.0;
                        }
                        2.0 * PI / rho
                            * simpson(lo, hi, 2000, |r| {
                                f(r) * r * (big_g(rho + r) - big_g((rho - r).abs()))
                            })
                    }
                })
                .collect()
        } else {
            (0..TABLE_LEN)
                .map(|i| {
                    let rho = i as f64 * step;
                    let lo = (rho - rg).max(0.0);
                    let hi = (rho + rg).min(rf);
                    if lo >= hi {
                        return 0.0;
                    }
                    simpson(lo, hi, 256, |r| {
                        f(r) * r
                            * 2.0
                            * simpson(0.0, PI, 256, |phi| {
                                g((rho * rho + r * r - 2.0 * rho * r * phi.cos()).max(0.0).sqrt())
                            })
                    })
                })
                .collect()
        };
        let mut k = EtaKernel {
            profile,
            support,
            step,
            table,
            xray_step: 0.0,
            xray: Vec::new(),
        };
        k.xray_step = support / (TABLE_LEN - 1) as f64;
        k.xray = (0..TABLE_LEN)
            .map(|i| {
                let s = i as f64 * k.xray_step;
                let half = (support * support - s * s).max(0.0).sqrt();
                2.0 * simpson(0.0, half, 1024, |t| k.eta((s * s + t * t).sqrt()))
            })
            .collect();
        k
    }

    /// Shared kernel for `dim ∈ {2, 3}`.
    pub fn get(dim: Dim) -> &'static EtaKernel {
        static K2: OnceLock<EtaKernel> = OnceLock::new();
        static K3: OnceLock<EtaKernel> = OnceLock::new();
        match dim {
            Dim::Two => K2.get_or_init(|| EtaKernel::build(2)),
            Dim::Three => K3.get_or_init(|| EtaKernel::build(3)),
        }
    }

    #[inline]
    fn lerp(table: &[f64], step: f64, r: f64) -> f64 {
        let x = r / step;
        let k = x.floor() as usize;
        if k + 1 >= table.len() {
            return 0.0;
        }
        let fr = x - k as f64;
        table[k] + fr * (table[k + 1] - table[k])
    }

    /// Unit-scale `η` at radius `r`.
    #[inline]
    pub fn eta(&self, r: f64) -> f64 {
        Self::lerp(&self.table, self.step, r.abs())
    }

    /// Unit-scale line integral of `η` along a line at distance `s` from the
    /// origin (tabulated).
    #[inline]
    pub fn xray(&self, s: f64) -> f64 {
        Self::lerp(&self.xray, self.xray_step, s.abs())
    }

    /// The raw radial table with its step.
    pub fn table(&self) -> (&[f64], f64) {
        (&self.table, self.step)
    }

    /// `∫ η` over the ambient space, from the radial table.
    pub fn mass(&self) -> f64 {
        let d = self.profile.dim as i32;
        sphere_measure(self.profile.dim)
            * simpson(0.0, self.support, 2 * TABLE_LEN, |r| self.eta(r) * r.powi(d - 1))
    }

    /// Line integral by composite Simpson at step `1/16`, refined to `1/64`
    /// when the second differences are large compared with the mean.
    pub fn line_integral(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= self.support {
            return 0.0;
        }
        let half = (self.support * self.support - s * s).sqrt();
        let f = |t: f64| self.eta((s * s + t * t).sqrt());
        let n = ((2.0 * half * 16.0).ceil() as usize).max(2);
        let h = 2.0 * half / n as f64;
        let vals: Vec<f64> = (0..=n).map(|k| f(-half + h * k as f64)).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let rough = vals
            .windows(3)
            .map(|w| (w[0] - 2.0 * w[1] + w[2]).abs())
            .fold(0.0, f64::max);
        let n = if rough > 1e2 * mean { 4 * n } else { n };
        simpson(-half, half, n, f)
    }
}

/// `η_w(x) = w^{-d} η(x/w)`.
pub fn eta_kernel(w: f64, x: Vec3, dim: Dim) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel scale must be > 0, got {w}")));
    }
    let k = EtaKernel::get(dim);
    Ok(k.eta(x.norm() / w) * w.powi(-(dim.get() as i32)))
}
