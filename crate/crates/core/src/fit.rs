//! Ordinary least squares for the small regressions used in reports.

use crate::error::{Error, Result};

/// Result of a least-squares fit `y ≈ β₀ + Σ βₖ xₖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    /// `[β₀, β₁, …]`.
    pub coefficients: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

impl LinearFit {
    pub fn intercept(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn slope(&self) -> f64 {
        self.coefficients[1]
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, r| a.max(r.abs()))
    }
}

/// Fits `y ≈ β₀ + Σ βₖ xs[i][k]` by solving the normal equations.
pub fn least_squares(xs: &[Vec<f64>], ys: &[f64]) -> Result<LinearFit> {
    let n = ys.len();
    let p = xs.first().map_or(0, |r| r.len()) + 1;
    if xs.len() != n || n < p {
        return Err(Error::TooFewItems { needed: p, got: n });
    }
    if ys.iter().chain(xs.iter().flatten()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite regression data".into()));
    }
    let row = |i: usize| -> Vec<f64> {
        let mut r = Vec::with_capacity(p);
        r.push(1.0);
        r.extend_from_slice(&xs[i]);
        r
    };
    let mut a = vec![vec![0.0; p + 1]; p];
    for i in 0..n {
        let r = row(i);
        for j in 0..p {
            for k in 0..p {
                a[j][k] += r[j] * r[k];
            }
            a[j][p] += r[j] * ys[i];
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-12 {
            return Err(Error::Degenerate("singular regression design".into()));
        }
        a.swap(col, piv);
        for r in 0..p {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=p {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let coefficients: Vec<f64> = (0..p).map(|j| a[j][p] / a[j][j]).collect();
    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let r = row(i);
            ys[i] - r.iter().zip(&coefficients).map(|(x, b)| x * b).sum::<f64>()
        })
        .collect();
    let mean = ys.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(LinearFit {
        coefficients,
        residuals,
        r_squared,
    })
}

/// Slope of `ln y` against `ln x`. Non-positive values are rejected.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("log-log fit needs positive data".into()));
    }
    let xs: Vec<Vec<f64>> = x.iter().map(|v| vec![v.ln()]).collect();
    let ys: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    least_squares(&xs, &ys)
}
