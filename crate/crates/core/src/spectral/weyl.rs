use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct WeylFit {
    /// Slope of `lambda_k Vol^{2/n}` against `k^{2/n}`.
    pub slope: f64,
    pub intercept: f64,
    /// `4 pi^2 / omega_n^{2/n}`, the asymptotic slope.
    pub weyl_constant: f64,
    pub points: usize,
}

impl WeylFit {
    pub fn relative_error(&self) -> f64 {
        (self.slope - self.weyl_constant).abs() / self.weyl_constant
    }
}

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    use std::f64::consts::PI;
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * PI / n as f64,
    }
}

/// Least-squares line through `(k^{2/n}, lambda_k Vol^{2/n})` for `k` in
/// `k_range`, with `eigenvalues[k] = lambda_k` and `lambda_0 = 0`.
pub fn weyl_fit(eigenvalues: &[f64], vol: f64, n: usize, k_range: RangeInclusive<usize>) -> Result<WeylFit> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if n == 0 || !(vol > 0.0) {
        return Err(Error::InvalidParameter("dimension and volume must be positive".into()));
    }
    if hi <= lo {
        return Err(Error::InvalidParameter(format!("degenerate fit range {lo}..={hi}")));
    }
    if hi >= eigenvalues.len() {
        return Err(Error::InvalidParameter(format!(
            "fit range ends at {hi} but only {} eigenvalues are available",
            eigenvalues.len()
        )));
    }
    let e = 2.0 / n as f64;
    let pts: Vec<(f64, f64)> =
        (lo..=hi).map(|k| ((k as f64).powf(e), eigenvalues[k] * vol.powf(e))).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let weyl_constant = 4.0 * std::f64::consts::PI.powi(2) / unit_ball_volume(n).powf(e);
    Ok(WeylFit { slope, intercept: my - slope * mx, weyl_constant, points: pts.len() })
}
