use std::fmt;

use crate::error::{CliError, CliResult};

/// Least-squares line through `(ln n, ln seconds)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
}

impl fmt::Display for SlopeFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "slope {:.4} intercept {:.4} rms residual {:.2e}",
            self.slope, self.intercept, self.residual
        )
    }
}

/// Ordinary least squares on `(ln n, ln t)`.
///
/// Needs at least three points with positive coordinates and at least two
/// distinct sizes.
pub fn slope_fit(points: &[(f64, f64)]) -> CliResult<SlopeFit> {
    if points.len() < 3 {
        return Err(CliError::Parse(format!(
            "slope fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, t)) = points.iter().find(|&&(n, t)| !(n > 0.0 && t > 0.0)) {
        return Err(CliError::Parse(format!(
            "slope fit needs positive values, got ({n}, {t})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) {
        return Err(CliError::Parse("slope fit needs at least two distinct sizes".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    Ok(SlopeFit {
        slope,
        intercept,
        residual: (ss / m).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_laws() {
        for k in [1.0, 3.0] {
            let pts: Vec<_> = [10.0, 40.0, 90.0, 700.0]
                .iter()
                .map(|&n: &f64| (n, 2e-6 * n.powf(k)))
                .collect();
            let f = slope_fit(&pts).unwrap();
            assert!((f.slope - k).abs() <= 1e-12);
            assert!(f.residual <= 1e-12);
        }
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(slope_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(slope_fit(&[(5.0, 1.0), (5.0, 2.0), (5.0, 3.0)]).is_err());
        assert!(slope_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
    }
}
