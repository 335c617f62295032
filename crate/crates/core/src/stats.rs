//! Ordinary least squares on small sample sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation of the samples from the fitted line.
    pub residual: f64,
}

impl LinearFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Least-squares line through `(x, y)` samples. Needs at least three samples
/// with at least two distinct abscissae.
pub fn least_squares(samples: &[(f64, f64)]) -> Result<LinearFit> {
    if samples.len() < 3 {
        return Err(Error::param(format!(
            "a fit needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxx: f64 = samples.iter().map(|s| (s.0 - mean_x).powi(2)).sum();
    if sxx <= f64::EPSILON * n {
        return Err(Error::param("fit abscissae are all equal"));
    }
    let sxy: f64 = samples
        .iter()
        .map(|s| (s.0 - mean_x) * (s.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = samples
        .iter()
        .map(|s| (s.1 - intercept - slope * s.0).powi(2))
        .sum();
    Ok(LinearFit {
        slope,
        intercept,
        residual: (sse / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let s: Vec<_> = (0..5).map(|j| (j as f64, 0.5 * j as f64 + 1.0)).collect();
        let fit = least_squares(&s).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-14);
        assert!((fit.intercept - 1.0).abs() < 1e-14);
        assert!(fit.residual < 1e-14);
    }

    #[test]
    fn too_few_samples() {
        assert!(least_squares(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(least_squares(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
    }
}
