//! Relative-error metrics on period estimates.

use crate::error::{Error, Result};

/// Relative error in parts per million, `1e6·(estimate − truth)/truth`.
pub fn metric_ppm(true_period: f64, estimate: f64) -> f64 {
    1e6 * (estimate - true_period) / true_period
}

/// Mean of squared relative errors.
pub fn metric_nmse(true_period: f64, estimates: &[f64]) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(true_period > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "true period must be positive, got {true_period}"
        )));
    }
    let sum: f64 = estimates
        .iter()
        .map(|z| ((z - true_period) / true_period).powi(2))
        .sum();
    Ok(sum / estimates.len() as f64)
}

pub fn metric_nrmse(true_period: f64, estimates: &[f64]) -> Result<f64> {
    metric_nmse(true_period, estimates).map(f64::sqrt)
}
