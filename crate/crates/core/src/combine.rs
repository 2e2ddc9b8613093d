//! Zero-crossing weights and the weighted period combiner.

use crate::error::{Error, Result};
use crate::synth::rc_slope_at_crossing;
use crate::zcd::ZeroCrossing;

fn check_rolloff(rolloff: f64) -> Result<()> {
    if rolloff > 0.0 && rolloff <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadRolloff(rolloff))
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidParameter("need at least one crossing".into()));
    }
    Ok(())
}

/// Scales non-negative raw weights to sum to 1.
fn normalise(raw: Vec<f64>) -> Result<Vec<f64>> {
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::InvalidParameter(format!("weights sum to {total}")));
    }
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// Weights A: squared RC slope at each crossing, for unit period.
pub fn weights_slope_analytic(rolloff: f64, p: usize) -> Result<Vec<f64>> {
    check_rolloff(rolloff)?;
    check_p(p)?;
    normalise((1..=p).map(|m| rc_slope_at_crossing(rolloff, 1.0, m).powi(2)).collect())
}

/// Weights C: squared slope scaled by m², `[cos(παm)/(4α²m²−1)]²`.
pub fn weights_slope_zc(rolloff: f64, p: usize) -> Result<Vec<f64>> {
    check_rolloff(rolloff)?;
    check_p(p)?;
    normalise(
        (1..=p)
            .map(|m| {
                let mf = m as f64;
                (mf * rc_slope_at_crossing(rolloff, 1.0, m)).powi(2)
            })
            .collect(),
    )
}

/// Weights B: squared chord slope measured at each located crossing.
pub fn weights_slope_online(crossings: &[ZeroCrossing]) -> Result<Vec<f64>> {
    if crossings.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut raw = Vec::with_capacity(crossings.len());
    for zc in crossings {
        if !(zc.slope.abs() >= 1e-12) {
            return Err(Error::DegenerateSlope {
                index: zc.index_m,
                slope: zc.slope,
            });
        }
        raw.push(zc.slope * zc.slope);
    }
    normalise(raw)
}

/// One-hot weight on crossing `m` (1-based) out of `p`.
pub fn weights_single(m: usize, p: usize) -> Result<Vec<f64>> {
    if m == 0 || m > p {
        return Err(Error::InvalidParameter(format!("crossing {m} outside 1..={p}")));
    }
    let mut w = vec![0.0; p];
    w[m - 1] = 1.0;
    Ok(w)
}

/// All weight on the farthest crossing.
pub fn weights_uniform_far(p: usize) -> Result<Vec<f64>> {
    check_p(p)?;
    weights_single(p, p)
}

/// Σ z(m)·W(m) / Σ W(m).
pub fn combine_estimates(periods: &[f64], weights: &[f64]) -> Result<f64> {
    if periods.is_empty() || weights.is_empty() {
        return Err(Error::EmptyInput);
    }
    if periods.len() != weights.len() {
        return Err(Error::InvalidParameter(format!(
            "{} periods but {} weights",
            periods.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter("weights must be finite and non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("weights are all zero".into()));
    }
    let acc: f64 = periods.iter().zip(weights).map(|(z, w)| z * w).sum();
    Ok(acc / total)
}
