//! End-to-end symbol-rate estimator: ACF, offset removal, crossings, combining.

use crate::acf::{estimate_acf, max_lag_for, AcfEstimate};
use crate::combine::{
    combine_estimates, weights_single, weights_slope_analytic, weights_slope_online,
    weights_slope_zc, weights_uniform_far,
};
use crate::error::{Error, Result};
use crate::foc::{compensate_acf, estimate_freq_offset};
use crate::types::{CombineWeights, EstimatorConfig, IqBuffer, RateEstimate};
use crate::zcd::{locate_crossings, period_from_crossing, ZeroCrossing};

/// Estimates the symbol rate of `buf`. `min_rate_hz` only bounds how many
/// lags are computed; it does not constrain the estimate.
pub fn estimate_symbol_rate(
    buf: &IqBuffer,
    cfg: &EstimatorConfig,
    min_rate_hz: f64,
) -> Result<RateEstimate> {
    cfg.validate()?;
    if buf.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(min_rate_hz > 0.0) || !min_rate_hz.is_finite() {
        return Err(Error::InvalidParameter(format!("min_rate_hz must be positive, got {min_rate_hz}")));
    }
    // the guard covers the default single point after each bracket
    let max_lag = max_lag_for(min_rate_hz, buf.sample_rate_hz, cfg.max_zero_crossing)
        + cfg.points_after.saturating_sub(1);
    let acf = estimate_acf(buf, max_lag)?;
    estimate_from_acf(&acf, cfg)
}

/// Runs everything after the ACF, for callers that reuse one ACF across
/// several configurations.
pub fn estimate_from_acf(acf: &AcfEstimate, cfg: &EstimatorConfig) -> Result<RateEstimate> {
    cfg.validate()?;
    let (freq_offset_hz, compensated) = if cfg.compensate_offset {
        let fo = estimate_freq_offset(acf)?;
        (fo, compensate_acf(acf, fo))
    } else {
        (0.0, acf.clone())
    };
    let crossings = locate_crossings(&compensated, cfg)?;
    let periods: Vec<f64> = crossings.iter().map(period_from_crossing).collect();
    let weights = weights_for(cfg, &crossings)?;
    let combined = combine_estimates(&periods, &weights)?;
    let sample_rate_hz = 1.0 / acf.lag_spacing_s;
    Ok(RateEstimate {
        per_zc_period_samples: periods,
        weights,
        combined_period_samples: combined,
        symbol_rate_hz: sample_rate_hz / combined,
        freq_offset_hz,
        sample_rate_hz,
        interpolator: cfg.interpolator,
        combine_weights: cfg.combine_weights,
        slopes: crossings.iter().map(|z| z.slope).collect(),
    })
}

fn weights_for(cfg: &EstimatorConfig, crossings: &[ZeroCrossing]) -> Result<Vec<f64>> {
    let p = crossings.len();
    let hint = || cfg.rolloff_hint.ok_or(Error::InvalidParameter("rolloff_hint missing".into()));
    match cfg.combine_weights {
        CombineWeights::Single(m) => weights_single(m, p),
        CombineWeights::SlopeAnalytic => weights_slope_analytic(hint()?, p),
        CombineWeights::SlopeAndZc => weights_slope_zc(hint()?, p),
        CombineWeights::SlopeOnline => weights_slope_online(crossings),
        CombineWeights::UniformFar => weights_uniform_far(p),
    }
}

impl RateEstimate {
    /// Re-fuses the stored per-crossing periods under another weighting.
    /// `SlopeOnline` uses the recorded chord slopes.
    pub fn recombine(&self, weights: CombineWeights, rolloff_hint: Option<f64>) -> Result<RateEstimate> {
        let p = self.per_zc_period_samples.len();
        let hint = || rolloff_hint.ok_or(Error::InvalidParameter("rolloff_hint missing".into()));
        let w = match weights {
            CombineWeights::Single(m) => weights_single(m, p)?,
            CombineWeights::SlopeAnalytic => weights_slope_analytic(hint()?, p)?,
            CombineWeights::SlopeAndZc => weights_slope_zc(hint()?, p)?,
            CombineWeights::UniformFar => weights_uniform_far(p)?,
            CombineWeights::SlopeOnline => {
                let zc: Vec<ZeroCrossing> = self
                    .slopes
                    .iter()
                    .enumerate()
                    .map(|(i, &slope)| ZeroCrossing {
                        index_m: i + 1,
                        location_samples: self.per_zc_period_samples[i] * (i + 1) as f64,
                        bracket: crate::zcd::Bracket { lower: 0, upper: 1 },
                        slope,
                    })
                    .collect();
                weights_slope_online(&zc)?
            }
        };
        let combined = combine_estimates(&self.per_zc_period_samples, &w)?;
        Ok(RateEstimate {
            weights: w,
            combined_period_samples: combined,
            symbol_rate_hz: self.sample_rate_hz / combined,
            combine_weights: weights,
            ..self.clone()
        })
    }
}
