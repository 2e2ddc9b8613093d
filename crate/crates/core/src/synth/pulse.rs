//! Raised-cosine family pulses.
//!
//! `srrc_unit` and `rc_pulse_analytic` use exact zeros at integer arguments of
//! the sinc so that sampled RC pulses land exactly on 0 at multiples of T.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative distance from a removable singularity below which the closed
/// form is replaced by its limit.
const SINGULAR_EPS: f64 = 1e-9;

/// sin(πx) with exact zeros at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x % 2.0;
    if r == 0.0 || r.abs() == 1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

/// cos(πx) with exact zeros at half-integers.
pub(crate) fn cos_pi(x: f64) -> f64 {
    let r = (x % 2.0).abs();
    if r == 0.5 || r == 1.5 {
        0.0
    } else {
        (PI * r).cos()
    }
}

/// Normalised sinc, sin(πx)/(πx).
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        sin_pi(x) / (PI * x)
    }
}

/// Square-root raised cosine at `u` symbol periods from the centre,
/// normalised so that ∫ g(u)² du = 1.
pub fn srrc_unit(rolloff: f64, u: f64) -> f64 {
    let a = rolloff;
    if u == 0.0 {
        return 1.0 - a + 4.0 * a / PI;
    }
    if a == 0.0 {
        return sinc(u);
    }
    let four_au = 4.0 * a * u;
    if (four_au.abs() - 1.0).abs() < SINGULAR_EPS {
        let q = PI / (4.0 * a);
        return a / 2f64.sqrt() * ((1.0 + 2.0 / PI) * q.sin() + (1.0 - 2.0 / PI) * q.cos());
    }
    let num = sin_pi(u * (1.0 - a)) + four_au * cos_pi(u * (1.0 + a));
    num / (PI * u * (1.0 - four_au * four_au))
}

/// Linear-phase FIR filter sampled at an integer number of taps per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct FirFilter {
    pub taps: Vec<f64>,
    pub taps_per_symbol: usize,
}

impl FirFilter {
    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t * t).sum()
    }

    /// Full linear self-convolution, `h * h`.
    pub fn self_convolution(&self) -> Vec<f64> {
        let n = self.taps.len();
        let mut out = vec![0.0; 2 * n - 1];
        for (i, &a) in self.taps.iter().enumerate() {
            for (j, &b) in self.taps.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        out
    }
}

/// Unit-energy SRRC with `2 * span * sps + 1` taps.
pub fn design_srrc(rolloff: f64, span_symbols: usize, samples_per_symbol: usize) -> Result<FirFilter> {
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(Error::BadRolloff(rolloff));
    }
    if span_symbols == 0 || samples_per_symbol < 2 {
        return Err(Error::InvalidParameter(format!(
            "SRRC needs span >= 1 and sps >= 2 (got {span_symbols}, {samples_per_symbol})"
        )));
    }
    let half = (span_symbols * samples_per_symbol) as i64;
    let sps = samples_per_symbol as f64;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|k| srrc_unit(rolloff, k as f64 / sps))
        .collect();
    let norm = taps.iter().map(|t| t * t).sum::<f64>().sqrt();
    taps.iter_mut().for_each(|t| *t /= norm);
    Ok(FirFilter {
        taps,
        taps_per_symbol: samples_per_symbol,
    })
}

/// Raised-cosine pulse (unit peak) at `t_samples` for a period of
/// `period_samples`.
pub fn rc_pulse_analytic(rolloff: f64, period_samples: f64, t_samples: f64) -> f64 {
    let x = t_samples / period_samples;
    if rolloff == 0.0 {
        return sinc(x);
    }
    let two_ax = 2.0 * rolloff * x;
    let den = 1.0 - two_ax * two_ax;
    if den.abs() < SINGULAR_EPS {
        return PI / 4.0 * sinc(1.0 / (2.0 * rolloff));
    }
    sinc(x) * cos_pi(rolloff * x) / den
}

/// Closed-form RC derivative, valid away from t = 0 and t = ±T/(2α).
fn rc_derivative_closed(a: f64, period: f64, t: f64) -> f64 {
    let x = t / period;
    let s = sin_pi(x);
    let c = cos_pi(x);
    let sa = sin_pi(a * x);
    let ca = cos_pi(a * x);
    // the four terms share the factor (4α²t²/T² − 1)
    let q = 4.0 * a * a * x * x - 1.0;
    a * s * sa / (t * q) - c * ca / (t * q) + period * s * ca / (PI * t * t * q)
        + 8.0 * a * a * s * ca / (PI * period * q * q)
}

/// Time derivative of the RC pulse. Removable singularities take the
/// symmetric limit with a step of 1e-6·T.
pub fn rc_derivative_analytic(rolloff: f64, period_samples: f64, t_samples: f64) -> f64 {
    let x = t_samples / period_samples;
    let q = 4.0 * rolloff * rolloff * x * x - 1.0;
    if t_samples == 0.0 || q.abs() < SINGULAR_EPS {
        let h = 1e-6 * period_samples;
        return 0.5
            * (rc_derivative_closed(rolloff, period_samples, t_samples + h)
                + rc_derivative_closed(rolloff, period_samples, t_samples - h));
    }
    rc_derivative_closed(rolloff, period_samples, t_samples)
}

/// Slope of the RC pulse at its m-th zero crossing, `g'(mT)`.
///
/// Uses the reduced form `(−1)^(m+1) cos(παm) / (T m (4α²m² − 1))` and
/// falls back to the full derivative where 4α²m² = 1.
pub fn rc_slope_at_crossing(rolloff: f64, period_samples: f64, m: usize) -> f64 {
    let mf = m as f64;
    let q = 4.0 * rolloff * rolloff * mf * mf - 1.0;
    if q.abs() < SINGULAR_EPS {
        return rc_derivative_analytic(rolloff, period_samples, mf * period_samples);
    }
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    sign * cos_pi(rolloff * mf) / (period_samples * mf * q)
}
