//! Carrier offset estimation from the lag-1 autocorrelation phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::acf::AcfEstimate;
use crate::error::{Error, Result};

/// f_o = ∠R̂(1) / (2π·Ts), in the principal range ±fs/2.
pub fn estimate_freq_offset(acf: &AcfEstimate) -> Result<f64> {
    let (r0, r1) = match acf.values.as_slice() {
        [r0, r1, ..] => (r0.re, *r1),
        _ => return Err(Error::DegenerateAcf("need at least lag 1")),
    };
    if !(r1.norm() >= 1e-12 * r0.abs()) || r0 <= 0.0 {
        return Err(Error::DegenerateAcf("lag-1 autocorrelation vanishes"));
    }
    Ok(r1.arg() / (2.0 * PI * acf.lag_spacing_s))
}

/// Rotates lag τ by e^{−j2π f_o τ Ts}.
pub fn compensate_acf(acf: &AcfEstimate, freq_offset_hz: f64) -> AcfEstimate {
    if freq_offset_hz == 0.0 {
        return acf.clone();
    }
    let turns_per_lag = freq_offset_hz * acf.lag_spacing_s;
    let values = acf
        .values
        .iter()
        .enumerate()
        .map(|(tau, v)| {
            let turns = (turns_per_lag * tau as f64).fract();
            v * Complex64::from_polar(1.0, -2.0 * PI * turns)
        })
        .collect();
    AcfEstimate {
        values,
        ..acf.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acf::estimate_acf;
    use crate::synth::apply_freq_offset;
    use crate::types::IqBuffer;

    fn tone(fo: f64) -> AcfEstimate {
        let ones = IqBuffer::new(vec![Complex64::new(1.0, 0.0); 20_000], 56e6).unwrap();
        estimate_acf(&apply_freq_offset(&ones, fo), 16).unwrap()
    }

    #[test]
    fn recovers_tone_offset() {
        for fo in [150e3, -150e3, 2.5e6] {
            let est = estimate_freq_offset(&tone(fo)).unwrap();
            assert!((est - fo).abs() < 1.0, "{fo}: {est}");
        }
    }

    #[test]
    fn compensation_makes_tone_real() {
        let acf = tone(150e3);
        let fo = estimate_freq_offset(&acf).unwrap();
        let c = compensate_acf(&acf, fo);
        assert!(c.values[1].arg().abs() < 1e-9);
        for v in &c.values {
            assert!(v.im.abs() < 1e-9);
        }
    }

    #[test]
    fn zero_compensation_is_identity() {
        let acf = tone(1e5);
        assert_eq!(compensate_acf(&acf, 0.0), acf);
    }

    #[test]
    fn compensation_round_trip() {
        let acf = tone(3e5);
        let back = compensate_acf(&compensate_acf(&acf, 12_345.0), -12_345.0);
        for (a, b) in acf.values.iter().zip(&back.values) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_lag_one() {
        let acf = AcfEstimate {
            values: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            lag_spacing_s: 1.0 / 56e6,
            n_samples_used: 10,
        };
        assert!(matches!(estimate_freq_offset(&acf), Err(Error::DegenerateAcf(_))));
    }
}
