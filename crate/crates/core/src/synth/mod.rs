//! Test-signal generation: QAM through SRRC at arbitrary symbol rates,
//! followed by optional multipath, carrier offset and AWGN.

mod channel;
mod pulse;
mod qam;
mod resample;

pub use channel::{add_awgn, apply_echo, apply_freq_offset, FRACTIONAL_DELAY_TAPS, KAISER_BETA};
pub use pulse::{
    design_srrc, rc_derivative_analytic, rc_pulse_analytic, rc_slope_at_crossing, sinc, srrc_unit,
    FirFilter,
};
pub use qam::gen_qam_symbols;
pub use resample::{PulseShaper, RationalGrid, DEFAULT_LCM_CAP_HZ};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{validate_spec, EchoProfile, IqBuffer, SignalSpec};

/// Mixed into the spec seed to give the noise its own stream.
const NOISE_STREAM: u64 = 0xA5A5_5A5A_C3C3_3C3C;

/// Zero samples kept on each side of an isolated pulse.
const PULSE_GUARD: usize = 32;

fn noise_seed(seed: u64) -> u64 {
    seed ^ NOISE_STREAM
}

/// Shaped, trimmed QAM stream with no impairments.
fn shaped_stream(spec: &SignalSpec) -> Result<IqBuffer> {
    validate_spec(spec)?;
    let grid = RationalGrid::new(spec.symbol_rate_hz, spec.sample_rate_hz, DEFAULT_LCM_CAP_HZ)?;
    let shaper = PulseShaper::new(spec.rolloff, spec.span_symbols, grid)?;
    if spec.n_symbols <= 2 * spec.span_symbols + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} symbols do not survive trimming {} symbols from each end",
            spec.n_symbols, spec.span_symbols
        )));
    }
    let symbols = gen_qam_symbols(spec.qam_order, spec.n_symbols, spec.seed)?;
    let (up, down) = (grid.up as i64, grid.down as i64);
    let span = spec.span_symbols as i64;
    // keep outputs whose every contributing symbol exists
    let first = (span * up + down - 1) / down;
    let last = ((spec.n_symbols as i64 - 1 - span) * up) / down;
    let len = (last - first + 1).max(0) as usize;
    let samples = shaper.shape(&symbols, first as usize, len);
    IqBuffer::new(samples, spec.sample_rate_hz)
}

/// Applies echo, carrier offset and noise in receiver order.
fn impair(buf: IqBuffer, spec: &SignalSpec, echo: Option<&EchoProfile>) -> IqBuffer {
    let buf = match echo {
        Some(p) => apply_echo(&buf, p),
        None => buf,
    };
    let buf = apply_freq_offset(&buf, spec.freq_offset_hz);
    add_awgn(&buf, spec.esno_db, spec.oversampling(), noise_seed(spec.seed))
}

/// Σ_k a_k g(t − kT) sampled at `spec.sample_rate_hz`, then carrier offset
/// and AWGN as given in the spec. Filter transients (`span_symbols` on each
/// end) are trimmed.
pub fn synth_baseband(spec: &SignalSpec) -> Result<IqBuffer> {
    Ok(impair(shaped_stream(spec)?, spec, None))
}

/// Same as [`synth_baseband`] with a multipath channel inserted before the
/// carrier offset and noise.
pub fn synth_received(spec: &SignalSpec, echo: &EchoProfile) -> Result<IqBuffer> {
    Ok(impair(shaped_stream(spec)?, spec, Some(echo)))
}

/// One isolated unit symbol through the SRRC, sampled at the output rate.
///
/// The buffer covers the full pulse support plus a short zero guard; no data
/// modulation, offset or noise is applied.
pub fn single_pulse(spec: &SignalSpec) -> Result<IqBuffer> {
    validate_spec(spec)?;
    let grid = RationalGrid::new(spec.symbol_rate_hz, spec.sample_rate_hz, DEFAULT_LCM_CAP_HZ)?;
    let shaper = PulseShaper::new(spec.rolloff, spec.span_symbols, grid)?;
    let down = grid.down as i64;
    let guard = PULSE_GUARD as i64;
    // first output sample at or before the leading edge, less the guard
    let centre = shaper.support() + guard * down;
    let len = ((2 * centre) / down + 1) as usize;
    let samples = shaper.single(centre, len);
    IqBuffer::new(samples, spec.sample_rate_hz)
}

/// Isolated pulse through a multipath channel. The buffer is zero-extended
/// first so the longest echo is not cut off.
pub fn single_pulse_received(spec: &SignalSpec, echo: &EchoProfile) -> Result<IqBuffer> {
    let mut buf = single_pulse(spec)?;
    let max_delay = echo
        .taps()
        .iter()
        .map(|t| t.delay_s)
        .fold(0.0, f64::max);
    let extra = (max_delay * spec.sample_rate_hz).ceil() as usize + FRACTIONAL_DELAY_TAPS;
    buf.samples.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), extra));
    Ok(apply_echo(&buf, echo))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(rate: f64) -> SignalSpec {
        SignalSpec {
            symbol_rate_hz: rate,
            n_symbols: 4000,
            ..SignalSpec::default()
        }
    }

    #[test]
    fn integer_rate_length() {
        let s = spec(7e6);
        let b = synth_baseband(&s).unwrap();
        // (n_symbols − 1 − 2·span)·8 + 1 samples survive trimming
        assert_eq!(b.len(), (4000 - 1 - 16) * 8 + 1);
        assert_eq!(b.sample_rate_hz, 56e6);
    }

    #[test]
    fn fractional_rate_spacing() {
        let s = spec(6.5882e6);
        let b = synth_baseband(&s).unwrap();
        let expect = (4000.0 - 1.0 - 16.0) * 8.5;
        assert!((b.len() as f64 - expect).abs() < 2.0, "{}", b.len());
    }

    #[test]
    fn power_is_rate_invariant() {
        let mut powers = Vec::new();
        for rate in [1e6, 3e6, 5e6, 6.5882e6, 7e6] {
            let mut s = spec(rate);
            s.n_symbols = 20_000;
            s.qam_order = 4;
            powers.push(synth_baseband(&s).unwrap().mean_power());
        }
        for p in &powers {
            assert!((p - 1.0).abs() < 0.01, "{powers:?}");
        }
    }

    #[test]
    fn deterministic() {
        let mut s = spec(5e6);
        s.esno_db = 10.0;
        s.freq_offset_hz = 1e5;
        assert_eq!(synth_baseband(&s).unwrap(), synth_baseband(&s).unwrap());
    }

    #[test]
    fn matches_direct_convolution_at_integer_rate() {
        let s = SignalSpec {
            n_symbols: 64,
            ..spec(7e6)
        };
        let b = synth_baseband(&s).unwrap();
        let symbols = gen_qam_symbols(s.qam_order, s.n_symbols, s.seed).unwrap();
        let fir = design_srrc(s.rolloff, s.span_symbols, 8).unwrap();
        let gain = 8f64.sqrt();
        // first kept sample is index span·8 of the zero-padded stream
        for (i, y) in b.samples.iter().enumerate() {
            let n = i as i64 + 64;
            let mut want = Complex64::new(0.0, 0.0);
            for (k, a) in symbols.iter().enumerate() {
                let off = n - 8 * k as i64 + 64;
                if (0..fir.len() as i64).contains(&off) {
                    want += a * fir.taps[off as usize] * gain;
                }
            }
            assert!((y - want).norm() < 1e-12, "sample {i}");
        }
    }

    #[test]
    fn rejects_invalid_spec() {
        let s = spec(8e6);
        assert!(matches!(synth_baseband(&s), Err(Error::OversamplingTooLow { .. })));
    }

    #[test]
    fn single_pulse_peak_and_symmetry() {
        let s = spec(7e6);
        let p = single_pulse(&s).unwrap();
        let (imax, _) = p
            .samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.re.total_cmp(&b.1.re))
            .unwrap();
        assert_eq!(imax, p.len() / 2);
        for k in 1..p.len() / 2 {
            assert_eq!(p.samples[imax - k], p.samples[imax + k]);
        }
    }

    #[test]
    fn huge_span_pulse_uses_closed_form() {
        let s = SignalSpec {
            span_symbols: 12_000,
            ..spec(6.5882e6)
        };
        let p = single_pulse(&s).unwrap();
        assert!(p.len() > 24_000 * 8);
    }
}
