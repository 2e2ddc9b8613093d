//! Channel impairments: carrier offset, multipath echoes and AWGN.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::pulse::sinc;
use crate::types::{EchoProfile, IqBuffer};

/// Length of the windowed-sinc fractional delay filter.
pub const FRACTIONAL_DELAY_TAPS: usize = 64;
/// Kaiser window shape parameter of the fractional delay filter.
pub const KAISER_BETA: f64 = 8.0;

/// Multiplies sample n by e^{−j2π f_o n / fs}.
pub fn apply_freq_offset(buf: &IqBuffer, freq_offset_hz: f64) -> IqBuffer {
    if freq_offset_hz == 0.0 {
        return buf.clone();
    }
    let cycles_per_sample = freq_offset_hz / buf.sample_rate_hz;
    let samples = buf
        .samples
        .iter()
        .enumerate()
        .map(|(n, &y)| {
            let turns = (cycles_per_sample * n as f64).fract();
            y * Complex64::from_polar(1.0, -2.0 * PI * turns)
        })
        .collect();
    IqBuffer {
        samples,
        sample_rate_hz: buf.sample_rate_hz,
    }
}

/// Modified Bessel function of the first kind, order zero.
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= (half / k) * (half / k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// Kaiser-windowed sinc taps for a delay of `frac` ∈ [0, 1) samples.
/// Tap `i` multiplies x[n − i + HALF − 1] where HALF = taps/2.
fn fractional_delay_taps(frac: f64) -> [f64; FRACTIONAL_DELAY_TAPS] {
    let half = (FRACTIONAL_DELAY_TAPS / 2) as f64;
    let norm = bessel_i0(KAISER_BETA);
    let mut taps = [0.0; FRACTIONAL_DELAY_TAPS];
    for (i, tap) in taps.iter_mut().enumerate() {
        let x = i as f64 - (half - 1.0) - frac;
        let r = x / half;
        let w = if r.abs() <= 1.0 {
            bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / norm
        } else {
            0.0
        };
        *tap = sinc(x) * w;
    }
    let dc: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= dc);
    taps
}

/// Adds `amplitude · x(n − delay)` to `out`.
fn accumulate_delayed(out: &mut [Complex64], x: &[Complex64], amplitude: f64, delay_samples: f64) {
    let n = x.len() as i64;
    let whole = delay_samples.floor();
    let frac = delay_samples - whole;
    let whole = whole as i64;
    if frac < 1e-12 {
        for (i, y) in out.iter_mut().enumerate() {
            let src = i as i64 - whole;
            if (0..n).contains(&src) {
                *y += x[src as usize] * amplitude;
            }
        }
        return;
    }
    let taps = fractional_delay_taps(frac);
    let lead = (FRACTIONAL_DELAY_TAPS / 2) as i64 - 1;
    for (i, y) in out.iter_mut().enumerate() {
        let base = i as i64 - whole + lead;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &h) in taps.iter().enumerate() {
            let src = base - k as i64;
            if (0..n).contains(&src) {
                acc += x[src as usize] * h;
            }
        }
        *y += acc * amplitude;
    }
}

/// Sum of amplitude-scaled, delayed copies of `buf`, one per profile tap.
/// Output length equals input length.
pub fn apply_echo(buf: &IqBuffer, profile: &EchoProfile) -> IqBuffer {
    let mut out = vec![Complex64::new(0.0, 0.0); buf.len()];
    for tap in profile.taps() {
        let delay = tap.delay_s * buf.sample_rate_hz;
        accumulate_delayed(&mut out, &buf.samples, tap.amplitude, delay);
    }
    IqBuffer {
        samples: out,
        sample_rate_hz: buf.sample_rate_hz,
    }
}

/// Adds circular complex Gaussian noise at a symbol-level Es/N0.
///
/// The symbol energy is taken as the measured mean sample power times
/// `samples_per_symbol`, so the per-sample noise variance is
/// `P · sps · 10^(−EsNo/10)`.
pub fn add_awgn(buf: &IqBuffer, esno_db: f64, samples_per_symbol: f64, seed: u64) -> IqBuffer {
    if esno_db == f64::INFINITY {
        return buf.clone();
    }
    let variance = buf.mean_power() * samples_per_symbol * 10f64.powf(-esno_db / 10.0);
    let sigma = (variance / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = buf
        .samples
        .iter()
        .map(|&y| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            y + Complex64::new(re, im) * sigma
        })
        .collect();
    IqBuffer {
        samples,
        sample_rate_hz: buf.sample_rate_hz,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::EchoTap;

    fn ones(n: usize, fs: f64) -> IqBuffer {
        IqBuffer::new(vec![Complex64::new(1.0, 0.0); n], fs).unwrap()
    }

    fn ramp(n: usize) -> IqBuffer {
        let s = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        IqBuffer::new(s, 56e6).unwrap()
    }

    #[test]
    fn zero_offset_is_identity() {
        let b = ramp(100);
        assert_eq!(apply_freq_offset(&b, 0.0), b);
    }

    #[test]
    fn offset_matches_definition() {
        let b = ones(1000, 56e6);
        let r = apply_freq_offset(&b, 150e3);
        for (n, y) in r.samples.iter().enumerate() {
            let want = Complex64::from_polar(1.0, -2.0 * PI * 150e3 * n as f64 / 56e6);
            assert!((y - want).norm() < 1e-12);
        }
    }

    #[test]
    fn offset_round_trip() {
        let b = ramp(5000);
        let back = apply_freq_offset(&apply_freq_offset(&b, 150e3), -150e3);
        for (a, c) in b.samples.iter().zip(&back.samples) {
            assert!((a - c).norm() < 1e-12);
        }
    }

    #[test]
    fn direct_path_only_is_identity() {
        let b = ramp(300);
        let e = apply_echo(&b, &EchoProfile::direct());
        for (a, c) in b.samples.iter().zip(&e.samples) {
            assert!((a - c).norm() < 1e-9);
        }
    }

    #[test]
    fn integer_delay_on_impulse() {
        let mut s = vec![Complex64::new(0.0, 0.0); 64];
        s[10] = Complex64::new(1.0, 0.0);
        let b = IqBuffer::new(s, 1e6).unwrap();
        let profile = EchoProfile::new(vec![
            EchoTap { amplitude: 1.0, delay_s: 0.0 },
            EchoTap { amplitude: 0.25, delay_s: 7e-6 },
        ])
        .unwrap();
        let e = apply_echo(&b, &profile);
        let nonzero: Vec<usize> = e
            .samples
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(nonzero, vec![10, 17]);
        assert_eq!(e.samples[17], Complex64::new(0.25, 0.0));
    }

    #[test]
    fn fractional_delay_shifts_a_tone() {
        // a slow complex tone delayed by 5.6 samples
        let f = 0.01;
        let n = 400;
        let s: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * f * i as f64))
            .collect();
        let b = IqBuffer::new(s, 56e6).unwrap();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        accumulate_delayed(&mut out, &b.samples, 1.0, 5.6);
        for i in 100..300 {
            let want = Complex64::from_polar(1.0, 2.0 * PI * f * (i as f64 - 5.6));
            assert!((out[i] - want).norm() < 1e-4, "sample {i}");
        }
    }

    #[test]
    fn echo_is_linear() {
        let x = ramp(200);
        let y = IqBuffer::new(x.samples.iter().rev().copied().collect(), 56e6).unwrap();
        let p = EchoProfile::nordig(3).unwrap();
        let (a, b) = (0.7, -1.3);
        let mix = IqBuffer::new(
            x.samples.iter().zip(&y.samples).map(|(u, v)| u * a + v * b).collect(),
            56e6,
        )
        .unwrap();
        let lhs = apply_echo(&mix, &p);
        let ex = apply_echo(&x, &p);
        let ey = apply_echo(&y, &p);
        for i in 0..200 {
            let rhs = ex.samples[i] * a + ey.samples[i] * b;
            assert!((lhs.samples[i] - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn awgn_infinite_esno_is_identity() {
        let b = ramp(50);
        assert_eq!(add_awgn(&b, f64::INFINITY, 8.0, 3), b);
    }

    #[test]
    fn awgn_level_and_determinism() {
        let b = ones(1_000_000, 56e6);
        let noisy = add_awgn(&b, 15.0, 8.0, 11);
        let noise_power = noisy
            .samples
            .iter()
            .map(|y| (y - Complex64::new(1.0, 0.0)).norm_sqr())
            .sum::<f64>()
            / b.len() as f64;
        let snr_db = 10.0 * (1.0 / noise_power).log10();
        let want = 15.0 - 10.0 * 8f64.log10();
        assert!((snr_db - want).abs() < 0.1, "{snr_db} vs {want}");
        assert_eq!(add_awgn(&b.clone().truncated(1000), 15.0, 8.0, 11), add_awgn(&b.truncated(1000), 15.0, 8.0, 11));
    }
}
