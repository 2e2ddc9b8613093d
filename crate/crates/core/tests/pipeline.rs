//! End-to-end checks of synthesis followed by estimation.

use baudscope::harness::{metric_nrmse, metric_ppm};
use baudscope::{
    estimate_acf, estimate_freq_offset, estimate_from_acf, estimate_symbol_rate, max_lag_for,
    single_pulse, synth_baseband, EstimatorConfig, IqBuffer, SignalSpec,
};
use baudscope::synth::rc_pulse_analytic;

fn spec(rate: f64, n_samples: usize, esno_db: f64, seed: u64) -> SignalSpec {
    let base = SignalSpec {
        symbol_rate_hz: rate,
        esno_db,
        seed,
        ..SignalSpec::default()
    };
    SignalSpec {
        n_symbols: base.symbols_for_samples(n_samples),
        ..base
    }
}

fn signal(s: &SignalSpec, n_samples: usize) -> IqBuffer {
    synth_baseband(s).unwrap().truncated(n_samples)
}

fn crossings(p: usize) -> EstimatorConfig {
    EstimatorConfig {
        max_zero_crossing: p,
        ..EstimatorConfig::default()
    }
}

#[test]
fn noiseless_five_msym_within_100_ppm() {
    let s = spec(5e6, 5_000_000, f64::INFINITY, 1);
    let est = estimate_symbol_rate(&signal(&s, 5_000_000), &crossings(1), 1e6).unwrap();
    let ppm = 1e6 * (est.symbol_rate_hz - 5e6) / 5e6;
    assert!(ppm.abs() < 100.0, "rate error {ppm:.1} ppm");
}

#[test]
fn noiseless_seven_msym_first_and_fifth_crossing() {
    let s = spec(7e6, 5_000_000, f64::INFINITY, 1);
    let est = estimate_symbol_rate(&signal(&s, 5_000_000), &crossings(5), 1e6).unwrap();
    let z1 = est.per_zc_period_samples[0];
    let loc5 = 5.0 * est.per_zc_period_samples[4];
    assert!((z1 - 8.0).abs() < 1e-3, "crossing 1 at {z1}");
    assert!((loc5 - 40.0).abs() < 5e-3, "crossing 5 at {loc5}");
}

#[test]
fn acf_follows_raised_cosine() {
    let s = spec(7e6, 5_000_000, f64::INFINITY, 2);
    let acf = estimate_acf(&signal(&s, 5_000_000), 40).unwrap();
    let r0 = acf.values[0].re;
    for (tau, v) in acf.values.iter().enumerate() {
        let want = rc_pulse_analytic(0.15, 8.0, tau as f64);
        assert!((v.re / r0 - want).abs() < 2e-2, "lag {tau}: {} vs {want}", v.re / r0);
    }
}

#[test]
fn zero_offset_estimate_is_small() {
    let s = spec(7e6, 5_000_000, f64::INFINITY, 3);
    let acf = estimate_acf(&signal(&s, 5_000_000), 12).unwrap();
    let fo = estimate_freq_offset(&acf).unwrap();
    assert!(fo.abs() < 100.0, "residual offset {fo:.1} Hz");
}

#[test]
fn offset_compensation_preserves_estimate() {
    let n = 1_000_000;
    for rate in [1e6, 3e6, 7e6] {
        for fo in [50e3, 150e3] {
            let clean = spec(rate, n, f64::INFINITY, 4);
            let shifted = SignalSpec { freq_offset_hz: fo, ..clean.clone() };
            let cfg = crossings(1);
            let a = estimate_symbol_rate(&signal(&clean, n), &cfg, rate).unwrap();
            let b = estimate_symbol_rate(&signal(&shifted, n), &cfg, rate).unwrap();
            let ppm = metric_ppm(a.combined_period_samples, b.combined_period_samples);
            assert!(ppm.abs() < 10.0, "rate {rate}, f_o {fo}: {ppm:.2} ppm apart");
        }
    }
}

#[test]
fn offset_example_at_five_msym() {
    let n = 5_000_000;
    let clean = spec(5e6, n, f64::INFINITY, 1);
    let shifted = SignalSpec { freq_offset_hz: 150e3, ..clean.clone() };
    let cfg = crossings(1);
    let a = estimate_symbol_rate(&signal(&clean, n), &cfg, 1e6).unwrap();
    let b = estimate_symbol_rate(&signal(&shifted, n), &cfg, 1e6).unwrap();
    let err_a = (a.symbol_rate_hz - 5e6).abs();
    let err_b = (b.symbol_rate_hz - 5e6).abs();
    assert!(err_b <= 2.0 * err_a, "{err_b} vs {err_a}");
    assert!((b.freq_offset_hz - 150e3).abs() < 1.5e3, "f_o {}", b.freq_offset_hz);
}

#[test]
fn estimates_track_a_rate_continuum() {
    let n = 2_000_000;
    let rates: Vec<f64> = (0..5).map(|k| 5e6 + k as f64 * 1e4).collect();
    let est: Vec<f64> = rates
        .iter()
        .map(|&r| estimate_symbol_rate(&signal(&spec(r, n, f64::INFINITY, 5), n), &crossings(1), 1e6).unwrap().symbol_rate_hz)
        .collect();
    for w in est.windows(2) {
        assert!(w[1] > w[0], "{est:?}");
    }
}

#[test]
fn nrmse_improves_with_length_under_awgn() {
    let trials = 8;
    let nrmse = |n: usize| {
        let z: Vec<f64> = (0..trials)
            .map(|t| {
                let s = spec(7e6, n, 15.0, 10 + t);
                estimate_symbol_rate(&signal(&s, n), &crossings(1), 7e6).unwrap().combined_period_samples
            })
            .collect();
        metric_nrmse(8.0, &z).unwrap()
    };
    let v: Vec<f64> = [50_000, 500_000, 5_000_000].into_iter().map(nrmse).collect();
    assert!(v[1] <= v[0] && v[2] <= v[1], "{v:?}");
}

#[test]
fn truncation_error_is_rate_independent() {
    let ppm_at = |rate: f64| -> Vec<f64> {
        let s = SignalSpec {
            symbol_rate_hz: rate,
            sample_rate_hz: 560e6,
            ..SignalSpec::default()
        };
        let buf = single_pulse(&s).unwrap();
        let acf = estimate_acf(&buf, max_lag_for(rate, 560e6, 5)).unwrap();
        let est = estimate_from_acf(&acf, &crossings(5)).unwrap();
        let truth = s.true_period_samples();
        est.per_zc_period_samples.iter().map(|&z| metric_ppm(truth, z)).collect()
    };
    let reference = ppm_at(7e6);
    for rate in [1e6, 3e6, 5e6] {
        let got = ppm_at(rate);
        for (m, (g, r)) in got.iter().zip(&reference).enumerate() {
            assert!((g - r).abs() <= 0.1 * r.abs(), "rate {rate} crossing {}: {g:.2} vs {r:.2} ppm", m + 1);
        }
    }
}
