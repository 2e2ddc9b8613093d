//! Shared fixtures for the criterion benches.

use baudscope::{synth_baseband, IqBuffer, SignalSpec};

/// Noisy 7 MSym/s QAM-256 at 56 MHz with about `n_samples` samples.
pub fn received(n_samples: usize, symbol_rate_hz: f64) -> IqBuffer {
    let base = SignalSpec {
        symbol_rate_hz,
        esno_db: 15.0,
        seed: 7,
        ..SignalSpec::default()
    };
    let spec = SignalSpec {
        n_symbols: base.symbols_for_samples(n_samples),
        ..base
    };
    synth_baseband(&spec)
        .expect("fixture spec is valid")
        .truncated(n_samples)
}

/// Spec for synthesis benches, `n_symbols` symbols at `symbol_rate_hz`.
pub fn spec(n_symbols: usize, symbol_rate_hz: f64) -> SignalSpec {
    SignalSpec {
        symbol_rate_hz,
        n_symbols,
        esno_db: 15.0,
        ..SignalSpec::default()
    }
}
