//! Blind symbol-rate estimation from zero crossings of the time-averaged
//! autocorrelation, with the signal synthesis and Monte Carlo harness used
//! to characterise it.
//!
//! ```
//! use baudscope::{estimate_symbol_rate, synth_baseband, EstimatorConfig, SignalSpec};
//!
//! let spec = SignalSpec { symbol_rate_hz: 7e6, n_symbols: 20_000, ..SignalSpec::default() };
//! let buf = synth_baseband(&spec)?;
//! let est = estimate_symbol_rate(&buf, &EstimatorConfig::default(), 1e6)?;
//! assert!((est.symbol_rate_hz / 7e6 - 1.0).abs() < 0.05);
//! # Ok::<(), baudscope::Error>(())
//! ```

pub mod acf;
pub mod combine;
pub mod error;
pub mod estimator;
pub mod foc;
pub mod harness;
pub mod iq;
pub mod spline;
pub mod synth;
pub mod types;
pub mod zcd;

pub use acf::{estimate_acf, max_lag_for, AcfEstimate};
pub use combine::{
    combine_estimates, weights_single, weights_slope_analytic, weights_slope_online,
    weights_slope_zc, weights_uniform_far,
};
pub use error::{Error, Result};
pub use estimator::{estimate_from_acf, estimate_symbol_rate};
pub use foc::{compensate_acf, estimate_freq_offset};
pub use harness::{run_sweep, Experiment, SweepConfig};
pub use iq::{ingest_iq, write_iq};
pub use synth::{single_pulse, single_pulse_received, synth_baseband, synth_received};
pub use types::{
    validate_spec, CombineWeights, EchoProfile, EchoTap, EstimatorConfig, Interpolator, IqBuffer,
    RateEstimate, SignalSpec,
};
pub use zcd::{locate_crossings, Bracket, ZeroCrossing};
