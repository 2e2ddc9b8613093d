//! Named sweep recipes, one per published error curve.

use super::config::{Experiment, SweepConfig};
use crate::types::{CombineWeights, EstimatorConfig, Interpolator};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> SweepConfig,
}

impl Preset {
    pub fn config(&self) -> SweepConfig {
        SweepConfig {
            out_path: format!("{}.csv", self.name),
            ..(self.build)()
        }
    }
}

const BOTH: [Interpolator; 2] = [Interpolator::SplineNotAKnot, Interpolator::Linear];
const PULSE_RATES: [f64; 5] = [1e6, 3e6, 5e6, 6e6, 6.58e6];
const ZC_RATES: [f64; 7] = [1e6, 2e6, 3e6, 5e6, 6e6, 6.58e6, 7e6];
const WORST_ECHO: usize = 3;

fn sweep(experiment: Experiment, grid: Vec<f64>) -> SweepConfig {
    SweepConfig {
        experiment,
        grid,
        ..SweepConfig::default()
    }
}

fn noiseless_pulse(experiment: Experiment, grid: Vec<f64>) -> SweepConfig {
    let mut cfg = sweep(experiment, grid);
    cfg.single_pulse = true;
    cfg.trials = 1;
    cfg.base.esno_db = f64::INFINITY;
    cfg
}

fn first_crossing() -> EstimatorConfig {
    EstimatorConfig {
        max_zero_crossing: 1,
        ..EstimatorConfig::default()
    }
}

fn fine_rates() -> Vec<f64> {
    (0..=60).map(|k| 1e6 + k as f64 * 1e5).collect()
}

fn all_echoes() -> Vec<Option<usize>> {
    (0..10).map(Some).collect()
}

fn crossings(p: usize) -> Vec<f64> {
    (1..=p).map(|m| m as f64).collect()
}

pub fn presets() -> Vec<Preset> {
    vec![
        Preset {
            name: "corr-length",
            description: "error vs correlation length, spline and linear, 5 and 7 MSym/s",
            build: || SweepConfig {
                rates: vec![5e6, 7e6],
                interpolators: BOTH.to_vec(),
                estimator: first_crossing(),
                ..sweep(Experiment::CorrLength, vec![5e3, 5e4, 5e5, 5e6])
            },
        },
        Preset {
            name: "filter-span",
            description: "error vs SRRC span at 5e6-sample correlation",
            build: || SweepConfig {
                n_samples: Some(5_000_000),
                ..sweep(Experiment::FilterSpan, vec![2.0, 4.0, 6.0, 8.0, 12.0, 16.0])
            },
        },
        Preset {
            name: "echo-pulse-distortion",
            description: "single-pulse error under each echo preset at 7 MSym/s, first five crossings",
            build: || noiseless_pulse(Experiment::EchoChannels, (0..10).map(|k| k as f64).collect()),
        },
        Preset {
            name: "echo-presets-by-rate",
            description: "single-pulse ppm error for every echo preset at 1, 3, 5, 6, 6.58 MSym/s, first crossing",
            build: || SweepConfig {
                rates: PULSE_RATES.to_vec(),
                estimator: first_crossing(),
                ..noiseless_pulse(Experiment::EchoChannels, (0..10).map(|k| k as f64).collect())
            },
        },
        Preset {
            name: "echo-worst-vs-clean",
            description: "single-pulse ppm error with and without the worst echo across symbol rates",
            build: || SweepConfig {
                echo_presets: vec![None, Some(WORST_ECHO)],
                estimator: first_crossing(),
                ..noiseless_pulse(Experiment::RateSweep, PULSE_RATES.to_vec())
            },
        },
        Preset {
            name: "freq-offset",
            description: "150 kHz carrier offset with and without compensation at 1, 2, 7 MSym/s, 8e6 samples",
            build: || SweepConfig {
                rates: vec![1e6, 2e6, 7e6],
                n_samples: Some(8_000_000),
                ..sweep(Experiment::FreqOffset, vec![150e3])
            },
        },
        Preset {
            name: "rate-sweep",
            description: "error at 1.5, 2.5, 4.5, 6.5 MSym/s with 8e6-sample correlation",
            build: || SweepConfig {
                n_samples: Some(8_000_000),
                ..sweep(Experiment::RateSweep, vec![1.5e6, 2.5e6, 4.5e6, 6.5e6])
            },
        },
        Preset {
            name: "single-pulse-rates",
            description: "noiseless single-pulse error, spline vs linear, over the whole rate range",
            build: || SweepConfig {
                interpolators: BOTH.to_vec(),
                estimator: first_crossing(),
                ..noiseless_pulse(Experiment::RateSweep, fine_rates())
            },
        },
        Preset {
            name: "rolloff",
            description: "error vs roll-off, spline and linear, 5 MSym/s, 5e5 samples",
            build: || {
                let mut cfg = SweepConfig {
                    interpolators: BOTH.to_vec(),
                    ..sweep(Experiment::RollOff, vec![0.05, 0.15, 0.25, 0.35, 0.5])
                };
                cfg.base.symbol_rate_hz = 5e6;
                cfg.n_samples = Some(500_000);
                cfg
            },
        },
        Preset {
            name: "esno-short",
            description: "NMSE vs Es/N0, QPSK, 5000-sample correlation",
            build: || {
                let mut cfg = sweep(Experiment::EsNoSweep, (0..=6).map(|k| 5.0 * k as f64).collect());
                cfg.base.qam_order = 4;
                cfg.n_samples = Some(5_000);
                cfg.trials = 100;
                cfg.estimator.max_zero_crossing = 1;
                cfg
            },
        },
        Preset {
            name: "esno-long",
            description: "NMSE vs Es/N0, QPSK, 5.6e6-sample correlation",
            build: || {
                let mut cfg = sweep(Experiment::EsNoSweep, (0..=6).map(|k| 5.0 * k as f64).collect());
                cfg.base.qam_order = 4;
                cfg.n_samples = Some(5_600_000);
                cfg.estimator.max_zero_crossing = 1;
                cfg
            },
        },
        Preset {
            name: "corr-length-awgn-vs-echo",
            description: "first-crossing MSE vs observation length, AWGN only and worst echo, 7 MSym/s",
            build: || SweepConfig {
                echo_presets: vec![None, Some(WORST_ECHO)],
                estimator: first_crossing(),
                ..sweep(Experiment::CorrLength, vec![5e4, 5e5, 5e6])
            },
        },
        Preset {
            name: "zc-clean-pulse",
            description: "single-pulse ppm error per crossing 1..5, no channel, several rates",
            build: || SweepConfig {
                rates: ZC_RATES.to_vec(),
                ..noiseless_pulse(Experiment::ZcSweep, crossings(5))
            },
        },
        Preset {
            name: "zc-total-error",
            description: "single-pulse truncation plus interpolation error for crossings 1, 4, 5, 7 over the rate range",
            build: || {
                let mut cfg = SweepConfig {
                    interpolators: BOTH.to_vec(),
                    ..noiseless_pulse(Experiment::ZcSweep, vec![1.0, 4.0, 5.0, 7.0])
                };
                cfg.rates = fine_rates();
                cfg.estimator.max_zero_crossing = 7;
                cfg
            },
        },
        Preset {
            name: "truncation-only",
            description: "truncation error per crossing vs SRRC span, pulse sampled at ten times the base rate",
            build: || {
                let mut cfg = noiseless_pulse(Experiment::TruncationOnly, vec![4.0, 8.0, 12.0, 16.0]);
                cfg.estimator.max_zero_crossing = 7;
                cfg
            },
        },
        Preset {
            name: "interpolation-only",
            description: "interpolation error per crossing with a 12000-symbol span, several rates",
            build: || {
                let mut cfg = SweepConfig {
                    interpolators: BOTH.to_vec(),
                    ..noiseless_pulse(Experiment::InterpolationOnly, vec![1e6, 2e6, 3e6, 5e6, 6.5882e6, 7e6])
                };
                cfg.estimator.max_zero_crossing = 7;
                cfg
            },
        },
        Preset {
            name: "truncation-vs-interpolation",
            description: "truncation-only against interpolation-only error at crossings 1 and 7",
            build: || {
                let mut cfg = SweepConfig {
                    interpolators: BOTH.to_vec(),
                    rates: ZC_RATES.to_vec(),
                    ..noiseless_pulse(Experiment::TruncationOnly, vec![8.0])
                };
                cfg.estimator.max_zero_crossing = 7;
                cfg
            },
        },
        Preset {
            name: "zc-worst-echo-pulse",
            description: "single-pulse ppm error per crossing 1..5 through the worst echo, several rates",
            build: || SweepConfig {
                rates: ZC_RATES.to_vec(),
                echo_presets: vec![Some(WORST_ECHO)],
                ..noiseless_pulse(Experiment::ZcSweep, crossings(5))
            },
        },
        Preset {
            name: "zc-all-echoes-pulse",
            description: "single-pulse ppm error per crossing 1..5 for every echo preset, 7 MSym/s",
            build: || SweepConfig {
                echo_presets: all_echoes(),
                ..noiseless_pulse(Experiment::ZcSweep, crossings(5))
            },
        },
        Preset {
            name: "zc-awgn",
            description: "MSE per crossing 1..5, AWGN 15 dB, 5e6 samples, 7 MSym/s",
            build: || SweepConfig {
                n_samples: Some(5_000_000),
                ..sweep(Experiment::ZcSweep, crossings(5))
            },
        },
        Preset {
            name: "zc-echo",
            description: "MSE per crossing 1..5, worst echo plus AWGN 15 dB, 5e6 samples, 7 MSym/s",
            build: || SweepConfig {
                n_samples: Some(5_000_000),
                echo_presets: vec![Some(WORST_ECHO)],
                ..sweep(Experiment::ZcSweep, crossings(5))
            },
        },
        Preset {
            name: "combine-awgn",
            description: "combined-estimate MSE for every weighting, AWGN 15 dB, 5e6 samples, 7 MSym/s",
            build: || {
                let mut cfg = SweepConfig {
                    n_samples: Some(5_000_000),
                    ..sweep(Experiment::CombineCompare, vec![15.0])
                };
                cfg.estimator.combine_weights = CombineWeights::SlopeAndZc;
                cfg.estimator.rolloff_hint = Some(cfg.base.rolloff);
                cfg
            },
        },
        Preset {
            name: "combine-echo",
            description: "combined-estimate MSE for every weighting, worst echo plus AWGN 15 dB, 5e6 samples",
            build: || {
                let mut cfg = SweepConfig {
                    n_samples: Some(5_000_000),
                    echo_presets: vec![Some(WORST_ECHO)],
                    ..sweep(Experiment::CombineCompare, vec![15.0])
                };
                cfg.estimator.combine_weights = CombineWeights::SlopeAndZc;
                cfg.estimator.rolloff_hint = Some(cfg.base.rolloff);
                cfg
            },
        },
    ]
}

pub fn preset(name: &str) -> Option<SweepConfig> {
    presets().iter().find(|p| p.name == name).map(Preset::config)
}
