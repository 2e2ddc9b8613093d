//! Monte Carlo sweep runner producing flat, plot-ready CSV.

mod config;
mod metrics;
mod presets;

pub use config::{Experiment, SweepConfig, ALL_EXPERIMENTS};
pub use metrics::{metric_nmse, metric_nrmse, metric_ppm};
pub use presets::{preset, presets, Preset};

use std::fmt::Write as _;
use std::fs;

use rayon::prelude::*;

use crate::acf::{estimate_acf, max_lag_for};
use crate::error::{Error, Result};
use crate::estimator::estimate_from_acf;
use crate::synth::{single_pulse, single_pulse_received, synth_baseband, synth_received};
use crate::types::{CombineWeights, EchoProfile, EstimatorConfig, Interpolator, IqBuffer, SignalSpec};

/// Environment variable capping the sweep's worker threads.
pub const THREADS_ENV: &str = "BAUDSCOPE_THREADS";

/// Span used when isolating interpolation error.
pub const INTERPOLATION_ONLY_SPAN: usize = 12_000;

/// Sample-rate multiplier used when isolating truncation error.
pub const TRUNCATION_ONLY_UPSAMPLE: f64 = 10.0;

pub const CSV_HEADER: &str = "experiment,grid_value,interpolator,zc_index,weights_mode,trials,\
nmse,nrmse,mean_ppm,max_ppm,symbol_rate_hz,echo_preset,offset_compensation,failed";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub nmse: f64,
    pub nrmse: f64,
    pub mean_ppm: f64,
    /// Signed ppm error of largest magnitude.
    pub max_ppm: f64,
}

/// One aggregated CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub experiment: Experiment,
    pub grid_value: f64,
    pub interpolator: Interpolator,
    /// Crossing number, or 0 for a combined estimate.
    pub zc_index: usize,
    pub weights_mode: String,
    pub trials: usize,
    /// `None` when every trial failed.
    pub stats: Option<ErrorStats>,
    pub symbol_rate_hz: f64,
    pub echo_preset: Option<usize>,
    pub offset_compensation: bool,
    pub failed: usize,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let (nmse, nrmse, mean, max) = match &self.stats {
            Some(s) => (
                s.nmse.to_string(),
                s.nrmse.to_string(),
                s.mean_ppm.to_string(),
                s.max_ppm.to_string(),
            ),
            None => ("ERR".into(), "ERR".into(), "ERR".into(), "ERR".into()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.grid_value,
            self.interpolator,
            self.zc_index,
            self.weights_mode,
            self.trials,
            nmse,
            nrmse,
            mean,
            max,
            self.symbol_rate_hz,
            self.echo_preset.map_or("none".to_string(), |k| k.to_string()),
            if self.offset_compensation { "on" } else { "off" },
            self.failed,
        )
    }
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.to_csv());
    }
    out
}

/// Fully resolved recipe for one (rate, echo, grid value) cell.
#[derive(Debug, Clone)]
struct Cell {
    spec: SignalSpec,
    echo: Option<usize>,
    n_samples: Option<usize>,
    single_pulse: bool,
    /// Crossings reported as individual rows.
    zc_rows: Vec<usize>,
    /// Weightings reported as combined rows.
    combined: Vec<CombineWeights>,
    compensation: Vec<bool>,
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v.is_finite() {
        Ok(v as usize)
    } else {
        Err(Error::InvalidParameter(format!("{what} grid value {v} is not a positive count")))
    }
}

fn build_cell(cfg: &SweepConfig, rate: f64, echo: Option<usize>, v: f64) -> Result<Cell> {
    let p = cfg.estimator.max_zero_crossing;
    let mut cell = Cell {
        spec: SignalSpec {
            symbol_rate_hz: rate,
            ..cfg.base.clone()
        },
        echo,
        n_samples: cfg.n_samples,
        single_pulse: cfg.single_pulse,
        zc_rows: (1..=p).collect(),
        combined: match cfg.estimator.combine_weights {
            CombineWeights::Single(_) => Vec::new(),
            w => vec![w],
        },
        compensation: vec![cfg.estimator.compensate_offset],
    };
    match cfg.experiment {
        Experiment::CorrLength => cell.n_samples = Some(as_count(v, "correlation length")?),
        Experiment::FilterSpan => cell.spec.span_symbols = as_count(v, "span")?,
        Experiment::RollOff => cell.spec.rolloff = v,
        Experiment::RateSweep => cell.spec.symbol_rate_hz = v,
        Experiment::EsNoSweep => cell.spec.esno_db = v,
        Experiment::FreqOffset => {
            cell.spec.freq_offset_hz = v;
            cell.compensation = vec![true, false];
        }
        Experiment::EchoChannels => {
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::InvalidParameter(format!("echo preset {v}")));
            }
            cell.echo = Some(v as usize);
        }
        Experiment::ZcSweep => {
            let m = as_count(v, "crossing")?;
            if m > p {
                return Err(Error::InvalidParameter(format!(
                    "crossing {m} exceeds max_zero_crossing {p}"
                )));
            }
            cell.zc_rows = vec![m];
        }
        Experiment::TruncationOnly => {
            cell.spec.span_symbols = as_count(v, "span")?;
            cell.spec.sample_rate_hz *= TRUNCATION_ONLY_UPSAMPLE;
            cell.single_pulse = true;
        }
        Experiment::InterpolationOnly => {
            cell.spec.symbol_rate_hz = v;
            cell.spec.span_symbols = INTERPOLATION_ONLY_SPAN;
            cell.single_pulse = true;
        }
        Experiment::CombineCompare => {
            cell.spec.esno_db = v;
            cell.combined = vec![
                CombineWeights::SlopeAnalytic,
                CombineWeights::SlopeOnline,
                CombineWeights::SlopeAndZc,
                CombineWeights::UniformFar,
            ];
        }
    }
    Ok(cell)
}

fn synthesize(cell: &Cell, seed: u64) -> Result<IqBuffer> {
    let mut spec = SignalSpec {
        seed,
        ..cell.spec.clone()
    };
    let echo = cell.echo.map(EchoProfile::nordig).transpose()?;
    if cell.single_pulse {
        return match &echo {
            Some(e) => single_pulse_received(&spec, e),
            None => single_pulse(&spec),
        };
    }
    if let Some(n) = cell.n_samples {
        spec.n_symbols = spec.symbols_for_samples(n);
    }
    let buf = match &echo {
        Some(e) => synth_received(&spec, e)?,
        None => synth_baseband(&spec)?,
    };
    Ok(match cell.n_samples {
        Some(n) => buf.truncated(n),
        None => buf,
    })
}

/// Per-trial outcome: for each (interpolator, compensation) variant, the
/// per-crossing periods and the combined periods, or the failure.
type TrialOutcome = Vec<Result<(Vec<f64>, Vec<Result<f64>>)>>;

fn run_trial(cfg: &SweepConfig, cell: &Cell, interps: &[Interpolator], seed: u64) -> TrialOutcome {
    let variants = interps.len() * cell.compensation.len();
    let fail_all = |e: Error| -> TrialOutcome {
        let msg = e.to_string();
        (0..variants)
            .map(|_| Err(Error::InvalidParameter(msg.clone())))
            .collect()
    };
    let buf = match synthesize(cell, seed) {
        Ok(b) => b,
        Err(e) => return fail_all(e),
    };
    let p = cfg.estimator.max_zero_crossing;
    let min_rate = cfg.min_rate_hz.unwrap_or(cell.spec.symbol_rate_hz);
    let max_lag = max_lag_for(min_rate, buf.sample_rate_hz, p)
        + cfg.estimator.points_after.saturating_sub(1);
    let acf = match estimate_acf(&buf, max_lag) {
        Ok(a) => a,
        Err(e) => return fail_all(e),
    };
    let hint = cfg.estimator.rolloff_hint.or(Some(cell.spec.rolloff));
    let mut out = Vec::with_capacity(variants);
    for &interpolator in interps {
        for &compensate_offset in &cell.compensation {
            let est_cfg = EstimatorConfig {
                interpolator,
                compensate_offset,
                combine_weights: CombineWeights::Single(1),
                ..cfg.estimator.clone()
            };
            out.push(estimate_from_acf(&acf, &est_cfg).map(|est| {
                let combined = cell
                    .combined
                    .iter()
                    .map(|&w| est.recombine(w, hint).map(|r| r.combined_period_samples))
                    .collect();
                (est.per_zc_period_samples, combined)
            }));
        }
    }
    out
}

fn stats(truth: f64, estimates: &[f64]) -> Result<Option<ErrorStats>> {
    if estimates.is_empty() {
        return Ok(None);
    }
    let nmse = metric_nmse(truth, estimates)?;
    let ppm: Vec<f64> = estimates.iter().map(|&z| metric_ppm(truth, z)).collect();
    let mean_ppm = ppm.iter().sum::<f64>() / ppm.len() as f64;
    let max_ppm = ppm
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    Ok(Some(ErrorStats {
        nmse,
        nrmse: nmse.sqrt(),
        mean_ppm,
        max_ppm,
    }))
}

fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::InvalidParameter(format!("{THREADS_ENV}='{v}' is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs every (rate, echo, grid value) cell of the sweep. Trials within a
/// cell run concurrently and use seed `base.seed + trial`; rows come out in
/// a fixed order, so the CSV is reproducible.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let run = || sweep_rows(cfg);
    match threads_from_env()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(run),
        None => run(),
    }
}

fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let rates = if cfg.rates.is_empty() {
        vec![cfg.base.symbol_rate_hz]
    } else {
        cfg.rates.clone()
    };
    let interps = if cfg.interpolators.is_empty() {
        vec![cfg.estimator.interpolator]
    } else {
        cfg.interpolators.clone()
    };
    let mut rows = Vec::new();
    for &rate in &rates {
        for &echo in &cfg.echo_presets {
            // crossing sweeps share one set of trials across the grid
            let cells: Vec<(Option<f64>, Cell)> = if cfg.experiment == Experiment::ZcSweep {
                let mut cell = build_cell(cfg, rate, echo, cfg.grid[0])?;
                cell.zc_rows.clear();
                for &v in &cfg.grid {
                    cell.zc_rows.extend(build_cell(cfg, rate, echo, v)?.zc_rows);
                }
                vec![(None, cell)]
            } else {
                cfg.grid
                    .iter()
                    .map(|&v| build_cell(cfg, rate, echo, v).map(|c| (Some(v), c)))
                    .collect::<Result<_>>()?
            };
            for (grid_value, cell) in cells {
                let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
                    .into_par_iter()
                    .map(|t| run_trial(cfg, &cell, &interps, cfg.base.seed.wrapping_add(t as u64)))
                    .collect();
                let truth = cell.spec.true_period_samples();
                let row = |interpolator, comp, zc_index, weights_mode: String, est: Vec<Option<f64>>| {
                    let ok: Vec<f64> = est.iter().flatten().copied().collect();
                    stats(truth, &ok).map(|stats| SweepRow {
                        experiment: cfg.experiment,
                        grid_value: grid_value.unwrap_or(zc_index as f64),
                        interpolator,
                        zc_index,
                        weights_mode,
                        trials: cfg.trials,
                        stats,
                        symbol_rate_hz: cell.spec.symbol_rate_hz,
                        echo_preset: cell.echo,
                        offset_compensation: comp,
                        failed: est.len() - ok.len(),
                    })
                };
                let mut variant = 0;
                for &interp in &interps {
                    for &comp in &cell.compensation {
                        let per_trial: Vec<Option<&(Vec<f64>, Vec<Result<f64>>)>> =
                            outcomes.iter().map(|o| o[variant].as_ref().ok()).collect();
                        for &m in &cell.zc_rows {
                            let est = per_trial.iter().map(|t| t.map(|(z, _)| z[m - 1])).collect();
                            rows.push(row(interp, comp, m, format!("zc{m}"), est)?);
                        }
                        for (k, w) in cell.combined.iter().enumerate() {
                            let est = per_trial
                                .iter()
                                .map(|t| t.and_then(|(_, c)| c[k].as_ref().ok().copied()))
                                .collect();
                            rows.push(row(interp, comp, 0, w.label(), est)?);
                        }
                        variant += 1;
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Runs the sweep and writes the CSV to `cfg.out_path`.
pub fn run_sweep_to_file(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(cfg)?;
    fs::write(&cfg.out_path, rows_to_csv(&rows))?;
    Ok(rows)
}
