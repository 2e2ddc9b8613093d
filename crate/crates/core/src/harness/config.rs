//! Sweep description and its flat `key = value` file format.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::{CombineWeights, EstimatorConfig, Interpolator, SignalSpec};

/// Which parameter the sweep grid drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    /// Grid: correlation length in samples.
    CorrLength,
    /// Grid: one-sided SRRC span in symbols.
    FilterSpan,
    /// Grid: roll-off factor.
    RollOff,
    /// Grid: symbol rate in Hz.
    RateSweep,
    /// Grid: Es/N0 in dB.
    EsNoSweep,
    /// Grid: carrier offset in Hz; rows with and without compensation.
    FreqOffset,
    /// Grid: NorDig echo preset index.
    EchoChannels,
    /// Grid: zero-crossing numbers to report.
    ZcSweep,
    /// Grid: SRRC span; single pulse at ten times the base sample rate.
    TruncationOnly,
    /// Grid: symbol rate; single pulse with a 12000-symbol span.
    InterpolationOnly,
    /// Grid: Es/N0 in dB; adds combined rows for every weighting.
    CombineCompare,
}

pub const ALL_EXPERIMENTS: [Experiment; 11] = [
    Experiment::CorrLength,
    Experiment::FilterSpan,
    Experiment::RollOff,
    Experiment::RateSweep,
    Experiment::EsNoSweep,
    Experiment::FreqOffset,
    Experiment::EchoChannels,
    Experiment::ZcSweep,
    Experiment::TruncationOnly,
    Experiment::InterpolationOnly,
    Experiment::CombineCompare,
];

impl Experiment {
    pub fn label(self) -> &'static str {
        match self {
            Experiment::CorrLength => "corr_length",
            Experiment::FilterSpan => "filter_span",
            Experiment::RollOff => "roll_off",
            Experiment::RateSweep => "rate_sweep",
            Experiment::EsNoSweep => "esno_sweep",
            Experiment::FreqOffset => "freq_offset",
            Experiment::EchoChannels => "echo_channels",
            Experiment::ZcSweep => "zc_sweep",
            Experiment::TruncationOnly => "truncation_only",
            Experiment::InterpolationOnly => "interpolation_only",
            Experiment::CombineCompare => "combine_compare",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        ALL_EXPERIMENTS
            .iter()
            .copied()
            .find(|e| e.label().replace('_', "") == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub base: SignalSpec,
    pub estimator: EstimatorConfig,
    pub out_path: String,
    /// Correlation length; `None` uses every sample of `base.n_symbols`.
    pub n_samples: Option<usize>,
    /// Estimate on one isolated noiseless pulse instead of random data.
    pub single_pulse: bool,
    /// Outer symbol-rate axis; empty means `base.symbol_rate_hz`.
    pub rates: Vec<f64>,
    /// Outer channel axis; `None` is the direct path only.
    pub echo_presets: Vec<Option<usize>>,
    /// Interpolators evaluated on each trial; empty means the estimator's.
    pub interpolators: Vec<Interpolator>,
    /// Lower rate bound that sizes the lag window; `None` uses the trial's
    /// own symbol rate.
    pub min_rate_hz: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            experiment: Experiment::CorrLength,
            grid: vec![5e4],
            trials: 10,
            base: SignalSpec {
                esno_db: 15.0,
                ..SignalSpec::default()
            },
            estimator: EstimatorConfig::default(),
            out_path: "sweep.csv".into(),
            n_samples: None,
            single_pulse: false,
            rates: Vec::new(),
            echo_presets: vec![None],
            interpolators: Vec::new(),
            min_rate_hz: None,
        }
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

fn parse_num<T: FromStr>(value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse '{value}' as a number")))
}

/// Counts given in scientific notation, e.g. `5e6`.
fn parse_count(value: &str) -> Result<usize> {
    let v: f64 = parse_num(value)?;
    if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
        return Err(Error::InvalidParameter(format!("'{value}' is not a count")));
    }
    Ok(v as usize)
}

fn parse_bool(value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::InvalidParameter(format!("'{other}' is not a boolean"))),
    }
}

fn parse_db(value: &str) -> Result<f64> {
    match value.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "none" => Ok(f64::INFINITY),
        _ => parse_num(value),
    }
}

fn parse_echo(value: &str) -> Result<Option<usize>> {
    match value.trim().to_ascii_lowercase().as_str() {
        "none" | "direct" | "-" => Ok(None),
        v => parse_count(v).map(Some),
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidParameter("grid must not be empty".into()));
        }
        if self.echo_presets.is_empty() {
            return Err(Error::InvalidParameter("echo_presets must not be empty".into()));
        }
        if self.grid.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("grid holds NaN".into()));
        }
        Ok(())
    }

    /// Sets one field by name. Keys are the field names of this struct, of
    /// [`SignalSpec`] and of [`EstimatorConfig`].
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "experiment" => self.experiment = v.parse()?,
            "grid" => self.grid = parse_list(v, parse_db)?,
            "trials" => self.trials = parse_count(v)?,
            "out_path" => self.out_path = v.to_string(),
            "n_samples" => self.n_samples = Some(parse_count(v)?),
            "single_pulse" => self.single_pulse = parse_bool(v)?,
            "rates" => self.rates = parse_list(v, parse_num)?,
            "echo_presets" | "echo_preset" => self.echo_presets = parse_list(v, parse_echo)?,
            "interpolators" => self.interpolators = parse_list(v, str::parse)?,
            "min_rate_hz" => self.min_rate_hz = Some(parse_num(v)?),
            "symbol_rate_hz" => self.base.symbol_rate_hz = parse_num(v)?,
            "qam_order" => self.base.qam_order = parse_num(v)?,
            "rolloff" => self.base.rolloff = parse_num(v)?,
            "span_symbols" => self.base.span_symbols = parse_count(v)?,
            "n_symbols" => self.base.n_symbols = parse_count(v)?,
            "freq_offset_hz" => self.base.freq_offset_hz = parse_num(v)?,
            "esno_db" => self.base.esno_db = parse_db(v)?,
            "seed" => self.base.seed = parse_num(v)?,
            "sample_rate_hz" => self.base.sample_rate_hz = parse_num(v)?,
            "interpolator" => self.estimator.interpolator = v.parse()?,
            "max_zero_crossing" => self.estimator.max_zero_crossing = parse_count(v)?,
            "points_before" => self.estimator.points_before = parse_count(v)?,
            "points_after" => self.estimator.points_after = parse_count(v)?,
            "combine_weights" => self.estimator.combine_weights = v.parse::<CombineWeights>()?,
            "rolloff_hint" => {
                self.estimator.rolloff_hint = match v.to_ascii_lowercase().as_str() {
                    "none" | "" => None,
                    _ => Some(parse_num(v)?),
                }
            }
            "compensate_offset" => self.estimator.compensate_offset = parse_bool(v)?,
            other => return Err(Error::InvalidParameter(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Parses a config file. Blank lines and `#` comments are ignored; a
    /// `preset = <name>` line replaces everything set so far with that preset.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            let result = if key.trim() == "preset" {
                super::presets::preset(value.trim())
                    .map(|p| cfg = p)
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown preset '{}'", value.trim())))
            } else {
                cfg.set(key, value)
            };
            result.map_err(|e| Error::Config {
                line: line_no,
                message: e.to_string(),
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
