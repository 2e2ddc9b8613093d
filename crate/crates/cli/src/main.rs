use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use baudscope::harness::{presets, rows_to_csv, run_sweep};
use baudscope::iq::{ingest_iq, write_iq};
use baudscope::synth::rc_pulse_analytic;
use baudscope::zcd::locate_crossings;
use baudscope::{
    estimate_acf, estimate_from_acf, max_lag_for, single_pulse, single_pulse_received,
    synth_baseband, synth_received, weights_slope_analytic, weights_slope_online, weights_slope_zc,
    AcfEstimate, CombineWeights, EchoProfile, EstimatorConfig, Interpolator, SignalSpec,
    SweepConfig,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "baudscope", version, about = "Blind symbol-rate estimation from ACF zero crossings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a test signal and write it as interleaved f32 IQ.
    Synth(SynthArgs),
    /// Estimate the symbol rate of an IQ file.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo sweep and write CSV.
    Sweep(SweepArgs),
    /// Print zero-crossing weight tables as CSV.
    Weights(WeightsArgs),
    /// List the named sweep presets.
    ListExperiments,
}

#[derive(Args)]
struct SynthArgs {
    /// Output IQ file.
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long, default_value_t = 7e6)]
    rate: f64,
    #[arg(long, default_value_t = 56e6)]
    fs: f64,
    #[arg(long, default_value_t = 0.15)]
    rolloff: f64,
    #[arg(long, default_value_t = 256)]
    order: u32,
    /// One-sided SRRC span in symbols.
    #[arg(long, default_value_t = 8)]
    span: usize,
    /// Number of output samples (ignored with --single-pulse).
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0.0)]
    offset: f64,
    /// Es/N0 in dB; omit for a noiseless signal.
    #[arg(long)]
    esno: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// NorDig echo preset 0..=9.
    #[arg(long)]
    echo: Option<usize>,
    /// Write one isolated pulse instead of random data.
    #[arg(long)]
    single_pulse: bool,
}

#[derive(Args)]
struct EstimatorArgs {
    #[arg(long, default_value = "spline")]
    interpolator: Interpolator,
    /// Number of zero crossings to locate.
    #[arg(long, default_value_t = 5)]
    zc: usize,
    #[arg(long, default_value_t = 4)]
    points_before: usize,
    #[arg(long, default_value_t = 1)]
    points_after: usize,
    /// zc<m>, a (slope), b (online slope), c (slope and crossing) or far.
    #[arg(long, default_value = "zc1")]
    weights: CombineWeights,
    /// Roll-off assumed by the a and c weightings.
    #[arg(long)]
    rolloff_hint: Option<f64>,
    /// Skip carrier-offset compensation.
    #[arg(long)]
    no_offset_compensation: bool,
}

impl EstimatorArgs {
    fn config(&self) -> EstimatorConfig {
        EstimatorConfig {
            interpolator: self.interpolator,
            max_zero_crossing: self.zc,
            points_before: self.points_before,
            points_after: self.points_after,
            combine_weights: self.weights,
            rolloff_hint: self.rolloff_hint,
            compensate_offset: !self.no_offset_compensation,
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// Interleaved little-endian f32 IQ file.
    input: PathBuf,
    #[arg(long, default_value_t = 56e6)]
    fs: f64,
    /// Lowest symbol rate considered; only sizes the lag window.
    #[arg(long, default_value_t = 1e6)]
    min_rate: f64,
    #[command(flatten)]
    estimator: EstimatorArgs,
    /// Also write the raw ACF as CSV.
    #[arg(long)]
    acf_csv: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` sweep description.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Start from a named preset (see list-experiments).
    #[arg(long)]
    preset: Option<String>,
    /// Override a field, e.g. --set trials=5. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output CSV path; `-` writes to stdout. Defaults to the config's out_path.
    #[arg(short, long)]
    out: Option<String>,
}

#[derive(Args)]
struct WeightsArgs {
    #[arg(long, default_value_t = 0.15)]
    rolloff: f64,
    #[arg(long, default_value_t = 5)]
    zc: usize,
    /// Period in samples of the RC pulse used for the online (chord) column.
    #[arg(long, default_value_t = 8.0)]
    period: f64,
}

fn synth(args: &SynthArgs) -> Result<()> {
    let base = SignalSpec {
        symbol_rate_hz: args.rate,
        qam_order: args.order,
        rolloff: args.rolloff,
        span_symbols: args.span,
        freq_offset_hz: args.offset,
        esno_db: args.esno.unwrap_or(f64::INFINITY),
        seed: args.seed,
        sample_rate_hz: args.fs,
        ..SignalSpec::default()
    };
    let spec = SignalSpec {
        n_symbols: base.symbols_for_samples(args.samples),
        ..base
    };
    let echo = args.echo.map(EchoProfile::nordig).transpose()?;
    let buf = match (args.single_pulse, &echo) {
        (true, None) => single_pulse(&spec)?,
        (true, Some(e)) => single_pulse_received(&spec, e)?,
        (false, None) => synth_baseband(&spec)?.truncated(args.samples),
        (false, Some(e)) => synth_received(&spec, e)?.truncated(args.samples),
    };
    write_iq(&args.out, &buf)?;
    println!("samples={}", buf.len());
    println!("sample_rate_hz={}", buf.sample_rate_hz);
    println!("true_period_samples={}", spec.true_period_samples());
    Ok(())
}

fn estimate(args: &EstimateArgs) -> Result<()> {
    let buf = ingest_iq(&args.input, args.fs)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let cfg = args.estimator.config();
    cfg.validate()?;
    if !(args.min_rate > 0.0) {
        bail!("--min-rate must be positive");
    }
    let max_lag = max_lag_for(args.min_rate, args.fs, cfg.max_zero_crossing)
        + cfg.points_after.saturating_sub(1);
    let acf = estimate_acf(&buf, max_lag)?;
    if let Some(path) = &args.acf_csv {
        acf.write_csv(path)?;
    }
    let est = estimate_from_acf(&acf, &cfg)?;
    let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
    let mut out = io::stdout().lock();
    writeln!(out, "symbol_rate_hz={}", est.symbol_rate_hz)?;
    writeln!(out, "combined_period_samples={}", est.combined_period_samples)?;
    writeln!(out, "freq_offset_hz={}", est.freq_offset_hz)?;
    writeln!(out, "per_zc_period_samples={}", list(&est.per_zc_period_samples))?;
    writeln!(out, "weights={}", list(&est.weights))?;
    writeln!(out, "interpolator={}", est.interpolator)?;
    writeln!(out, "combine_weights={}", est.combine_weights)?;
    writeln!(out, "n_samples={}", buf.len())?;
    writeln!(out, "symbol_rate_hz,combined_period_samples,freq_offset_hz,interpolator,combine_weights,per_zc_period_samples")?;
    writeln!(
        out,
        "{},{},{},{},{},{}",
        est.symbol_rate_hz,
        est.combined_period_samples,
        est.freq_offset_hz,
        est.interpolator,
        est.combine_weights,
        list(&est.per_zc_period_samples)
    )?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            SweepConfig::parse(&text)?
        }
        (None, Some(name)) => match baudscope::harness::preset(name) {
            Some(cfg) => cfg,
            None => bail!("unknown preset '{name}'; see list-experiments"),
        },
        (None, None) => bail!("give --config or --preset"),
    };
    for kv in &args.overrides {
        let (k, v) = kv.split_once('=').with_context(|| format!("--set expects KEY=VALUE, got '{kv}'"))?;
        cfg.set(k, v).with_context(|| format!("--set {kv}"))?;
    }
    cfg.validate()?;
    let rows = run_sweep(&cfg)?;
    let csv = rows_to_csv(&rows);
    match args.out.as_deref().unwrap_or(&cfg.out_path) {
        "-" => io::stdout().lock().write_all(csv.as_bytes())?,
        path => {
            fs::write(path, csv).with_context(|| format!("writing {path}"))?;
            eprintln!("wrote {} rows to {path}", rows.len());
        }
    }
    Ok(())
}

fn weights(args: &WeightsArgs) -> Result<()> {
    let a = weights_slope_analytic(args.rolloff, args.zc)?;
    let c = weights_slope_zc(args.rolloff, args.zc)?;
    let max_lag = (args.period * (args.zc + 1) as f64).ceil() as usize + 8;
    let acf = AcfEstimate {
        values: (0..=max_lag)
            .map(|t| rc_pulse_analytic(args.rolloff, args.period, t as f64).into())
            .collect(),
        lag_spacing_s: 1.0,
        n_samples_used: max_lag + 1,
    };
    let cfg = EstimatorConfig {
        max_zero_crossing: args.zc,
        ..EstimatorConfig::default()
    };
    let b = weights_slope_online(&locate_crossings(&acf, &cfg)?)?;
    let mut out = io::stdout().lock();
    writeln!(out, "zc_index,slope_analytic,slope_online,slope_zc")?;
    for m in 0..args.zc {
        writeln!(out, "{},{:.6},{:.6},{:.6}", m + 1, a[m], b[m], c[m])?;
    }
    Ok(())
}

fn list_experiments() -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "name,experiment,description")?;
    for p in presets() {
        writeln!(out, "{},{},\"{}\"", p.name, p.config().experiment, p.description)?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let result = match Cli::parse().command {
        Command::Synth(a) => synth(&a),
        Command::Estimate(a) => estimate(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Weights(a) => weights(&a),
        Command::ListExperiments => list_experiments(),
    };
    // a closed stdout (e.g. piped into `head`) is not an error
    match result {
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) => Ok(()),
        other => other,
    }
}
