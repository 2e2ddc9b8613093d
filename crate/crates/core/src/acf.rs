//! Time-averaged autocorrelation over integer lags.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::types::IqBuffer;

/// Extra lags computed past the last expected crossing.
pub const LAG_GUARD: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct AcfEstimate {
    /// R̂(τ) for τ = 0..=max_lag.
    pub values: Vec<Complex64>,
    pub lag_spacing_s: f64,
    pub n_samples_used: usize,
}

impl AcfEstimate {
    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Writes `lag,re,im` rows.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_csv_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_to(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "lag,re,im")?;
        for (lag, v) in self.values.iter().enumerate() {
            writeln!(w, "{lag},{:e},{:e}", v.re, v.im)?;
        }
        Ok(())
    }
}

/// R̂(τ) = 1/(N−τ) Σ_{n<N−τ} y[n]·conj(y[n+τ]) for τ = 0..=max_lag.
///
/// Lags are evaluated in parallel; each lag sums in index order, so the
/// result does not depend on the thread count.
pub fn estimate_acf(buf: &IqBuffer, max_lag: usize) -> Result<AcfEstimate> {
    let n = buf.len();
    if max_lag < 1 {
        return Err(Error::InvalidParameter("max_lag must be >= 1".into()));
    }
    if n <= max_lag + 1 {
        return Err(Error::BufferTooShort {
            len: n,
            needed: max_lag + 2,
        });
    }
    let y = &buf.samples;
    let values = (0..=max_lag)
        .into_par_iter()
        .map(|lag| {
            let count = n - lag;
            let sum = y[..count]
                .iter()
                .zip(&y[lag..])
                .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj());
            sum / count as f64
        })
        .collect::<Vec<_>>();
    Ok(AcfEstimate {
        values,
        lag_spacing_s: buf.sample_period_s(),
        n_samples_used: n,
    })
}

/// Lags needed to reach crossing `p` of the slowest expected symbol rate,
/// plus [`LAG_GUARD`].
pub fn max_lag_for(min_symbol_rate_hz: f64, sample_rate_hz: f64, p: usize) -> usize {
    let lags = p as f64 * sample_rate_hz / min_symbol_rate_hz;
    // absorb representation error when the ratio is an exact integer
    (lags - 1e-9).ceil() as usize + LAG_GUARD
}
