//! Exact rational-rate pulse shaping.
//!
//! Symbols sit on an intermediate grid of `up` samples per symbol whose rate
//! is the least common multiple of the symbol rate and the sample rate; the
//! output keeps every `down`-th intermediate sample. Only the polyphase taps
//! that land on output samples are ever evaluated.

use num_complex::Complex64;
use rayon::prelude::*;

use super::pulse::{design_srrc, srrc_unit};
use crate::error::{Error, Result};

/// Highest permitted intermediate (LCM) rate.
pub const DEFAULT_LCM_CAP_HZ: f64 = 1e15;

/// Largest polyphase table kept in memory; beyond this taps are computed
/// from the closed-form pulse.
const TABLE_LIMIT: u64 = 1 << 22;

const CHUNK: usize = 8192;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Integer up/down factors relating the symbol rate to the sample rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalGrid {
    /// Intermediate samples per symbol.
    pub up: u64,
    /// Intermediate samples per output sample.
    pub down: u64,
}

impl RationalGrid {
    /// Both rates are rounded to 1 Hz before the LCM is taken.
    pub fn new(symbol_rate_hz: f64, sample_rate_hz: f64, cap_hz: f64) -> Result<Self> {
        let baud = symbol_rate_hz.round();
        let fs = sample_rate_hz.round();
        if !(baud >= 1.0 && fs >= 1.0) || baud > u64::MAX as f64 || fs > u64::MAX as f64 {
            return Err(Error::InvalidParameter(format!(
                "rates must be at least 1 Hz (symbol {symbol_rate_hz}, sample {sample_rate_hz})"
            )));
        }
        let (baud, fs) = (baud as u64, fs as u64);
        let g = gcd(baud, fs);
        let lcm_hz = (baud / g) as f64 * fs as f64;
        if lcm_hz > cap_hz {
            return Err(Error::ResamplingOverflow { lcm_hz, cap_hz });
        }
        Ok(RationalGrid {
            up: fs / g,
            down: baud / g,
        })
    }

    pub fn samples_per_symbol(&self) -> f64 {
        self.up as f64 / self.down as f64
    }

    pub fn is_integer(&self) -> bool {
        self.down == 1
    }
}

/// SRRC evaluated on a [`RationalGrid`], scaled so that unit-energy symbols
/// give unit average output power.
#[derive(Debug, Clone)]
pub struct PulseShaper {
    rolloff: f64,
    grid: RationalGrid,
    /// One-sided support in intermediate samples.
    support: i64,
    table: Option<Vec<f64>>,
    scale: f64,
}

impl PulseShaper {
    pub fn new(rolloff: f64, span_symbols: usize, grid: RationalGrid) -> Result<Self> {
        if !(0.0..=1.0).contains(&rolloff) {
            return Err(Error::BadRolloff(rolloff));
        }
        let support = span_symbols as u64 * grid.up;
        if 2 * support + 1 <= TABLE_LIMIT {
            let fir = design_srrc(rolloff, span_symbols, grid.up as usize)?;
            let gain = (grid.up as f64).sqrt();
            let table = fir.taps.iter().map(|t| t * gain).collect();
            Ok(PulseShaper {
                rolloff,
                grid,
                support: support as i64,
                table: Some(table),
                scale: 1.0,
            })
        } else {
            // energy of the truncated pulse from a 64-per-symbol reference grid
            let res = 64i64;
            let half = span_symbols as i64 * res;
            let energy = (-half..=half)
                .map(|j| srrc_unit(rolloff, j as f64 / res as f64).powi(2))
                .sum::<f64>()
                / res as f64;
            Ok(PulseShaper {
                rolloff,
                grid,
                support: support as i64,
                table: None,
                scale: energy.sqrt().recip(),
            })
        }
    }

    pub fn grid(&self) -> RationalGrid {
        self.grid
    }

    /// Pulse value `offset` intermediate samples from its centre.
    #[inline]
    pub fn tap(&self, offset: i64) -> f64 {
        if offset.abs() > self.support {
            return 0.0;
        }
        match &self.table {
            Some(t) => t[(offset + self.support) as usize],
            None => self.scale * srrc_unit(self.rolloff, offset as f64 / self.grid.up as f64),
        }
    }

    /// Output samples `first..first + len` of Σ_k a_k g(t − kT), where
    /// symbol k is centred on intermediate index `k * up`.
    pub fn shape(&self, symbols: &[Complex64], first: usize, len: usize) -> Vec<Complex64> {
        let up = self.grid.up as i64;
        let down = self.grid.down as i64;
        let last_symbol = symbols.len() as i64 - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
            for (j, y) in chunk.iter_mut().enumerate() {
                let n = (first + ci * CHUNK + j) as i64;
                let centre = n * down;
                let k_lo = (centre - self.support + up - 1).div_euclid(up).max(0);
                let k_hi = (centre + self.support).div_euclid(up).min(last_symbol);
                let mut acc = Complex64::new(0.0, 0.0);
                for k in k_lo..=k_hi {
                    acc += symbols[k as usize] * self.tap(centre - k * up);
                }
                *y = acc;
            }
        });
        out
    }

    /// Output samples of a single pulse centred on intermediate index
    /// `centre`.
    pub fn single(&self, centre: i64, len: usize) -> Vec<Complex64> {
        let down = self.grid.down as i64;
        (0..len as i64)
            .map(|n| Complex64::new(self.tap(n * down - centre), 0.0))
            .collect()
    }

    pub fn support(&self) -> i64 {
        self.support
    }
}
