//! Raw IQ files: interleaved little-endian `f32` I/Q pairs, no header.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::IqBuffer;

const BYTES_PER_SAMPLE: usize = 8;

/// Encodes samples as interleaved `f32` pairs. Values are rounded to `f32`.
pub fn encode_iq(samples: &[Complex64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * BYTES_PER_SAMPLE);
    for s in samples {
        out.extend_from_slice(&(s.re as f32).to_le_bytes());
        out.extend_from_slice(&(s.im as f32).to_le_bytes());
    }
    out
}

pub fn decode_iq(bytes: &[u8]) -> Result<Vec<Complex64>> {
    if bytes.is_empty() {
        return Err(Error::EmptyFile);
    }
    if bytes.len() % BYTES_PER_SAMPLE != 0 {
        return Err(Error::MalformedFile(format!(
            "{} bytes is not a whole number of 8-byte I/Q pairs",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(BYTES_PER_SAMPLE)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect())
}

pub fn write_iq(path: impl AsRef<Path>, buf: &IqBuffer) -> Result<()> {
    fs::write(path, encode_iq(&buf.samples))?;
    Ok(())
}

/// Reads an IQ file and attaches the given sample rate.
pub fn ingest_iq(path: impl AsRef<Path>, sample_rate_hz: f64) -> Result<IqBuffer> {
    let bytes = fs::read(path)?;
    IqBuffer::new(decode_iq(&bytes)?, sample_rate_hz)
}
