use std::io;

use thiserror::Error;

/// Errors raised anywhere in the estimator, synthesis or harness code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("oversampling ratio {ratio:.3} is below the minimum of 8")]
    OversamplingTooLow { ratio: f64 },

    #[error("roll-off {0} is outside the admissible range")]
    BadRolloff(f64),

    #[error("unsupported QAM order {0} (expected 4, 16, 64 or 256)")]
    BadOrder(u32),

    #[error("rational resampling needs an intermediate rate of {lcm_hz:.3e} Hz, above the cap of {cap_hz:.3e} Hz")]
    ResamplingOverflow { lcm_hz: f64, cap_hz: f64 },

    #[error("buffer holds {len} samples but {needed} are required")]
    BufferTooShort { len: usize, needed: usize },

    #[error("autocorrelation is degenerate: {0}")]
    DegenerateAcf(&'static str),

    #[error("found {found} zero crossings, {wanted} requested")]
    NotEnoughCrossings { found: usize, wanted: usize },

    #[error("interpolating spline has no root between lags {lower} and {upper}")]
    NoRootInBracket { lower: f64, upper: f64 },

    #[error("zero-crossing slope {slope:e} at crossing {index} is too small to weight")]
    DegenerateSlope { index: usize, slope: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid echo profile: {0}")]
    InvalidEchoProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed IQ file: {0}")]
    MalformedFile(String),

    #[error("IQ file is empty")]
    EmptyFile,

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
