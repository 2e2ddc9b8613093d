//! Domain types shared by every stage of the estimator.
//!
//! All periods and lags are carried in units of samples; conversion to Hz
//! happens only at the API edges ([`RateEstimate::symbol_rate_hz`],
//! [`SignalSpec`]).

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Lowest permitted ratio of sample rate to symbol rate.
pub const MIN_OVERSAMPLING: f64 = 8.0;

/// Uniformly sampled complex baseband samples.
#[derive(Debug, Clone, PartialEq)]
pub struct IqBuffer {
    pub samples: Vec<Complex64>,
    pub sample_rate_hz: f64,
}

impl IqBuffer {
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz > 0.0) || !sample_rate_hz.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        Ok(IqBuffer {
            samples,
            sample_rate_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_period_s(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    /// Mean of |y[n]|².
    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// Keeps at most the first `len` samples.
    pub fn truncated(mut self, len: usize) -> Self {
        self.samples.truncate(len);
        self
    }
}

/// Full description of a synthetic single-carrier transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    pub symbol_rate_hz: f64,
    pub qam_order: u32,
    pub rolloff: f64,
    /// One-sided SRRC span in symbols.
    pub span_symbols: usize,
    pub n_symbols: usize,
    pub freq_offset_hz: f64,
    /// Symbol-level Es/N0; `f64::INFINITY` disables noise.
    pub esno_db: f64,
    pub seed: u64,
    pub sample_rate_hz: f64,
}

impl Default for SignalSpec {
    fn default() -> Self {
        SignalSpec {
            symbol_rate_hz: 7e6,
            qam_order: 256,
            rolloff: 0.15,
            span_symbols: 8,
            n_symbols: 100_000,
            freq_offset_hz: 0.0,
            esno_db: f64::INFINITY,
            seed: 1,
            sample_rate_hz: 56e6,
        }
    }
}

impl SignalSpec {
    /// Average samples per symbol, `fs / baud`.
    pub fn oversampling(&self) -> f64 {
        self.sample_rate_hz / self.symbol_rate_hz
    }

    /// Symbol period in samples, the quantity the estimator recovers.
    /// Synthesis rounds both rates to 1 Hz, so the truth does too.
    pub fn true_period_samples(&self) -> f64 {
        self.sample_rate_hz.round() / self.symbol_rate_hz.round()
    }

    /// Number of symbols needed so that a trimmed synthesis yields at least
    /// `n_samples` samples.
    pub fn symbols_for_samples(&self, n_samples: usize) -> usize {
        (n_samples as f64 / self.oversampling()).ceil() as usize + 2 * self.span_symbols + 2
    }
}

pub fn validate_spec(spec: &SignalSpec) -> Result<()> {
    if !(spec.sample_rate_hz > 0.0) || !spec.sample_rate_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sample rate must be positive, got {}",
            spec.sample_rate_hz
        )));
    }
    if !(spec.symbol_rate_hz > 0.0) || !spec.symbol_rate_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "symbol rate must be positive, got {}",
            spec.symbol_rate_hz
        )));
    }
    let ratio = spec.oversampling();
    if ratio < MIN_OVERSAMPLING {
        return Err(Error::OversamplingTooLow { ratio });
    }
    if !(0.0..=1.0).contains(&spec.rolloff) {
        return Err(Error::BadRolloff(spec.rolloff));
    }
    if !matches!(spec.qam_order, 4 | 16 | 64 | 256) {
        return Err(Error::BadOrder(spec.qam_order));
    }
    if spec.span_symbols == 0 {
        return Err(Error::InvalidParameter("span_symbols must be >= 1".into()));
    }
    if spec.n_symbols == 0 {
        return Err(Error::InvalidParameter("n_symbols must be >= 1".into()));
    }
    if spec.esno_db.is_nan() || !spec.freq_offset_hz.is_finite() {
        return Err(Error::InvalidParameter("esno_db / freq_offset_hz not usable".into()));
    }
    Ok(())
}

/// One propagation path: linear amplitude and delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoTap {
    pub amplitude: f64,
    pub delay_s: f64,
}

/// NorDig DVB-C echo table: (attenuation dB, delay ns).
pub const NORDIG_ECHOES: [(f64, f64); 10] = [
    (12.0, 0.0),
    (12.6, 40.0),
    (13.7, 50.0),
    (19.4, 100.0),
    (25.0, 150.0),
    (30.7, 200.0),
    (36.3, 250.0),
    (39.7, 280.0),
    (42.0, 300.0),
    (42.0, 350.0),
];

/// Direct path plus delayed, attenuated replicas.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoProfile {
    taps: Vec<EchoTap>,
}

impl EchoProfile {
    /// The first tap must be the unit direct path `(1.0, 0.0)`; later delays
    /// must not decrease.
    pub fn new(taps: Vec<EchoTap>) -> Result<Self> {
        match taps.first() {
            Some(t) if t.amplitude == 1.0 && t.delay_s == 0.0 => {}
            _ => {
                return Err(Error::InvalidEchoProfile(
                    "first tap must be the unit direct path (1.0, 0.0)".into(),
                ))
            }
        }
        for pair in taps.windows(2) {
            if !(pair[1].delay_s >= pair[0].delay_s) || !pair[1].amplitude.is_finite() {
                return Err(Error::InvalidEchoProfile(format!(
                    "tap delays must be non-decreasing ({} then {})",
                    pair[0].delay_s, pair[1].delay_s
                )));
            }
        }
        Ok(EchoProfile { taps })
    }

    pub fn direct() -> Self {
        EchoProfile {
            taps: vec![EchoTap {
                amplitude: 1.0,
                delay_s: 0.0,
            }],
        }
    }

    /// Unit direct path plus the single echo of NorDig table row `index`.
    pub fn nordig(index: usize) -> Result<Self> {
        let &(att_db, delay_ns) = NORDIG_ECHOES.get(index).ok_or_else(|| {
            Error::InvalidEchoProfile(format!("no NorDig echo preset {index} (0..=9)"))
        })?;
        EchoProfile::new(vec![
            EchoTap {
                amplitude: 1.0,
                delay_s: 0.0,
            },
            EchoTap {
                amplitude: 10f64.powf(-att_db / 20.0),
                delay_s: delay_ns * 1e-9,
            },
        ])
    }

    pub fn taps(&self) -> &[EchoTap] {
        &self.taps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpolator {
    Linear,
    SplineNotAKnot,
}

impl Interpolator {
    pub fn label(self) -> &'static str {
        match self {
            Interpolator::Linear => "linear",
            Interpolator::SplineNotAKnot => "spline",
        }
    }
}

impl fmt::Display for Interpolator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Interpolator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Interpolator::Linear),
            "spline" | "splinenotaknot" | "spline_not_a_knot" | "not-a-knot" => {
                Ok(Interpolator::SplineNotAKnot)
            }
            other => Err(Error::InvalidParameter(format!("unknown interpolator '{other}'"))),
        }
    }
}

/// How per-crossing period estimates are fused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombineWeights {
    /// Use crossing `m` alone (1-based).
    Single(usize),
    /// Weights A: squared analytic RC slope at each crossing.
    SlopeAnalytic,
    /// Weights B: squared chord slope measured on the estimated ACF.
    SlopeOnline,
    /// Weights C: squared analytic slope scaled by m².
    SlopeAndZc,
    /// Weight 1 on the farthest crossing, for multipath sweeps.
    UniformFar,
}

impl CombineWeights {
    pub fn label(self) -> String {
        match self {
            CombineWeights::Single(m) => format!("zc{m}"),
            CombineWeights::SlopeAnalytic => "slope_analytic".into(),
            CombineWeights::SlopeOnline => "slope_online".into(),
            CombineWeights::SlopeAndZc => "slope_zc".into(),
            CombineWeights::UniformFar => "uniform_far".into(),
        }
    }

    pub fn needs_rolloff(self) -> bool {
        matches!(self, CombineWeights::SlopeAnalytic | CombineWeights::SlopeAndZc)
    }
}

impl fmt::Display for CombineWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for CombineWeights {
    type Err = Error;

    /// Accepts `zc<m>`, `none:<m>`, `single:<m>`, `a`/`slope_analytic`,
    /// `b`/`slope_online`, `c`/`slope_zc` and `far`/`uniform_far`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::InvalidParameter(format!("unknown combine weights '{s}'"));
        let single = |digits: &str| -> Result<Self> {
            let m: usize = digits.trim().parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            Ok(CombineWeights::Single(m))
        };
        if let Some(rest) = s.strip_prefix("zc") {
            return single(rest);
        }
        if let Some(rest) = s.strip_prefix("none:").or_else(|| s.strip_prefix("single:")) {
            return single(rest);
        }
        match s.as_str() {
            "a" | "slope_analytic" | "slopeanalytic" => Ok(CombineWeights::SlopeAnalytic),
            "b" | "slope_online" | "slopeonline" => Ok(CombineWeights::SlopeOnline),
            "c" | "slope_zc" | "slopeandzc" | "slope_and_zc" => Ok(CombineWeights::SlopeAndZc),
            "far" | "uniform_far" | "uniformfar" => Ok(CombineWeights::UniformFar),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub interpolator: Interpolator,
    /// Number of zero crossings `p` to locate.
    pub max_zero_crossing: usize,
    pub points_before: usize,
    pub points_after: usize,
    pub combine_weights: CombineWeights,
    pub rolloff_hint: Option<f64>,
    /// Derotate the ACF by the lag-1 phase before crossing detection.
    pub compensate_offset: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            interpolator: Interpolator::SplineNotAKnot,
            max_zero_crossing: 5,
            points_before: 4,
            points_after: 1,
            combine_weights: CombineWeights::Single(1),
            rolloff_hint: None,
            compensate_offset: true,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        let p = self.max_zero_crossing;
        if p == 0 {
            return Err(Error::InvalidParameter("max_zero_crossing must be >= 1".into()));
        }
        if self.points_before == 0 || self.points_after == 0 {
            return Err(Error::InvalidParameter(
                "need at least one interpolation point on each side of the crossing".into(),
            ));
        }
        if self.interpolator == Interpolator::SplineNotAKnot
            && self.points_before + self.points_after < 4
        {
            return Err(Error::InvalidParameter(
                "not-a-knot spline needs at least 4 points".into(),
            ));
        }
        if let CombineWeights::Single(m) = self.combine_weights {
            if m == 0 || m > p {
                return Err(Error::InvalidParameter(format!(
                    "crossing {m} outside 1..={p}"
                )));
            }
        }
        if self.combine_weights.needs_rolloff() {
            match self.rolloff_hint {
                Some(a) if a > 0.0 && a <= 1.0 => {}
                Some(a) => return Err(Error::BadRolloff(a)),
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "{} weights need a rolloff_hint",
                        self.combine_weights
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Output of the estimator pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    /// Period estimate from crossing m (index 0 holds m = 1), in samples.
    pub per_zc_period_samples: Vec<f64>,
    pub weights: Vec<f64>,
    pub combined_period_samples: f64,
    pub symbol_rate_hz: f64,
    pub freq_offset_hz: f64,
    pub sample_rate_hz: f64,
    pub interpolator: Interpolator,
    pub combine_weights: CombineWeights,
    /// Chord slopes at each crossing, kept so callers can re-weight.
    pub slopes: Vec<f64>,
}

impl RateEstimate {
    /// Period in samples as estimated by crossing `m` alone (1-based).
    pub fn period_at(&self, m: usize) -> Option<f64> {
        m.checked_sub(1)
            .and_then(|i| self.per_zc_period_samples.get(i))
            .copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(rate: f64, fs: f64) -> SignalSpec {
        SignalSpec {
            symbol_rate_hz: rate,
            sample_rate_hz: fs,
            ..SignalSpec::default()
        }
    }

    #[test]
    fn validate_accepts_extreme_parameters() {
        validate_spec(&spec(7e6, 56e6)).unwrap();
        let slow = spec(1e6, 56e6);
        validate_spec(&slow).unwrap();
        assert_eq!(slow.oversampling(), 56.0);
    }

    #[test]
    fn validate_rejects_low_oversampling() {
        match validate_spec(&spec(8e6, 56e6)) {
            Err(Error::OversamplingTooLow { ratio }) => assert_eq!(ratio, 7.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_rolloff_and_order() {
        let mut s = spec(5e6, 56e6);
        s.rolloff = 1.2;
        assert!(matches!(validate_spec(&s), Err(Error::BadRolloff(_))));
        s.rolloff = -0.01;
        assert!(matches!(validate_spec(&s), Err(Error::BadRolloff(_))));
        s.rolloff = 0.15;
        s.qam_order = 32;
        assert!(matches!(validate_spec(&s), Err(Error::BadOrder(32))));
    }

    #[test]
    fn nordig_presets_are_two_tap() {
        for k in 0..10 {
            let p = EchoProfile::nordig(k).unwrap();
            let taps = p.taps();
            assert_eq!(taps.len(), 2);
            assert_eq!(taps[0], EchoTap { amplitude: 1.0, delay_s: 0.0 });
            let (att, delay_ns) = NORDIG_ECHOES[k];
            assert!((taps[1].amplitude - 10f64.powf(-att / 20.0)).abs() < 1e-15);
            assert!((taps[1].delay_s - delay_ns * 1e-9).abs() < 1e-20);
        }
        let p3 = EchoProfile::nordig(3).unwrap();
        assert!((p3.taps()[1].amplitude - 0.10715).abs() < 1e-5);
        assert!((p3.taps()[1].delay_s * 56e6 - 5.6).abs() < 1e-9);
        assert!(EchoProfile::nordig(10).is_err());
    }

    #[test]
    fn echo_profile_rejects_bad_direct_path() {
        let bad = EchoProfile::new(vec![EchoTap { amplitude: 0.5, delay_s: 0.0 }]);
        assert!(bad.is_err());
        let decreasing = EchoProfile::new(vec![
            EchoTap { amplitude: 1.0, delay_s: 0.0 },
            EchoTap { amplitude: 0.1, delay_s: 2e-7 },
            EchoTap { amplitude: 0.1, delay_s: 1e-7 },
        ]);
        assert!(decreasing.is_err());
    }

    #[test]
    fn estimator_config_rules() {
        let mut cfg = EstimatorConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.points_before + cfg.points_after, 5);
        cfg.combine_weights = CombineWeights::SlopeAndZc;
        assert!(cfg.validate().is_err());
        cfg.rolloff_hint = Some(0.15);
        cfg.validate().unwrap();
        cfg.combine_weights = CombineWeights::Single(6);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn combine_weights_parse() {
        assert_eq!("zc3".parse::<CombineWeights>().unwrap(), CombineWeights::Single(3));
        assert_eq!("none:2".parse::<CombineWeights>().unwrap(), CombineWeights::Single(2));
        assert_eq!("C".parse::<CombineWeights>().unwrap(), CombineWeights::SlopeAndZc);
        assert_eq!(
            "slope_online".parse::<CombineWeights>().unwrap(),
            CombineWeights::SlopeOnline
        );
        assert!("zc0".parse::<CombineWeights>().is_err());
        for w in [
            CombineWeights::Single(4),
            CombineWeights::SlopeAnalytic,
            CombineWeights::SlopeOnline,
            CombineWeights::SlopeAndZc,
            CombineWeights::UniformFar,
        ] {
            assert_eq!(w.label().parse::<CombineWeights>().unwrap(), w);
        }
    }
}
