//! Zero-crossing detection on the real part of the compensated ACF.

use crate::acf::AcfEstimate;
use crate::error::{Error, Result};
use crate::spline::NotAKnotSpline;
use crate::types::{EstimatorConfig, Interpolator};

/// Bisection tolerance for spline roots, in samples.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// Adjacent lags around a sign change. `upper` is the first lag whose value
/// has left the previous sign (it may be exactly zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bracket {
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCrossing {
    /// 1-based crossing number m.
    pub index_m: usize,
    pub location_samples: f64,
    pub bracket: Bracket,
    /// Chord slope across the bracket, per sample.
    pub slope: f64,
}

/// First `p` sign changes of `acf_real`, scanning upward from lag 0.
///
/// A sample that is exactly zero counts as the crossing only when the next
/// non-zero sample has the opposite sign.
pub fn find_sign_changes(acf_real: &[f64], p: usize) -> Result<Vec<Bracket>> {
    match acf_real.first() {
        Some(&r0) if r0 > 0.0 => {}
        _ => return Err(Error::DegenerateAcf("lag-0 value is not a positive peak")),
    }
    let mut sign = 1.0;
    let mut out = Vec::with_capacity(p);
    let mut i = 1;
    while i < acf_real.len() && out.len() < p {
        let v = acf_real[i];
        let crossed = if v == 0.0 {
            acf_real[i + 1..]
                .iter()
                .find(|&&w| w != 0.0)
                .is_some_and(|&w| w * sign < 0.0)
        } else {
            v * sign < 0.0
        };
        if crossed {
            out.push(Bracket {
                lower: i - 1,
                upper: i,
            });
            sign = -sign;
        }
        i += 1;
    }
    if out.len() < p {
        return Err(Error::NotEnoughCrossings {
            found: out.len(),
            wanted: p,
        });
    }
    Ok(out)
}

/// Root of the chord through two points.
pub fn interpolate_linear(p0: (f64, f64), p1: (f64, f64)) -> f64 {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    if y0 == 0.0 {
        return x0;
    }
    x0 - y0 * (x1 - x0) / (y1 - y0)
}

/// Root of the not-a-knot spline through `points` inside the knot interval
/// `bracket`.
pub fn interpolate_spline(points: &[(f64, f64)], bracket: (f64, f64)) -> Result<f64> {
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let spline = NotAKnotSpline::new(&xs, &ys)?;
    let segment = xs
        .windows(2)
        .position(|w| w[0] == bracket.0 && w[1] == bracket.1)
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "bracket ({}, {}) is not a knot interval",
                bracket.0, bracket.1
            ))
        })?;
    spline.segment_root(segment, ROOT_TOLERANCE)
}

/// Locates crossings 1..=p on the real part of `acf` (which should already
/// be offset-compensated).
pub fn locate_crossings(acf: &AcfEstimate, cfg: &EstimatorConfig) -> Result<Vec<ZeroCrossing>> {
    let real = acf.real_part();
    let brackets = find_sign_changes(&real, cfg.max_zero_crossing)?;
    brackets
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let m = k + 1;
            let (y_lo, y_hi) = (real[b.lower], real[b.upper]);
            let slope = y_hi - y_lo;
            let location = if y_hi == 0.0 {
                b.upper as f64
            } else {
                match cfg.interpolator {
                    Interpolator::Linear => {
                        interpolate_linear((b.lower as f64, y_lo), (b.upper as f64, y_hi))
                    }
                    Interpolator::SplineNotAKnot => {
                        let first = b.upper.checked_sub(cfg.points_before).ok_or(
                            Error::NotEnoughCrossings {
                                found: k,
                                wanted: cfg.max_zero_crossing,
                            },
                        )?;
                        let end = b.upper + cfg.points_after;
                        if end > real.len() {
                            return Err(Error::NotEnoughCrossings {
                                found: k,
                                wanted: cfg.max_zero_crossing,
                            });
                        }
                        let points: Vec<(f64, f64)> =
                            (first..end).map(|lag| (lag as f64, real[lag])).collect();
                        interpolate_spline(&points, (b.lower as f64, b.upper as f64))?
                    }
                }
            };
            Ok(ZeroCrossing {
                index_m: m,
                location_samples: location,
                bracket: b,
                slope,
            })
        })
        .collect()
}

/// Per-crossing period estimate, location / m.
pub fn period_from_crossing(zc: &ZeroCrossing) -> f64 {
    zc.location_samples / zc.index_m as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::rc_pulse_analytic;

    fn rc_samples(period: f64, n: usize) -> Vec<f64> {
        (0..n).map(|t| rc_pulse_analytic(0.15, period, t as f64)).collect()
    }

    fn points(period: f64, lags: std::ops::RangeInclusive<usize>) -> Vec<(f64, f64)> {
        lags.map(|t| (t as f64, rc_pulse_analytic(0.15, period, t as f64))).collect()
    }

    #[test]
    fn exact_zero_bracket() {
        let b = find_sign_changes(&rc_samples(8.0, 60), 1).unwrap();
        assert_eq!(b, vec![Bracket { lower: 7, upper: 8 }]);
    }

    #[test]
    fn five_crossings_near_multiples() {
        let b = find_sign_changes(&rc_samples(8.0, 60), 5).unwrap();
        let uppers: Vec<usize> = b.iter().map(|b| b.upper).collect();
        assert_eq!(uppers, vec![8, 16, 24, 32, 40]);
    }

    #[test]
    fn all_positive_has_no_crossing() {
        let r = find_sign_changes(&[1.0, 0.8, 0.5, 0.2, 0.1], 1);
        assert!(matches!(r, Err(Error::NotEnoughCrossings { found: 0, wanted: 1 })));
    }

    #[test]
    fn touching_zero_is_not_a_crossing() {
        let b = find_sign_changes(&[1.0, 0.5, 0.0, 0.3, -0.2], 1).unwrap();
        assert_eq!(b[0], Bracket { lower: 3, upper: 4 });
    }

    #[test]
    fn linear_examples() {
        assert_eq!(interpolate_linear((8.0, 0.1), (9.0, -0.1)), 8.5);
        assert_eq!(interpolate_linear((8.0, 0.0), (9.0, -0.2)), 8.0);
    }

    #[test]
    fn spline_reproduces_lines() {
        let pts: Vec<(f64, f64)> = (5..=9).map(|x| (x as f64, 0.3 * (8.5 - x as f64))).collect();
        let r = interpolate_spline(&pts, (8.0, 9.0)).unwrap();
        assert!((r - 8.5).abs() < 1e-12);
    }

    #[test]
    fn spline_on_half_sample_period() {
        // reference root from scipy not-a-knot + brentq: 8.499384016126
        let r = interpolate_spline(&points(8.5, 5..=9), (8.0, 9.0)).unwrap();
        assert!((r - 8.5).abs() < 5e-3);
        assert!((r - 8.499_384_016_126).abs() < 1e-9, "{r}");
        let lin = interpolate_linear((8.0, rc_pulse_analytic(0.15, 8.5, 8.0)), (9.0, rc_pulse_analytic(0.15, 8.5, 9.0)));
        assert!((lin - 8.5).abs() < 0.05);
        assert!((lin - 8.5).abs() > (r - 8.5).abs());
    }

    #[test]
    fn spline_on_knot_root() {
        let r = interpolate_spline(&points(8.0, 5..=9), (7.0, 8.0)).unwrap();
        assert!((r - 8.0).abs() < 1e-6);
    }

    #[test]
    fn interpolation_error_sign_is_fixed() {
        // scipy oracle: not-a-knot roots sit below the true zero, chords above
        let reference = [
            (8.1, 8.099_851_710_852),
            (8.3, 8.299_567_087_672),
            (8.5, 8.499_384_016_126),
            (8.7, 8.699_402_395_445),
            (8.9, 8.899_711_965_843),
        ];
        for (t, want) in reference {
            let s = interpolate_spline(&points(t, 5..=9), (8.0, 9.0)).unwrap();
            assert!((s - want).abs() < 1e-9, "T={t}: {s}");
            assert!(s < t);
            let lin = interpolate_linear(
                (8.0, rc_pulse_analytic(0.15, t, 8.0)),
                (9.0, rc_pulse_analytic(0.15, t, 9.0)),
            );
            assert!(lin > t);
        }
    }

    #[test]
    fn period_arithmetic() {
        let zc = |m, loc| ZeroCrossing {
            index_m: m,
            location_samples: loc,
            bracket: Bracket { lower: 0, upper: 1 },
            slope: -1.0,
        };
        assert_eq!(period_from_crossing(&zc(1, 8.0)), 8.0);
        assert!((period_from_crossing(&zc(5, 40.2)) - 8.04).abs() < 1e-12);
        assert_eq!(period_from_crossing(&zc(4, 32.0)), 8.0);
    }

    #[test]
    fn locate_on_analytic_acf() {
        use num_complex::Complex64;
        let acf = AcfEstimate {
            values: rc_samples(8.5, 60).into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            lag_spacing_s: 1.0,
            n_samples_used: 1000,
        };
        let cfg = EstimatorConfig::default();
        let zc = locate_crossings(&acf, &cfg).unwrap();
        assert_eq!(zc.len(), 5);
        for w in zc.windows(2) {
            assert!(w[1].location_samples > w[0].location_samples);
        }
        for z in &zc {
            let truth = 8.5 * z.index_m as f64;
            assert!(z.location_samples > z.bracket.lower as f64);
            assert!(z.location_samples < z.bracket.upper as f64 + 1e-12);
            assert!((z.location_samples - truth).abs() < 0.05, "{z:?}");
        }
    }

    #[test]
    fn spline_needs_points_before() {
        use num_complex::Complex64;
        let acf = AcfEstimate {
            values: rc_samples(3.0, 40).into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            lag_spacing_s: 1.0,
            n_samples_used: 1000,
        };
        let cfg = EstimatorConfig { max_zero_crossing: 1, ..EstimatorConfig::default() };
        // crossing at 3 lands exactly on a lag, so no interpolation is needed
        assert!(locate_crossings(&acf, &cfg).is_ok());
        let acf = AcfEstimate {
            values: rc_samples(2.5, 40).into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            ..acf
        };
        assert!(matches!(locate_crossings(&acf, &cfg), Err(Error::NotEnoughCrossings { .. })));
    }
}
