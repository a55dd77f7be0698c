//! Log-log least squares, rate verdicts and weak-type distribution profiles.

use alloc::vec::Vec;

// redundant whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::{Error, Result};

/// Fewest usable samples any fit accepts.
pub const MIN_FIT_POINTS: usize = 8;

/// Least-squares line through `(ln x, ln |y|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the residuals in `ln |y|`.
    pub residual_rms: f64,
    pub used: usize,
    /// Samples dropped because `y` was zero or not finite, or `x <= 0`.
    pub excluded: usize,
}

/// Fits `ln |y| = slope ln x + intercept`.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<LineFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| x.is_finite() && *x > 0.0 && y.is_finite() && *y != 0.0)
        .map(|&(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let excluded = points.len() - usable.len();
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: usable.len() });
    }
    let count = usable.len() as f64;
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = usable.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in &usable {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Unsupported("log-log fit needs at least two distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss: f64 = usable
        .iter()
        .map(|&(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    Ok(LineFit { slope, intercept, residual_rms: (ss / count).sqrt(), used: usable.len(), excluded })
}

/// Slope of an error curve `{(R, e(R))}` in log-log coordinates.
pub fn fit_rate(curve: &[(f64, f64)]) -> Result<LineFit> {
    loglog_fit(curve)
}

/// Largest `|y|` per geometric block of `x`, `blocks_per_octave` blocks per
/// doubling, anchored at the first abscissa. Each block reports the abscissa
/// where its maximum occurs. A trailing block that the samples do not cover
/// completely is dropped, since its maximum would be biased low.
pub fn block_maxima(points: &[(f64, f64)], blocks_per_octave: usize) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let Some(&(x0, _)) = points.iter().find(|(x, _)| *x > 0.0) else {
        return out;
    };
    let x_max = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let per_octave = blocks_per_octave.max(1) as f64;
    let complete = |b: i64| x0 * ((b + 1) as f64 / per_octave).exp2() <= x_max * (1.0 + 1e-9);
    let mut current: Option<(i64, f64, f64)> = None;
    for &(x, y) in points {
        if !(x > 0.0 && y.is_finite()) {
            continue;
        }
        let block = ((x / x0).log2() * per_octave + 1e-9).floor() as i64;
        match current {
            Some((b, _, best)) if b == block => {
                if y.abs() > best {
                    current = Some((b, x, y.abs()));
                }
            }
            _ => {
                if let Some((_, bx, by)) = current {
                    out.push((bx, by));
                }
                current = Some((block, x, y.abs()));
            }
        }
    }
    if let Some((b, bx, by)) = current {
        if complete(b) {
            out.push((bx, by));
        }
    }
    out
}

/// Which statistic an error curve records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    /// Maximum of `|S_R f - f|` over a probe set.
    SupOverProbes,
    /// `|S_R f - f|` at a single point.
    FixedPoint,
}

/// Outcome of comparing a measured decay rate with a predicted exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Measured exponent within `RATE_MATCH_BAND` of the prediction.
    RateMatched,
    /// Decays faster than predicted by more than `RATE_MATCH_BAND`.
    ConsistentUpperBound,
    /// Decays slower by more than `VIOLATION_BAND` with a clean fit.
    Violated,
    /// Slower, but inside the violation band or with a noisy fit.
    Inconclusive,
}

pub const RATE_MATCH_BAND: f64 = 0.15;
pub const VIOLATION_BAND: f64 = 0.25;
pub const VIOLATION_MAX_RESIDUAL: f64 = 0.05;
/// Smallest `R_max / R_min` a curve must span.
pub const MIN_SPAN_RATIO: f64 = 64.0;

/// Error curve, its fit and the verdict against a predicted exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub curve: Vec<(f64, f64)>,
    pub norm_used: NormKind,
    pub fitted_slope: f64,
    pub residual_rms: f64,
    pub theorem_exponent: f64,
    pub verdict: Verdict,
}

/// Classifies a measured `slope` against the decay `R^-exponent`.
pub fn classify(slope: f64, residual_rms: f64, exponent: f64) -> Verdict {
    let excess = -slope - exponent;
    if excess.abs() <= RATE_MATCH_BAND {
        Verdict::RateMatched
    } else if excess > RATE_MATCH_BAND {
        Verdict::ConsistentUpperBound
    } else if excess < -VIOLATION_BAND && residual_rms < VIOLATION_MAX_RESIDUAL {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    }
}

/// Fits `curve` and classifies it against `R^-theorem_exponent`.
///
/// Needs at least [`MIN_FIT_POINTS`] points spanning a factor
/// [`MIN_SPAN_RATIO`] in `R`.
pub fn theorem_verdict(curve: &[(f64, f64)], theorem_exponent: f64, norm_used: NormKind) -> Result<RateReport> {
    if !theorem_exponent.is_finite() {
        return Err(Error::NonFinite("theorem exponent"));
    }
    if curve.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: curve.len() });
    }
    let lo = curve.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = curve.iter().map(|p| p.0).fold(0.0, f64::max);
    if !(lo > 0.0 && hi / lo >= MIN_SPAN_RATIO) {
        return Err(Error::domain("curve span R_max/R_min", hi / lo, "span >= 64"));
    }
    let fit = fit_rate(curve)?;
    Ok(RateReport {
        curve: curve.to_vec(),
        norm_used,
        fitted_slope: fit.slope,
        residual_rms: fit.residual_rms,
        theorem_exponent,
        verdict: classify(fit.slope, fit.residual_rms, theorem_exponent),
    })
}

/// Superlevel-set measures `|{T > s}|` over a list of thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakTypeProfile {
    pub thresholds: Vec<f64>,
    pub measures: Vec<f64>,
    pub p: f64,
    /// `max_s s^p |{T > s}|`.
    pub sup_statistic: f64,
}

/// Profile of `values` sampled on cells of volume `cell_volume`.
///
/// `thresholds` must be positive and strictly decreasing.
pub fn weak_type_profile(values: &[f64], cell_volume: f64, p: f64, thresholds: &[f64]) -> Result<WeakTypeProfile> {
    if !(cell_volume.is_finite() && cell_volume > 0.0) {
        return Err(Error::domain("cell volume", cell_volume, "cell volume > 0"));
    }
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::domain("p", p, "p > 0"));
    }
    if thresholds.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    for w in thresholds.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::domain("threshold", w[1], "thresholds strictly decreasing"));
        }
    }
    if let Some(&s) = thresholds.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::domain("threshold", s, "thresholds positive and finite"));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite("field value"));
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let measures: Vec<f64> = thresholds
        .iter()
        .map(|&s| {
            let above = sorted.len() - sorted.partition_point(|&v| v <= s);
            above as f64 * cell_volume
        })
        .collect();
    let sup_statistic = thresholds.iter().zip(&measures).map(|(s, m)| s.powf(p) * m).fold(0.0, f64::max);
    Ok(WeakTypeProfile { thresholds: thresholds.to_vec(), measures, p, sup_statistic })
}

/// `count` thresholds from `start` down by the factor `ratio < 1`.
pub fn geometric_thresholds(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}
