//! Bessel functions of the first kind for real order `v >= 0`.
//!
//! Two evaluation paths:
//!
//! - below the switchover `t* = max(12, 2v)` the ascending series
//!   `J_v(t) = (t/2)^v / Gamma(v+1) * sum_k (-t^2/4)^k / (k! (v+1)_k)`,
//!   accumulated in double-double so the alternating sum keeps full
//!   double precision even when its terms reach `1e16`;
//! - at and above `t*` the Hankel expansion
//!   `J_v(t) ~ sqrt(2/(pi t)) (P cos w - Q sin w)`, `w = t - v pi/2 - pi/4`.
//!   Orders `v >= 2` start from the expansion at the fractional orders
//!   `v - floor(v)` and `v - floor(v) + 1` and recur upward, which is stable
//!   because `t >= 2v` keeps every step in the oscillatory regime.

use core::f64::consts::{FRAC_2_PI, PI};

// redundant whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;

use super::dd::Dd;
use crate::{Error, Result};

/// A real Bessel order `v >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::NonFinite("Bessel order"));
        }
        if v < 0.0 {
            return Err(Error::domain("Bessel order", v, "v >= 0"));
        }
        Ok(BesselOrder(v))
    }

    #[inline]
    pub const fn get(self) -> f64 {
        self.0
    }

    /// Argument at which evaluation switches from the series to the
    /// asymptotic expansion.
    #[inline]
    pub fn switchover(self) -> f64 {
        switchover(self.0)
    }
}

#[inline]
fn switchover(v: f64) -> f64 {
    f64::max(12.0, 2.0 * v)
}

/// Gamma function for positive arguments.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Truncation of the Hankel expansion after `terms` correction terms.
///
/// `remainder_bound_coefficient * t^-(terms + 3/2)` bounds the neglected
/// tail for `t` at or above the switchover. The coefficient sums the first
/// two omitted terms of the expansion, the second one evaluated at the
/// switchover where it is largest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTruncation {
    pub terms: usize,
    pub remainder_bound_coefficient: f64,
}

impl AsymptoticTruncation {
    pub fn for_order(v: BesselOrder, terms: usize) -> Self {
        let a_next = hankel_coefficient(v.0, terms + 1).abs();
        let a_after = hankel_coefficient(v.0, terms + 2).abs() / switchover(v.0);
        AsymptoticTruncation { terms, remainder_bound_coefficient: (FRAC_2_PI).sqrt() * (a_next + a_after) }
    }

    pub fn remainder_bound(&self, t: f64) -> f64 {
        self.remainder_bound_coefficient * t.powf(-(self.terms as f64 + 1.5))
    }
}

/// `a_k(v) = prod_{j=1..k} (4v^2 - (2j-1)^2) / (k! 8^k)`.
fn hankel_coefficient(v: f64, k: usize) -> f64 {
    let mu = 4.0 * v * v;
    (1..=k).fold(1.0, |acc, j| {
        let odd = (2 * j - 1) as f64;
        acc * (mu - odd * odd) / (8.0 * j as f64)
    })
}

fn check_argument(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::NonFinite("Bessel argument"));
    }
    if t < 0.0 {
        return Err(Error::domain("Bessel argument", t, "t >= 0"));
    }
    Ok(())
}

/// `J_v(t)` for `v >= 0`, `t >= 0`.
pub fn bessel_j(v: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    Ok(j_unchecked(v.0, t))
}

pub(crate) fn j_unchecked(v: f64, t: f64) -> f64 {
    if t == 0.0 {
        return if v == 0.0 { 1.0 } else { 0.0 };
    }
    if t < switchover(v) {
        series_sum(v, t) * series_prefactor(v, t)
    } else {
        j_large(v, t)
    }
}

/// `J_v(t)` from the ascending series alone, at any argument.
///
/// Used to cross-check the asymptotic branch above the switchover; the
/// double-double sum keeps it accurate up to `t` of a few dozen.
pub fn bessel_j_series(v: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    if t == 0.0 {
        return Ok(if v.0 == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(series_sum(v.0, t) * series_prefactor(v.0, t))
}

/// `V_v(t) = J_v(t) / t^v`, with the limit `1 / (2^v Gamma(v+1))` at `t = 0`.
pub fn v_kernel(v: BesselOrder, t: f64) -> Result<f64> {
    check_argument(t)?;
    Ok(v_kernel_unchecked(v.0, t))
}

pub(crate) fn v_kernel_unchecked(v: f64, t: f64) -> f64 {
    if t < switchover(v) {
        // t^v cancels against the series prefactor
        let norm = if v == 0.0 { 1.0 } else { 1.0 / (2.0_f64.powf(v) * gamma(v + 1.0)) };
        if t == 0.0 {
            norm
        } else {
            series_sum(v, t) * norm
        }
    } else if v == 0.0 {
        j_large(v, t)
    } else {
        j_large(v, t) / t.powf(v)
    }
}

/// Derivatives of `V_v` in `t`, via `d/dt V_v(t) = -t V_{v+1}(t)`:
///
/// - order 0: `V_v(t)`
/// - order 1: `-t V_{v+1}(t)`
/// - order 2: `-V_{v+1}(t) + t^2 V_{v+2}(t)`
pub fn v_kernel_derivative(v: BesselOrder, t: f64, order: u32) -> Result<f64> {
    check_argument(t)?;
    let v = v.0;
    match order {
        0 => Ok(v_kernel_unchecked(v, t)),
        1 => Ok(-t * v_kernel_unchecked(v + 1.0, t)),
        2 => Ok(-v_kernel_unchecked(v + 1.0, t) + t * t * v_kernel_unchecked(v + 2.0, t)),
        _ => Err(Error::domain("derivative order", order as f64, "order <= 2")),
    }
}

/// Truncated Hankel expansion with `trunc.terms` correction terms.
///
/// Returns the value and the remainder bound at `t`.
pub fn bessel_j_asymptotic(v: BesselOrder, t: f64, trunc: &AsymptoticTruncation) -> Result<(f64, f64)> {
    check_argument(t)?;
    if t < v.switchover() {
        return Err(Error::domain("Bessel argument", t, "t >= max(12, 2v) for the asymptotic expansion"));
    }
    let value = hankel(v.0, t, Some(trunc.terms));
    Ok((value, trunc.remainder_bound(t)))
}

/// `(t/2)^v / Gamma(v + 1)`.
fn series_prefactor(v: f64, t: f64) -> f64 {
    if v == 0.0 {
        1.0
    } else if v < 150.0 {
        (0.5 * t).powf(v) / gamma(v + 1.0)
    } else {
        (v * (0.5 * t).ln() - libm::lgamma(v + 1.0)).exp()
    }
}

/// `sum_k (-t^2/4)^k / (k! (v+1)_k)` in double-double.
fn series_sum(v: f64, t: f64) -> f64 {
    let half = 0.5 * t;
    let minus_z = -Dd::product(half, half);
    let peak = half;
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut largest = 1.0_f64;
    for k in 1..1000u32 {
        let kf = k as f64;
        let denom = Dd::sum(v, kf).mul_f64(kf);
        term = term * minus_z / denom;
        sum = sum + term;
        let mag = term.abs();
        largest = largest.max(mag);
        if kf > peak && mag <= 1e-34 * largest.max(sum.abs()) {
            break;
        }
    }
    sum.hi
}

fn j_large(v: f64, t: f64) -> f64 {
    if v < 2.0 {
        return hankel(v, t, None);
    }
    let base = v - v.floor();
    let mut prev = hankel(base, t, None);
    let mut cur = hankel(base + 1.0, t, None);
    let mut order = base + 1.0;
    while order + 0.5 < v {
        let next = 2.0 * order / t * cur - prev;
        prev = cur;
        cur = next;
        order += 1.0;
    }
    cur
}

/// Hankel expansion. With `max_terms = None` the series is cut where its
/// terms stop decreasing or drop below double precision.
fn hankel(v: f64, t: f64, max_terms: Option<usize>) -> f64 {
    let mu = 4.0 * v * v;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let limit = max_terms.unwrap_or(200);
    for k in 1..=limit {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (8.0 * k as f64 * t);
        if max_terms.is_none() && (next == 0.0 || next.abs() >= term.abs()) {
            break;
        }
        term = next;
        // signs follow (-1)^{floor(k/2)}
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if max_terms.is_none() && term.abs() < 1e-17 * p.abs().max(1e-300) {
            break;
        }
    }
    let phase = (0.5 * v + 0.25) * PI;
    let (st, ct) = (t.sin(), t.cos());
    let (sp, cp) = (phase.sin(), phase.cos());
    let cos_w = ct * cp + st * sp;
    let sin_w = st * cp - ct * sp;
    (FRAC_2_PI / t).sqrt() * (p * cos_w - q * sin_w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        let zero = BesselOrder::new(0.0).unwrap();
        let one = BesselOrder::new(1.0).unwrap();
        assert_eq!(bessel_j(zero, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(one, 0.0).unwrap(), 0.0);
        assert_eq!(v_kernel(zero, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(BesselOrder::new(-0.5).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
        let v = BesselOrder::new(1.0).unwrap();
        assert!(bessel_j(v, -1.0).is_err());
        assert!(bessel_j(v, f64::INFINITY).is_err());
        assert!(v_kernel_derivative(v, 1.0, 3).is_err());
    }

    #[test]
    fn hankel_coefficients_vanish_for_half_integers() {
        assert_eq!(hankel_coefficient(0.5, 1), 0.0);
        assert_eq!(hankel_coefficient(1.5, 2), 0.0);
        assert!(hankel_coefficient(1.5, 1) != 0.0);
    }

    #[test]
    fn asymptotic_rejects_below_switchover() {
        let v = BesselOrder::new(3.0).unwrap();
        let tr = AsymptoticTruncation::for_order(v, 2);
        assert!(bessel_j_asymptotic(v, 11.0, &tr).is_err());
        assert!(bessel_j_asymptotic(v, 12.0, &tr).is_ok());
    }
}
