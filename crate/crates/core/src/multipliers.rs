//! Scalar symbols of the generalized Bochner-Riesz family.
//!
//! All functions take the radial frequency `r = |xi|`. The deviation
//! multiplier `mu(r) = ((1 - r^gamma)_+^delta - 1) / r^lambda` splits along a
//! smooth partition of unity as
//!
//! ```text
//! mu = m_0 + m_1 - m_inf
//! m_0   = phi_0 mu
//! m_1   = phi_1 (1 - r^gamma)_+^delta / r^lambda
//! m_inf = (phi_1 + phi_inf) / r^lambda
//! ```
//!
//! which holds because `phi_inf` vanishes wherever `(1 - r^gamma)_+` does not.

// redundant whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::{Error, Result};

/// Parameter bundle `(n, delta, gamma, lambda, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplierSpec {
    dim: usize,
    delta: f64,
    gamma: f64,
    lambda: f64,
    p: Option<f64>,
}

impl MultiplierSpec {
    /// Requires `dim` in 1..=3, `delta > -1`, `gamma > 0`, `lambda >= 0`.
    pub fn new(dim: usize, delta: f64, gamma: f64, lambda: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::domain("dimension n", dim as f64, "n in {1, 2, 3}"));
        }
        for (what, x) in [("delta", delta), ("gamma", gamma), ("lambda", lambda)] {
            if !x.is_finite() {
                return Err(Error::NonFinite(what));
            }
        }
        if delta <= -1.0 {
            return Err(Error::domain("delta", delta, "delta > -1"));
        }
        if gamma <= 0.0 {
            return Err(Error::domain("gamma", gamma, "gamma > 0"));
        }
        if lambda < 0.0 {
            return Err(Error::domain("lambda", lambda, "lambda >= 0"));
        }
        Ok(MultiplierSpec { dim, delta, gamma, lambda, p: None })
    }

    /// Spec whose `delta` is the critical index `delta_p = n/p - (n+1)/2`.
    pub fn critical(dim: usize, p: f64, gamma: f64, lambda: f64) -> Result<Self> {
        check_p(p)?;
        let spec = MultiplierSpec::new(dim, delta_p(dim, p), gamma, lambda)?;
        Ok(MultiplierSpec { p: Some(p), ..spec })
    }

    /// Attaches an exponent `p` in `(0, 1]` without touching `delta`.
    pub fn with_p(self, p: f64) -> Result<Self> {
        check_p(p)?;
        Ok(MultiplierSpec { p: Some(p), ..self })
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        MultiplierSpec::new(self.dim, self.delta, self.gamma, lambda).map(|s| MultiplierSpec { p: self.p, ..s })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn p(&self) -> Option<f64> {
        self.p
    }

    /// `n/p - (n+1)/2` when `p` is set.
    pub fn delta_p(&self) -> Option<f64> {
        self.p.map(|p| delta_p(self.dim, p))
    }

    /// Errors unless `lambda <= gamma`, the range where `mu(0)` is finite.
    pub fn require_lambda_at_most_gamma(&self) -> Result<()> {
        if self.lambda > self.gamma {
            return Err(Error::domain("lambda", self.lambda, "lambda <= gamma (mu(0) diverges otherwise)"));
        }
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::NonFinite("p"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::domain("p", p, "0 < p <= 1"));
    }
    Ok(())
}

/// `n/p - (n+1)/2`.
pub fn delta_p(dim: usize, p: f64) -> f64 {
    dim as f64 / p - (dim as f64 + 1.0) / 2.0
}

/// `t_+^delta`, zero for `t <= 0` whatever the sign of `delta`.
#[inline]
pub fn positive_part_power(t: f64, delta: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if delta == 0.0 {
        1.0
    } else {
        t.powf(delta)
    }
}

/// `1 - s^gamma` for `0 <= s`, accurate near `s = 1`.
#[inline]
fn one_minus_pow(s: f64, gamma: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else {
        -(gamma * s.ln()).exp_m1()
    }
}

/// `(1 - (r/R)^gamma)_+^delta`.
pub fn br_symbol(r: f64, radius: f64, spec: &MultiplierSpec) -> Result<f64> {
    if !(radius.is_finite() && r.is_finite()) {
        return Err(Error::NonFinite("symbol argument"));
    }
    if radius <= 0.0 {
        return Err(Error::domain("R", radius, "R > 0"));
    }
    if r < 0.0 {
        return Err(Error::domain("|xi|", r, "|xi| >= 0"));
    }
    Ok(unit_symbol(r / radius, spec.delta, spec.gamma))
}

#[inline]
pub(crate) fn unit_symbol(s: f64, delta: f64, gamma: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        positive_part_power(one_minus_pow(s, gamma), delta)
    }
}

/// `((1 - r^gamma)_+^delta - 1) / r^lambda`, requiring `lambda <= gamma`.
///
/// At `r = 0` the limit is `0` for `lambda < gamma` and `-delta` for
/// `lambda = gamma`.
pub fn mu(r: f64, spec: &MultiplierSpec) -> Result<f64> {
    spec.require_lambda_at_most_gamma()?;
    check_radius(r)?;
    Ok(mu_unchecked(r, spec.delta, spec.gamma, spec.lambda))
}

pub(crate) fn mu_unchecked(r: f64, delta: f64, gamma: f64, lambda: f64) -> f64 {
    if r >= 1.0 {
        return -r.powf(-lambda);
    }
    let u = r.powf(gamma);
    // (1-u)^delta - 1 over u, an analytic function of u with value -delta at 0
    let ratio = if u == 0.0 { -delta } else { (delta * (-u).ln_1p()).exp_m1() / u };
    if lambda == gamma {
        ratio
    } else {
        ratio * r.powf(gamma - lambda)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFinite("|xi|"));
    }
    if r < 0.0 {
        return Err(Error::domain("|xi|", r, "|xi| >= 0"));
    }
    Ok(())
}

/// Shape of the transition zones of the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum BumpProfile {
    /// `theta(s) = psi(s) / (psi(s) + psi(1 - s))`, `psi(s) = exp(-1/s)`.
    #[default]
    Smooth,
    /// Sharp cut at `1/4` and `2`; used by closed-form oracles.
    Indicator,
}

/// The radial partition `phi_0 + phi_1 + phi_inf = 1`.
///
/// `phi_0 = 1` on `[0, 1/4]`, vanishing from `1/2`; `phi_inf = 1` from `2`,
/// vanishing below `3/2`; `phi_1 = 1 - phi_0 - phi_inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BumpPartition {
    pub profile: BumpProfile,
}

/// Values of the partition at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionValues {
    pub phi0: f64,
    pub phi1: f64,
    pub phi_inf: f64,
}

impl PartitionValues {
    /// `Psi_inf = phi_1 + phi_inf`.
    pub fn psi_inf(&self) -> f64 {
        self.phi1 + self.phi_inf
    }
}

/// Smooth step: 0 for `s <= 0`, 1 for `s >= 1`, flat to all orders at both ends.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        // psi(s) / (psi(s) + psi(1-s)) = 1 / (1 + exp(1/s - 1/(1-s)))
        let e = 1.0 / s - 1.0 / (1.0 - s);
        1.0 / (1.0 + e.exp())
    }
}

impl BumpPartition {
    pub const SMOOTH: BumpPartition = BumpPartition { profile: BumpProfile::Smooth };
    pub const INDICATOR: BumpPartition = BumpPartition { profile: BumpProfile::Indicator };

    pub fn eval(&self, r: f64) -> PartitionValues {
        let (phi0, phi_inf) = match self.profile {
            BumpProfile::Smooth => (1.0 - smooth_step(4.0 * (r - 0.25)), smooth_step(2.0 * (r - 1.5))),
            BumpProfile::Indicator => (if r <= 0.25 { 1.0 } else { 0.0 }, if r >= 2.0 { 1.0 } else { 0.0 }),
        };
        PartitionValues { phi0, phi1: 1.0 - phi0 - phi_inf, phi_inf }
    }

    pub fn phi0(&self, r: f64) -> f64 {
        self.eval(r).phi0
    }
    pub fn phi1(&self, r: f64) -> f64 {
        self.eval(r).phi1
    }
    pub fn psi_inf(&self, r: f64) -> f64 {
        self.eval(r).psi_inf()
    }
}

/// `(phi_0(r), phi_1(r), phi_inf(r))`.
pub fn bump_partition_eval(r: f64, bp: &BumpPartition) -> (f64, f64, f64) {
    let v = bp.eval(r);
    (v.phi0, v.phi1, v.phi_inf)
}

/// Which localized piece of `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Piece {
    /// Near the origin, `phi_0 mu`.
    Zero,
    /// Near the unit sphere, `phi_1 (1 - r^gamma)_+^delta / r^lambda`.
    One,
    /// Away from the origin, `Psi_inf / r^lambda`.
    Infinity,
}

/// The localized multiplier `m_{lambda, j}(r)`.
pub fn m_lambda_j(r: f64, piece: Piece, spec: &MultiplierSpec, bp: &BumpPartition) -> Result<f64> {
    check_radius(r)?;
    if piece == Piece::Zero {
        spec.require_lambda_at_most_gamma()?;
    }
    Ok(m_lambda_j_unchecked(r, piece, spec, bp))
}

pub(crate) fn m_lambda_j_unchecked(r: f64, piece: Piece, spec: &MultiplierSpec, bp: &BumpPartition) -> f64 {
    let part = bp.eval(r);
    let weight = match piece {
        Piece::Zero => part.phi0,
        Piece::One => part.phi1,
        Piece::Infinity => part.psi_inf(),
    };
    if weight == 0.0 {
        return 0.0;
    }
    match piece {
        Piece::Zero => weight * mu_unchecked(r, spec.delta, spec.gamma, spec.lambda),
        Piece::One => weight * unit_symbol(r, spec.delta, spec.gamma) * r.powf(-spec.lambda),
        Piece::Infinity => weight * r.powf(-spec.lambda),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(delta: f64, gamma: f64, lambda: f64) -> MultiplierSpec {
        MultiplierSpec::new(1, delta, gamma, lambda).unwrap()
    }

    #[test]
    fn rejects_standing_assumption_violations() {
        assert!(MultiplierSpec::new(1, -1.0, 2.0, 0.0).is_err());
        assert!(MultiplierSpec::new(1, 0.5, 0.0, 0.0).is_err());
        assert!(MultiplierSpec::new(1, 0.5, 2.0, -0.1).is_err());
        assert!(MultiplierSpec::new(4, 0.5, 2.0, 0.0).is_err());
        assert!(MultiplierSpec::critical(2, 1.2, 2.0, 0.0).is_err());
        assert!(MultiplierSpec::critical(2, 0.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn zero_exponent_convention() {
        let s = spec(0.0, 2.0, 0.0);
        assert_eq!(br_symbol(0.999, 1.0, &s).unwrap(), 1.0);
        assert_eq!(br_symbol(1.0, 1.0, &s).unwrap(), 0.0);
        let neg = spec(-0.5, 2.0, 0.0);
        assert_eq!(br_symbol(1.5, 1.0, &neg).unwrap(), 0.0);
    }

    #[test]
    fn mu_small_argument_is_stable() {
        let s = spec(0.3, 2.0, 2.0);
        assert!((mu(1e-200, &s).unwrap() + 0.3).abs() < 1e-15);
        let s = spec(0.3, 2.0, 1.0);
        assert!(mu(1e-200, &s).unwrap().abs() < 1e-190);
    }

    #[test]
    fn mu_rejects_lambda_above_gamma() {
        assert!(mu(0.5, &spec(1.0, 2.0, 2.5)).is_err());
        assert!(m_lambda_j(0.5, Piece::Zero, &spec(1.0, 2.0, 2.5), &BumpPartition::SMOOTH).is_err());
        assert!(m_lambda_j(0.5, Piece::One, &spec(1.0, 2.0, 2.5), &BumpPartition::SMOOTH).is_ok());
    }

    #[test]
    fn indicator_partition_cuts() {
        let bp = BumpPartition::INDICATOR;
        assert_eq!(bump_partition_eval(0.25, &bp), (1.0, 0.0, 0.0));
        assert_eq!(bump_partition_eval(0.26, &bp), (0.0, 1.0, 0.0));
        assert_eq!(bump_partition_eval(2.0, &bp), (0.0, 0.0, 1.0));
    }
}
