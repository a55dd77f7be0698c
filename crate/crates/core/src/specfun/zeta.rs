//! Lattice sums `Z_n(s) = sum_{j in Z^n, j != 0} |j|^-s`, analytically
//! continued below the convergence abscissa `s = n`.
//!
//! With `theta(t) = sum_k exp(-pi k^2 t)` and the Jacobi identity
//! `theta(t) = t^(-1/2) theta(1/t)`,
//!
//! ```text
//! pi^(-s/2) Gamma(s/2) Z_n(s)
//!     = int_1^inf (t^(s/2-1) + t^((n-s)/2-1)) (theta(t)^n - 1) dt + 2/(s-n) - 2/s
//! ```
//!
//! and the integrand decays like `exp(-pi t)`.

// redundant whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;

use super::{gamma, gauss_legendre_rule};
use crate::{Error, Result};

const PANELS: usize = 40;
const NODES: usize = 16;

/// `Z_n(s)` for `n` in 1..=3 and `s > 0`, `s != n`.
pub fn lattice_zeta(n: usize, s: f64) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::domain("lattice dimension", n as f64, "n in {1, 2, 3}"));
    }
    if !s.is_finite() {
        return Err(Error::NonFinite("lattice zeta exponent"));
    }
    if s <= 0.0 || s == n as f64 {
        return Err(Error::domain("lattice zeta exponent", s, "s > 0 and s != n"));
    }
    let nf = n as f64;
    let mut integral = 0.0;
    for panel in 0..PANELS {
        let a = 1.0 + panel as f64;
        let rule = gauss_legendre_rule(NODES, (a, a + 1.0))?;
        integral += rule.integrate(|t| {
            let e = theta_minus_one(t);
            let excess = match n {
                1 => e,
                2 => e * (2.0 + e),
                _ => e * (3.0 + e * (3.0 + e)),
            };
            (t.powf(0.5 * s - 1.0) + t.powf(0.5 * (nf - s) - 1.0)) * excess
        });
    }
    let bracket = integral + 2.0 / (s - nf) - 2.0 / s;
    Ok(core::f64::consts::PI.powf(0.5 * s) / gamma(0.5 * s) * bracket)
}

/// `theta(t) - 1` for `t >= 1`.
fn theta_minus_one(t: f64) -> f64 {
    (1..=6).map(|k| (-core::f64::consts::PI * (k * k) as f64 * t).exp()).sum::<f64>() * 2.0
}
