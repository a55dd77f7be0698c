//! Numerical core for generalized Bochner-Riesz means
//! `(S_R f)^(xi) = (1 - |xi|^gamma / R^gamma)_+^delta f^(xi)`.
//!
//! Everything here is a pure function of its inputs and runs without `std`:
//!
//! - [`specfun`]: Bessel functions `J_v`, the normalized kernel `V_v(t) = J_v(t) / t^v`,
//!   its derivative recurrence, and Gauss-Jacobi rules for endpoint-singular weights.
//! - [`multipliers`]: the Bochner-Riesz symbol, the deviation multiplier `mu`,
//!   the smooth partition `phi_0 + phi_1 + phi_inf = 1` and the localized pieces.
//! - [`kernels`]: real-space radial kernels by 1-D Bessel quadrature and
//!   decay-exponent fitting.
//! - [`fit`]: log-log least squares, rate verdicts and weak-type profiles.
//!
//! Grid operators, IO and the experiment driver live in the `brlab` crate.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod fit;
pub mod kernels;
pub mod multipliers;
pub mod specfun;

pub use error::{Error, Result};
