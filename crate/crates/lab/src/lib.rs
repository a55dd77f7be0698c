//! Grid-based laboratory for generalized Bochner-Riesz means.
//!
//! Builds on [`brlab_core`] for symbols, kernels and fits, and adds periodic
//! grids with an FFT-backed Fourier transform, the multiplier and maximal
//! operators, test functions and atoms, rate experiments, artifact I/O and
//! the `brlab` experiment driver.

#![deny(unsafe_code)]
// `!(x > 0.0)` style checks reject NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;

pub mod config;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod operators;
pub mod rates;
pub mod testbed;

pub use brlab_core as core;
pub use error::{LabError, Result};
