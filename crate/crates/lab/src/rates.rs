//! Error curves, the saturation oracle and weak-type profiles.

use std::f64::consts::PI;

use brlab_core::fit::{self, WeakTypeProfile};
use brlab_core::multipliers::MultiplierSpec;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::grid::{forward_transform, Grid, GridFunction};
use crate::operators::{br_deviation, MaximalField, RGrid};
use crate::{LabError, Result};

/// Default size of the probe set.
pub const DEFAULT_PROBES: usize = 33;

/// `count` grid points equally spaced along the main diagonal of the central
/// half-box `[-L/2, L/2]^n` (duplicates after rounding removed).
pub fn central_probes(grid: &Grid, count: usize) -> Vec<usize> {
    let l = grid.half_width();
    let mut out: Vec<usize> = Vec::with_capacity(count);
    for k in 0..count {
        let t = if count == 1 { 0.0 } else { -0.5 * l + l * k as f64 / (count - 1) as f64 };
        if let Some(i) = grid.nearest_index(&[t; 3][..grid.dim()]) {
            if !out.contains(&i) {
                out.push(i);
            }
        }
    }
    out
}

/// `(R, max_{x in probes} |S_R f(x) - f(x)|)` for every `R` in `rs`.
pub fn error_curve(f: &GridFunction, spec: &MultiplierSpec, rs: &RGrid, probes: &[usize]) -> Result<Vec<(f64, f64)>> {
    if probes.is_empty() {
        return Err(LabError::Precondition("the probe set is empty".into()));
    }
    if let Some(&bad) = probes.iter().find(|&&i| i >= f.len()) {
        return Err(LabError::Precondition(format!("probe index {bad} outside the grid")));
    }
    let spectrum = forward_transform(f)?;
    rs.values()
        .par_iter()
        .map(|&radius| {
            let dev = br_deviation(&spectrum, radius, spec)?;
            let err = probes.iter().map(|&i| dev.values()[i].norm()).fold(0.0, f64::max);
            Ok((radius, err))
        })
        .collect()
}

/// `R^scale (S_R f - f)(x)` at grid point `x` for each radius.
pub fn scaled_deviation_at(
    f: &GridFunction,
    spec: &MultiplierSpec,
    radii: &[f64],
    scale: f64,
    x: usize,
) -> Result<Vec<(f64, f64)>> {
    let spectrum = forward_transform(f)?;
    radii
        .iter()
        .map(|&radius| Ok((radius, radius.powf(scale) * br_deviation(&spectrum, radius, spec)?.values()[x].re)))
        .collect()
}

/// Predicted limit of `R^gamma (S_R f - f)(x)` in the saturation case
/// `lambda = gamma`: `-delta sum_xi |xi|^gamma f^(xi) exp(2 pi i x . xi) dxi`.
pub fn sharpness_oracle(f: &GridFunction, spec: &MultiplierSpec, x: usize) -> Result<f64> {
    if spec.lambda() != spec.gamma() {
        return Err(LabError::Precondition(format!(
            "the saturation oracle needs lambda = gamma, got lambda = {} and gamma = {}",
            spec.lambda(),
            spec.gamma()
        )));
    }
    let spectrum = forward_transform(f)?;
    let grid = *f.grid();
    let at = grid.point(x);
    let total: Complex64 = spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let xi = grid.frequency(k);
            let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            let phase: f64 = xi.iter().zip(&at).map(|(a, b)| a * b).sum();
            c * r.powf(spec.gamma()) * Complex64::from_polar(1.0, 2.0 * PI * phase)
        })
        .sum();
    Ok(-spec.delta() * total.re * grid.frequency_cell_volume())
}

/// Weak-type profile of a maximal field with the grid's cell volume.
pub fn weak_type_profile(field: &MaximalField, p: f64, thresholds: &[f64]) -> Result<WeakTypeProfile> {
    Ok(fit::weak_type_profile(&field.values, field.grid.cell_volume(), p, thresholds)?)
}
