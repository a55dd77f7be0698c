//! Test functions: Gaussians with closed-form transforms, band-limited
//! projections and certified `(p,2)`-atoms.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grid::{forward_transform, inverse_transform, multiply_radial, Grid, GridFunction, Space};
use crate::{LabError, Result};

/// Largest admissible Gaussian value at the box boundary.
pub const GAUSSIAN_TAIL: f64 = 1e-12;

/// Samples of `exp(-pi |x - center|^2 / width^2)`.
///
/// Fails if the value at the nearest boundary sample exceeds
/// [`GAUSSIAN_TAIL`].
pub fn gaussian(center: &[f64], width: f64, grid: &Grid) -> Result<GridFunction> {
    let dim = grid.dim();
    if center.len() != dim {
        return Err(LabError::Precondition(format!("center has {} coordinates, grid has {dim}", center.len())));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(LabError::Precondition(format!("Gaussian width {width} must be positive")));
    }
    let l = grid.half_width();
    let last = l - grid.spacing();
    let gap = center.iter().map(|&c| (c + l).abs().min((last - c).abs())).fold(f64::INFINITY, f64::min);
    let tail = (-PI * gap * gap / (width * width)).exp();
    if tail > GAUSSIAN_TAIL || center.iter().any(|&c| c < -l || c > last) {
        return Err(LabError::TailTooLarge(tail));
    }
    Ok(GridFunction::from_fn(*grid, |x| {
        let d2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
        (-PI * d2 / (width * width)).exp()
    }))
}

/// Closed-form transform of [`gaussian`]:
/// `width^n exp(-pi width^2 |xi|^2) exp(-2 pi i center . xi)`.
pub fn gaussian_transform(center: &[f64], width: f64, xi: &[f64]) -> Complex64 {
    let n = xi.len() as i32;
    let xi2: f64 = xi.iter().map(|v| v * v).sum();
    let phase: f64 = xi.iter().zip(center).map(|(a, c)| a * c).sum();
    Complex64::from_polar(width.powi(n) * (-PI * width * width * xi2).exp(), -2.0 * PI * phase)
}

/// Zeroes every coefficient with `|xi| >= cutoff`.
pub fn band_limited_projection(f: &GridFunction, cutoff: f64) -> Result<GridFunction> {
    let spectrum = forward_transform(f)?;
    inverse_transform(&multiply_radial(&spectrum, |r| if r < cutoff { 1.0 } else { 0.0 })?)
}

/// Axis-aligned cube `center + [-side/2, side/2]^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cube {
    pub center: Vec<f64>,
    pub side: f64,
}

impl Cube {
    pub fn new(center: Vec<f64>, side: f64) -> Self {
        Cube { center, side }
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.center.len() as i32)
    }

    /// Strict interior test; points on the faces are outside.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.center).all(|(a, c)| (a - c).abs() < 0.5 * self.side)
    }
}

/// One certified moment `int a(x) (x - center)^alpha dx`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRecord {
    pub exponents: Vec<u32>,
    pub value: f64,
    /// `1e-10 ||a||_2 l^(|alpha| + n)`.
    pub tolerance: f64,
}

/// A `(p,2)`-atom: supported in `cube`, `||a||_2 = |Q|^(1/2 - 1/p)` and
/// moments up to total degree `moment_order` vanishing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    #[serde(skip)]
    pub values: GridFunction,
    pub cube: Cube,
    pub p: f64,
    pub moment_order: usize,
    /// Seed of the accepted draw (the requested one unless it was degenerate).
    pub seed: u64,
    pub l2_norm: f64,
    pub moments: Vec<MomentRecord>,
}

/// `[n (1/p - 1)]`.
pub fn moment_order(dim: usize, p: f64) -> usize {
    (dim as f64 * (1.0 / p - 1.0) + 1e-9).floor().max(0.0) as usize
}

const ATTEMPTS: usize = 10;
const MIN_CELLS_PER_SIDE: f64 = 32.0;
/// Random plane waves in the trigonometric polynomial, and their largest
/// integer frequency per axis in units of `1/side`.
const WAVES: usize = 8;
const MAX_WAVENUMBER: i32 = 4;

/// Draws a smooth random atom and certifies it.
///
/// The draw is a random trigonometric polynomial times a bump that vanishes
/// to infinite order on the faces of the cube. Moments are removed by
/// subtracting bump-weighted monomials, which keeps the atom smooth, and the
/// result is rescaled to the extremal size `|Q|^(1/2 - 1/p)`.
pub fn make_atom(p: f64, cube: &Cube, seed: u64, grid: &Grid) -> Result<Atom> {
    let dim = grid.dim();
    if !(p > 0.0 && p <= 1.0) {
        return Err(LabError::Precondition(format!("atom exponent p = {p} must lie in (0, 1]")));
    }
    if cube.center.len() != dim || !(cube.side > 0.0) {
        return Err(LabError::Precondition("cube must match the grid dimension and have positive side".into()));
    }
    let h = grid.spacing();
    if cube.side / h < MIN_CELLS_PER_SIDE {
        return Err(LabError::Precondition(format!(
            "cube side {} spans {:.1} cells, at least {MIN_CELLS_PER_SIDE} required",
            cube.side,
            cube.side / h
        )));
    }
    let margin = 2.0 * h;
    let l = grid.half_width();
    if cube.center.iter().any(|&c| c - 0.5 * cube.side < -l + margin || c + 0.5 * cube.side > l - margin) {
        return Err(LabError::Precondition("cube must sit inside the box with a two-cell margin".into()));
    }
    let order = moment_order(dim, p);
    let exponents = multi_indices(dim, order);
    let support: Vec<usize> = (0..grid.len()).filter(|&i| cube.contains(&grid.point(i)[..dim])).collect();
    // scaled coordinates v = 2 (x - center) / side in (-1, 1)^n
    let scaled: Vec<[f64; 3]> = support
        .iter()
        .map(|&i| {
            let x = grid.point(i);
            let mut v = [0.0; 3];
            for a in 0..dim {
                v[a] = 2.0 * (x[a] - cube.center[a]) / cube.side;
            }
            v
        })
        .collect();
    let bump: Vec<f64> = scaled.iter().map(|v| v[..dim].iter().map(|&u| bump_1d(u)).product()).collect();
    let basis: Vec<Vec<f64>> =
        exponents.iter().map(|e| scaled.iter().map(|v| monomial(&v[..dim], e)).collect()).collect();

    for attempt in 0..ATTEMPTS {
        let draw_seed = seed.wrapping_add(attempt as u64);
        let raw = draw(draw_seed, dim, &scaled, &bump);
        let raw_norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut projected = raw.clone();
        // a second pass removes what rounding left of the moments
        for _ in 0..2 {
            remove_moments(&mut projected, &basis, &bump)?;
        }
        let norm = projected.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm >= 1e-12 * raw_norm && norm > 0.0) {
            continue;
        }
        let target = cube.volume().powf(0.5 - 1.0 / p);
        let current = (norm * norm * grid.cell_volume()).sqrt();
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (&i, &v) in support.iter().zip(&projected) {
            values[i] = Complex64::new(v * (target / current), 0.0);
        }
        let values = GridFunction::new(*grid, values, Space::Physical)?;
        let atom = certify(values, cube, p, order, draw_seed, &exponents)?;
        return Ok(atom);
    }
    Err(LabError::DegenerateAtom(ATTEMPTS))
}

/// `exp(1 - 1/(1 - u^2))` on `(-1, 1)`, zero outside.
fn bump_1d(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

fn monomial(v: &[f64], e: &[u32]) -> f64 {
    v.iter().zip(e).map(|(x, &k)| x.powi(k as i32)).product()
}

/// All exponent vectors of total degree at most `order`, degree-major.
fn multi_indices(dim: usize, order: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for degree in 0..=order as u32 {
        let mut current = vec![0u32; dim];
        fill(&mut out, &mut current, 0, degree);
    }
    out
}

fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, axis: usize, remaining: u32) {
    if axis + 1 == current.len() {
        current[axis] = remaining;
        out.push(current.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        current[axis] = k;
        fill(out, current, axis + 1, remaining - k);
    }
}

fn draw(seed: u64, dim: usize, scaled: &[[f64; 3]], bump: &[f64]) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, [f64; 3], f64)> = (0..WAVES)
        .map(|_| {
            let amplitude = rng.gen_range(-1.0..1.0);
            let mut k = [0.0; 3];
            for slot in k.iter_mut().take(dim) {
                *slot = rng.gen_range(-MAX_WAVENUMBER..=MAX_WAVENUMBER) as f64;
            }
            (amplitude, k, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    scaled
        .iter()
        .zip(bump)
        .map(|(v, b)| {
            // wavenumber k puts k full periods across the cube
            let poly: f64 = waves
                .iter()
                .map(|(a, k, phase)| a * (PI * (k[0] * v[0] + k[1] * v[1] + k[2] * v[2]) + phase).cos())
                .sum();
            b * poly
        })
        .collect()
}

/// Subtracts `sum_beta c_beta bump v^beta` so that every moment
/// `sum a v^alpha` vanishes; the Gram matrix is symmetric positive definite.
fn remove_moments(values: &mut [f64], basis: &[Vec<f64>], bump: &[f64]) -> Result<()> {
    let m = basis.len();
    let gram = DMatrix::from_fn(m, m, |i, j| {
        basis[i].iter().zip(&basis[j]).zip(bump).map(|((a, b), w)| a * b * w).sum::<f64>()
    });
    let rhs = DVector::from_fn(m, |i, _| basis[i].iter().zip(values.iter()).map(|(q, v)| q * v).sum::<f64>());
    let chol =
        gram.cholesky().ok_or_else(|| LabError::Certification("moment Gram matrix not positive definite".into()))?;
    let coeffs = chol.solve(&rhs);
    for (j, v) in values.iter_mut().enumerate() {
        let correction: f64 = (0..m).map(|b| coeffs[b] * basis[b][j]).sum();
        *v -= correction * bump[j];
    }
    Ok(())
}

fn certify(values: GridFunction, cube: &Cube, p: f64, order: usize, seed: u64, exponents: &[Vec<u32>]) -> Result<Atom> {
    let grid = *values.grid();
    let dim = grid.dim();
    let cell = grid.cell_volume();
    let mut sq = 0.0;
    let mut moments = vec![0.0; exponents.len()];
    for (i, c) in values.values().iter().enumerate() {
        let x = grid.point(i);
        if !cube.contains(&x[..dim]) {
            if c.norm() != 0.0 {
                return Err(LabError::Certification(format!("nonzero value outside the cube at {:?}", &x[..dim])));
            }
            continue;
        }
        sq += c.norm_sqr();
        let rel: Vec<f64> = (0..dim).map(|a| x[a] - cube.center[a]).collect();
        for (slot, e) in moments.iter_mut().zip(exponents) {
            *slot += c.re * monomial(&rel, e);
        }
    }
    let l2_norm = (sq * cell).sqrt();
    let bound = cube.volume().powf(0.5 - 1.0 / p);
    if l2_norm > bound * (1.0 + 1e-10) {
        return Err(LabError::Certification(format!("size {l2_norm} exceeds |Q|^(1/2-1/p) = {bound}")));
    }
    let mut records = Vec::with_capacity(exponents.len());
    for (m, e) in moments.into_iter().zip(exponents) {
        let degree: u32 = e.iter().sum();
        let value = m * cell;
        let tolerance = 1e-10 * l2_norm * cube.side.powi(degree as i32 + dim as i32);
        if value.abs() > tolerance {
            return Err(LabError::Certification(format!("moment {e:?} = {value:e} exceeds {tolerance:e}")));
        }
        records.push(MomentRecord { exponents: e.clone(), value, tolerance });
    }
    Ok(Atom { values, cube: cube.clone(), p, moment_order: order, seed, l2_norm, moments: records })
}
