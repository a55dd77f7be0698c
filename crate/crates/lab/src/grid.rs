//! Uniform periodic grids on `[-L, L)^n` and the continuous-normalization
//! Fourier transform.
//!
//! Physical samples sit at `x_j = -L + j h` with `h = 2L/N`; frequency samples
//! at `xi_k = (k - N/2) / (2L)`, both indexed `0..N` per axis in row-major
//! order (last axis fastest). The forward transform is the Riemann sum
//! `f^(xi_k) = h^n sum_j f(x_j) exp(-2 pi i x_j . xi_k)`, which reduces to an
//! FFT between two checkerboard sign flips because `N` is a multiple of 4.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

/// Lines handed to one rayon task during a multi-dimensional FFT.
const LINES_PER_TASK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    points: usize,
    half_width: f64,
}

impl Grid {
    /// Requires `dim` in 1..=3, `points` a power of two at least 4 and a
    /// positive finite `half_width`.
    pub fn new(dim: usize, points: usize, half_width: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(LabError::Grid(format!("dimension {dim} not in 1..=3")));
        }
        if points < 4 || !points.is_power_of_two() {
            return Err(LabError::Grid(format!("N = {points} must be a power of two >= 4")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(LabError::Grid(format!("half width L = {half_width} must be positive")));
        }
        let len = points.checked_pow(dim as u32).filter(|&l| l <= 1 << 28);
        if len.is_none() {
            return Err(LabError::Grid(format!("{points}^{dim} samples is too many")));
        }
        Ok(Grid { dim, points, half_width })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn frequency_spacing(&self) -> f64 {
        0.5 / self.half_width
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn frequency_cell_volume(&self) -> f64 {
        self.frequency_spacing().powi(self.dim as i32)
    }

    pub fn box_volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim as i32)
    }

    /// Largest frequency magnitude along one axis, `N / (4L)`.
    pub fn nyquist(&self) -> f64 {
        self.points as f64 * 0.25 / self.half_width
    }

    /// Per-axis indices of flat index `idx`; unused axes are 0.
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut rest = idx;
        for a in (0..self.dim).rev() {
            out[a] = rest % self.points;
            rest /= self.points;
        }
        out
    }

    pub fn flat_index(&self, mi: &[usize]) -> usize {
        mi[..self.dim].iter().fold(0, |acc, &k| acc * self.points + k % self.points)
    }

    /// Physical coordinate of axis index `k`.
    pub fn coordinate(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.spacing()
    }

    /// Frequency of axis index `k`.
    pub fn axis_frequency(&self, k: usize) -> f64 {
        (k as f64 - (self.points / 2) as f64) * self.frequency_spacing()
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let mi = self.multi_index(idx);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.coordinate(mi[a]);
        }
        x
    }

    pub fn frequency(&self, idx: usize) -> [f64; 3] {
        let mi = self.multi_index(idx);
        let mut xi = [0.0; 3];
        for a in 0..self.dim {
            xi[a] = self.axis_frequency(mi[a]);
        }
        xi
    }

    pub fn frequency_norm(&self, idx: usize) -> f64 {
        self.frequency(idx).iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Flat index of the grid point nearest to `x`, if `x` lies in the box.
    pub fn nearest_index(&self, x: &[f64]) -> Option<usize> {
        let mut mi = [0; 3];
        for a in 0..self.dim {
            let k = ((x[a] + self.half_width) / self.spacing()).round();
            if !(0.0..self.points as f64).contains(&k) {
                return None;
            }
            mi[a] = k as usize;
        }
        Some(self.flat_index(&mi))
    }

    /// Index of the origin, `x = 0`.
    pub fn origin_index(&self) -> usize {
        self.flat_index(&[self.points / 2; 3])
    }
}

/// Which side of the transform a [`GridFunction`] lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Physical,
    Frequency,
}

/// Complex samples on a [`Grid`], tagged with their space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
    space: Space,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>, space: Space) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::Grid(format!("{} values for a grid of {}", values.len(), grid.len())));
        }
        Ok(GridFunction { grid, values, space })
    }

    pub fn zeros(grid: Grid, space: Space) -> Self {
        GridFunction { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], space }
    }

    /// Real physical-space samples `f(x)`.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64 + Sync) -> Self {
        let values =
            (0..grid.len()).into_par_iter().map(|i| Complex64::new(f(&grid.point(i)[..grid.dim]), 0.0)).collect();
        GridFunction { grid, values, space: Space::Physical }
    }

    /// Complex samples in `space`, evaluated at grid points or frequencies.
    pub fn from_fn_complex(grid: Grid, space: Space, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let at = match space {
                    Space::Physical => grid.point(i),
                    Space::Frequency => grid.frequency(i),
                };
                f(&at[..grid.dim])
            })
            .collect();
        GridFunction { grid, values, space }
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        GridFunction::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), Space::Physical)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.norm()).collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GridFunction { grid: self.grid, values: self.values.iter().map(|&c| f(c)).collect(), space: self.space }
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.map(|c| c * a)
    }

    /// `a self + b other`, both on the same grid and in the same space.
    pub fn combine(&self, a: f64, other: &GridFunction, b: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| x * a + y * b).collect();
        Ok(GridFunction { grid: self.grid, values, space: self.space })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.combine(1.0, other, 1.0)
    }

    pub(crate) fn check_compatible(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch);
        }
        if self.space != other.space {
            return Err(LabError::WrongSpace { expected: self.space, found: other.space });
        }
        Ok(())
    }

    pub(crate) fn require_space(&self, expected: Space) -> Result<()> {
        if self.space != expected {
            return Err(LabError::WrongSpace { expected, found: self.space });
        }
        Ok(())
    }

    /// L2 norm with the cell weight of the current space.
    pub fn norm_l2(&self) -> f64 {
        let w = match self.space {
            Space::Physical => self.grid.cell_volume(),
            Space::Frequency => self.grid.frequency_cell_volume(),
        };
        (self.values.iter().map(|c| c.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Cell-weighted sum of the samples, the Riemann sum of `integral f`.
    pub fn integral(&self) -> Complex64 {
        let w = match self.space {
            Space::Physical => self.grid.cell_volume(),
            Space::Frequency => self.grid.frequency_cell_volume(),
        };
        self.values.iter().sum::<Complex64>() * w
    }

    /// Circular shift by whole grid steps: `out[j] = self[j - shift]`.
    pub fn shifted(&self, shift: &[isize]) -> Self {
        let n = self.grid.points as isize;
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        for (i, slot) in values.iter_mut().enumerate() {
            let mi = self.grid.multi_index(i);
            let mut src = [0usize; 3];
            for a in 0..self.grid.dim {
                src[a] = (mi[a] as isize - shift.get(a).copied().unwrap_or(0)).rem_euclid(n) as usize;
            }
            *slot = self.values[self.grid.flat_index(&src)];
        }
        GridFunction { grid: self.grid, values, space: self.space }
    }
}

/// Physical samples to samples of `f^(xi)`.
pub fn forward_transform(f: &GridFunction) -> Result<GridFunction> {
    f.require_space(Space::Physical)?;
    let grid = f.grid;
    let values = transform(&grid, f.values.clone(), false, grid.cell_volume());
    Ok(GridFunction { grid, values, space: Space::Frequency })
}

/// Two-sided inverse of [`forward_transform`].
pub fn inverse_transform(spectrum: &GridFunction) -> Result<GridFunction> {
    spectrum.require_space(Space::Frequency)?;
    let grid = spectrum.grid;
    let values = transform(&grid, spectrum.values.clone(), true, grid.frequency_cell_volume());
    Ok(GridFunction { grid, values, space: Space::Physical })
}

/// Multiplies a spectrum by `m(|xi|)`.
///
/// Fails if `m` is not finite at a frequency whose coefficient is nonzero;
/// coefficients that are exactly zero stay zero.
pub fn multiply_radial(spectrum: &GridFunction, m: impl Fn(f64) -> f64 + Sync) -> Result<GridFunction> {
    try_multiply_radial(spectrum, |r| Ok(m(r)))
}

/// [`multiply_radial`] for fallible symbols.
pub fn try_multiply_radial(spectrum: &GridFunction, m: impl Fn(f64) -> Result<f64> + Sync) -> Result<GridFunction> {
    spectrum.require_space(Space::Frequency)?;
    let grid = spectrum.grid;
    let values = spectrum
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &c)| {
            if c == Complex64::new(0.0, 0.0) {
                return Ok(c);
            }
            let v = m(grid.frequency_norm(i))?;
            if !v.is_finite() {
                return Err(LabError::NonFiniteMultiplier {
                    frequency: grid.frequency(i)[..grid.dim].to_vec(),
                    value: v,
                });
            }
            Ok(c * v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridFunction { grid, values, space: Space::Frequency })
}

/// `F^-1 (m(|xi|) F f)` for a physical-space `f`.
pub fn apply_radial_multiplier(f: &GridFunction, m: impl Fn(f64) -> f64 + Sync) -> Result<GridFunction> {
    inverse_transform(&multiply_radial(&forward_transform(f)?, m)?)
}

fn transform(grid: &Grid, mut data: Vec<Complex64>, inverse: bool, scale: f64) -> Vec<Complex64> {
    checkerboard(grid, &mut data, 1.0);
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse { planner.plan_fft_inverse(grid.points) } else { planner.plan_fft_forward(grid.points) };
    for axis in 0..grid.dim {
        fft_along(grid, &mut data, axis, &fft);
    }
    checkerboard(grid, &mut data, scale);
    data
}

/// Multiplies sample `j` by `scale (-1)^(j_1 + ... + j_n)`.
fn checkerboard(grid: &Grid, data: &mut [Complex64], scale: f64) {
    data.par_iter_mut().enumerate().for_each(|(i, v)| {
        let parity: usize = grid.multi_index(i)[..grid.dim].iter().sum();
        *v *= if parity.is_multiple_of(2) { scale } else { -scale };
    });
}

fn fft_along(grid: &Grid, data: &mut [Complex64], axis: usize, fft: &Arc<dyn Fft<f64>>) {
    let n = grid.points;
    let stride = n.pow((grid.dim - 1 - axis) as u32);
    if stride == 1 {
        data.par_chunks_mut(n * LINES_PER_TASK).for_each(|chunk| fft.process(chunk));
        return;
    }
    // gather lines into contiguous storage, transform, scatter back
    let block = n * stride;
    let lines = data.len() / n;
    let mut scratch = vec![Complex64::new(0.0, 0.0); data.len()];
    for line in 0..lines {
        let (outer, inner) = (line / stride, line % stride);
        let base = outer * block + inner;
        for k in 0..n {
            scratch[line * n + k] = data[base + k * stride];
        }
    }
    scratch.par_chunks_mut(n * LINES_PER_TASK).for_each(|chunk| fft.process(chunk));
    for line in 0..lines {
        let (outer, inner) = (line / stride, line % stride);
        let base = outer * block + inner;
        for k in 0..n {
            data[base + k * stride] = scratch[line * n + k];
        }
    }
}
