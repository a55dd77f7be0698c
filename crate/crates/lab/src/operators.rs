//! Multiplier operators, Riesz potentials and maximal operators on grids.

use brlab_core::kernels::riesz_constant;
use brlab_core::multipliers::{br_symbol, m_lambda_j, mu, BumpPartition, MultiplierSpec, Piece};
use brlab_core::specfun::lattice_zeta;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{forward_transform, inverse_transform, try_multiply_radial, Grid, GridFunction, Space};
use crate::{LabError, Result};

/// Largest `|f^(0)|` accepted as mean zero.
pub const MEAN_ZERO_TOLERANCE: f64 = 1e-10;

/// `S_R f`, the multiplier `(1 - (|xi|/R)^gamma)_+^delta`.
pub fn bochner_riesz(f: &GridFunction, radius: f64, spec: &MultiplierSpec) -> Result<GridFunction> {
    let spectrum = forward_transform(f)?;
    inverse_transform(&try_multiply_radial(&spectrum, |r| Ok(br_symbol(r, radius, spec)?))?)
}

/// `S_R f - f` from a precomputed spectrum, without cancellation near
/// `xi = 0`.
pub(crate) fn br_deviation(spectrum: &GridFunction, radius: f64, spec: &MultiplierSpec) -> Result<GridFunction> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(brlab_core::Error::OutOfDomain { what: "R", value: radius, requirement: "R > 0" }.into());
    }
    let flat = spec.with_lambda(0.0)?;
    inverse_transform(&try_multiply_radial(spectrum, |r| Ok(mu(r / radius, &flat)?))?)
}

/// What `riesz_potential` does with the `xi = 0` coefficient when
/// `lambda > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroMode {
    /// Set the zero mode to 0.
    Annihilate,
    /// Fail unless `|f^(0)| <= MEAN_ZERO_TOLERANCE`, then set it to 0.
    RequireMeanZero,
}

/// `I_lambda f`, the multiplier `|xi|^-lambda`.
///
/// Negative `lambda` gives `|xi|^|lambda|`, which vanishes at the origin.
pub fn riesz_potential(f: &GridFunction, lambda: f64, zero_mode: ZeroMode) -> Result<GridFunction> {
    if !lambda.is_finite() {
        return Err(brlab_core::Error::NonFinite("lambda").into());
    }
    if lambda == 0.0 {
        f.require_space(Space::Physical)?;
        return Ok(f.clone());
    }
    let spectrum = forward_transform(f)?;
    if lambda > 0.0 && zero_mode == ZeroMode::RequireMeanZero {
        let mean = spectrum.values()[spectrum.grid().origin_index()].norm();
        if mean > MEAN_ZERO_TOLERANCE {
            return Err(LabError::NonzeroMean(mean));
        }
    }
    let out = try_multiply_radial(&spectrum, |r| Ok(if r == 0.0 { 0.0 } else { r.powf(-lambda) }))?;
    inverse_transform(&out)
}

/// `T_{R,lambda,j} g`, the multiplier `m_{lambda,j}(|xi|/R)`.
pub fn t_r_lambda_j(
    g: &GridFunction,
    radius: f64,
    piece: Piece,
    spec: &MultiplierSpec,
    bp: &BumpPartition,
) -> Result<GridFunction> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(brlab_core::Error::OutOfDomain { what: "R", value: radius, requirement: "R > 0" }.into());
    }
    let spectrum = forward_transform(g)?;
    inverse_transform(&try_multiply_radial(&spectrum, |r| Ok(m_lambda_j(r / radius, piece, spec, bp)?))?)
}

/// Geometric sequence of radii discretizing a supremum over `R`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RGrid {
    values: Vec<f64>,
    ratio: f64,
    restrict_above_one: bool,
}

impl RGrid {
    /// `r_min q^k` for every `k` with `r_min q^k <= r_max`.
    pub fn geometric(r_min: f64, r_max: f64, ratio: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite() && r_max.is_finite() && r_max >= r_min) {
            return Err(LabError::Precondition(format!("R range [{r_min}, {r_max}] must satisfy 0 < R_min <= R_max")));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(LabError::Precondition(format!("R ratio {ratio} must exceed 1")));
        }
        let count = ((r_max / r_min).ln() / ratio.ln() + 1e-9).floor() as usize + 1;
        let mut values: Vec<f64> = (0..count).map(|k| r_min * ratio.powi(k as i32)).collect();
        // land exactly on R_max when the ratio divides the range
        if let Some(last) = values.last_mut() {
            if (*last / r_max - 1.0).abs() < 1e-9 {
                *last = r_max;
            }
        }
        Ok(RGrid { values, ratio, restrict_above_one: false })
    }

    /// Ratio `2^(1/8)` over `[band/4, 4 band]`.
    pub fn around_band(band: f64) -> Result<Self> {
        RGrid::geometric(band / 4.0, 4.0 * band, 2f64.powf(0.125))
    }

    /// Marks the grid as a supremum over `R > 1`; fails if it starts below 1.
    pub fn above_one(self) -> Result<Self> {
        if self.values[0] < 1.0 {
            return Err(LabError::Precondition(format!("R grid starts at {} but R > 1 is required", self.values[0])));
        }
        Ok(RGrid { restrict_above_one: true, ..self })
    }

    /// Same range with ratio `sqrt(q)`; contains every old radius.
    pub fn refined(&self) -> Self {
        let ratio = self.ratio.sqrt();
        let r0 = self.values[0];
        let count = 2 * self.values.len() - 1;
        let values =
            (0..count).map(|k| if k % 2 == 0 { self.values[k / 2] } else { r0 * ratio.powi(k as i32) }).collect();
        RGrid { values, ratio, restrict_above_one: self.restrict_above_one }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn restrict_above_one(&self) -> bool {
        self.restrict_above_one
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "operator", rename_all = "kebab-case")]
pub enum MaximalKind {
    /// `sup_R |S_R f|`.
    BochnerRiesz,
    /// `sup_R R^exponent |S_R f - f|`.
    RateDeviation { exponent: f64 },
    /// Centered Hardy-Littlewood maximal function.
    HardyLittlewood,
    /// `sup_Q |Q|^(alpha/n - 1) int_Q |f|`.
    Fractional { alpha: f64 },
}

/// Nonnegative field produced by a maximal operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaximalField {
    pub kind: MaximalKind,
    pub grid: Grid,
    pub rgrid: Option<RGrid>,
    pub values: Vec<f64>,
}

impl MaximalField {
    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

fn pointwise_max(mut a: Vec<f64>, b: Vec<f64>) -> Vec<f64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.max(y);
    }
    a
}

/// Pointwise supremum over `rs` of `|field(R)|`; max is exactly associative,
/// so the parallel reduction is deterministic.
fn sup_over_radii(grid: &Grid, rs: &RGrid, field: impl Fn(f64) -> Result<Vec<f64>> + Sync) -> Result<Vec<f64>> {
    rs.values().par_iter().map(|&r| field(r)).try_reduce(|| vec![0.0; grid.len()], |a, b| Ok(pointwise_max(a, b)))
}

/// `S_* f = sup_{R in rs} |S_R f|`.
pub fn maximal_br(f: &GridFunction, spec: &MultiplierSpec, rs: &RGrid) -> Result<MaximalField> {
    let spectrum = forward_transform(f)?;
    let values = sup_over_radii(f.grid(), rs, |radius| {
        let m = try_multiply_radial(&spectrum, |r| Ok(br_symbol(r, radius, spec)?))?;
        Ok(inverse_transform(&m)?.abs_values())
    })?;
    Ok(MaximalField { kind: MaximalKind::BochnerRiesz, grid: *f.grid(), rgrid: Some(rs.clone()), values })
}

/// `sup_{R in rs} R^exponent |S_R f - f|`.
pub fn maximal_rate_field(f: &GridFunction, spec: &MultiplierSpec, rs: &RGrid, exponent: f64) -> Result<MaximalField> {
    if !(exponent >= 0.0 && exponent.is_finite()) {
        return Err(LabError::Precondition(format!("rate exponent {exponent} must be >= 0")));
    }
    let spectrum = forward_transform(f)?;
    let values = sup_over_radii(f.grid(), rs, |radius| {
        let scale = radius.powf(exponent);
        Ok(br_deviation(&spectrum, radius, spec)?.values().iter().map(|c| scale * c.norm()).collect())
    })?;
    Ok(MaximalField { kind: MaximalKind::RateDeviation { exponent }, grid: *f.grid(), rgrid: Some(rs.clone()), values })
}

/// Cell sums of `|f|` over the centered cube of side `2^k h` at every point,
/// for `k = 0..=log2 N`.
///
/// A cube of side `2^k h` around a grid point covers `2^k - 1` whole cells
/// along each axis plus half of the two cells at distance `2^(k-1)`; the
/// box-sized cube wraps onto one full cell. Sums are separable per axis.
fn centered_cube_sums(f: &GridFunction) -> Result<Vec<Vec<f64>>> {
    f.require_space(Space::Physical)?;
    let grid = *f.grid();
    let base = f.abs_values();
    let levels = grid.points_per_axis().trailing_zeros() as usize;
    Ok((0..=levels)
        .into_par_iter()
        .map(|k| {
            let mut sums = base.clone();
            if k > 0 {
                for axis in 0..grid.dim() {
                    sums = window_sum(&grid, &sums, axis, 1 << (k - 1));
                }
            }
            sums
        })
        .collect())
}

/// `out[i] = sum_{|d| < m} v[i + d e_axis] + (v[i - m e_axis] + v[i + m e_axis]) / 2`, periodic.
fn window_sum(grid: &Grid, v: &[f64], axis: usize, m: usize) -> Vec<f64> {
    let n = grid.points_per_axis();
    let stride = n.pow((grid.dim() - 1 - axis) as u32);
    (0..v.len())
        .into_par_iter()
        .map(|i| {
            let k = (i / stride) % n;
            let at = |d: isize| v[i - k * stride + ((k as isize + d).rem_euclid(n as isize) as usize) * stride];
            let mut s = at(0);
            for d in 1..m as isize {
                s += at(-d) + at(d);
            }
            s + 0.5 * (at(-(m as isize)) + at(m as isize))
        })
        .collect()
}

/// Centered Hardy-Littlewood maximal function over cubes of side `2^k h`.
///
/// The average over a cube is its cell sum divided by `2^(k n)`.
pub fn hl_maximal(f: &GridFunction) -> Result<MaximalField> {
    let dim = f.grid().dim() as i32;
    let sums = centered_cube_sums(f)?;
    let mut values = vec![0.0_f64; f.len()];
    for (k, level) in sums.iter().enumerate() {
        let cells = 2f64.powi(k as i32 * dim);
        for (v, s) in values.iter_mut().zip(level) {
            *v = v.max(s / cells);
        }
    }
    Ok(MaximalField { kind: MaximalKind::HardyLittlewood, grid: *f.grid(), rgrid: None, values })
}

/// Fractional maximal function `sup_Q s^(alpha - n) (h^n S_Q)` over the
/// centered cubes of [`hl_maximal`], `s = 2^k h` the side and `S_Q` the
/// cell sum.
pub fn fractional_maximal(f: &GridFunction, alpha: f64) -> Result<MaximalField> {
    let grid = *f.grid();
    let n = grid.dim() as f64;
    if !(alpha > 0.0 && alpha < n) {
        return Err(LabError::Precondition(format!("fractional order alpha = {alpha} must lie in (0, n)")));
    }
    let sums = centered_cube_sums(f)?;
    let h = grid.spacing();
    let cell = grid.cell_volume();
    let mut values = vec![0.0_f64; f.len()];
    for (k, level) in sums.iter().enumerate() {
        let weight = (2f64.powi(k as i32) * h).powf(alpha - n);
        for (v, s) in values.iter_mut().zip(level) {
            *v = v.max(weight * (cell * s));
        }
    }
    Ok(MaximalField { kind: MaximalKind::Fractional { alpha }, grid, rgrid: None, values })
}

/// `I_alpha g` on the box by physical-space convolution with
/// `c_{n,alpha} |x|^(alpha-n)`, extending `g` by zero outside the box.
///
/// The convolution runs on a doubled grid so it is aperiodic. The singular
/// origin cell gets the corrected-trapezoid weight
/// `-c_{n,alpha} Z_n(n - alpha) h^alpha`, `Z_n` the lattice zeta function.
pub fn riesz_potential_physical(g: &GridFunction, alpha: f64) -> Result<GridFunction> {
    g.require_space(Space::Physical)?;
    let grid = *g.grid();
    let dim = grid.dim();
    let n = dim as f64;
    if !(alpha > 0.0 && alpha < n) {
        return Err(LabError::Precondition(format!("Riesz order alpha = {alpha} must lie in (0, n)")));
    }
    let points = grid.points_per_axis();
    let padded = Grid::new(dim, 2 * points, 2.0 * grid.half_width())?;
    let offset = points / 2;
    let mut embedded = vec![Complex64::new(0.0, 0.0); padded.len()];
    for (i, &v) in g.values().iter().enumerate() {
        let mut mi = grid.multi_index(i);
        for k in mi.iter_mut().take(dim) {
            *k += offset;
        }
        embedded[padded.flat_index(&mi)] = v;
    }
    let c = riesz_constant(dim, alpha);
    let h = grid.spacing();
    let origin = padded.origin_index();
    let origin_weight = -c * lattice_zeta(dim, n - alpha)? * h.powf(alpha) / grid.cell_volume();
    let kernel = GridFunction::from_fn_complex(padded, Space::Physical, |x| {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        Complex64::new(if r == 0.0 { 0.0 } else { c * r.powf(alpha - n) }, 0.0)
    });
    let mut kernel = kernel.into_values();
    kernel[origin] = Complex64::new(origin_weight, 0.0);
    let kernel_hat = forward_transform(&GridFunction::new(padded, kernel, Space::Physical)?)?;
    let g_hat = forward_transform(&GridFunction::new(padded, embedded, Space::Physical)?)?;
    let product: Vec<Complex64> = g_hat.values().iter().zip(kernel_hat.values()).map(|(a, b)| a * b).collect();
    let conv = inverse_transform(&GridFunction::new(padded, product, Space::Frequency)?)?;
    let values = (0..grid.len())
        .map(|i| {
            let mut mi = grid.multi_index(i);
            for k in mi.iter_mut().take(dim) {
                *k += offset;
            }
            conv.values()[padded.flat_index(&mi)]
        })
        .collect();
    GridFunction::new(grid, values, Space::Physical)
}

/// `I_alpha(|g|)` via [`riesz_potential_physical`].
pub fn riesz_potential_abs(g: &GridFunction, alpha: f64) -> Result<GridFunction> {
    g.require_space(Space::Physical)?;
    let abs = g.map(|c| Complex64::new(c.norm(), 0.0));
    riesz_potential_physical(&abs, alpha)
}

/// Pointwise comparison of the rate maximal function with its three
/// dominating fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationReport {
    /// `lambda + delta - (n-1)/2`.
    pub lhs_exponent: f64,
    /// `(n-1)/2 - delta`.
    pub alpha: f64,
    /// Points where the right-hand side exceeds its floor.
    pub points_used: usize,
    /// `None` when no point qualifies (for example `f = 0`).
    pub max_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    pub lhs_sup: f64,
    pub rhs_sup: f64,
}

/// Relative floor below which the right-hand side is treated as zero.
const RHS_FLOOR: f64 = 1e-13;

/// Compares `sup_{R in rs} R^(lambda+delta-(n-1)/2) |S_R f - f|` with
/// `M_alpha g + I_alpha |g| + M g`, `g = I_{-lambda} f`, `alpha = (n-1)/2 - delta`.
pub fn domination_check(f: &GridFunction, spec: &MultiplierSpec, rs: &RGrid) -> Result<DominationReport> {
    let n = spec.dim() as f64;
    let (delta, lambda) = (spec.delta(), spec.lambda());
    let alpha = 0.5 * (n - 1.0) - delta;
    if alpha <= 0.0 {
        return Err(LabError::Precondition(format!("delta = {delta} must be below (n-1)/2 = {}", 0.5 * (n - 1.0))));
    }
    if lambda < alpha || lambda > spec.gamma() {
        return Err(LabError::Precondition(format!(
            "lambda = {lambda} must lie in [(n-1)/2 - delta, gamma] = [{alpha}, {}]",
            spec.gamma()
        )));
    }
    if !rs.restrict_above_one() {
        return Err(LabError::Precondition("the R grid must be restricted to R > 1".into()));
    }
    if f.grid().dim() != spec.dim() {
        return Err(LabError::Precondition("grid and spec dimensions differ".into()));
    }
    let spectrum = forward_transform(f)?;
    let mean = spectrum.values()[f.grid().origin_index()].norm();
    if mean > MEAN_ZERO_TOLERANCE {
        return Err(LabError::NonzeroMean(mean));
    }
    let g = riesz_potential(f, -lambda, ZeroMode::RequireMeanZero)?;
    let lhs_exponent = lambda + delta - 0.5 * (n - 1.0);
    let lhs = maximal_rate_field(f, spec, rs, lhs_exponent)?;
    let frac = fractional_maximal(&g, alpha)?;
    let riesz = riesz_potential_abs(&g, alpha)?;
    let hl = hl_maximal(&g)?;
    let rhs: Vec<f64> = (0..g.len()).map(|i| frac.values[i] + riesz.values()[i].re + hl.values[i]).collect();
    let rhs_sup = rhs.iter().copied().fold(0.0, f64::max);
    let floor = RHS_FLOOR * rhs_sup;
    let mut ratios: Vec<f64> =
        lhs.values.iter().zip(&rhs).filter(|(_, &r)| r > floor && r > 0.0).map(|(l, r)| l / r).collect();
    ratios.sort_by(f64::total_cmp);
    Ok(DominationReport {
        lhs_exponent,
        alpha,
        points_used: ratios.len(),
        max_ratio: ratios.last().copied(),
        median_ratio: (!ratios.is_empty()).then(|| ratios[ratios.len() / 2]),
        lhs_sup: lhs.sup(),
        rhs_sup,
    })
}
