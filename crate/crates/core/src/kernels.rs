//! Radial kernels by 1-D Bessel quadrature.
//!
//! A radial multiplier `m(|xi|)` on `R^n` has the radial inverse transform
//!
//! ```text
//! K(r) = (2 pi)^{n/2} int m(t) t^{n-1} V_{(n-2)/2}(2 pi r t) dt
//! ```
//!
//! evaluated here with Gauss-Legendre panels no longer than a fraction of
//! the oscillation period `1/r`, and Gauss-Jacobi rules on the end panels
//! when the integrand carries an algebraic endpoint factor.
//!
//! `K_inf`, the transform of the non-integrable `Psi_inf(t) / t^lambda`, is
//! split exactly as `c_{n,lambda} r^{lambda-n}` minus the transform of
//! `phi_0(t) / t^lambda` when `lambda < n`. For `lambda >= n` it is cut at a
//! frequency `T` with an asymptotic tail correction.

use alloc::vec::Vec;
use core::f64::consts::PI;

// redundant whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;
use serde::Serialize;

use crate::fit::{block_maxima, loglog_fit, LineFit};
use crate::multipliers::{BumpPartition, MultiplierSpec};
use crate::specfun::{gamma, v_kernel_unchecked, JacobiQuadRule};
use crate::{Error, Result};

/// Panel and node counts of the oscillatory quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Gauss nodes per panel.
    pub nodes_per_panel: usize,
    /// Panels per oscillation period `1/r` of the Bessel factor.
    pub panels_per_period: f64,
    /// Panel length cap, relative to `max(1, t)`.
    pub max_panel: f64,
    /// `K_inf` with `lambda >= n` is integrated up to `max(64, scale / r)`.
    pub kinf_cutoff_scale: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes_per_panel: 12,
            panels_per_period: 4.0,
            max_panel: 1.0 / 32.0,
            kinf_cutoff_scale: 4096.0,
        }
    }
}

impl QuadratureConfig {
    /// Twice the nodes per panel, for refinement checks.
    pub fn refined(&self) -> Self {
        QuadratureConfig { nodes_per_panel: 2 * self.nodes_per_panel, ..*self }
    }

    fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 2 {
            return Err(Error::domain("nodes per panel", self.nodes_per_panel as f64, ">= 2"));
        }
        if !(self.panels_per_period.is_finite() && self.panels_per_period >= 1.0) {
            return Err(Error::domain("panels per period", self.panels_per_period, ">= 1"));
        }
        if !(self.max_panel.is_finite() && self.max_panel > 0.0) {
            return Err(Error::domain("max panel", self.max_panel, "> 0"));
        }
        if !(self.kinf_cutoff_scale.is_finite() && self.kinf_cutoff_scale > 0.0) {
            return Err(Error::domain("cutoff scale", self.kinf_cutoff_scale, "> 0"));
        }
        Ok(())
    }
}

/// Algebraic endpoint factors `(t - a)^left (b - t)^right` of an integrand.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EndpointWeights {
    pub left: f64,
    pub right: f64,
}

impl EndpointWeights {
    pub const NONE: EndpointWeights = EndpointWeights { left: 0.0, right: 0.0 };

    fn validate(&self) -> Result<()> {
        for (what, e) in [("left endpoint exponent", self.left), ("right endpoint exponent", self.right)] {
            if !e.is_finite() {
                return Err(Error::NonFinite(what));
            }
            if e <= -1.0 {
                return Err(Error::domain(what, e, "exponent > -1 (integrable endpoint)"));
            }
        }
        Ok(())
    }
}

/// Reference rules for plain, left-singular, right-singular and doubly
/// singular panels.
#[derive(Debug, Clone)]
struct PanelRules {
    weights: EndpointWeights,
    legendre: JacobiQuadRule,
    left: JacobiQuadRule,
    right: JacobiQuadRule,
    both: JacobiQuadRule,
}

impl PanelRules {
    fn new(nodes: usize, weights: EndpointWeights) -> Result<Self> {
        weights.validate()?;
        let unit = (-1.0, 1.0);
        let legendre = JacobiQuadRule::new(nodes, 0.0, 0.0, unit)?;
        Ok(PanelRules {
            weights,
            left: JacobiQuadRule::new(nodes, 0.0, weights.left, unit)?,
            right: JacobiQuadRule::new(nodes, weights.right, 0.0, unit)?,
            both: JacobiQuadRule::new(nodes, weights.right, weights.left, unit)?,
            legendre,
        })
    }

    /// `int_a^b (t-a)^left (b-t)^right f(t) dt` over panels split at `breaks`.
    fn integrate<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        breaks: &[f64],
        r: f64,
        cfg: &QuadratureConfig,
        mut f: F,
    ) -> f64 {
        let EndpointWeights { left, right } = self.weights;
        let period_cap = if r > 0.0 { 1.0 / (cfg.panels_per_period * r) } else { f64::INFINITY };
        let mut total = 0.0;
        let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
        cuts.push(a);
        cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
        cuts.push(b);
        for w in cuts.windows(2) {
            let (c, d) = (w[0], w[1]);
            let mut p = c;
            while p < d {
                let h = f64::min(cfg.max_panel * p.max(1.0), period_cap);
                let mut q = p + h;
                if q >= d - 0.25 * h {
                    q = d;
                }
                let first = p == a && left != 0.0;
                let last = q == b && right != 0.0;
                let rule = match (first, last) {
                    (true, true) => &self.both,
                    (true, false) => &self.left,
                    (false, true) => &self.right,
                    (false, false) => &self.legendre,
                };
                total += rule.integrate_on(p, q, |t| {
                    let mut g = f(t);
                    if left != 0.0 && !first {
                        g *= (t - a).powf(left);
                    }
                    if right != 0.0 && !last {
                        g *= (b - t).powf(right);
                    }
                    g
                });
                p = q;
            }
        }
        total
    }
}

/// `d^order/dr^order [(2 pi)^{n/2} V_{(n-2)/2}(2 pi r t)]`.
///
/// For `n = 1` this is `2 cos(2 pi r t)` and its derivatives.
fn radial_factor(n: usize, r: f64, t: f64, order: u32) -> f64 {
    let w = 2.0 * PI * t;
    let s = w * r;
    if n == 1 {
        return match order {
            0 => 2.0 * s.cos(),
            1 => -2.0 * w * s.sin(),
            _ => -2.0 * w * w * s.cos(),
        };
    }
    let v = (n as f64 - 2.0) / 2.0;
    let c = (2.0 * PI).powf(n as f64 / 2.0);
    match order {
        0 => c * v_kernel_unchecked(v, s),
        1 => -c * w * w * r * v_kernel_unchecked(v + 1.0, s),
        _ => c * (-w * w * v_kernel_unchecked(v + 1.0, s) + w.powi(4) * r * r * v_kernel_unchecked(v + 2.0, s)),
    }
}

fn check_r(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFinite("radius r"));
    }
    if r <= 0.0 {
        return Err(Error::domain("radius r", r, "r > 0"));
    }
    Ok(())
}

fn check_order(order: u32) -> Result<()> {
    if order > 2 {
        return Err(Error::domain("derivative order", order as f64, "order <= 2"));
    }
    Ok(())
}

/// `(2 pi)^{n/2} int_a^b m(t) w(t) t^{n-1} V_{(n-2)/2}(2 pi r t) dt`
/// with `w(t) = (t - a)^left (b - t)^right`.
///
/// `m` should be smooth on `[a, b]`; the algebraic endpoint behavior goes
/// into `weights` and is integrated by Gauss-Jacobi rules.
pub fn radial_inverse_transform<F: Fn(f64) -> f64>(
    m: F,
    support: (f64, f64),
    weights: EndpointWeights,
    n: usize,
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_r(r)?;
    cfg.validate()?;
    if !(1..=3).contains(&n) {
        return Err(Error::domain("dimension n", n as f64, "n in {1, 2, 3}"));
    }
    let (a, b) = support;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("support"));
    }
    if !(a >= 0.0 && b > a) {
        return Err(Error::domain("support length", b - a, "0 <= a < b"));
    }
    let rules = PanelRules::new(cfg.nodes_per_panel, weights)?;
    let nm1 = n as i32 - 1;
    Ok(rules.integrate(a, b, &[], r, cfg, |t| m(t) * t.powi(nm1) * radial_factor(n, r, t, 0)))
}

/// `c_{n,alpha} = pi^{alpha - n/2} Gamma((n - alpha)/2) / Gamma(alpha/2)`,
/// so that `|xi|^{-alpha}` is the transform of `c_{n,alpha} |x|^{alpha-n}`.
pub fn riesz_constant(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    PI.powf(alpha - nf / 2.0) * gamma((nf - alpha) / 2.0) / gamma(alpha / 2.0)
}

/// Which radial kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KernelKind {
    /// Transform of `m_{lambda,0}`.
    K0,
    /// Transform of `m_{lambda,1}`.
    K1,
    /// Transform of `m_{lambda,inf}`.
    KInf,
    /// Bochner-Riesz kernel `B_R`.
    BochnerRiesz { radius: f64 },
}

impl KernelKind {
    pub fn id(&self) -> &'static str {
        match self {
            KernelKind::K0 => "k0",
            KernelKind::K1 => "k1",
            KernelKind::KInf => "kinf",
            KernelKind::BochnerRiesz { .. } => "br",
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Plan {
    K0,
    K1,
    /// `c r^{lambda-n}` minus the low-frequency part.
    RieszSplit {
        constant: f64,
    },
    Truncated,
    Br {
        radius: f64,
    },
}

/// A radial kernel with its quadrature rules built once.
#[derive(Debug, Clone)]
pub struct RadialKernel {
    kind: KernelKind,
    spec: MultiplierSpec,
    bp: BumpPartition,
    cfg: QuadratureConfig,
    plan: Plan,
    rules: PanelRules,
}

impl RadialKernel {
    pub fn new(kind: KernelKind, spec: MultiplierSpec, bp: BumpPartition, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let n = spec.dim() as f64;
        let lambda = spec.lambda();
        let (plan, weights) = match kind {
            KernelKind::K0 => {
                spec.require_lambda_at_most_gamma()?;
                (Plan::K0, EndpointWeights { left: spec.gamma() - lambda, right: 0.0 })
            }
            KernelKind::K1 => (Plan::K1, EndpointWeights { left: 0.0, right: spec.delta() }),
            KernelKind::KInf => {
                if lambda == 0.0 {
                    return Err(Error::domain(
                        "lambda",
                        lambda,
                        "lambda > 0 (Psi_inf / t^lambda is not a function kernel at lambda = 0)",
                    ));
                }
                if lambda < n {
                    let constant = riesz_constant(spec.dim(), lambda);
                    (Plan::RieszSplit { constant }, EndpointWeights { left: n - 1.0 - lambda, right: 0.0 })
                } else {
                    (Plan::Truncated, EndpointWeights::NONE)
                }
            }
            KernelKind::BochnerRiesz { radius } => {
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::domain("R", radius, "R > 0"));
                }
                (Plan::Br { radius }, EndpointWeights { left: 0.0, right: spec.delta() })
            }
        };
        let rules = PanelRules::new(cfg.nodes_per_panel, weights)?;
        Ok(RadialKernel { kind, spec, bp, cfg, plan, rules })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }
    pub fn spec(&self) -> &MultiplierSpec {
        &self.spec
    }
    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Kernel value at `|x| = r`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        self.derivative(r, 0)
    }

    /// `d^order/dx_1^order K` at `x = (r, 0, ..., 0)`.
    pub fn derivative(&self, r: f64, order: u32) -> Result<f64> {
        check_r(r)?;
        check_order(order)?;
        let n = self.spec.dim();
        let nm1 = n as i32 - 1;
        let delta = self.spec.delta();
        let gam = self.spec.gamma();
        let lambda = self.spec.lambda();
        let bp = self.bp;
        let cfg = &self.cfg;
        let value = match self.plan {
            Plan::K1 => {
                let pow = nm1 as f64 - lambda;
                self.rules.integrate(0.25, 1.0, &[0.5], r, cfg, |t| {
                    let phi1 = bp.phi1(t);
                    if phi1 == 0.0 {
                        return 0.0;
                    }
                    phi1 * t.powf(pow) * powered_ratio(t, gam, delta) * radial_factor(n, r, t, order)
                })
            }
            Plan::K0 => self.rules.integrate(0.0, 0.5, &[0.25], r, cfg, |t| {
                let phi0 = bp.phi0(t);
                if phi0 == 0.0 {
                    return 0.0;
                }
                let u = t.powf(gam);
                let ratio = if u == 0.0 { -delta } else { (delta * (-u).ln_1p()).exp_m1() / u };
                phi0 * ratio * t.powi(nm1) * radial_factor(n, r, t, order)
            }),
            Plan::RieszSplit { constant } => {
                let e = lambda - n as f64;
                let analytic = match order {
                    0 => constant * r.powf(e),
                    1 => constant * e * r.powf(e - 1.0),
                    _ => constant * e * (e - 1.0) * r.powf(e - 2.0),
                };
                let low = self.rules.integrate(0.0, 0.5, &[0.25], r, cfg, |t| {
                    let phi0 = bp.phi0(t);
                    if phi0 == 0.0 {
                        return 0.0;
                    }
                    phi0 * radial_factor(n, r, t, order)
                });
                analytic - low
            }
            Plan::Truncated => {
                if order > 0 {
                    return Err(Error::Unsupported(
                        "derivatives of K_inf need lambda < n (truncated transform only supports order 0)",
                    ));
                }
                let cutoff = f64::max(64.0, cfg.kinf_cutoff_scale / r);
                let pow = nm1 as f64 - lambda;
                let head = self.rules.integrate(0.25, cutoff, &[0.5, 1.5, 2.0], r, cfg, |t| {
                    bp.psi_inf(t) * t.powf(pow) * radial_factor(n, r, t, 0)
                });
                head + oscillatory_tail(n, lambda, r, cutoff)
            }
            Plan::Br { radius } => {
                let scale = radius.powf(-delta);
                self.rules.integrate(0.0, radius, &[], r, cfg, |t| {
                    scale * powered_ratio(t / radius, gam, delta) * t.powi(nm1) * radial_factor(n, r, t, order)
                })
            }
        };
        if !value.is_finite() {
            return Err(Error::NonFinite("kernel value"));
        }
        Ok(value)
    }

    /// Order-0 samples at `radii`.
    pub fn profile(&self, radii: &[f64]) -> Result<RadialProfile> {
        kernel_derivative_profile(self, 0, radii)
    }
}

/// `((1 - s^gamma) / (1 - s))^delta` on `[0, 1]`, equal to `gamma^delta` at 1.
fn powered_ratio(s: f64, gamma: f64, delta: f64) -> f64 {
    if delta == 0.0 {
        return 1.0;
    }
    let g = if s >= 1.0 {
        gamma
    } else if s == 0.0 {
        1.0
    } else {
        -(gamma * s.ln()).exp_m1() / (1.0 - s)
    };
    g.powf(delta)
}

/// `int_T^inf t^{n-1-lambda} (2 pi)^{n/2} V(2 pi r t) dt` from the leading
/// Hankel term and two integrations by parts.
fn oscillatory_tail(n: usize, lambda: f64, r: f64, cutoff: f64) -> f64 {
    let nf = n as f64;
    let v = (nf - 2.0) / 2.0;
    let omega = 2.0 * PI * r;
    let p = (nf - 1.0) / 2.0 - lambda;
    let amp = (2.0 * PI).powf(nf / 2.0) * (2.0 / PI).sqrt() * omega.powf(-(nf - 1.0) / 2.0);
    let theta = omega * cutoff - (nf - 1.0) * PI / 4.0;
    let (s, c) = (theta.sin(), theta.cos());
    let tp = cutoff.powf(p);
    let tp1 = cutoff.powf(p - 1.0);
    amp * (-tp * s / omega - p * tp1 * c / (omega * omega) - (4.0 * v * v - 1.0) / (8.0 * omega) * tp1 * c / omega)
}

/// `K_{lambda,0}(r)` with the default quadrature.
pub fn kernel_k0(r: f64, spec: &MultiplierSpec, bp: &BumpPartition) -> Result<f64> {
    RadialKernel::new(KernelKind::K0, *spec, *bp, QuadratureConfig::default())?.eval(r)
}

/// `K_{lambda,1}(r)` with the default quadrature.
pub fn kernel_k1(r: f64, spec: &MultiplierSpec, bp: &BumpPartition) -> Result<f64> {
    RadialKernel::new(KernelKind::K1, *spec, *bp, QuadratureConfig::default())?.eval(r)
}

/// `K_{lambda,inf}(r)` with the default quadrature.
pub fn kernel_kinf(r: f64, spec: &MultiplierSpec, bp: &BumpPartition) -> Result<f64> {
    RadialKernel::new(KernelKind::KInf, *spec, *bp, QuadratureConfig::default())?.eval(r)
}

/// `B_R(r)` with the default quadrature.
pub fn br_kernel(r: f64, radius: f64, spec: &MultiplierSpec) -> Result<f64> {
    RadialKernel::new(
        KernelKind::BochnerRiesz { radius },
        *spec,
        BumpPartition::default(),
        QuadratureConfig::default(),
    )?
    .eval(r)
}

/// What a [`RadialProfile`] samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileMeta {
    pub kernel: KernelKind,
    pub spec: MultiplierSpec,
    pub order: u32,
}

/// Kernel samples at strictly increasing positive radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
    pub meta: ProfileMeta,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>, meta: ProfileMeta) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(Error::Unsupported("profile radii and values differ in length"));
        }
        if let Some(&r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::domain("profile radius", r, "r > 0 and finite"));
        }
        if let Some(w) = radii.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::domain("profile radius", w[1], "radii strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("profile value"));
        }
        Ok(RadialProfile { radii, values, meta })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.radii.len()
    }
    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.radii.iter().copied().zip(self.values.iter().copied()).collect()
    }
}

/// Samples `d^order/dx_1^order K` at `radii`.
pub fn kernel_derivative_profile(kernel: &RadialKernel, order: u32, radii: &[f64]) -> Result<RadialProfile> {
    check_order(order)?;
    let values = radii.iter().map(|&r| kernel.derivative(r, order)).collect::<Result<Vec<f64>>>()?;
    RadialProfile::new(radii.to_vec(), values, ProfileMeta { kernel: kernel.kind, spec: kernel.spec, order })
}

/// Power-law fit of `|K(r)| ~ r^fitted_exponent` over a radius window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub fitted_exponent: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub radius_window: (f64, f64),
    pub used: usize,
    /// Samples in the window dropped as zero crossings.
    pub excluded: usize,
}

fn windowed(points: Vec<(f64, f64)>, window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::domain("fit window", hi - lo, "0 < r_min < r_max"));
    }
    Ok(points.into_iter().filter(|(r, _)| *r >= lo && *r <= hi).collect())
}

fn decay_fit(line: LineFit, window: (f64, f64)) -> DecayFit {
    DecayFit {
        fitted_exponent: line.slope,
        intercept: line.intercept,
        residual_rms: line.residual_rms,
        radius_window: window,
        used: line.used,
        excluded: line.excluded,
    }
}

/// Least-squares line through `(ln r, ln |K(r)|)` on `window`.
pub fn fit_decay(profile: &RadialProfile, window: (f64, f64)) -> Result<DecayFit> {
    let pts = windowed(profile.points(), window)?;
    Ok(decay_fit(loglog_fit(&pts)?, window))
}

/// Decay fit of the upper envelope: block maxima over `blocks_per_octave`
/// geometric blocks per doubling of `r`, then a log-log line.
pub fn fit_decay_envelope(profile: &RadialProfile, window: (f64, f64), blocks_per_octave: usize) -> Result<DecayFit> {
    let pts = windowed(profile.points(), window)?;
    let env = block_maxima(&pts, blocks_per_octave);
    Ok(decay_fit(loglog_fit(&env)?, window))
}
