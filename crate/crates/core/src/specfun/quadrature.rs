//! Gauss-Jacobi and Gauss-Legendre rules via Golub-Welsch.
//!
//! The Jacobi matrix of the weight `(1-u)^alpha (1+u)^beta` on `[-1, 1]` is
//! diagonalized with implicit-shift QL; nodes are its eigenvalues and the
//! weights are `mu_0 * z_0^2` with `z_0` the first eigenvector component.

use alloc::vec;
use alloc::vec::Vec;

// redundant whenever std is in the build graph
#[allow(unused_imports)]
use num_traits::Float;

use super::bessel::gamma;
use crate::{Error, Result};

/// Quadrature rule for `int_a^b (b - x)^alpha (x - a)^beta f(x) dx`.
///
/// Exact for polynomials `f` of degree up to `2 * len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiQuadRule {
    exponent: f64,
    left_exponent: f64,
    interval: (f64, f64),
    nodes: Vec<(f64, f64)>,
}

/// Rule with weight `(b - x)^exponent` on `[a, b]`.
pub fn gauss_jacobi_rule(exponent: f64, n_nodes: usize, interval: (f64, f64)) -> Result<JacobiQuadRule> {
    JacobiQuadRule::new(n_nodes, exponent, 0.0, interval)
}

/// Unweighted Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre_rule(n_nodes: usize, interval: (f64, f64)) -> Result<JacobiQuadRule> {
    JacobiQuadRule::new(n_nodes, 0.0, 0.0, interval)
}

impl JacobiQuadRule {
    /// Rule for the weight `(b - x)^exponent (x - a)^left_exponent`.
    pub fn new(n_nodes: usize, exponent: f64, left_exponent: f64, interval: (f64, f64)) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::domain("quadrature nodes", n_nodes as f64, "n_nodes >= 2"));
        }
        for (what, e) in [("right endpoint exponent", exponent), ("left endpoint exponent", left_exponent)] {
            if !e.is_finite() {
                return Err(Error::NonFinite(what));
            }
            if e <= -1.0 {
                return Err(Error::domain(what, e, "exponent > -1 (integrable endpoint)"));
            }
        }
        let (a, b) = interval;
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("quadrature interval"));
        }
        if b <= a {
            return Err(Error::domain("quadrature interval length", b - a, "b > a"));
        }
        let reference = reference_nodes(n_nodes, exponent, left_exponent)?;
        let rule = JacobiQuadRule { exponent, left_exponent, interval: (-1.0, 1.0), nodes: reference };
        Ok(rule.remap(a, b))
    }

    /// Exponent of the `(b - x)` factor.
    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn left_exponent(&self) -> f64 {
        self.left_exponent
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// `(abscissa, weight)` pairs in increasing abscissa.
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same rule on another interval.
    pub fn remap(&self, a: f64, b: f64) -> Self {
        let (a0, b0) = self.interval;
        let ratio = (b - a) / (b0 - a0);
        let scale = ratio.powf(1.0 + self.exponent + self.left_exponent);
        let nodes = self.nodes.iter().map(|&(x, w)| (a + (x - a0) * ratio, w * scale)).collect();
        JacobiQuadRule { interval: (a, b), nodes, ..*self }
    }

    /// Weighted sum `sum_i w_i f(x_i)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().map(|&(x, w)| w * f(x)).sum()
    }

    /// Weighted sum on a sub-interval without materializing the remapped rule.
    pub(crate) fn integrate_on<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (a0, b0) = self.interval;
        let ratio = (b - a) / (b0 - a0);
        let scale = if self.exponent == 0.0 && self.left_exponent == 0.0 {
            ratio
        } else {
            ratio.powf(1.0 + self.exponent + self.left_exponent)
        };
        scale * self.nodes.iter().map(|&(x, w)| w * f(a + (x - a0) * ratio)).sum::<f64>()
    }
}

fn reference_nodes(n: usize, alpha: f64, beta: f64) -> Result<Vec<(f64, f64)>> {
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (k, d) in diag.iter_mut().enumerate().skip(1) {
        let s = 2.0 * k as f64 + ab;
        *d = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let b2 = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[k - 1] = b2.sqrt();
    }
    let mut first_row = vec![0.0; n];
    first_row[0] = 1.0;
    symmetric_tridiagonal_ql(&mut diag, &mut off, &mut first_row)?;

    let mu0 = 2.0_f64.powf(ab + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(ab + 2.0);
    let mut nodes: Vec<(f64, f64)> = diag.iter().zip(&first_row).map(|(&x, &z)| (x, mu0 * z * z)).collect();
    nodes.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(nodes)
}

/// Implicit QL on a symmetric tridiagonal matrix. `off[i]` couples rows
/// `i` and `i + 1`. Rotations are accumulated into `z`, the first row of
/// the eigenvector matrix.
fn symmetric_tridiagonal_ql(d: &mut [f64], off: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::NoConvergence("tridiagonal eigensolver"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
