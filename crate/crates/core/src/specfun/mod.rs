//! Special functions and quadrature rules shared by every kernel integral.

mod bessel;
mod dd;
mod quadrature;
mod zeta;

pub use bessel::{
    bessel_j, bessel_j_asymptotic, bessel_j_series, gamma, v_kernel, v_kernel_derivative, AsymptoticTruncation,
    BesselOrder,
};
pub use quadrature::{gauss_jacobi_rule, gauss_legendre_rule, JacobiQuadRule};
pub use zeta::lattice_zeta;

pub(crate) use bessel::v_kernel_unchecked;
