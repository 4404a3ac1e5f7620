//! Grids, complex fields, spectral transforms and norms.

mod domain;
mod field;
mod norms;
mod params;
mod spectral;

use thiserror::Error;

pub use domain::{make_domain, Domain, DomainKind, DomainSpec};
pub use field::Field;
pub use norms::{
    abs_pow, apply_spectral, boundary_mass, derivative_norms_sq, gradient, h1_norm, h2_norm,
    integral_abs_pow, l2_norm, l2_norm_sq, laplacian, linf_norm, lp_norm, moment, sigma_norms,
    spectral_tail_fraction, SigmaNorms,
};
pub use params::Params;

pub type C64 = num_complex::Complex<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("axis {axis}: grid size {n} must be a power of two and at least 8")]
    GridSize { axis: usize, n: usize },
    #[error("domain of dimension {expected} given {extent} extents and {n} sizes")]
    Dimension { expected: usize, extent: usize, n: usize },
    #[error("axis {axis}: extent {value} must be positive")]
    Extent { axis: usize, value: f64 },
    #[error("confined domains need one harmonic frequency per axis")]
    MissingOmega,
    #[error("harmonic frequency {0} must be positive")]
    Omega(f64),
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite value at grid index {index}")]
    NonFinite { index: usize },
    #[error("L^p exponent {0} must be >= 1")]
    Exponent(f64),
    #[error("Sigma order {0} must be 1 or 2")]
    Order(u32),
    #[error("operation requires a confined domain")]
    NotConfined,
    #[error("invalid parameters: {0}")]
    Params(String),
}
