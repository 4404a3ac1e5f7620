//! Strang/Lie splitting for the regularized damped NLS.
//!
//! One step composes the exact spectral linear flow with the pointwise
//! modulus/phase flow of the nonlinear and damping terms.

mod evolve;
mod holder;
mod linear;
mod nonlinear;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use evolve::{evolve, step, BlowUp, BlowUpReason, Stepper};
pub use holder::{holder_constant, holder_ratio};
pub use linear::{linear_substep, LinearPropagator};
pub use nonlinear::{nonlinear_substep, polar_factor, RadialFlow};

use crate::grid::GridError;

pub const DEFAULT_EXTINCTION_THRESHOLD: f64 = 1e-24;
/// `||u||_inf` growth factor that counts as blow-up.
pub const BLOW_UP_LINF_FACTOR: f64 = 1e8;
/// Spectral mass fraction beyond 2/3 of the band that counts as loss of
/// resolution (collapse below the grid scale) while `||u||_inf` is at or
/// above its initial value.
pub const RESOLUTION_LOSS_FRACTION: f64 = 1e-3;
/// Spectral tail above which the spectral Laplacian in the second order
/// energy is flagged as ill-conditioned.
pub const E2_CONDITIONING_TAIL: f64 = 1e-10;
/// Outer-shell mass fraction tolerated on truncated `R^d` boxes.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// `N(dt/2) L(dt) N(dt/2)`, second order.
    #[default]
    Strang,
    /// `N(dt) L(dt)`, first order.
    Lie,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperConfig {
    pub dt: f64,
    #[serde(default)]
    pub scheme: Scheme,
    /// Extinction is declared when `M(t) < threshold * M(0)`.
    #[serde(default = "default_threshold")]
    pub extinction_threshold: f64,
    pub max_time: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
}

fn default_threshold() -> f64 {
    DEFAULT_EXTINCTION_THRESHOLD
}

fn default_record_every() -> usize {
    1
}

impl StepperConfig {
    pub fn new(dt: f64, max_time: f64) -> Self {
        Self {
            dt,
            scheme: Scheme::Strang,
            extinction_threshold: DEFAULT_EXTINCTION_THRESHOLD,
            max_time,
            record_every: 1,
        }
    }

    pub fn with_record_every(self, record_every: usize) -> Self {
        Self { record_every, ..self }
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(DynamicsError::Config(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.extinction_threshold > 0.0 && self.extinction_threshold < 1.0) {
            return Err(DynamicsError::Config(format!(
                "extinction threshold {} outside (0, 1)",
                self.extinction_threshold
            )));
        }
        if !(self.max_time.is_finite() && self.max_time >= 0.0) {
            return Err(DynamicsError::Config(format!("max_time = {}", self.max_time)));
        }
        if self.record_every == 0 {
            return Err(DynamicsError::Config("record_every must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of steps needed to reach `max_time`.
    pub fn step_count(&self) -> usize {
        if self.max_time <= 0.0 {
            return 0;
        }
        (self.max_time / self.dt - 1e-9).ceil() as usize
    }
}

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("invalid stepper configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("blow-up at t = {t}: {reason}", t = .0.t, reason = .0.reason)]
    BlowUp(Box<BlowUp>),
}
