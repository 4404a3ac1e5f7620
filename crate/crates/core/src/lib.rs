//! Pseudospectral simulator and verification toolkit for the nonlinear
//! Schrödinger equation with sublinear and superlinear damping,
//!
//! `i u_t + (1/2) Lap u = V u + lambda |u|^{2 sigma1} u - i a |u|^{2 sigma2} u - i b u / |u|^alpha`,
//!
//! on flat tori or on `R^d` (d = 1, 2) with harmonic confinement.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod experiments;
pub mod grid;
pub mod inequalities;
pub mod observables;

pub use dynamics::{evolve, step, Scheme, StepperConfig};
pub use grid::{Domain, DomainKind, DomainSpec, Field, Params, C64};
pub use observables::{ObservableRecord, RunReport};
