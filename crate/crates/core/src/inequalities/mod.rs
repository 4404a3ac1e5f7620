//! Numerical checks and empirical constants for the functional inequalities
//! behind the decay and extinction estimates.

mod checks;
mod ensemble;
mod sweep;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use checks::{
    check_brezis_gallouet, check_gn, check_gn_dual, check_gn_dual2, check_nash,
    check_young_monotone, conjugate, interpolation_exponent, CheckResult,
};
pub use ensemble::{random_field, DECAY_EXPONENTS};
pub use sweep::{spike_field, sweep_inequality, trial_rng, IneqReport, Inequality};

use crate::grid::GridError;

#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IneqName {
    GN,
    GNDual,
    Nash1,
    Nash2,
    BrezisGallouet,
    YoungMonotone,
    GNDual2,
}

impl IneqName {
    pub const ALL: [IneqName; 7] = [
        IneqName::GN,
        IneqName::GNDual,
        IneqName::Nash1,
        IneqName::Nash2,
        IneqName::BrezisGallouet,
        IneqName::YoungMonotone,
        IneqName::GNDual2,
    ];
}

impl fmt::Display for IneqName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IneqName::GN => "gn",
            IneqName::GNDual => "gn-dual",
            IneqName::Nash1 => "nash1",
            IneqName::Nash2 => "nash2",
            IneqName::BrezisGallouet => "brezis-gallouet",
            IneqName::YoungMonotone => "young-monotone",
            IneqName::GNDual2 => "gn-dual2",
        };
        f.write_str(s)
    }
}

impl FromStr for IneqName {
    type Err = IneqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match key.as_str() {
            "gn" => IneqName::GN,
            "gndual" => IneqName::GNDual,
            "nash1" | "nash" => IneqName::Nash1,
            "nash2" => IneqName::Nash2,
            "brezisgallouet" | "bg" => IneqName::BrezisGallouet,
            "youngmonotone" | "young" => IneqName::YoungMonotone,
            "gndual2" => IneqName::GNDual2,
            _ => return Err(IneqError::UnknownName(s.to_owned())),
        })
    }
}

#[derive(Debug, Error)]
pub enum IneqError {
    #[error("ratio undefined for the zero field")]
    ZeroField,
    #[error("exponent p = {p} outside the admissible range in dimension {d}")]
    Exponent { p: f64, d: usize },
    #[error("alpha = {0} must lie in (0, 1]")]
    Alpha(f64),
    #[error("order {0} must be 1 or 2")]
    Order(u32),
    #[error("sigma = {0} must be >= -1")]
    Sigma(f64),
    #[error("{0}")]
    Domain(&'static str),
    #[error("at least one trial is required")]
    Trials,
    #[error("unknown inequality `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}
