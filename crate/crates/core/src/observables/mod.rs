//! Energies, dissipation integrals, run records, decay fits and extinction
//! detection.

mod energy;
mod fit;
mod record;

use thiserror::Error;

pub use energy::{dissipation_a, dissipation_b, energy_e0, energy_e2, energy_ek};
pub use fit::{
    detect_extinction, first_mass_increase, fit_decay, fit_decay_above, mass_balance_residual,
    DecayModel, FitResult,
};
pub use record::{
    read_series_csv, write_series_csv, ObservableRecord, RunReport, Violations, CSV_COLUMNS,
};

#[derive(Debug, Error)]
pub enum ObservableError {
    #[error("need at least 10 usable samples, got {0}")]
    InsufficientSamples(usize),
    #[error("mass increases at sample {index}; fit refused")]
    NonMonotone { index: usize },
    #[error("series is flat; fit undefined")]
    DegenerateFit,
    #[error("time grid is not uniform at sample {index}")]
    NonUniform { index: usize },
    #[error("power-law fit needs alpha in (0, 1], got {0}")]
    Alpha(f64),
    #[error("unexpected CSV columns: {0}")]
    Columns(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
