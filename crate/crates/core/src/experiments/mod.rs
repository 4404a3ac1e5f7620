//! Scenario files, parameter studies and their on-disk outputs.

mod scenario;
mod studies;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use scenario::{
    read_field, run_from, run_scenario, write_field, InitialData, ScenarioConfig, SCHEMA_VERSION,
};
pub use studies::{
    delta_convergence, smallmass_2d_extinction, sweep, ConvergenceRow, ConvergenceTable, SmallMassRow,
    SmallMassTable, SweepEntry, MONOTONE_SLACK,
};

use crate::dynamics::DynamicsError;
use crate::grid::GridError;
use crate::observables::ObservableError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scenario json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}, expected {SCHEMA_VERSION}")]
    Schema(u32),
    #[error("{0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
}

impl ExperimentError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
