use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::energy::{dissipation_a, dissipation_b, energy_e0, energy_e2, energy_ek};
use super::fit::FitResult;
use super::ObservableError;
use crate::dynamics::StepperConfig;
use crate::grid::{boundary_mass, l2_norm_sq, linf_norm, sigma_norms, DomainSpec, Field, Params};

/// Column order of the series CSV.
pub const CSV_COLUMNS: [&str; 10] = [
    "t",
    "mass_sq",
    "linf",
    "e0",
    "ek",
    "e2",
    "diss_a",
    "diss_b",
    "sigma1_norm",
    "boundary_frac",
];

/// One time sample of the run diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub mass_sq: f64,
    pub linf: f64,
    pub e0: f64,
    pub ek: f64,
    pub e2: f64,
    pub diss_a: f64,
    pub diss_b: f64,
    pub sigma1_norm: f64,
    pub boundary_frac: f64,
}

impl ObservableRecord {
    pub fn measure(t: f64, u: &Field, params: &Params) -> Self {
        let sigma1_norm = sigma_norms(u, 1).map(|s| s.sigma).unwrap_or(f64::NAN);
        Self {
            t,
            mass_sq: l2_norm_sq(u),
            linf: linf_norm(u),
            e0: energy_e0(u, params),
            ek: energy_ek(u, params),
            e2: energy_e2(u, params),
            diss_a: dissipation_a(u, params),
            diss_b: dissipation_b(u, params),
            sigma1_norm,
            boundary_frac: boundary_mass(u).unwrap_or(0.0),
        }
    }

    pub fn l2(&self) -> f64 {
        self.mass_sq.sqrt()
    }
}

/// Invariant breaches counted along a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violations {
    pub mass_increase: usize,
    pub energy_increase: usize,
    pub boundary_breach: usize,
    pub non_monotone_fit: usize,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.mass_increase + self.energy_increase + self.boundary_breach + self.non_monotone_fit
    }
}

/// Trajectory summary returned by `evolve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(default)]
    pub label: String,
    pub series: Vec<ObservableRecord>,
    pub extinction_time: Option<f64>,
    pub decay_fit: Option<FitResult>,
    pub violations: Violations,
    /// Records whose spectrum is too rough for the spectral Laplacian in the
    /// second order energy to be trusted.
    pub e2_conditioning_flags: usize,
    pub steps: usize,
    pub final_time: f64,
    pub params: Params,
    pub domain: DomainSpec,
    pub config: StepperConfig,
    /// Path of the series CSV, when written by the scenario runner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_csv: Option<String>,
}

impl RunReport {
    pub fn initial_mass_sq(&self) -> Option<f64> {
        self.series.first().map(|r| r.mass_sq)
    }

    pub fn final_record(&self) -> Option<&ObservableRecord> {
        self.series.last()
    }

    /// The same report without the inline series, as stored next to the CSV.
    pub fn without_series(&self) -> Self {
        Self {
            series: Vec::new(),
            ..self.clone()
        }
    }
}

pub fn write_series_csv<W: Write>(series: &[ObservableRecord], out: W) -> Result<(), ObservableError> {
    let mut w = csv::Writer::from_writer(out);
    if series.is_empty() {
        w.write_record(CSV_COLUMNS)?;
    }
    for r in series {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a series CSV, checking the header against [`CSV_COLUMNS`].
pub fn read_series_csv<R: Read>(input: R) -> Result<Vec<ObservableRecord>, ObservableError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_COLUMNS {
        return Err(ObservableError::Columns(header.join(",")));
    }
    r.deserialize().map(|row| row.map_err(ObservableError::from)).collect()
}
