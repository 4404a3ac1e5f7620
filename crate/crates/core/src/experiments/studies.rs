use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scenario::{run_from, ScenarioConfig};
use super::ExperimentError;
use crate::dynamics::{evolve, DynamicsError};
use crate::grid::{l2_norm, Field, C64};
use crate::observables::RunReport;

/// Relative slack allowed when checking monotone trends.
pub const MONOTONE_SLACK: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub delta: f64,
    /// `max_{t <= T} ||u^delta(t) - u^{delta_min}(t)||`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub horizon: f64,
    pub reference_delta: f64,
    pub rows: Vec<ConvergenceRow>,
    /// `e` non-increasing along the (decreasing) deltas within
    /// [`MONOTONE_SLACK`].
    pub monotone: bool,
}

/// Trajectory sampled at every recorded time; after extinction the field is zero.
fn trajectory(cfg: &ScenarioConfig, u0: &Field) -> Result<Vec<Field>, ExperimentError> {
    let mut fields = Vec::new();
    evolve(u0, &cfg.params, &cfg.stepper, |_, u| fields.push(u.clone()))?;
    Ok(fields)
}

/// Runs `base` once per regularization `delta` up to time `horizon` and
/// measures the distance to the run with the smallest `delta`.
pub fn delta_convergence(
    base: &ScenarioConfig,
    deltas: &[f64],
    horizon: f64,
) -> Result<ConvergenceTable, ExperimentError> {
    if deltas.len() < 3 {
        return Err(ExperimentError::Precondition(format!(
            "need at least 3 deltas, got {}",
            deltas.len()
        )));
    }
    if deltas.iter().any(|d| !(d.is_finite() && *d >= 0.0)) || deltas.windows(2).any(|w| w[1] > w[0]) {
        return Err(ExperimentError::Precondition("deltas must be >= 0 and sorted decreasing".into()));
    }
    let u0 = base.initial_field()?;
    let runs: Vec<Vec<Field>> = deltas
        .par_iter()
        .map(|&delta| {
            let mut cfg = base.clone();
            cfg.params.delta = delta;
            cfg.stepper.max_time = horizon;
            cfg.check()?;
            trajectory(&cfg, &u0)
        })
        .collect::<Result<_, _>>()?;

    let reference = runs.last().expect("at least three runs");
    let zero = Field::zeros(u0.domain().clone());
    let mut rows = Vec::with_capacity(deltas.len());
    for (&delta, run) in deltas.iter().zip(&runs) {
        let len = run.len().max(reference.len());
        let mut error = 0.0_f64;
        for i in 0..len {
            let a = run.get(i).unwrap_or(&zero);
            let b = reference.get(i).unwrap_or(&zero);
            error = error.max(l2_norm(&a.difference(b)?));
        }
        rows.push(ConvergenceRow { delta, error });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].error <= w[0].error * (1.0 + MONOTONE_SLACK) + f64::MIN_POSITIVE);
    Ok(ConvergenceTable {
        horizon,
        reference_delta: *deltas.last().unwrap(),
        rows,
        monotone,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub value: f64,
    pub label: String,
    pub extinction_time: Option<f64>,
    pub blow_up: bool,
    pub violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub report: Option<RunReport>,
}

/// One independent run per value of the parameter `axis`. Runs execute in
/// parallel; a failing run is reported in its entry and does not stop the
/// others.
pub fn sweep(template: &ScenarioConfig, axis: &str, values: &[f64]) -> Result<Vec<SweepEntry>, ExperimentError> {
    template.params.clone().set(axis, 0.0)?;
    let u0 = template.initial_field()?;
    Ok(values
        .par_iter()
        .map(|&value| {
            let mut cfg = template.clone();
            cfg.label = format!("{}_{}={}", template.label, axis, value);
            let run = cfg
                .params
                .set(axis, value)
                .map_err(ExperimentError::from)
                .and_then(|_| run_from(&cfg, &u0));
            match run {
                Ok(r) => SweepEntry {
                    value,
                    label: cfg.label,
                    extinction_time: r.extinction_time,
                    blow_up: false,
                    violations: r.violations.total(),
                    error: None,
                    report: Some(r),
                },
                Err(e) => SweepEntry {
                    value,
                    label: cfg.label,
                    extinction_time: None,
                    blow_up: matches!(e, ExperimentError::Dynamics(DynamicsError::BlowUp(_))),
                    violations: 0,
                    error: Some(e.to_string()),
                    report: None,
                },
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallMassRow {
    pub scale: f64,
    pub initial_l2: f64,
    pub extinction_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallMassTable {
    pub rows: Vec<SmallMassRow>,
    /// Among extinguishing runs, smaller mass never extinguishes later.
    pub monotone: bool,
}

/// Scales the initial data of a two-dimensional scenario by each factor and
/// records when (if at all) each run goes extinct.
pub fn smallmass_2d_extinction(cfg: &ScenarioConfig, scales: &[f64]) -> Result<SmallMassTable, ExperimentError> {
    if cfg.domain.kind.dim() != 2 {
        return Err(ExperimentError::Precondition("small-mass study needs a 2D domain".into()));
    }
    let s1 = cfg.params.sigma1;
    if !(0.5..=1.5).contains(&s1) {
        return Err(ExperimentError::Precondition(format!("sigma1 = {s1} outside [1/2, 3/2]")));
    }
    let base = cfg.initial_field()?;
    let rows: Vec<SmallMassRow> = scales
        .par_iter()
        .map(|&scale| {
            let u0 = base.scaled(C64::new(scale, 0.0));
            let mut run = cfg.clone();
            run.label = format!("{}_scale={}", cfg.label, scale);
            let report = run_from(&run, &u0)?;
            Ok(SmallMassRow {
                scale,
                initial_l2: l2_norm(&u0),
                extinction_time: report.extinction_time,
            })
        })
        .collect::<Result<_, ExperimentError>>()?;

    let mut extinct: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.extinction_time.map(|t| (r.initial_l2, t)))
        .collect();
    extinct.sort_by(|a, b| b.0.total_cmp(&a.0));
    let slack = cfg.stepper.dt;
    let monotone = extinct.windows(2).all(|w| w[1].1 <= w[0].1 + slack);
    Ok(SmallMassTable { rows, monotone })
}
