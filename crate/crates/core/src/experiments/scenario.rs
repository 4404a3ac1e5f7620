use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::dynamics::{evolve, DynamicsError, StepperConfig};
use crate::grid::{l2_norm, Domain, DomainSpec, Field, Params, C64};
use crate::inequalities::random_field;
use crate::observables::{fit_decay_above, write_series_csv, DecayModel, RunReport};

pub const SCHEMA_VERSION: u32 = 1;

/// One simulation run, as stored in a scenario JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: u32,
    pub label: String,
    pub domain: DomainSpec,
    pub params: Params,
    pub stepper: StepperConfig,
    pub initial: InitialData,
    /// Directory receiving `<label>.csv` and `<label>.json`. No files are
    /// written when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<DecayModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `value * e^{i phase}` everywhere.
    Constant {
        value: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `amplitude * e^{i k . x}`; `k` must be a grid wavenumber on tori.
    PlaneWave {
        k: Vec<f64>,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `amplitude * exp(-|x - center|^2 / (2 width^2))`, with the periodic
    /// minimum-image distance on tori. `center` defaults to the middle of
    /// the domain.
    Gaussian {
        #[serde(default)]
        center: Option<Vec<f64>>,
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Band-limited random field normalized to `||u_0|| = amplitude`.
    Random {
        seed: u64,
        #[serde(default = "default_decay")]
        decay: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// One `re,im` line per grid point in row-major order.
    File { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

fn default_decay() -> f64 {
    2.5
}

impl InitialData {
    pub fn realize(&self, domain: &Arc<Domain>) -> Result<Field, ExperimentError> {
        let d = domain.dim();
        let field = match self {
            InitialData::Constant { value, phase } => {
                let z = C64::from_polar(*value, *phase);
                Field::from_fn(domain.clone(), |_| z)?
            }
            InitialData::PlaneWave { k, amplitude } => {
                if k.len() != d {
                    return Err(ExperimentError::Config(format!(
                        "plane wave needs {d} wavenumbers, got {}",
                        k.len()
                    )));
                }
                if !domain.kind().is_confined() {
                    for (axis, &kj) in k.iter().enumerate() {
                        let on_grid = domain.wavenumbers(axis).iter().any(|&w| (w - kj).abs() < 1e-9 * (1.0 + kj.abs()));
                        if !on_grid {
                            return Err(ExperimentError::Config(format!(
                                "wavenumber {kj} is not periodic on axis {axis}"
                            )));
                        }
                    }
                }
                Field::from_fn(domain.clone(), |x| {
                    let phase: f64 = x.iter().zip(k).map(|(x, k)| x * k).sum();
                    C64::from_polar(*amplitude, phase)
                })?
            }
            InitialData::Gaussian {
                center,
                width,
                amplitude,
            } => {
                if !(*width > 0.0) {
                    return Err(ExperimentError::Config(format!("gaussian width {width} must be > 0")));
                }
                let confined = domain.kind().is_confined();
                let periods: Vec<f64> = domain.extent().to_vec();
                let center = match center {
                    Some(c) if c.len() == d => c.clone(),
                    Some(c) => {
                        return Err(ExperimentError::Config(format!(
                            "gaussian center needs {d} coordinates, got {}",
                            c.len()
                        )))
                    }
                    None if confined => vec![0.0; d],
                    None => periods.iter().map(|p| 0.5 * p).collect(),
                };
                Field::from_fn(domain.clone(), |x| {
                    let r2: f64 = x
                        .iter()
                        .zip(&center)
                        .zip(&periods)
                        .map(|((x, c), p)| {
                            let mut dx = x - c;
                            if !confined {
                                dx -= p * (dx / p).round();
                            }
                            dx * dx
                        })
                        .sum();
                    C64::new(amplitude * (-0.5 * r2 / (width * width)).exp(), 0.0)
                })?
            }
            InitialData::Random { seed, decay, amplitude } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let f = random_field(domain, *decay, &mut rng);
                let norm = l2_norm(&f);
                f.scaled(C64::new(amplitude / norm, 0.0))
            }
            InitialData::File { path } => read_field(domain, path)?,
        };
        Ok(field)
    }
}

/// Reads one `re,im` pair per line. A leading `re,im` header is optional.
pub fn read_field(domain: &Arc<Domain>, path: &Path) -> Result<Field, ExperimentError> {
    let file = File::open(path).map_err(|e| ExperimentError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let mut values = Vec::with_capacity(domain.len());
    for (line, row) in reader.records().enumerate() {
        let row = row?;
        if line == 0 && row.get(0) == Some("re") {
            continue;
        }
        let parse = |i: usize| -> Result<f64, ExperimentError> {
            row.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| ExperimentError::Config(format!("{}: bad value on line {}", path.display(), line + 1)))
        };
        values.push(C64::new(parse(0)?, parse(1)?));
    }
    Ok(Field::new(domain.clone(), values)?)
}

/// Writes `u` in the format read by [`read_field`].
pub fn write_field(u: &Field, path: &Path) -> Result<(), ExperimentError> {
    let file = File::create(path).map_err(|e| ExperimentError::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(["re", "im"])?;
    for z in u.values() {
        w.write_record([format!("{:e}", z.re), format!("{:e}", z.im)])?;
    }
    w.flush().map_err(|e| ExperimentError::io(path, e))?;
    Ok(())
}

impl ScenarioConfig {
    /// Parses a scenario file. Relative `file` initial data is resolved
    /// against the directory of the scenario.
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        let mut cfg: ScenarioConfig = serde_json::from_str(&text)?;
        if let InitialData::File { path: p } = &mut cfg.initial {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), ExperimentError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ExperimentError::Schema(self.schema));
        }
        if self.label.is_empty() || self.label.contains(['/', '\\']) {
            return Err(ExperimentError::Config(format!("label `{}` is not a file stem", self.label)));
        }
        self.params.validate_for(self.domain.kind)?;
        self.stepper.validate()?;
        Ok(())
    }

    pub fn build_domain(&self) -> Result<Arc<Domain>, ExperimentError> {
        Ok(Domain::new(self.domain.clone())?)
    }

    pub fn initial_field(&self) -> Result<Field, ExperimentError> {
        self.initial.realize(&self.build_domain()?)
    }
}

/// Runs a scenario from a prepared initial field.
pub fn run_from(cfg: &ScenarioConfig, u0: &Field) -> Result<RunReport, ExperimentError> {
    cfg.check()?;
    let result = evolve(u0, &cfg.params, &cfg.stepper, |_, _| {});
    let mut report = match result {
        Ok(r) => r,
        Err(DynamicsError::BlowUp(mut b)) => {
            if let Some(r) = b.report.as_mut() {
                r.label = cfg.label.clone();
                if let Some(dir) = &cfg.outputs {
                    write_outputs(r, dir)?;
                }
            }
            return Err(DynamicsError::BlowUp(b).into());
        }
        Err(e) => return Err(e.into()),
    };
    report.label = cfg.label.clone();
    if let Some(model) = cfg.fit {
        report.decay_fit = fit_decay_above(&report.series, model, cfg.stepper.extinction_threshold).ok();
    }
    if let Some(dir) = &cfg.outputs {
        write_outputs(&mut report, dir)?;
    }
    Ok(report)
}

/// Realizes the initial data, evolves, optionally fits, and writes
/// `<label>.csv` and `<label>.json` into the output directory.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport, ExperimentError> {
    cfg.check()?;
    let u0 = cfg.initial_field()?;
    run_from(cfg, &u0)
}

fn write_outputs(report: &mut RunReport, dir: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    let csv_path = dir.join(format!("{}.csv", report.label));
    let file = File::create(&csv_path).map_err(|e| ExperimentError::io(&csv_path, e))?;
    write_series_csv(&report.series, BufWriter::new(file))?;
    report.series_csv = Some(csv_path.to_string_lossy().into_owned());
    let json_path = dir.join(format!("{}.json", report.label));
    let file = File::create(&json_path).map_err(|e| ExperimentError::io(&json_path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &report.without_series())?;
    Ok(())
}
