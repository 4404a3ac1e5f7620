use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use damped_nls::dynamics::DynamicsError;
use damped_nls::experiments::{
    delta_convergence, run_scenario, smallmass_2d_extinction, sweep, ExperimentError, ScenarioConfig,
};
use damped_nls::grid::Domain;
use damped_nls::inequalities::{sweep_inequality, IneqName, Inequality};
use damped_nls::observables::{fit_decay, read_series_csv, DecayModel};

const EXIT_VIOLATION: u8 = 2;
const EXIT_BLOW_UP: u8 = 3;

#[derive(Parser)]
#[command(name = "damped-nls", version, about = "Damped NLS simulator and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its CSV series and JSON report.
    Run {
        config: PathBuf,
        /// Output directory, overriding the scenario's `outputs`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario per value of a model parameter.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Distance of regularized runs to the least regularized one.
    Converge {
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
        #[arg(long = "T", alias = "t")]
        horizon: f64,
        #[arg(long)]
        json: bool,
    },
    /// Extinction times of a 2D scenario with rescaled initial data.
    Smallmass {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.1")]
        scales: Vec<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of an inequality constant.
    Ineq {
        /// gn, gn-dual, gn-dual2, nash1, nash2, brezis-gallouet, young-monotone
        name: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lebesgue exponent for gn and gn-dual (`inf` allowed in 1D).
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        /// Exponent for nash1 and nash2.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Grid for field inequalities; defaults depend on the inequality.
        #[arg(long, value_enum)]
        domain: Option<DomainChoice>,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Fit a decay law to a series CSV.
    Fit {
        series: PathBuf,
        #[arg(long, value_enum)]
        model: ModelChoice,
        /// Damping exponent, required by the power model.
        #[arg(long)]
        alpha: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelChoice {
    Exp,
    Power,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainChoice {
    Torus1d,
    Torus2d,
    Confined1d,
    Confined2d,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let blow_up = err
                .downcast_ref::<ExperimentError>()
                .is_some_and(|e| matches!(e, ExperimentError::Dynamics(DynamicsError::BlowUp(_))));
            ExitCode::from(if blow_up { EXIT_BLOW_UP } else { 1 })
        }
    }
}

fn load(path: &Path) -> Result<ScenarioConfig> {
    ScenarioConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn fmt_opt(t: Option<f64>) -> String {
    t.map_or_else(|| "-".into(), |t| format!("{t:.6}"))
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { config, out } => {
            let mut cfg = load(&config)?;
            if out.is_some() {
                cfg.outputs = out;
            }
            let report = run_scenario(&cfg)?;
            let last = report.final_record();
            println!("label            {}", report.label);
            println!("steps            {}", report.steps);
            println!("final time       {:.6}", report.final_time);
            println!("extinction time  {}", fmt_opt(report.extinction_time));
            if let Some(r) = last {
                println!("final mass       {:.6e}", r.mass_sq);
            }
            if let Some(fit) = &report.decay_fit {
                println!("fit              rate {:.6} r2 {:.6}", fit.rate_or_exponent, fit.r_squared);
            }
            if let Some(csv) = &report.series_csv {
                println!("series           {csv}");
            }
            let v = report.violations;
            println!(
                "violations       mass {} energy {} boundary {}",
                v.mass_increase, v.energy_increase, v.boundary_breach
            );
            Ok(if v.total() > 0 {
                ExitCode::from(EXIT_VIOLATION)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Sweep {
            config,
            axis,
            values,
            out,
            json,
        } => {
            let mut cfg = load(&config)?;
            if out.is_some() {
                cfg.outputs = out;
            }
            let entries = sweep(&cfg, &axis, &values)?;
            if json {
                print_json(&entries)?;
            } else {
                println!("{:>12} {:>14} {:>8} {:>10}  error", axis, "extinction", "blow-up", "violations");
                for e in &entries {
                    println!(
                        "{:>12} {:>14} {:>8} {:>10}  {}",
                        e.value,
                        fmt_opt(e.extinction_time),
                        e.blow_up,
                        e.violations,
                        e.error.as_deref().unwrap_or("")
                    );
                }
            }
            let code = if entries.iter().any(|e| e.blow_up) {
                EXIT_BLOW_UP
            } else if entries.iter().any(|e| e.error.is_some()) {
                1
            } else if entries.iter().any(|e| e.violations > 0) {
                EXIT_VIOLATION
            } else {
                0
            };
            Ok(ExitCode::from(code))
        }
        Command::Converge {
            config,
            deltas,
            horizon,
            json,
        } => {
            let cfg = load(&config)?;
            let table = delta_convergence(&cfg, &deltas, horizon)?;
            if json {
                print_json(&table)?;
            } else {
                println!("{:>12} {:>14}", "delta", "error");
                for r in &table.rows {
                    println!("{:>12.3e} {:>14.6e}", r.delta, r.error);
                }
                println!("monotone: {}", table.monotone);
            }
            Ok(if table.monotone {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            })
        }
        Command::Smallmass { config, scales, json } => {
            let cfg = load(&config)?;
            let table = smallmass_2d_extinction(&cfg, &scales)?;
            if json {
                print_json(&table)?;
            } else {
                println!("{:>8} {:>12} {:>14}", "scale", "l2(u0)", "extinction");
                for r in &table.rows {
                    println!("{:>8} {:>12.6} {:>14}", r.scale, r.initial_l2, fmt_opt(r.extinction_time));
                }
                println!("monotone: {}", table.monotone);
            }
            Ok(if table.monotone {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            })
        }
        Command::Ineq {
            name,
            trials,
            seed,
            p,
            alpha,
            domain,
            n,
            json,
        } => {
            let name: IneqName = name.parse()?;
            let case = match name {
                IneqName::GN => Inequality::Gn { p },
                IneqName::GNDual => Inequality::GnDual { p },
                IneqName::Nash1 => Inequality::Nash1 { alpha },
                IneqName::Nash2 => Inequality::Nash2 { alpha },
                IneqName::BrezisGallouet => Inequality::BrezisGallouet,
                IneqName::YoungMonotone => Inequality::YoungMonotone,
                IneqName::GNDual2 => Inequality::GnDual2,
            };
            let choice = domain.unwrap_or(match name {
                IneqName::GNDual => DomainChoice::Confined1d,
                IneqName::GNDual2 => DomainChoice::Confined2d,
                IneqName::BrezisGallouet => DomainChoice::Torus2d,
                _ => DomainChoice::Torus1d,
            });
            let tau = std::f64::consts::TAU;
            let grid = match choice {
                DomainChoice::Torus1d => Domain::torus1d(tau, n),
                DomainChoice::Torus2d => Domain::torus2d([tau; 2], [n, n]),
                DomainChoice::Confined1d => Domain::confined1d(10.0, n, 1.0),
                DomainChoice::Confined2d => Domain::confined2d([8.0; 2], [n, n], [1.0; 2]),
            }?;
            let report = sweep_inequality(case, Some(&grid), trials, seed)?;
            if json {
                print_json(&report)?;
            } else {
                println!("{:<16} {:>8} {:>8} {:>16} {:>10}", "inequality", "trials", "seed", "constant", "violations");
                println!(
                    "{:<16} {:>8} {:>8} {:>16.9} {:>10}",
                    report.name.to_string(),
                    report.trials,
                    report.seed,
                    report.estimated_constant,
                    report.violations_at_c
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fit { series, model, alpha } => {
            let file = File::open(&series).with_context(|| format!("opening {}", series.display()))?;
            let records = read_series_csv(BufReader::new(file))?;
            let model = match (model, alpha) {
                (ModelChoice::Exp, _) => DecayModel::ExpDecay,
                (ModelChoice::Power, Some(alpha)) => DecayModel::PowerExtinction { alpha },
                (ModelChoice::Power, None) => bail!("--model power needs --alpha"),
            };
            print_json(&fit_decay(&records, model)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
