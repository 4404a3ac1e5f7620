use std::fmt;

use serde::{Deserialize, Serialize};

use super::linear::LinearPropagator;
use super::nonlinear::{apply_radial, RadialFlow};
use super::{
    DynamicsError, Scheme, StepperConfig, BLOW_UP_LINF_FACTOR, BOUNDARY_MASS_LIMIT,
    E2_CONDITIONING_TAIL, RESOLUTION_LOSS_FRACTION,
};
use crate::grid::{l2_norm_sq, linf_norm, spectral_tail_fraction, Field, Params, C64};
use crate::observables::{ObservableRecord, RunReport, Violations};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlowUpReason {
    NonFinite,
    LinfGrowth { factor: f64 },
    ResolutionLoss { tail_fraction: f64 },
}

impl fmt::Display for BlowUpReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowUpReason::NonFinite => write!(f, "non-finite values in the field"),
            BlowUpReason::LinfGrowth { factor } => {
                write!(f, "sup norm grew by a factor {factor:.3e}")
            }
            BlowUpReason::ResolutionLoss { tail_fraction } => write!(
                f,
                "profile concentrated below the grid scale (spectral tail {tail_fraction:.3e})"
            ),
        }
    }
}

/// Blow-up diagnostic, with the series recorded up to the abort.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowUp {
    pub t: f64,
    pub reason: BlowUpReason,
    pub report: Option<RunReport>,
}

/// Reusable one-step integrator for fixed `(domain, params, dt, scheme)`.
#[derive(Debug, Clone)]
pub struct Stepper {
    flow: RadialFlow,
    linear: LinearPropagator,
    scheme: Scheme,
    dt: f64,
}

impl Stepper {
    pub fn new(u: &Field, params: &Params, cfg: &StepperConfig) -> Self {
        Self {
            flow: RadialFlow::new(params),
            linear: LinearPropagator::new(u.domain().clone(), cfg.dt),
            scheme: cfg.scheme,
            dt: cfg.dt,
        }
    }

    /// Advances `values` by one step in place.
    pub fn advance(&self, values: &mut [C64]) {
        match self.scheme {
            Scheme::Strang => {
                apply_radial(&self.flow, values, 0.5 * self.dt);
                self.linear.apply(values);
                apply_radial(&self.flow, values, 0.5 * self.dt);
            }
            Scheme::Lie => {
                self.linear.apply(values);
                apply_radial(&self.flow, values, self.dt);
            }
        }
    }
}

/// One full time step. Non-finite output aborts with a blow-up diagnostic.
pub fn step(u: &Field, params: &Params, cfg: &StepperConfig) -> Result<Field, DynamicsError> {
    cfg.validate()?;
    params.validate()?;
    let stepper = Stepper::new(u, params, cfg);
    let mut out = u.clone();
    stepper.advance(out.values_mut());
    if !out.is_finite() {
        return Err(DynamicsError::BlowUp(Box::new(BlowUp {
            t: cfg.dt,
            reason: BlowUpReason::NonFinite,
            report: None,
        })));
    }
    Ok(out)
}

/// Integrates from `u0` until `max_time` or extinction.
///
/// `observer` sees every recorded sample together with the field it was
/// measured on. The returned series starts at `t = 0` and contains one
/// record every `record_every` steps plus the final state.
pub fn evolve<F>(
    u0: &Field,
    params: &Params,
    cfg: &StepperConfig,
    mut observer: F,
) -> Result<RunReport, DynamicsError>
where
    F: FnMut(&ObservableRecord, &Field),
{
    cfg.validate()?;
    params.validate_for(u0.domain().kind())?;
    if !u0.is_finite() {
        return Err(DynamicsError::BlowUp(Box::new(BlowUp {
            t: 0.0,
            reason: BlowUpReason::NonFinite,
            report: None,
        })));
    }

    let mut report = RunReport {
        label: String::new(),
        series: Vec::new(),
        extinction_time: None,
        decay_fit: None,
        violations: Violations::default(),
        e2_conditioning_flags: 0,
        steps: 0,
        final_time: 0.0,
        params: *params,
        domain: u0.domain().spec().clone(),
        config: *cfg,
        series_csv: None,
    };
    let n_steps = cfg.step_count();
    if n_steps == 0 {
        return Ok(report);
    }

    let mut monitor = Monitor::new(u0, params);
    let first = ObservableRecord::measure(0.0, u0, params);
    if let Err(reason) = monitor.inspect(&first, u0, &mut report) {
        return Err(blow_up(report, 0.0, reason));
    }
    observer(&first, u0);
    report.series.push(first);

    let m0 = first.mass_sq;
    if m0 == 0.0 {
        report.extinction_time = Some(0.0);
        return Ok(report);
    }
    let level = cfg.extinction_threshold * m0;
    let stepper = Stepper::new(u0, params, cfg);
    let mut u = u0.clone();
    let mut prev_mass = m0;

    for n in 1..=n_steps {
        let t = n as f64 * cfg.dt;
        stepper.advance(u.values_mut());
        report.steps = n;
        report.final_time = t;

        if !u.is_finite() {
            return Err(blow_up(report, t, BlowUpReason::NonFinite));
        }
        let linf = linf_norm(&u);
        if linf > BLOW_UP_LINF_FACTOR * monitor.linf0 {
            return Err(blow_up(report, t, BlowUpReason::LinfGrowth { factor: linf / monitor.linf0 }));
        }
        let mass = l2_norm_sq(&u);
        if mass > prev_mass * (1.0 + 1e-12) + f64::MIN_POSITIVE {
            report.violations.mass_increase += 1;
        }

        if mass < level {
            let frac = (prev_mass - level) / (prev_mass - mass);
            report.extinction_time = Some(t - cfg.dt + frac * cfg.dt);
            u.values_mut().iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            let rec = ObservableRecord::measure(t, &u, params);
            observer(&rec, &u);
            report.series.push(rec);
            break;
        }
        prev_mass = mass;

        if n % cfg.record_every == 0 || n == n_steps {
            let rec = ObservableRecord::measure(t, &u, params);
            if let Err(reason) = monitor.inspect(&rec, &u, &mut report) {
                report.series.push(rec);
                return Err(blow_up(report, t, reason));
            }
            observer(&rec, &u);
            report.series.push(rec);
        }
    }
    Ok(report)
}

fn blow_up(report: RunReport, t: f64, reason: BlowUpReason) -> DynamicsError {
    DynamicsError::BlowUp(Box::new(BlowUp {
        t,
        reason,
        report: Some(report),
    }))
}

/// Per-record invariant and resolution checks.
struct Monitor {
    linf0: f64,
    tail_limit: f64,
    check_energy: bool,
    confined: bool,
    last_e0: Option<f64>,
}

impl Monitor {
    fn new(u0: &Field, params: &Params) -> Self {
        let linf0 = linf_norm(u0);
        Self {
            linf0: if linf0 > 0.0 { linf0 } else { f64::MIN_POSITIVE },
            tail_limit: RESOLUTION_LOSS_FRACTION.max(10.0 * spectral_tail_fraction(u0)),
            check_energy: params.lambda >= 0.0,
            confined: u0.domain().kind().is_confined(),
            last_e0: None,
        }
    }

    fn inspect(&mut self, rec: &ObservableRecord, u: &Field, report: &mut RunReport) -> Result<(), BlowUpReason> {
        let tail = spectral_tail_fraction(u);
        // only a growing profile counts: dissipated fields roughen as they vanish
        if tail > self.tail_limit && rec.linf >= self.linf0 {
            return Err(BlowUpReason::ResolutionLoss { tail_fraction: tail });
        }
        if tail > E2_CONDITIONING_TAIL {
            report.e2_conditioning_flags += 1;
        }
        if self.confined && rec.boundary_frac > BOUNDARY_MASS_LIMIT {
            report.violations.boundary_breach += 1;
        }
        if self.check_energy {
            if let Some(prev) = self.last_e0 {
                if rec.e0 > prev + 1e-6 * (1.0 + prev.abs()) {
                    report.violations.energy_increase += 1;
                }
            }
            self.last_e0 = Some(rec.e0);
        }
        Ok(())
    }
}
