use serde::{Deserialize, Serialize};

use super::record::ObservableRecord;
use super::ObservableError;
use crate::dynamics::DEFAULT_EXTINCTION_THRESHOLD;
use crate::grid::Params;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayModel {
    /// `||u(t)|| ~ ||u_0|| e^{-C t}`: regress `ln ||u||` on `t`.
    ExpDecay,
    /// `||u(t)||^{alpha/2}` decreasing linearly: regress it on `t`.
    PowerExtinction { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: DecayModel,
    /// Decay rate `C` for the exponential model, slope `C b` for the power model.
    pub rate_or_exponent: f64,
    /// Fitted `||u_0||` (exponential) or intercept of `||u||^{alpha/2}` (power).
    pub constant: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub samples: usize,
    /// `||u_0||^{alpha/2} / slope`, power model only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extinction_bound: Option<f64>,
}

/// Least-squares fit with the default extinction floor.
pub fn fit_decay(series: &[ObservableRecord], model: DecayModel) -> Result<FitResult, ObservableError> {
    fit_decay_above(series, model, DEFAULT_EXTINCTION_THRESHOLD)
}

/// Fits `model` on samples whose mass is above `100 * threshold * M(0)`,
/// dropping the first and last 5% of them.
pub fn fit_decay_above(
    series: &[ObservableRecord],
    model: DecayModel,
    threshold: f64,
) -> Result<FitResult, ObservableError> {
    if let DecayModel::PowerExtinction { alpha } = model {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(ObservableError::Alpha(alpha));
        }
    }
    if let Some(index) = first_mass_increase(series) {
        return Err(ObservableError::NonMonotone { index });
    }
    let m0 = series.first().map_or(0.0, |r| r.mass_sq);
    let floor = 100.0 * threshold * m0;
    let usable: Vec<&ObservableRecord> = series.iter().filter(|r| r.mass_sq > floor).collect();
    if usable.len() < 10 {
        return Err(ObservableError::InsufficientSamples(usable.len()));
    }
    let trim = usable.len() / 20;
    let window = &usable[trim..usable.len() - trim];

    let transform = |r: &ObservableRecord| match model {
        DecayModel::ExpDecay => 0.5 * r.mass_sq.ln(),
        DecayModel::PowerExtinction { alpha } => r.mass_sq.powf(0.25 * alpha),
    };
    let ts: Vec<f64> = window.iter().map(|r| r.t).collect();
    let ys: Vec<f64> = window.iter().map(|r| transform(r)).collect();
    let line = linear_regression(&ts, &ys).ok_or(ObservableError::DegenerateFit)?;

    let rate = -line.slope;
    let (constant, extinction_bound) = match model {
        DecayModel::ExpDecay => (line.intercept.exp(), None),
        DecayModel::PowerExtinction { alpha } => {
            let head = m0.powf(0.25 * alpha);
            (line.intercept, (rate > 0.0).then(|| head / rate))
        }
    };
    Ok(FitResult {
        model,
        rate_or_exponent: rate,
        constant,
        r_squared: line.r_squared,
        window: (ts[0], ts[ts.len() - 1]),
        samples: ts.len(),
        extinction_bound,
    })
}

/// Index of the first sample whose mass exceeds its predecessor beyond
/// round-off.
pub fn first_mass_increase(series: &[ObservableRecord]) -> Option<usize> {
    series
        .windows(2)
        .position(|w| w[1].mass_sq > w[0].mass_sq * (1.0 + 1e-12) + f64::MIN_POSITIVE)
        .map(|i| i + 1)
}

struct Line {
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

fn linear_regression(x: &[f64], y: &[f64]) -> Option<Line> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = y.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy <= f64::EPSILON * f64::EPSILON * n * my * my {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = (1.0 - ss_res / syy).clamp(0.0, 1.0);
    Some(Line {
        slope,
        intercept,
        r_squared,
    })
}

/// First time at which `mass_sq` drops below `threshold * mass_sq(0)`,
/// linearly interpolated between the bracketing samples.
pub fn detect_extinction(series: &[ObservableRecord], threshold: f64) -> Option<f64> {
    let first = series.first()?;
    if first.mass_sq == 0.0 {
        return Some(first.t);
    }
    let level = threshold * first.mass_sq;
    let n = series.iter().position(|r| r.mass_sq < level)?;
    let (a, b) = (&series[n - 1], &series[n]);
    let frac = (a.mass_sq - level) / (a.mass_sq - b.mass_sq);
    Some(a.t + frac * (b.t - a.t))
}

/// Per-step residual of the mass balance
/// `dM/dt + 2a int |u|^{2 sigma2 + 2} + 2b int |u|^2 / (|u|^2 + delta)^{alpha/2} = 0`,
/// with the dissipation integrals averaged over each step's endpoints.
pub fn mass_balance_residual(
    series: &[ObservableRecord],
    params: &Params,
) -> Result<Vec<f64>, ObservableError> {
    if series.len() < 2 {
        return Err(ObservableError::InsufficientSamples(series.len()));
    }
    let dt = series[1].t - series[0].t;
    if !(dt > 0.0) {
        return Err(ObservableError::NonUniform { index: 1 });
    }
    if let Some(i) = series
        .windows(2)
        .position(|w| ((w[1].t - w[0].t) - dt).abs() > 1e-9 * dt.max(1.0))
    {
        return Err(ObservableError::NonUniform { index: i + 1 });
    }
    Ok(series
        .windows(2)
        .map(|w| {
            let dm = (w[1].mass_sq - w[0].mass_sq) / dt;
            let da = 0.5 * (w[0].diss_a + w[1].diss_a);
            let db = 0.5 * (w[0].diss_b + w[1].diss_b);
            dm + 2.0 * params.a * da + 2.0 * params.b * db
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn synthetic(norm: impl Fn(f64) -> f64, t_end: f64, n: usize) -> Vec<ObservableRecord> {
        (0..=n)
            .map(|i| {
                let t = t_end * i as f64 / n as f64;
                let m = norm(t);
                ObservableRecord {
                    t,
                    mass_sq: m * m,
                    linf: m,
                    e0: 0.0,
                    ek: 0.0,
                    e2: 0.0,
                    diss_a: 0.0,
                    diss_b: 0.0,
                    sigma1_norm: m,
                    boundary_frac: 0.0,
                }
            })
            .collect()
    }

    #[test]
    fn recovers_exponential_rate() {
        let s = synthetic(|t| (-3.0 * t).exp(), 2.0, 200);
        let fit = fit_decay(&s, DecayModel::ExpDecay).unwrap();
        assert!((fit.rate_or_exponent - 3.0).abs() < 1e-6);
        assert!(fit.r_squared > 1.0 - 1e-9);
        assert!((fit.constant - 1.0).abs() < 1e-9);
        assert!(fit.window.0 > 0.0 && fit.window.1 < 2.0);
    }

    #[test]
    fn recovers_power_extinction() {
        let alpha = 1.0;
        let s = synthetic(|t| (1.0 - 0.5 * t).max(0.0).powf(2.0 / alpha), 1.9, 190);
        let fit = fit_decay(&s, DecayModel::PowerExtinction { alpha }).unwrap();
        assert!((fit.rate_or_exponent - 0.5).abs() < 1e-9);
        assert!((fit.extinction_bound.unwrap() - 2.0).abs() < 1e-9);
        assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn degenerate_and_refused_fits() {
        let flat = synthetic(|_| 1.0, 1.0, 50);
        assert!(matches!(
            fit_decay(&flat, DecayModel::ExpDecay),
            Err(ObservableError::DegenerateFit)
        ));
        let short = synthetic(|t| (-t).exp(), 1.0, 5);
        assert!(matches!(
            fit_decay(&short, DecayModel::ExpDecay),
            Err(ObservableError::InsufficientSamples(6))
        ));
        let bumpy = synthetic(|t| 1.0 + 0.1 * (10.0 * t).sin(), 1.0, 50);
        assert!(matches!(
            fit_decay(&bumpy, DecayModel::ExpDecay),
            Err(ObservableError::NonMonotone { .. })
        ));
    }

    #[test]
    fn extinction_detection() {
        assert_eq!(detect_extinction(&[], 1e-24), None);
        let s = synthetic(|t| (1.0 - 0.5 * t).max(0.0), 3.0, 300);
        let t = detect_extinction(&s, 1e-24).unwrap();
        assert!((t - 2.0).abs() <= 0.01, "{t}");
        let flat = synthetic(|_| 1.0, 1.0, 10);
        assert_eq!(detect_extinction(&flat, 1e-24), None);
        let zero = synthetic(|_| 0.0, 1.0, 10);
        assert_eq!(detect_extinction(&zero, 1e-24), Some(0.0));
    }

    #[test]
    fn residual_of_trivial_series() {
        let p = Params::default();
        let zero = synthetic(|_| 0.0, 1.0, 10);
        assert!(mass_balance_residual(&zero, &p).unwrap().iter().all(|r| *r == 0.0));
        let mut uneven = synthetic(|_| 1.0, 1.0, 10);
        uneven[5].t += 0.01;
        assert!(matches!(
            mass_balance_residual(&uneven, &p),
            Err(ObservableError::NonUniform { .. })
        ));
    }
}
