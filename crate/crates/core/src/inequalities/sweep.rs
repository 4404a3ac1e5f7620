use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_brezis_gallouet, check_gn, check_gn_dual, check_gn_dual2, check_nash,
    check_young_monotone,
};
use super::ensemble::{random_field, DECAY_EXPONENTS};
use super::{IneqError, IneqName};
use crate::grid::{Domain, C64};

/// An inequality together with its free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Inequality {
    Gn { p: f64 },
    GnDual { p: f64 },
    Nash1 { alpha: f64 },
    Nash2 { alpha: f64 },
    BrezisGallouet,
    YoungMonotone,
    GnDual2,
}

impl Inequality {
    pub fn name(&self) -> IneqName {
        match self {
            Inequality::Gn { .. } => IneqName::GN,
            Inequality::GnDual { .. } => IneqName::GNDual,
            Inequality::Nash1 { .. } => IneqName::Nash1,
            Inequality::Nash2 { .. } => IneqName::Nash2,
            Inequality::BrezisGallouet => IneqName::BrezisGallouet,
            Inequality::YoungMonotone => IneqName::YoungMonotone,
            Inequality::GnDual2 => IneqName::GNDual2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IneqReport {
    pub name: IneqName,
    pub case: Inequality,
    pub domain: Option<crate::grid::DomainSpec>,
    pub trials: usize,
    pub seed: u64,
    /// Largest `LHS / RHS` over the trials (for the monotonicity lemma: the
    /// largest normalized negative part).
    pub worst_ratio: f64,
    pub estimated_constant: f64,
    pub violations_at_c: usize,
}

/// Normalized negative part of the monotonicity expression.
fn young_ratio(z1: C64, z2: C64, sigma: f64) -> f64 {
    let v = check_young_monotone(z1, z2, sigma).expect("sigma >= -1");
    let scale = (z1.norm() + z2.norm()).powf(sigma + 2.0);
    if scale == 0.0 {
        0.0
    } else {
        (-v).max(0.0) / scale
    }
}

fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    // occasional exact zeros exercise the |0|^s 0 = 0 convention
    if rng.random_bool(0.02) {
        return C64::new(0.0, 0.0);
    }
    let r = 10f64.powf(rng.random_range(-3.0..3.0));
    C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

fn young_trial(rng: &mut ChaCha8Rng) -> f64 {
    let sigma = rng.random_range(-1.0..=4.0);
    let z1 = random_complex(rng);
    let z2 = if rng.random_bool(0.1) {
        // same ray
        z1 * rng.random_range(0.0..3.0)
    } else {
        random_complex(rng)
    };
    young_ratio(z1, z2, sigma)
}

/// Independent RNG stream for one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn field_trial(case: Inequality, domain: &Arc<Domain>, rng: &mut ChaCha8Rng) -> Result<f64, IneqError> {
    let decay = DECAY_EXPONENTS[rng.random_range(0..DECAY_EXPONENTS.len())];
    let amplitude = 10f64.powf(rng.random_range(-1.0..1.0));
    let f = random_field(domain, decay, rng).scaled(C64::new(amplitude, 0.0));
    let r = match case {
        Inequality::Gn { p } => check_gn(&f, p)?,
        Inequality::GnDual { p } => check_gn_dual(&f, p)?,
        Inequality::Nash1 { alpha } => check_nash(&f, 1, alpha)?,
        Inequality::Nash2 { alpha } => check_nash(&f, 2, alpha)?,
        Inequality::BrezisGallouet => check_brezis_gallouet(&f)?,
        Inequality::GnDual2 => check_gn_dual2(&f)?,
        Inequality::YoungMonotone => unreachable!(),
    };
    Ok(r.ratio)
}

/// Monte Carlo over `trials` random inputs. The worst ratio is the empirical
/// constant; trials run in parallel with one RNG stream each, so the
/// report only depends on `(case, domain, trials, seed)`.
pub fn sweep_inequality(
    case: Inequality,
    domain: Option<&Arc<Domain>>,
    trials: usize,
    seed: u64,
) -> Result<IneqReport, IneqError> {
    if trials == 0 {
        return Err(IneqError::Trials);
    }
    let ratios: Vec<f64> = match case {
        Inequality::YoungMonotone => (0..trials)
            .into_par_iter()
            .map(|i| young_trial(&mut trial_rng(seed, i)))
            .collect(),
        _ => {
            let domain = domain.ok_or(IneqError::Domain("this inequality needs a domain"))?;
            (0..trials)
                .into_par_iter()
                .map(|i| field_trial(case, domain, &mut trial_rng(seed, i)))
                .collect::<Result<_, _>>()?
        }
    };
    let worst = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let c = worst * (1.0 + 1e-12);
    let violations = ratios.iter().filter(|&&r| r > c).count();
    Ok(IneqReport {
        name: case.name(),
        case,
        domain: match case {
            Inequality::YoungMonotone => None,
            _ => domain.map(|d| d.spec().clone()),
        },
        trials,
        seed,
        worst_ratio: worst,
        estimated_constant: worst,
        violations_at_c: violations,
    })
}

/// `sum_{|k_j| <= K} e^{i k . x}` on a 2D grid.
pub fn spike_field(domain: &Arc<Domain>, k_max: i64) -> crate::grid::Field {
    crate::grid::Field::from_fn(domain.clone(), |x| {
        let mut s = C64::new(0.0, 0.0);
        for k1 in -k_max..=k_max {
            for k2 in -k_max..=k_max {
                let phase = k1 as f64 * x[0] + if x.len() > 1 { k2 as f64 * x[1] } else { 0.0 };
                s += C64::from_polar(1.0, phase);
            }
        }
        s
    })
    .expect("finite spike field")
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn single_trial_echoes_ratio() {
        let d = Domain::torus1d(2.0 * PI, 64).unwrap();
        let case = Inequality::Gn { p: 4.0 };
        let rep = sweep_inequality(case, Some(&d), 1, 11).unwrap();
        let direct = field_trial(case, &d, &mut trial_rng(11, 0)).unwrap();
        assert_eq!(rep.worst_ratio, direct);
        assert_eq!(rep.violations_at_c, 0);
    }

    #[test]
    fn same_seed_same_report() {
        let d = Domain::torus1d(2.0 * PI, 64).unwrap();
        let case = Inequality::Gn { p: 6.0 };
        let a = sweep_inequality(case, Some(&d), 200, 5).unwrap();
        let b = sweep_inequality(case, Some(&d), 200, 5).unwrap();
        assert_eq!(a, b);
        let c = sweep_inequality(case, Some(&d), 200, 6).unwrap();
        assert_ne!(a.worst_ratio, c.worst_ratio);
    }

    #[test]
    fn incompatible_domain() {
        let d = Domain::torus1d(2.0 * PI, 64).unwrap();
        assert!(matches!(
            sweep_inequality(Inequality::GnDual { p: 4.0 }, Some(&d), 3, 1),
            Err(IneqError::Domain(_))
        ));
        assert!(matches!(
            sweep_inequality(Inequality::Gn { p: 4.0 }, None, 3, 1),
            Err(IneqError::Domain(_))
        ));
        assert!(matches!(
            sweep_inequality(Inequality::YoungMonotone, None, 0, 1),
            Err(IneqError::Trials)
        ));
    }
}
