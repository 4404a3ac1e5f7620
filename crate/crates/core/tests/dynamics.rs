use std::f64::consts::TAU;
use std::sync::Arc;

use damped_nls::dynamics::{evolve, Scheme};
use damped_nls::experiments::{
    delta_convergence, smallmass_2d_extinction, sweep, ExperimentError, InitialData, ScenarioConfig,
    SCHEMA_VERSION,
};
use damped_nls::grid::{l2_norm, Domain, Field, Params, C64};
use damped_nls::observables::energy_e0;
use damped_nls::StepperConfig;

fn bump(domain: &Arc<Domain>) -> Field {
    InitialData::Gaussian {
        center: None,
        width: 0.6,
        amplitude: 1.0,
    }
    .realize(domain)
    .unwrap()
}

fn final_field(u0: &Field, params: &Params, cfg: &StepperConfig) -> Field {
    let mut last = None;
    evolve(u0, params, cfg, |_, u| last = Some(u.clone())).unwrap();
    last.unwrap()
}

fn errors(scheme: Scheme) -> Vec<f64> {
    let domain = Domain::torus1d(TAU, 64).unwrap();
    let u0 = bump(&domain);
    let params = Params {
        lambda: 1.0,
        a: 0.5,
        b: 1.0,
        alpha: 0.5,
        delta: 1e-2,
        ..Params::default()
    };
    let t = 0.5;
    let reference = final_field(&u0, &params, &StepperConfig::new(1e-4, t).with_scheme(Scheme::Strang));
    [2e-2, 1e-2, 5e-3]
        .iter()
        .map(|&dt| {
            let u = final_field(&u0, &params, &StepperConfig::new(dt, t).with_scheme(scheme));
            l2_norm(&u.difference(&reference).unwrap())
        })
        .collect()
}

#[test]
fn strang_is_second_order() {
    let e = errors(Scheme::Strang);
    for w in e.windows(2) {
        let r = w[0] / w[1];
        assert!((3.2..5.0).contains(&r), "ratios from {e:?}");
    }
}

#[test]
fn lie_is_first_order() {
    let e = errors(Scheme::Lie);
    for w in e.windows(2) {
        let r = w[0] / w[1];
        assert!((1.6..2.6).contains(&r), "ratios from {e:?}");
    }
}

#[test]
fn hamiltonian_limit_conserves_mass_and_energy() {
    let domain = Domain::torus1d(TAU, 64).unwrap();
    let u0 = bump(&domain);
    let params = Params {
        lambda: 1.0,
        a: 0.0,
        b: 0.0,
        ..Params::default()
    };
    let e0 = energy_e0(&u0, &params);
    let report = evolve(&u0, &params, &StepperConfig::new(1e-4, 1.0).with_record_every(100), |_, _| {}).unwrap();
    let m0 = report.series[0].mass_sq;
    for r in &report.series {
        assert!((r.mass_sq - m0).abs() < 1e-8 * m0);
        assert!((r.e0 - e0).abs() < 1e-8 * e0.abs().max(1.0), "E0 drift {}", r.e0 - e0);
    }
    assert_eq!(report.extinction_time, None);
}

fn uniform_config(b: f64) -> ScenarioConfig {
    ScenarioConfig {
        schema: SCHEMA_VERSION,
        label: "uniform".into(),
        domain: Domain::torus1d(TAU, 16).unwrap().spec().clone(),
        params: Params {
            b,
            alpha: 1.0,
            ..Params::default()
        },
        stepper: StepperConfig::new(1e-3, 5.0),
        initial: InitialData::Constant { value: 1.0, phase: 0.0 },
        outputs: None,
        fit: None,
    }
}

#[test]
fn sweep_over_damping_strength() {
    let entries = sweep(&uniform_config(0.5), "b", &[0.25, 0.5, 1.0]).unwrap();
    for (e, expected) in entries.iter().zip([4.0, 2.0, 1.0]) {
        let t = e.extinction_time.unwrap();
        assert!((t - expected).abs() <= 2e-3, "b = {}: {t}", e.value);
        assert!(!e.blow_up && e.error.is_none());
    }
    assert!(sweep(&uniform_config(0.5), "b", &[]).unwrap().is_empty());
    assert!(sweep(&uniform_config(0.5), "gamma", &[1.0]).is_err());
}

#[test]
fn sweep_collects_failures() {
    let entries = sweep(&uniform_config(0.5), "alpha", &[1.0, 3.0]).unwrap();
    assert!(entries[0].error.is_none());
    assert!(entries[1].error.is_some() && !entries[1].blow_up);
}

#[test]
fn sweep_crossing_focusing_threshold() {
    let cfg = ScenarioConfig {
        schema: SCHEMA_VERSION,
        label: "focusing".into(),
        domain: Domain::torus1d(20.0, 256).unwrap().spec().clone(),
        params: Params {
            lambda: -1.0,
            a: 1.0,
            b: 0.1,
            sigma1: 2.0,
            sigma2: 3.0,
            alpha: 1.0,
            ..Params::default()
        },
        stepper: StepperConfig::new(1e-3, 2.0).with_record_every(20),
        initial: InitialData::Gaussian {
            center: None,
            width: 0.5,
            amplitude: 2.0,
        },
        outputs: None,
        fit: None,
    };
    let entries = sweep(&cfg, "sigma2", &[2.5, 3.0, 4.0]).unwrap();
    assert!(entries.iter().all(|e| !e.blow_up && e.error.is_none()), "{entries:?}");
}

#[test]
fn delta_convergence_trivial_cases() {
    let mut cfg = uniform_config(1.0);
    cfg.params.alpha = 0.5;
    let same = delta_convergence(&cfg, &[1e-2, 1e-2, 1e-2], 0.5).unwrap();
    assert!(same.rows.iter().all(|r| r.error == 0.0));
    let zero = delta_convergence(&cfg, &[1e-1, 1e-2, 0.0], 0.0).unwrap();
    assert!(zero.rows.iter().all(|r| r.error == 0.0));
    assert!(delta_convergence(&cfg, &[1e-1, 0.0], 0.5).is_err());
    assert!(delta_convergence(&cfg, &[1e-3, 1e-2, 1e-1], 0.5).is_err());
}

#[test]
fn delta_convergence_uniform_oracle() {
    // uniform data stays uniform, so the reference is the closed-form decay
    let mut cfg = uniform_config(1.0);
    cfg.params.alpha = 0.5;
    let table = delta_convergence(&cfg, &[1e-1, 1e-2, 1e-3, 0.0], 1.0).unwrap();
    assert!(table.monotone);
    let e: Vec<f64> = table.rows.iter().map(|r| r.error).collect();
    assert!(e[0] > e[1] && e[1] > e[2] && e[3] == 0.0);
    // reference at t = 1 is (1 - t/2)^2 on a torus of length 2 pi
    let domain = Domain::new(cfg.domain.clone()).unwrap();
    let exact = Field::from_fn(domain, |_| C64::new(0.25, 0.0)).unwrap();
    let mut run = cfg.clone();
    run.stepper.max_time = 1.0;
    let u = final_field(&cfg.initial_field().unwrap(), &run.params, &run.stepper);
    assert!(l2_norm(&u.difference(&exact).unwrap()) < 1e-10);
}

fn two_d_config() -> ScenarioConfig {
    ScenarioConfig {
        schema: SCHEMA_VERSION,
        label: "smallmass".into(),
        domain: Domain::torus2d([TAU; 2], [32, 32]).unwrap().spec().clone(),
        params: Params {
            lambda: 1.0,
            b: 1.0,
            alpha: 0.5,
            ..Params::default()
        },
        stepper: StepperConfig::new(1e-2, 10.0).with_record_every(10),
        initial: InitialData::Gaussian {
            center: None,
            width: 0.8,
            amplitude: 1.0,
        },
        outputs: None,
        fit: None,
    }
}

#[test]
fn smallmass_preconditions_and_zero_scale() {
    let mut bad = two_d_config();
    bad.params.sigma1 = 2.0;
    assert!(matches!(
        smallmass_2d_extinction(&bad, &[1.0]),
        Err(ExperimentError::Precondition(_))
    ));
    let mut flat = two_d_config();
    flat.domain = Domain::torus1d(TAU, 32).unwrap().spec().clone();
    assert!(smallmass_2d_extinction(&flat, &[1.0]).is_err());
    let table = smallmass_2d_extinction(&two_d_config(), &[0.0, 0.5]).unwrap();
    assert_eq!(table.rows[0].extinction_time, Some(0.0));
    assert!(table.rows[1].extinction_time.is_some());
}
