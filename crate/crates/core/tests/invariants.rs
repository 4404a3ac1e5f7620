use std::f64::consts::TAU;
use std::sync::Arc;

use proptest::prelude::*;

use damped_nls::dynamics::{linear_substep, nonlinear_substep};
use damped_nls::grid::{integral_abs_pow, l2_norm, l2_norm_sq, lp_norm, Domain, Field, Params, C64};
use damped_nls::inequalities::{check_gn, check_nash, check_young_monotone};

fn torus() -> Arc<Domain> {
    Domain::torus1d(TAU, 32).unwrap()
}

fn field() -> impl Strategy<Value = Field> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 32)
        .prop_map(|v| Field::new(torus(), v.into_iter().map(|(r, i)| C64::new(r, i)).collect()).unwrap())
}

fn nonzero_field() -> impl Strategy<Value = Field> {
    field().prop_filter("nonzero", |f| l2_norm(f) > 1e-3)
}

fn complex() -> impl Strategy<Value = C64> {
    prop_oneof![
        1 => Just(C64::new(0.0, 0.0)),
        9 => (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(r, i)| C64::new(r, i)),
    ]
}

proptest! {
    #[test]
    fn parseval(f in field()) {
        let n = f.values().len() as f64;
        let spectral: f64 = f.spectrum().iter().map(|c| c.norm_sqr()).sum::<f64>() / n;
        let physical: f64 = f.values().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((spectral - physical).abs() <= 1e-12 * physical.max(1.0));
    }

    #[test]
    fn holder(f in field(), g in field(), p in 1.1..8.0f64) {
        let q = p / (p - 1.0);
        let product: f64 = f.values().iter().zip(g.values()).map(|(a, b)| a.norm() * b.norm()).sum::<f64>()
            * f.domain().quad_weight();
        let bound = lp_norm(&f, p).unwrap() * lp_norm(&g, q).unwrap();
        prop_assert!(product <= bound * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn norms_are_homogeneous(f in field(), c in 1e-3..1e3f64, p in 1.0..10.0f64) {
        let scaled = f.scaled(C64::new(0.0, c));
        let a = lp_norm(&scaled, p).unwrap();
        let b = c * lp_norm(&f, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        let s = integral_abs_pow(&scaled, p);
        let t = c.powf(p) * integral_abs_pow(&f, p);
        prop_assert!((s - t).abs() <= 1e-11 * t.max(1e-300));
    }

    #[test]
    fn inequality_ratios_are_scale_invariant(f in nonzero_field(), c in 1e-2..1e2f64, p in 2.0..12.0f64) {
        let k = C64::new(c, 0.0);
        let a = check_gn(&f, p).unwrap().ratio;
        let b = check_gn(&f.scaled(k), p).unwrap().ratio;
        prop_assert!((a - b).abs() <= 1e-10 * a);
        let a = check_nash(&f, 1, 0.5).unwrap().ratio;
        let b = check_nash(&f.scaled(k), 1, 0.5).unwrap().ratio;
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn gn_p2_ratio_is_one(f in nonzero_field()) {
        prop_assert!((check_gn(&f, 2.0).unwrap().ratio - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn young_monotonicity(z1 in complex(), z2 in complex(), sigma in -1.0..5.0f64) {
        let v = check_young_monotone(z1, z2, sigma).unwrap();
        let scale = (z1.norm() + z2.norm()).powf(sigma + 2.0);
        prop_assert!(v >= -1e-14 * scale);
    }

    #[test]
    fn linear_flow_is_unitary(f in field(), dt in 1e-4..1.0f64) {
        let g = linear_substep(&f, dt);
        let (a, b) = (l2_norm_sq(&f), l2_norm_sq(&g));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn damping_shrinks_every_point(
        f in field(),
        dt in 1e-4..0.5f64,
        alpha in 0.05..1.0f64,
        lambda in -2.0..2.0f64,
        a in 0.0..2.0f64,
        delta in prop_oneof![Just(0.0), 1e-6..1e-1f64],
    ) {
        let params = Params { lambda, a, b: 1.0, alpha, delta, sigma1: 1.0, sigma2: 2.0, ..Params::default() };
        let g = nonlinear_substep(&f, &params, dt);
        for (z0, z1) in f.values().iter().zip(g.values()) {
            prop_assert!(z1.norm() <= z0.norm() * (1.0 + 1e-14));
            prop_assert!(z1.norm() >= 0.0 && z1.is_finite());
        }
    }
}
