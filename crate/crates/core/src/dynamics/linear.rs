use std::sync::Arc;

use crate::grid::{Domain, Field, C64};

/// Cached linear propagator `exp(i dt (Lap/2 - V))`.
///
/// Without a potential the kinetic symbol is exact. With a potential the
/// flow is the unitary sandwich `e^{-iV dt/2} e^{i dt Lap/2} e^{-iV dt/2}`.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    domain: Arc<Domain>,
    dt: f64,
    kinetic: Vec<C64>,
    potential_half: Option<Vec<C64>>,
}

impl LinearPropagator {
    pub fn new(domain: Arc<Domain>, dt: f64) -> Self {
        let kinetic = domain
            .k_squared()
            .into_iter()
            .map(|k2| C64::from_polar(1.0, -0.5 * k2 * dt))
            .collect();
        let potential_half = domain
            .potential()
            .iter()
            .any(|&v| v != 0.0)
            .then(|| {
                domain
                    .potential()
                    .iter()
                    .map(|&v| C64::from_polar(1.0, -0.5 * v * dt))
                    .collect()
            });
        Self {
            domain,
            dt,
            kinetic,
            potential_half,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn apply(&self, values: &mut [C64]) {
        if let Some(ph) = &self.potential_half {
            values.iter_mut().zip(ph).for_each(|(z, p)| *z *= p);
        }
        self.domain.spectral.forward(values);
        values.iter_mut().zip(&self.kinetic).for_each(|(z, p)| *z *= p);
        self.domain.spectral.inverse(values);
        if let Some(ph) = &self.potential_half {
            values.iter_mut().zip(ph).for_each(|(z, p)| *z *= p);
        }
    }
}

/// Advances `i u_t + (1/2) Lap u = V u` by `dt`.
pub fn linear_substep(u: &Field, dt: f64) -> Field {
    let prop = LinearPropagator::new(u.domain().clone(), dt);
    let mut out = u.clone();
    prop.apply(out.values_mut());
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use super::*;
    use crate::grid::{l2_norm, laplacian};

    #[test]
    fn plane_wave_phase() {
        let d = Domain::torus1d(2.0 * PI, 64).unwrap();
        let u = Field::from_fn(d, |x| C64::from_polar(1.0, x[0])).unwrap();
        let v = linear_substep(&u, 0.1);
        let rot = C64::from_polar(1.0, -0.05);
        for (a, b) in v.values().iter().zip(u.values()) {
            assert!((a - b * rot).norm() < 1e-13);
        }
    }

    #[test]
    fn unitary_on_rough_data() {
        let d = Domain::confined1d(10.0, 128, 1.3).unwrap();
        let u = Field::from_fn(d, |x| C64::new((x[0] * 3.0).sin() * (-x[0] * x[0] / 8.0).exp(), x[0].cos() * 0.1)).unwrap();
        let n0 = l2_norm(&u);
        let v = linear_substep(&u, 0.37);
        assert!((l2_norm(&v) - n0).abs() < 1e-12 * n0);
    }

    fn ground_state(omega: f64) -> Field {
        let d = Domain::confined1d(20.0, 256, omega).unwrap();
        let c = omega * FRAC_1_SQRT_2;
        Field::from_fn(d, |x| C64::new((-c * x[0] * x[0]).exp(), 0.0)).unwrap()
    }

    #[test]
    fn ground_state_is_an_eigenfunction() {
        // independent of the splitting: residual of (-Lap/2 + V) u - E u
        let u = ground_state(1.0);
        let e = FRAC_1_SQRT_2;
        let lap = laplacian(&u);
        let worst = u
            .values()
            .iter()
            .zip(lap.values())
            .zip(u.domain().potential())
            .map(|((z, l), v)| (-0.5 * l + v * z - e * z).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn ground_state_phase_error_is_third_order() {
        let u = ground_state(1.0);
        let e = FRAC_1_SQRT_2;
        let err = |dt: f64| {
            let v = linear_substep(&u, dt);
            let rot = C64::from_polar(1.0, -e * dt);
            let diff = Field::new(
                u.domain().clone(),
                v.values().iter().zip(u.values()).map(|(a, b)| a - b * rot).collect(),
            )
            .unwrap();
            l2_norm(&diff)
        };
        let (e1, e2) = (err(0.1), err(0.05));
        assert!(e1 < 1e-2);
        let ratio = e1 / e2;
        assert!(ratio > 6.0 && ratio < 10.0, "ratio {ratio}");
    }
}
