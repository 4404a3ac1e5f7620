use crate::grid::{abs_pow, derivative_norms_sq, gradient, integral_abs_pow, laplacian, Field, Params, C64};

/// Hamiltonian energy
/// `||grad u||^2 + 2 int V |u|^2 + 2 lambda / (sigma1 + 1) ||u||_{2 sigma1 + 2}^{2 sigma1 + 2}`.
pub fn energy_e0(u: &Field, params: &Params) -> f64 {
    let (grad_sq, _) = derivative_norms_sq(u);
    let w = u.domain().quad_weight();
    let potential: f64 = u
        .values()
        .iter()
        .zip(u.domain().potential())
        .map(|(z, v)| v * z.norm_sqr())
        .sum::<f64>()
        * w;
    let s1 = params.sigma1;
    let nonlinear = if params.lambda == 0.0 {
        0.0
    } else {
        2.0 * params.lambda / (s1 + 1.0) * integral_abs_pow(u, 2.0 * s1 + 2.0)
    };
    grad_sq + 2.0 * potential + nonlinear
}

/// Augmented energy `E_0 + k ||u||_{2 sigma2 + 2}^{2 sigma2 + 2}`.
pub fn energy_ek(u: &Field, params: &Params) -> f64 {
    energy_e0(u, params) + params.k_energy * dissipation_a(u, params)
}

/// `int |u|^{2 sigma2 + 2}`, the superlinear dissipation integrand.
pub fn dissipation_a(u: &Field, params: &Params) -> f64 {
    integral_abs_pow(u, 2.0 * params.sigma2 + 2.0)
}

/// `int |u|^2 / (|u|^2 + delta)^{alpha/2}`, the sublinear dissipation integrand.
pub fn dissipation_b(u: &Field, params: &Params) -> f64 {
    if params.delta == 0.0 {
        return integral_abs_pow(u, 2.0 - params.alpha);
    }
    let half_alpha = 0.5 * params.alpha;
    u.values()
        .iter()
        .map(|z| {
            let s = z.norm_sqr();
            s / (s + params.delta).powf(half_alpha)
        })
        .sum::<f64>()
        * u.domain().quad_weight()
}

/// Second order energy, equivalent to `||u||_{Sigma^2}^2` along the flow.
///
/// Terms with negative powers of `|u|` vanish where `u = 0`. `(grad u)^2`
/// is the complex sum `sum_j (d_j u)^2`.
pub fn energy_e2(u: &Field, params: &Params) -> f64 {
    let d = u.domain();
    let w = d.quad_weight();
    let Params {
        lambda,
        a,
        b,
        sigma1: s1,
        sigma2: s2,
        alpha,
        ..
    } = *params;

    let lap = laplacian(u);
    let grad = gradient(u);
    let lap_delta_v = d.laplacian_potential();

    let mut sum = 0.0;
    for (idx, (&z, &v)) in u.values().iter().zip(d.potential()).enumerate() {
        let r2 = z.norm_sqr();
        let lz = lap.values()[idx];
        let mut grad_abs_sq = 0.0;
        let mut grad_sq = C64::new(0.0, 0.0);
        for g in &grad {
            let gz = g.values()[idx];
            grad_abs_sq += gz.norm_sqr();
            grad_sq += gz * gz;
        }

        let mut t = 0.25 * lz.norm_sqr() + v * v * r2 + v * grad_abs_sq;
        if r2 > 0.0 {
            let zbar2 = z.conj() * z.conj();
            t += a * a * abs_pow(z, 4.0 * s2 + 2.0)
                + 2.0 * a * b * abs_pow(z, 2.0 * s2 + 2.0 - alpha)
                + b * b * abs_pow(z, 2.0 - 2.0 * alpha)
                - 0.5 * r2 * lap_delta_v;
            if lambda != 0.0 {
                t += lambda * (s1 + 1.0) / 2.0 * abs_pow(z, 2.0 * s1) * grad_abs_sq
                    + lambda * s1 / 2.0 * (abs_pow(z, 2.0 * s1 - 2.0) * zbar2 * grad_sq).re
                    + lambda / (s1 + 1.0) * v * abs_pow(z, 2.0 * s1 + 2.0);
            }
            if a != 0.0 {
                t -= a * s2 * (abs_pow(z, 2.0 * s2 - 2.0) * zbar2 * grad_sq).im;
            }
            if b != 0.0 {
                t += b * (z.conj() * abs_pow(z, -alpha) * lz).im;
            }
        }
        sum += t;
    }
    sum * w
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::grid::Domain;

    fn torus() -> std::sync::Arc<crate::grid::Domain> {
        Domain::torus1d(2.0 * PI, 64).unwrap()
    }

    fn constant(c: f64) -> Field {
        Field::from_fn(torus(), |_| C64::new(c, 0.0)).unwrap()
    }

    #[test]
    fn zero_field_has_zero_energies() {
        let z = Field::zeros(torus());
        let p = Params {
            lambda: 1.0,
            a: 1.0,
            b: 1.0,
            alpha: 0.5,
            ..Params::default()
        };
        assert_eq!(energy_e0(&z, &p), 0.0);
        assert_eq!(energy_ek(&z, &p), 0.0);
        assert_eq!(energy_e2(&z, &p), 0.0);
        assert_eq!(dissipation_a(&z, &p), 0.0);
        assert_eq!(dissipation_b(&z, &p), 0.0);
    }

    #[test]
    fn e0_closed_forms() {
        let p = Params {
            lambda: 1.0,
            sigma1: 1.0,
            ..Params::default()
        };
        assert!((energy_e0(&constant(1.0), &p) - 2.0 * PI).abs() < 1e-12);
        let wave = Field::from_fn(torus(), |x| C64::from_polar(1.0, x[0])).unwrap();
        let p0 = Params { lambda: 0.0, ..p };
        assert!((energy_e0(&wave, &p0) - 2.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn ek_adds_superlinear_term() {
        let p = Params {
            lambda: 0.0,
            k_energy: 1.0,
            sigma2: 1.0,
            ..Params::default()
        };
        assert!((energy_ek(&constant(1.0), &p) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn e2_constant_field() {
        let c: f64 = 0.7;
        let p = Params {
            lambda: 0.0,
            a: 0.3,
            b: 0.9,
            sigma2: 1.5,
            alpha: 0.5,
            ..Params::default()
        };
        let expected = 2.0
            * PI
            * (p.a * p.a * c.powf(4.0 * p.sigma2 + 2.0)
                + 2.0 * p.a * p.b * c.powf(2.0 * p.sigma2 + 2.0 - p.alpha)
                + p.b * p.b * c.powf(2.0 - 2.0 * p.alpha));
        let got = energy_e2(&constant(c), &p);
        assert!((got - expected).abs() < 1e-12 * expected, "{got} vs {expected}");
    }

    #[test]
    fn e2_plane_wave_is_quarter_laplacian() {
        let wave = Field::from_fn(torus(), |x| C64::from_polar(1.0, x[0])).unwrap();
        let p = Params {
            lambda: 0.0,
            a: 0.0,
            b: 0.0,
            ..Params::default()
        };
        assert!((energy_e2(&wave, &p) - 0.25 * 2.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn dissipation_b_with_delta() {
        let p = Params {
            alpha: 1.0,
            delta: 3.0,
            ..Params::default()
        };
        // 1 / (1 + 3)^{1/2} = 1/2 at every point
        assert!((dissipation_b(&constant(1.0), &p) - PI).abs() < 1e-12);
    }
}
