use rayon::prelude::*;

use crate::grid::{Field, Params, C64};

const MIN_SUBSTEPS: usize = 8;
const MAX_SUBSTEPS: usize = 4096;
/// Upper bound on `h * |df/dy|` for one internal RK4 substep.
const STIFFNESS_BUDGET: f64 = 0.1;

/// Pointwise flow of
/// `u_t = -i lambda |u|^{2 sigma1} u - a |u|^{2 sigma2} u - b u / (|u|^2 + delta)^{alpha/2}`.
///
/// The flow keeps the polar factor and evolves modulus and phase:
/// `rho' = -a rho^{2 sigma2 + 1} - b rho / (rho^2 + delta)^{alpha/2}`,
/// `theta' = -lambda rho^{2 sigma1}`. Once the modulus reaches zero it stays
/// there and the point is exactly `0`.
#[derive(Debug, Clone, Copy)]
pub struct RadialFlow {
    params: Params,
    path: Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Path {
    /// `a = 0` and `delta = 0` (or `alpha = 0`, or `b = 0`): closed form.
    Exact,
    /// `delta = 0`, `alpha > 0`: RK4 in `w = rho^alpha`, which reaches zero
    /// with slope `-alpha b`.
    PowerVariable,
    /// RK4 in `s = rho^2`.
    SquaredModulus,
}

impl RadialFlow {
    pub fn new(params: &Params) -> Self {
        let p = *params;
        let path = if p.a == 0.0 && (p.delta == 0.0 || p.alpha == 0.0 || p.b == 0.0) {
            Path::Exact
        } else if p.delta == 0.0 && p.alpha > 0.0 {
            Path::PowerVariable
        } else {
            Path::SquaredModulus
        };
        Self { params: p, path }
    }

    /// Whether the closed-form solution is used.
    pub fn is_exact(&self) -> bool {
        self.path == Path::Exact
    }

    /// Returns `(rho(h), theta(h) - theta(0))` starting from modulus `rho0`.
    pub fn advance_polar(&self, rho0: f64, h: f64) -> (f64, f64) {
        if rho0 == 0.0 {
            return (0.0, 0.0);
        }
        match self.path {
            Path::Exact => self.exact(rho0, h),
            Path::PowerVariable => self.rk_power(rho0, h),
            Path::SquaredModulus => self.rk_squared(rho0, h),
        }
    }

    pub fn advance(&self, z: C64, h: f64) -> C64 {
        let rho0 = z.norm();
        if rho0 == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let (rho, dtheta) = self.advance_polar(rho0, h);
        if rho == 0.0 {
            return C64::new(0.0, 0.0);
        }
        z * (rho / rho0) * C64::from_polar(1.0, dtheta)
    }

    fn exact(&self, rho0: f64, h: f64) -> (f64, f64) {
        let Params {
            lambda,
            b,
            sigma1: s1,
            alpha,
            ..
        } = self.params;
        let two_s1 = 2.0 * s1;
        if b == 0.0 {
            return (rho0, -lambda * rho0.powf(two_s1) * h);
        }
        if alpha == 0.0 {
            let rho = rho0 * (-b * h).exp();
            let phase = rho0.powf(two_s1) * (-(-two_s1 * b * h).exp_m1()) / (two_s1 * b);
            return (rho, -lambda * phase);
        }
        let w = rho0.powf(alpha) - alpha * b * h;
        let rho = if w > 0.0 { w.powf(1.0 / alpha) } else { 0.0 };
        let phase = if lambda == 0.0 {
            0.0
        } else {
            let e = two_s1 + alpha;
            (rho0.powf(e) - rho.powf(e)) / (b * e)
        };
        (rho, -lambda * phase)
    }

    fn substeps(&self, stiffness: f64, h: f64) -> usize {
        let m = (h * stiffness / STIFFNESS_BUDGET).ceil();
        if m.is_finite() {
            (m as usize).clamp(MIN_SUBSTEPS, MAX_SUBSTEPS)
        } else {
            MAX_SUBSTEPS
        }
    }

    fn rk_power(&self, rho0: f64, h: f64) -> (f64, f64) {
        let Params {
            lambda,
            a,
            b,
            sigma1: s1,
            sigma2: s2,
            alpha,
            ..
        } = self.params;
        let damp_exp = (alpha + 2.0 * s2) / alpha;
        let phase_exp = 2.0 * s1 / alpha;
        let rhs = |w: f64| {
            let w = w.max(0.0);
            (
                -alpha * a * w.powf(damp_exp) - alpha * b,
                -lambda * w.powf(phase_exp),
            )
        };
        let stiffness = a * (alpha + 2.0 * s2) * rho0.powf(2.0 * s2);
        let m = self.substeps(stiffness, h);
        let (w, theta) = rk4(rho0.powf(alpha), h, m, rhs);
        (if w > 0.0 { w.powf(1.0 / alpha) } else { 0.0 }, theta)
    }

    fn rk_squared(&self, rho0: f64, h: f64) -> (f64, f64) {
        let Params {
            lambda,
            a,
            b,
            sigma1: s1,
            sigma2: s2,
            alpha,
            delta,
            ..
        } = self.params;
        let half_alpha = 0.5 * alpha;
        let rhs = |s: f64| {
            let s = s.max(0.0);
            let sub = if alpha == 0.0 { s } else { s / (s + delta).powf(half_alpha) };
            (
                -2.0 * a * s.powf(s2 + 1.0) - 2.0 * b * sub,
                -lambda * s.powf(s1),
            )
        };
        let s0 = rho0 * rho0;
        let sub_bound = if alpha == 0.0 { 1.0 } else { delta.powf(-half_alpha) };
        let stiffness = 2.0 * a * (s2 + 1.0) * s0.powf(s2) + 2.0 * b * sub_bound;
        let m = self.substeps(stiffness, h);
        let (s, theta) = rk4(s0, h, m, rhs);
        (if s > 0.0 { s.sqrt() } else { 0.0 }, theta)
    }
}

/// Classical RK4 on `(y, theta)` with `y` clipped at zero; `theta'` only
/// depends on `y`. Integration stops once `y` hits zero.
fn rk4(y0: f64, h: f64, m: usize, rhs: impl Fn(f64) -> (f64, f64)) -> (f64, f64) {
    let dt = h / m as f64;
    let (mut y, mut theta) = (y0, 0.0);
    for _ in 0..m {
        let (k1, p1) = rhs(y);
        let (k2, p2) = rhs(y + 0.5 * dt * k1);
        let (k3, p3) = rhs(y + 0.5 * dt * k2);
        let (k4, p4) = rhs(y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        theta += dt / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
        if y <= 0.0 {
            return (0.0, theta);
        }
    }
    (y, theta)
}

/// Applies [`RadialFlow`] at every grid point in place.
pub(crate) fn apply_radial(flow: &RadialFlow, values: &mut [C64], h: f64) {
    values
        .par_iter_mut()
        .with_min_len(1024)
        .for_each(|z| *z = flow.advance(*z, h));
}

/// Solves the pointwise nonlinear and damping flow over `dt`.
pub fn nonlinear_substep(u: &Field, params: &Params, dt: f64) -> Field {
    let flow = RadialFlow::new(params);
    let mut out = u.clone();
    apply_radial(&flow, out.values_mut(), dt);
    out
}

/// `u / |u|` where `u != 0`, exactly `0` where `u == 0`.
pub fn polar_factor(u: &Field) -> Field {
    let values = u
        .values()
        .iter()
        .map(|&z| {
            let r = z.norm();
            if r == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                z / r
            }
        })
        .collect();
    Field::from_raw(u.domain().clone(), values)
}
