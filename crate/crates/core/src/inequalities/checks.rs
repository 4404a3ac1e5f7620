use serde::{Deserialize, Serialize};

use super::IneqError;
use crate::grid::{
    abs_pow, derivative_norms_sq, h1_norm, h2_norm, integral_abs_pow, l2_norm, lp_norm, moment,
    Field, C64,
};

/// Both sides of one inequality for one field, constant stripped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Ratio with homogeneous Sobolev norms, reported on confined domains.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_homogeneous: Option<f64>,
}

/// `d (1/2 - 1/p)`, with `1/inf = 0`.
pub fn interpolation_exponent(p: f64, d: usize) -> f64 {
    let inv = if p.is_infinite() { 0.0 } else { 1.0 / p };
    d as f64 * (0.5 - inv)
}

/// Hölder conjugate `p / (p - 1)`, with `inf' = 1`.
pub fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn check_range(p: f64, d: usize) -> Result<(), IneqError> {
    let ok = match d {
        1 => p >= 2.0,
        _ => p >= 2.0 && p.is_finite(),
    };
    if ok {
        Ok(())
    } else {
        Err(IneqError::Exponent { p, d })
    }
}

fn nonzero(f: &Field) -> Result<f64, IneqError> {
    let l2 = l2_norm(f);
    if l2 == 0.0 {
        Err(IneqError::ZeroField)
    } else {
        Ok(l2)
    }
}

fn grad_norm(f: &Field) -> f64 {
    derivative_norms_sq(f).0.sqrt()
}

fn lap_norm(f: &Field) -> f64 {
    derivative_norms_sq(f).1.sqrt()
}

fn result(lhs: f64, rhs: f64, homogeneous_rhs: Option<f64>) -> CheckResult {
    CheckResult {
        lhs,
        rhs,
        ratio: lhs / rhs,
        ratio_homogeneous: homogeneous_rhs.map(|h| lhs / h),
    }
}

/// Gagliardo-Nirenberg: `||f||_p <= C ||f||_2^{1-delta(p)} ||f||_{H^1}^{delta(p)}`.
pub fn check_gn(f: &Field, p: f64) -> Result<CheckResult, IneqError> {
    let d = f.domain().dim();
    check_range(p, d)?;
    let l2 = nonzero(f)?;
    let delta = interpolation_exponent(p, d);
    let lhs = lp_norm(f, p)?;
    let rhs = l2.powf(1.0 - delta) * h1_norm(f).powf(delta);
    let hom = f
        .domain()
        .kind()
        .is_confined()
        .then(|| l2.powf(1.0 - delta) * grad_norm(f).powf(delta));
    Ok(result(lhs, rhs, hom))
}

/// Control of momenta: `||f||_{p'} <= C ||f||_2^{1-delta(p)} || |x| f ||_2^{delta(p)}`.
pub fn check_gn_dual(f: &Field, p: f64) -> Result<CheckResult, IneqError> {
    let d = f.domain();
    if !d.kind().is_confined() {
        return Err(IneqError::Domain("momentum inequality needs a confined domain"));
    }
    check_range(p, d.dim())?;
    let l2 = nonzero(f)?;
    let delta = interpolation_exponent(p, d.dim());
    let lhs = lp_norm(f, conjugate(p))?;
    let rhs = l2.powf(1.0 - delta) * moment(f, 1).powf(delta);
    Ok(result(lhs, rhs, None))
}

/// `||f||_{L^1(R^2)} <= C ||f||_2^{1/2} || |x|^2 f ||_2^{1/2}`.
pub fn check_gn_dual2(f: &Field) -> Result<CheckResult, IneqError> {
    let d = f.domain();
    if !(d.kind().is_confined() && d.dim() == 2) {
        return Err(IneqError::Domain("second moment L^1 bound is stated on the confined plane"));
    }
    let l2 = nonzero(f)?;
    let lhs = lp_norm(f, 1.0)?;
    let rhs = l2.sqrt() * moment(f, 2).sqrt();
    Ok(result(lhs, rhs, None))
}

/// Nash-type bounds:
/// order 1: `||f||_2^{alpha d + 4 - 2 alpha} <= C (int |f|^{2-alpha})^2 ||f||_{H^1}^{alpha d}`,
/// order 2: `||f||_2^{alpha d + 8 - 4 alpha} <= C (int |f|^{2-alpha})^4 ||f||_{H^2}^{alpha d}`.
pub fn check_nash(f: &Field, order: u32, alpha: f64) -> Result<CheckResult, IneqError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(IneqError::Alpha(alpha));
    }
    let (power, block_power, h, h_hom) = match order {
        1 => (4.0 - 2.0 * alpha, 2, h1_norm as fn(&Field) -> f64, grad_norm as fn(&Field) -> f64),
        2 => (8.0 - 4.0 * alpha, 4, h2_norm as fn(&Field) -> f64, lap_norm as fn(&Field) -> f64),
        other => return Err(IneqError::Order(other)),
    };
    let d = f.domain().dim() as f64;
    let l2 = nonzero(f)?;
    let lhs = l2.powf(alpha * d + power);
    let block = integral_abs_pow(f, 2.0 - alpha).powi(block_power);
    let rhs = block * h(f).powf(alpha * d);
    let hom = f
        .domain()
        .kind()
        .is_confined()
        .then(|| block * h_hom(f).powf(alpha * d));
    Ok(result(lhs, rhs, hom))
}

/// Brezis-Gallouet (d = 2): `||f||_inf <= C (||f||_{H^1} sqrt(ln(2 + ||f||_{H^2})) + 1)`.
///
/// Not homogeneous, so the ratio depends on the amplitude of `f`.
pub fn check_brezis_gallouet(f: &Field) -> Result<CheckResult, IneqError> {
    if f.domain().dim() != 2 {
        return Err(IneqError::Domain("Brezis-Gallouet is a two-dimensional inequality"));
    }
    let lhs = lp_norm(f, f64::INFINITY)?;
    let rhs = h1_norm(f) * (2.0 + h2_norm(f)).ln().sqrt() + 1.0;
    Ok(result(lhs, rhs, None))
}

/// `Re((|z1|^s z1 - |z2|^s z2) conj(z1 - z2))`, nonnegative for `s >= -1`,
/// with `|0|^s 0 = 0`.
pub fn check_young_monotone(z1: C64, z2: C64, sigma: f64) -> Result<f64, IneqError> {
    if !(sigma >= -1.0) {
        return Err(IneqError::Sigma(sigma));
    }
    let g = |z: C64| z * abs_pow(z, sigma);
    Ok(((g(z1) - g(z2)) * (z1 - z2).conj()).re)
}
