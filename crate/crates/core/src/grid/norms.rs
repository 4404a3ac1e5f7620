use serde::{Deserialize, Serialize};

use super::{Field, GridError, C64};

/// `|z|^p` computed as `(|z|^2)^{p/2}`, with `|0|^p = 0` for every `p`.
#[inline]
pub fn abs_pow(z: C64, p: f64) -> f64 {
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        0.0
    } else {
        r2.powf(0.5 * p)
    }
}

/// `int |f|^p` by the rectangle rule.
pub fn integral_abs_pow(f: &Field, p: f64) -> f64 {
    f.values().iter().map(|&z| abs_pow(z, p)).sum::<f64>() * f.domain().quad_weight()
}

/// `||f||_{L^p}`; pass `f64::INFINITY` for the sup norm.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64, GridError> {
    if p.is_nan() || p < 1.0 {
        return Err(GridError::Exponent(p));
    }
    if p.is_infinite() {
        return Ok(linf_norm(f));
    }
    Ok(integral_abs_pow(f, p).powf(1.0 / p))
}

pub fn linf_norm(f: &Field) -> f64 {
    f.values().iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn l2_norm_sq(f: &Field) -> f64 {
    f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * f.domain().quad_weight()
}

pub fn l2_norm(f: &Field) -> f64 {
    l2_norm_sq(f).sqrt()
}

/// Spectral moments `(||grad f||^2, ||Lap f||^2)`.
pub fn derivative_norms_sq(f: &Field) -> (f64, f64) {
    let spec = f.spectrum();
    let k2 = f.domain().k_squared();
    let (g, l) = spec.iter().zip(&k2).fold((0.0, 0.0), |(g, l), (c, &k2)| {
        let p = c.norm_sqr();
        (g + k2 * p, l + k2 * k2 * p)
    });
    let w = f.domain().quad_weight() / f.values().len() as f64;
    (g * w, l * w)
}

/// `||f||_{H^1}` (inhomogeneous: `||f||^2 + ||grad f||^2`).
pub fn h1_norm(f: &Field) -> f64 {
    let (g, _) = derivative_norms_sq(f);
    (l2_norm_sq(f) + g).sqrt()
}

/// `||f||_{H^2}` with `||f||^2 + ||grad f||^2 + ||Lap f||^2`.
pub fn h2_norm(f: &Field) -> f64 {
    let (g, l) = derivative_norms_sq(f);
    (l2_norm_sq(f) + g + l).sqrt()
}

/// `|| |x|^order f ||_{L^2}`; zero on tori where `Sigma^k = H^k`.
pub fn moment(f: &Field, order: u32) -> f64 {
    let d = f.domain();
    if !d.kind().is_confined() {
        return 0.0;
    }
    let mut x = vec![0.0; d.dim()];
    let sum: f64 = f
        .values()
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            d.point(idx, &mut x);
            let r2: f64 = x.iter().map(|x| x * x).sum();
            r2.powi(order as i32) * z.norm_sqr()
        })
        .sum();
    (sum * d.quad_weight()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaNorms {
    pub l2: f64,
    pub h_grad: f64,
    pub h_lap: f64,
    pub moment: f64,
    pub sigma: f64,
}

/// Components of `||f||_{Sigma^order}`, `order` in `{1, 2}`.
pub fn sigma_norms(f: &Field, order: u32) -> Result<SigmaNorms, GridError> {
    if !(1..=2).contains(&order) {
        return Err(GridError::Order(order));
    }
    let l2sq = l2_norm_sq(f);
    let (g, l) = derivative_norms_sq(f);
    let m = moment(f, order);
    let h_sq = if order == 1 { l2sq + g } else { l2sq + g + l };
    Ok(SigmaNorms {
        l2: l2sq.sqrt(),
        h_grad: g.sqrt(),
        h_lap: l.sqrt(),
        moment: m,
        sigma: (h_sq + m * m).sqrt(),
    })
}

/// Forward transform, multiply by `symbol` mode by mode, inverse transform.
pub fn apply_spectral(f: &Field, symbol: &[C64]) -> Result<Field, GridError> {
    if symbol.len() != f.values().len() {
        return Err(GridError::Length {
            expected: f.values().len(),
            got: symbol.len(),
        });
    }
    let mut spec = f.spectrum();
    spec.iter_mut().zip(symbol).for_each(|(c, s)| *c *= s);
    f.domain().spectral.inverse(&mut spec);
    Ok(Field::from_raw(f.domain().clone(), spec))
}

pub fn laplacian(f: &Field) -> Field {
    let sym = f.domain().laplacian_symbol();
    apply_spectral(f, &sym).expect("symbol built from the field's own domain")
}

/// Spectral partial derivatives, one field per axis.
pub fn gradient(f: &Field) -> Vec<Field> {
    let d = f.domain();
    let spec = f.spectrum();
    (0..d.dim())
        .map(|axis| {
            let sym = d.derivative_symbol(axis);
            let mut c: Vec<C64> = spec.iter().zip(&sym).map(|(a, s)| a * s).collect();
            d.spectral.inverse(&mut c);
            Field::from_raw(d.clone(), c)
        })
        .collect()
}

/// Fraction of `||f||^2` carried by points in the outer 10% shell of the
/// truncation box, i.e. where `|x_j| > 0.9 L_j` on some axis.
pub fn boundary_mass(f: &Field) -> Result<f64, GridError> {
    let d = f.domain();
    if !d.kind().is_confined() {
        return Err(GridError::NotConfined);
    }
    let mut x = vec![0.0; d.dim()];
    let (mut shell, mut total) = (0.0, 0.0);
    for (idx, z) in f.values().iter().enumerate() {
        d.point(idx, &mut x);
        let m = z.norm_sqr();
        total += m;
        if x.iter().zip(d.extent()).any(|(x, l)| x.abs() > 0.9 * l) {
            shell += m;
        }
    }
    Ok(if total == 0.0 { 0.0 } else { shell / total })
}

/// Fraction of spectral mass in modes beyond 2/3 of the resolved band.
/// Grows to O(1) when a profile concentrates below the grid scale.
pub fn spectral_tail_fraction(f: &Field) -> f64 {
    let spec = f.spectrum();
    let mask = f.domain().high_band_mask();
    let (tail, total) = spec.iter().zip(&mask).fold((0.0, 0.0), |(t, s), (c, &hi)| {
        let p = c.norm_sqr();
        (if hi { t + p } else { t }, s + p)
    });
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::grid::Domain;

    fn plane_wave(k: f64) -> Field {
        let d = Domain::torus1d(2.0 * PI, 64).unwrap();
        Field::from_fn(d, |x| C64::from_polar(1.0, k * x[0])).unwrap()
    }

    #[test]
    fn lp_of_constants() {
        let d = Domain::torus1d(2.0 * PI, 64).unwrap();
        let zero = Field::zeros(d.clone());
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(lp_norm(&zero, p).unwrap(), 0.0);
        }
        let one = Field::from_fn(d, |_| C64::new(1.0, 0.0)).unwrap();
        assert!((lp_norm(&one, 2.0).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-13);
        assert_eq!(lp_norm(&one, f64::INFINITY).unwrap(), 1.0);
        assert!(matches!(lp_norm(&one, 0.5), Err(GridError::Exponent(_))));
    }

    #[test]
    fn single_mode_sigma_norms() {
        let f = plane_wave(1.0);
        let s = sigma_norms(&f, 1).unwrap();
        let r = (2.0 * PI).sqrt();
        assert!((s.l2 - r).abs() < 1e-12);
        assert!((s.h_grad - r).abs() < 1e-12);
        assert!((s.sigma.powi(2) - 4.0 * PI).abs() < 1e-11);
        assert_eq!(s.moment, 0.0);
        assert!(sigma_norms(&f, 3).is_err());
    }

    #[test]
    fn spectral_derivatives_of_modes() {
        let f = plane_wave(1.0);
        let lap = laplacian(&f);
        for (a, b) in lap.values().iter().zip(f.values()) {
            assert!((a + b).norm() < 1e-12);
        }
        let g = plane_wave(2.0);
        let dx = apply_spectral(&g, &g.domain().derivative_symbol(0)).unwrap();
        for (a, b) in dx.values().iter().zip(g.values()) {
            assert!((a - C64::new(0.0, 2.0) * b).norm() < 1e-12);
        }
        let ones = vec![C64::new(1.0, 0.0); 64];
        let same = apply_spectral(&g, &ones).unwrap();
        for (a, b) in same.values().iter().zip(g.values()) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!(apply_spectral(&g, &ones[..10]).is_err());
    }

    #[test]
    fn boundary_mass_cases() {
        let d = Domain::confined1d(20.0, 256, 1.0).unwrap();
        let g = Field::from_fn(d.clone(), |x| C64::new((-x[0] * x[0]).exp(), 0.0)).unwrap();
        assert!(boundary_mass(&g).unwrap() < 1e-12);
        let shell = Field::from_fn(d.clone(), |x| {
            C64::new(if x[0].abs() > 18.5 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        assert_eq!(boundary_mass(&shell).unwrap(), 1.0);
        assert_eq!(boundary_mass(&Field::zeros(d)).unwrap(), 0.0);
        assert!(matches!(boundary_mass(&plane_wave(1.0)), Err(GridError::NotConfined)));
    }
}
