use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::grid::{Domain, Field, C64};

/// Spectral decay exponents of the random field ensemble: one rough, one smooth.
pub const DECAY_EXPONENTS: [f64; 2] = [1.5, 2.5];

/// Random band-limited field.
///
/// Fourier coefficients are standard complex Gaussians weighted by
/// `(1 + |k|)^{-decay}` on modes with index `|m_j| <= n_j / 4`. On confined
/// domains the result is multiplied by a Gaussian envelope of width
/// `L_j / 5` so that the box edge carries negligible mass.
pub fn random_field<R: Rng + ?Sized>(domain: &Arc<Domain>, decay: f64, rng: &mut R) -> Field {
    let shape = domain.shape().to_vec();
    let mut coeffs = Vec::with_capacity(domain.len());
    let mut k = vec![0.0; domain.dim()];
    for idx in 0..domain.len() {
        let idx_axes: Vec<usize> = match shape.as_slice() {
            [_] => vec![idx],
            [_, cols] => vec![idx / cols, idx % cols],
            _ => unreachable!(),
        };
        let mut inside = true;
        for (axis, (&i, &n)) in idx_axes.iter().zip(&shape).enumerate() {
            let m = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
            inside &= m.unsigned_abs() as usize <= n / 4;
            k[axis] = domain.wavenumbers(axis)[i];
        }
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        if inside {
            let kn = k.iter().map(|k| k * k).sum::<f64>().sqrt();
            coeffs.push(C64::new(re, im) * (1.0 + kn).powf(-decay));
        } else {
            coeffs.push(C64::new(0.0, 0.0));
        }
    }
    let mut field = Field::from_spectrum(domain.clone(), coeffs).expect("finite coefficients");
    if domain.kind().is_confined() {
        let widths: Vec<f64> = domain.extent().iter().map(|l| l / 5.0).collect();
        let mut x = vec![0.0; domain.dim()];
        let values: Vec<C64> = field
            .values()
            .iter()
            .enumerate()
            .map(|(idx, z)| {
                domain.point(idx, &mut x);
                let e: f64 = x.iter().zip(&widths).map(|(x, w)| (x / w).powi(2)).sum();
                z * (-0.5 * e).exp()
            })
            .collect();
        field = Field::new(domain.clone(), values).expect("finite values");
    }
    field
}
