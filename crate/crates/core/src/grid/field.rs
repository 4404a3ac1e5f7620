use std::sync::Arc;

use super::{Domain, GridError, C64};

/// Complex grid function on a [`Domain`].
#[derive(Debug, Clone)]
pub struct Field {
    domain: Arc<Domain>,
    values: Vec<C64>,
}

impl Field {
    pub fn new(domain: Arc<Domain>, values: Vec<C64>) -> Result<Self, GridError> {
        if values.len() != domain.len() {
            return Err(GridError::Length {
                expected: domain.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|z| !z.is_finite()) {
            return Err(GridError::NonFinite { index });
        }
        Ok(Self { domain, values })
    }

    /// Skips the finiteness scan; used on the hot path where the caller
    /// checks separately.
    pub(crate) fn from_raw(domain: Arc<Domain>, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), domain.len());
        Self { domain, values }
    }

    pub fn zeros(domain: Arc<Domain>) -> Self {
        let values = vec![C64::new(0.0, 0.0); domain.len()];
        Self { domain, values }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(domain: Arc<Domain>, mut f: impl FnMut(&[f64]) -> C64) -> Result<Self, GridError> {
        let mut x = vec![0.0; domain.dim()];
        let values = (0..domain.len())
            .map(|idx| {
                domain.point(idx, &mut x);
                f(&x)
            })
            .collect();
        Self::new(domain, values)
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.is_finite())
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self::from_raw(self.domain.clone(), self.values.iter().map(|z| z * c).collect())
    }

    /// Pointwise `self - other`; both fields must share one grid.
    pub fn difference(&self, other: &Field) -> Result<Self, GridError> {
        if self.domain.shape() != other.domain.shape() || self.domain.kind() != other.domain.kind() {
            return Err(GridError::Length {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        Ok(Self::from_raw(
            self.domain.clone(),
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        ))
    }

    /// L^2 inner product `int self * conj(other)`.
    pub fn inner(&self, other: &Field) -> C64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum::<C64>()
            * self.domain.quad_weight()
    }

    /// Unnormalized discrete Fourier coefficients.
    pub fn spectrum(&self) -> Vec<C64> {
        let mut buf = self.values.clone();
        self.domain.spectral.forward(&mut buf);
        buf
    }

    pub fn from_spectrum(domain: Arc<Domain>, mut coeffs: Vec<C64>) -> Result<Self, GridError> {
        if coeffs.len() != domain.len() {
            return Err(GridError::Length {
                expected: domain.len(),
                got: coeffs.len(),
            });
        }
        domain.spectral.inverse(&mut coeffs);
        Self::new(domain, coeffs)
    }
}
