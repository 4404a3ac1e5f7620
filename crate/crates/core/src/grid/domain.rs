use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::spectral::Spectral;
use super::{GridError, C64};

/// Geometry of the spatial domain.
///
/// Tori are flat compact manifolds with `V = 0`. Confined kinds stand for
/// `R^d` with the harmonic potential `V(x) = sum_j omega_j^2 x_j^2`,
/// truncated to the periodic box `[-L_j, L_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    #[serde(alias = "torus1d")]
    Torus1D,
    #[serde(alias = "torus2d")]
    Torus2D,
    #[serde(alias = "confined_r1", alias = "confinedr1")]
    ConfinedR1,
    #[serde(alias = "confined_r2", alias = "confinedr2")]
    ConfinedR2,
}

impl DomainKind {
    pub fn dim(self) -> usize {
        match self {
            DomainKind::Torus1D | DomainKind::ConfinedR1 => 1,
            DomainKind::Torus2D | DomainKind::ConfinedR2 => 2,
        }
    }

    pub fn is_confined(self) -> bool {
        matches!(self, DomainKind::ConfinedR1 | DomainKind::ConfinedR2)
    }
}

/// Serializable description of a [`Domain`].
///
/// `extent` is the torus period per axis, or the half-width of the
/// truncation box for confined kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub extent: Vec<f64>,
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
}

#[derive(Debug)]
pub struct Domain {
    spec: DomainSpec,
    coords: Vec<Vec<f64>>,
    wavenumbers: Vec<Vec<f64>>,
    potential: Vec<f64>,
    quad_weight: f64,
    pub(crate) spectral: Spectral,
}

/// Builds a validated domain. Fields refer to it through an `Arc`.
pub fn make_domain(
    kind: DomainKind,
    extent: &[f64],
    n: &[usize],
    omega: Option<&[f64]>,
) -> Result<Arc<Domain>, GridError> {
    Domain::new(DomainSpec {
        kind,
        extent: extent.to_vec(),
        n: n.to_vec(),
        omega: omega.map(<[f64]>::to_vec),
    })
}

impl Domain {
    pub fn new(spec: DomainSpec) -> Result<Arc<Self>, GridError> {
        let dim = spec.kind.dim();
        if spec.n.len() != dim || spec.extent.len() != dim {
            return Err(GridError::Dimension {
                expected: dim,
                extent: spec.extent.len(),
                n: spec.n.len(),
            });
        }
        for (axis, &n) in spec.n.iter().enumerate() {
            if n < 8 || !n.is_power_of_two() {
                return Err(GridError::GridSize { axis, n });
            }
        }
        for (axis, &l) in spec.extent.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(GridError::Extent { axis, value: l });
            }
        }
        let mut spec = spec;
        if spec.kind.is_confined() {
            let omega = spec.omega.as_ref().ok_or(GridError::MissingOmega)?;
            if omega.len() != dim {
                return Err(GridError::MissingOmega);
            }
            if let Some(&w) = omega.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                return Err(GridError::Omega(w));
            }
        } else {
            spec.omega = None;
        }

        let lengths: Vec<f64> = spec
            .extent
            .iter()
            .map(|&l| if spec.kind.is_confined() { 2.0 * l } else { l })
            .collect();
        let coords: Vec<Vec<f64>> = (0..dim)
            .map(|axis| {
                let n = spec.n[axis];
                let h = lengths[axis] / n as f64;
                let origin = if spec.kind.is_confined() { -spec.extent[axis] } else { 0.0 };
                (0..n).map(|i| origin + i as f64 * h).collect()
            })
            .collect();
        let wavenumbers: Vec<Vec<f64>> = (0..dim)
            .map(|axis| {
                let n = spec.n[axis];
                let scale = 2.0 * PI / lengths[axis];
                (0..n)
                    .map(|m| {
                        let m = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
                        scale * m
                    })
                    .collect()
            })
            .collect();
        let quad_weight = lengths
            .iter()
            .zip(&spec.n)
            .map(|(l, &n)| l / n as f64)
            .product();

        let len: usize = spec.n.iter().product();
        let mut potential = vec![0.0; len];
        if let Some(omega) = &spec.omega {
            let mut x = vec![0.0; dim];
            for (idx, v) in potential.iter_mut().enumerate() {
                point_into(&coords, &spec.n, idx, &mut x);
                *v = x.iter().zip(omega).map(|(x, w)| w * w * x * x).sum();
            }
        }
        let spectral = Spectral::new(&spec.n);
        Ok(Arc::new(Self {
            spec,
            coords,
            wavenumbers,
            potential,
            quad_weight,
            spectral,
        }))
    }

    pub fn torus1d(period: f64, n: usize) -> Result<Arc<Self>, GridError> {
        make_domain(DomainKind::Torus1D, &[period], &[n], None)
    }

    pub fn torus2d(period: [f64; 2], n: [usize; 2]) -> Result<Arc<Self>, GridError> {
        make_domain(DomainKind::Torus2D, &period, &n, None)
    }

    pub fn confined1d(half_width: f64, n: usize, omega: f64) -> Result<Arc<Self>, GridError> {
        make_domain(DomainKind::ConfinedR1, &[half_width], &[n], Some(&[omega]))
    }

    pub fn confined2d(half_width: [f64; 2], n: [usize; 2], omega: [f64; 2]) -> Result<Arc<Self>, GridError> {
        make_domain(DomainKind::ConfinedR2, &half_width, &n, Some(&omega))
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn kind(&self) -> DomainKind {
        self.spec.kind
    }

    pub fn dim(&self) -> usize {
        self.spec.kind.dim()
    }

    pub fn shape(&self) -> &[usize] {
        &self.spec.n
    }

    pub fn len(&self) -> usize {
        self.potential.len()
    }

    pub fn is_empty(&self) -> bool {
        self.potential.is_empty()
    }

    pub fn extent(&self) -> &[f64] {
        &self.spec.extent
    }

    pub fn omega(&self) -> Option<&[f64]> {
        self.spec.omega.as_deref()
    }

    /// Physical coordinates along one axis.
    pub fn axis_coords(&self, axis: usize) -> &[f64] {
        &self.coords[axis]
    }

    /// Fourier symbols `k_j` along one axis, in FFT order.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.wavenumbers[axis]
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn quad_weight(&self) -> f64 {
        self.quad_weight
    }

    /// Measure of the (truncated) domain.
    pub fn volume(&self) -> f64 {
        self.quad_weight * self.len() as f64
    }

    /// `Delta V`, constant for the harmonic potential and zero on tori.
    pub fn laplacian_potential(&self) -> f64 {
        self.omega().map_or(0.0, |w| 2.0 * w.iter().map(|w| w * w).sum::<f64>())
    }

    /// Coordinates of grid point `idx` (row-major).
    pub fn point(&self, idx: usize, out: &mut [f64]) {
        point_into(&self.coords, &self.spec.n, idx, out);
    }

    /// `|k|^2` per mode, in the same ordering as the grid.
    pub fn k_squared(&self) -> Vec<f64> {
        self.mode_map(|k| k.iter().map(|k| k * k).sum())
    }

    /// Symbol of the Laplacian, `-|k|^2`.
    pub fn laplacian_symbol(&self) -> Vec<C64> {
        self.k_squared().into_iter().map(|k2| C64::new(-k2, 0.0)).collect()
    }

    /// Symbol of `d/dx_axis`, `i k_axis`, with the Nyquist mode zeroed.
    pub fn derivative_symbol(&self, axis: usize) -> Vec<C64> {
        let n = self.spec.n[axis];
        let nyquist = self.wavenumbers[axis][n / 2];
        self.mode_map(|k| if k[axis] == nyquist { 0.0 } else { k[axis] })
            .into_iter()
            .map(|k| C64::new(0.0, k))
            .collect()
    }

    /// True for modes with `|k_j| > 2/3 k_max` on some axis.
    pub fn high_band_mask(&self) -> Vec<bool> {
        let cutoffs: Vec<f64> = self
            .wavenumbers
            .iter()
            .map(|k| (2.0 / 3.0) * k.iter().fold(0.0_f64, |m, k| m.max(k.abs())))
            .collect();
        let mut mask = Vec::with_capacity(self.len());
        let mut k = vec![0.0; self.dim()];
        for idx in 0..self.len() {
            self.mode(idx, &mut k);
            mask.push(k.iter().zip(&cutoffs).any(|(k, c)| k.abs() > *c));
        }
        mask
    }

    fn mode(&self, idx: usize, out: &mut [f64]) {
        point_into(&self.wavenumbers, &self.spec.n, idx, out);
    }

    fn mode_map(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        let mut k = vec![0.0; self.dim()];
        (0..self.len())
            .map(|idx| {
                self.mode(idx, &mut k);
                f(&k)
            })
            .collect()
    }
}

fn point_into(axes: &[Vec<f64>], n: &[usize], idx: usize, out: &mut [f64]) {
    match n {
        [_] => out[0] = axes[0][idx],
        [_, cols] => {
            out[0] = axes[0][idx / cols];
            out[1] = axes[1][idx % cols];
        }
        _ => unreachable!(),
    }
}
