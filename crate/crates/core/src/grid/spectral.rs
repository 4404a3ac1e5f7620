use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::C64;

/// Forward/inverse FFT plans for a 1D or 2D row-major grid.
///
/// Axis 0 is the slow index. The forward transform is unnormalized and the
/// inverse divides by the total point count, so `inverse(forward(f)) == f`.
#[derive(Clone)]
pub(crate) struct Spectral {
    shape: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl fmt::Debug for Spectral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Spectral").field("shape", &self.shape).finish()
    }
}

impl Spectral {
    pub(crate) fn new(shape: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward = shape.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        Self {
            shape: shape.to_vec(),
            forward,
            inverse,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub(crate) fn forward(&self, data: &mut [C64]) {
        self.transform(data, &self.forward);
    }

    pub(crate) fn inverse(&self, data: &mut [C64]) {
        self.transform(data, &self.inverse);
        let norm = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= norm);
    }

    fn transform(&self, data: &mut [C64], plans: &[Arc<dyn Fft<f64>>]) {
        debug_assert_eq!(data.len(), self.len());
        match self.shape.as_slice() {
            [_] => plans[0].process(data),
            [rows, cols] => {
                // contiguous axis first, then gather each column
                plans[1].process(data);
                let mut column = vec![C64::new(0.0, 0.0); *rows];
                let mut scratch = vec![C64::new(0.0, 0.0); plans[0].get_inplace_scratch_len()];
                for j in 0..*cols {
                    for (i, c) in column.iter_mut().enumerate() {
                        *c = data[i * cols + j];
                    }
                    plans[0].process_with_scratch(&mut column, &mut scratch);
                    for (i, c) in column.iter().enumerate() {
                        data[i * cols + j] = *c;
                    }
                }
            }
            _ => unreachable!("grid dimension is validated at construction"),
        }
    }
}
