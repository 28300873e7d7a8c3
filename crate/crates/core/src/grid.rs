//! Multi-dimensional FFTs on row-major uniform grids.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Smallest 5-smooth integer strictly greater than `bound`.
pub fn smooth_size_above(bound: usize) -> usize {
    let mut n = bound + 1;
    loop {
        let mut m = n;
        for p in [2, 3, 5] {
            while m % p == 0 {
                m /= p;
            }
        }
        if m == 1 {
            return n;
        }
        n += 1;
    }
}

/// Smallest power of two strictly greater than `bound`.
pub fn pow2_above(bound: usize) -> usize {
    (bound + 1).next_power_of_two()
}

/// Index of frequency `n` on a periodic axis of length `g`.
#[inline]
pub fn wrap_index(n: i64, g: usize) -> usize {
    n.rem_euclid(g as i64) as usize
}

/// Planned forward/inverse transforms for a fixed grid shape.
///
/// The inverse transform is unnormalised, so scattering Fourier coefficients
/// and calling [`GridFft::inverse`] evaluates `Σ c_n e^{2πi n·m/G}`.
pub struct GridFft {
    dims: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl GridFft {
    pub fn new(dims: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward = dims.iter().map(|&g| planner.plan_fft_forward(g)).collect();
        let inverse = dims.iter().map(|&g| planner.plan_fft_inverse(g)).collect();
        Self {
            dims: dims.to_vec(),
            forward,
            inverse,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat row-major index of a wrapped multi-index.
    #[inline]
    pub fn flat_index(&self, coords: &[i64]) -> usize {
        let mut idx = 0;
        for (&c, &g) in coords.iter().zip(&self.dims) {
            idx = idx * g + wrap_index(c, g);
        }
        idx
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.apply(data, &self.inverse);
    }

    /// Forward transform scaled by `1/len`, giving Fourier coefficients.
    pub fn forward_normalized(&self, data: &mut [Complex64]) {
        self.apply(data, &self.forward);
        let s = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    fn apply(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        assert_eq!(data.len(), self.len());
        let d = self.dims.len();
        for axis in 0..d {
            let g = self.dims[axis];
            if g == 1 {
                continue;
            }
            let inner: usize = self.dims[axis + 1..].iter().product();
            let outer: usize = self.dims[..axis].iter().product();
            let plan = &plans[axis];
            if inner == 1 {
                plan.process(data);
                continue;
            }
            let mut line = vec![Complex64::new(0.0, 0.0); g];
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            for o in 0..outer {
                let base = o * g * inner;
                for i in 0..inner {
                    for (k, z) in line.iter_mut().enumerate() {
                        *z = data[base + k * inner + i];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (k, z) in line.iter().enumerate() {
                        data[base + k * inner + i] = *z;
                    }
                }
            }
        }
    }
}
