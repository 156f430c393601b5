use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::SpatialGrid;

/// FFT plans, wavenumbers and scratch space for one periodic grid.
pub(crate) struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    pub wavenumbers: Vec<f64>,
}

impl Spectral {
    pub fn new(grid: &SpatialGrid) -> Self {
        let n = grid.len();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            n,
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
            wavenumbers: grid.wavenumbers(),
        }
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    /// Inverse transform in place, normalized by `1/n`.
    pub fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    pub fn to_spectrum(&mut self, field: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = field.iter().map(|&u| Complex64::new(u, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    /// Returns the real part and the largest imaginary residue.
    pub fn to_field(&mut self, spectrum: &[Complex64]) -> (Vec<f64>, f64) {
        let mut buf = spectrum.to_vec();
        self.inverse(&mut buf);
        let residue = buf.iter().fold(0.0_f64, |m, v| m.max(v.im.abs()));
        (buf.iter().map(|v| v.re).collect(), residue)
    }

    /// Spectral derivative of a real field.
    pub fn derivative(&mut self, field: &[f64]) -> Vec<f64> {
        let mut spec = self.to_spectrum(field);
        for (v, &k) in spec.iter_mut().zip(&self.wavenumbers) {
            *v *= Complex64::new(0.0, k);
        }
        self.to_field(&spec).0
    }

    /// Mask keeping modes with `|index| < fraction·n/2`.
    pub fn dealias_mask(&self, fraction: f64) -> Vec<bool> {
        let n = self.n;
        let cutoff = fraction * (n / 2) as f64;
        (0..n)
            .map(|j| {
                let index = if 2 * j <= n { j } else { n - j };
                (index as f64) < cutoff && 2 * j != n
            })
            .collect()
    }
}
