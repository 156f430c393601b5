//! Uniform one-dimensional spatial grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `x_k = x_min + k·dx`, `k = 0..n`.
///
/// A periodic grid represents the circle of length `n·dx`; its node count
/// must be a power of two so the spectral transforms apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    x_min: f64,
    dx: f64,
    n: usize,
    periodic: bool,
}

impl SpatialGrid {
    pub fn new(x_min: f64, dx: f64, n: usize, periodic: bool) -> Result<Self> {
        if !x_min.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid origin {x_min} is not finite"
            )));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid spacing must be positive, got {dx}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidArgument(
                "grid needs at least one node".into(),
            ));
        }
        if periodic && !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "periodic grid size must be a power of two, got {n}"
            )));
        }
        Ok(Self {
            x_min,
            dx,
            n,
            periodic,
        })
    }

    /// Periodic grid on `[-length/2, length/2)`.
    pub fn periodic_centered(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "domain length must be positive, got {length}"
            )));
        }
        Self::new(-0.5 * length, length / n as f64, n, true)
    }

    /// Non-periodic grid with `n` nodes spanning `[a, b]` inclusive.
    pub fn closed(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(Error::InvalidArgument(format!(
                "closed grid needs b > a and n >= 2, got [{a}, {b}] with n = {n}"
            )));
        }
        Self::new(a, (b - a) / (n - 1) as f64, n, false)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Domain length `n·dx`.
    pub fn length(&self) -> f64 {
        self.n as f64 * self.dx
    }

    /// Last node.
    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.x(k))
    }

    /// Sample `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().map(f).collect()
    }

    /// Angular wavenumbers in FFT order. The Nyquist entry is reported as
    /// zero: odd operators must map real fields to real fields.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n;
        let base = 2.0 * std::f64::consts::PI / self.length();
        (0..n)
            .map(|k| {
                if 2 * k < n {
                    base * k as f64
                } else if 2 * k == n {
                    0.0
                } else {
                    base * (k as f64 - n as f64)
                }
            })
            .collect()
    }

    /// Index of the node closest to `x`, if `x` lies on the grid span.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let k = ((x - self.x_min) / self.dx).round();
        (k >= 0.0 && (k as usize) < self.n).then_some(k as usize)
    }
}
