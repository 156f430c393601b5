use crate::error::{Error, Result};
use crate::grid::SpatialGrid;

/// Relative truncation level used when no explicit tail threshold is given.
pub const DEFAULT_TAIL_RELATIVE: f64 = 1e-12;

/// Real initial profile `u0` sampled on a grid; zero outside the grid span.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: SpatialGrid,
    values: Vec<f64>,
    tail_epsilon: f64,
}

impl Potential {
    pub fn new(grid: SpatialGrid, values: Vec<f64>, tail_epsilon: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "potential has {} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "potential sample {k} at x = {} is not finite",
                grid.x(k)
            )));
        }
        if !(tail_epsilon.is_finite() && tail_epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tail epsilon must be positive, got {tail_epsilon}"
            )));
        }
        Ok(Self {
            grid,
            values,
            tail_epsilon,
        })
    }

    /// Samples with the default tail threshold `1e-12·‖u0‖∞`.
    pub fn from_samples(grid: SpatialGrid, values: Vec<f64>) -> Result<Self> {
        let sup = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let eps = if sup > 0.0 {
            DEFAULT_TAIL_RELATIVE * sup
        } else {
            f64::MIN_POSITIVE
        };
        Self::new(grid, values, eps)
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_samples(grid, grid.sample(f))
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_epsilon(&self) -> f64 {
        self.tail_epsilon
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index range `[first, last]` of samples with `|u0| >= tail_epsilon`,
    /// or `None` when the whole profile is below the threshold.
    pub fn support_indices(&self) -> Option<(usize, usize)> {
        let eps = self.tail_epsilon;
        let first = self.values.iter().position(|v| v.abs() >= eps)?;
        let last = self.values.iter().rposition(|v| v.abs() >= eps)?;
        Some((first, last))
    }

    /// Effective support `[x_L, x_R]`.
    pub fn effective_support(&self) -> Option<(f64, f64)> {
        self.support_indices()
            .map(|(a, b)| (self.grid.x(a), self.grid.x(b)))
    }

    /// Sample at signed node index; zero outside the grid.
    pub(crate) fn at(&self, k: isize) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.values.get(k as usize).copied().unwrap_or(0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_of_sech() {
        let grid = SpatialGrid::closed(-40.0, 40.0, 8001).unwrap();
        let u = Potential::from_fn(grid, |x| 0.3 / x.cosh()).unwrap();
        let (a, b) = u.effective_support().unwrap();
        // 0.3 sech(x) = 0.3e-12  <=>  |x| ≈ ln(2e12) ≈ 28.3
        assert!(
            (a + 28.3).abs() < 0.05 && (b - 28.3).abs() < 0.05,
            "{a} {b}"
        );
    }

    #[test]
    fn zero_profile_has_no_support() {
        let grid = SpatialGrid::closed(-1.0, 1.0, 11).unwrap();
        let u = Potential::from_samples(grid, vec![0.0; 11]).unwrap();
        assert!(u.support_indices().is_none());
    }

    #[test]
    fn rejects_bad_samples() {
        let grid = SpatialGrid::closed(-1.0, 1.0, 3).unwrap();
        assert!(Potential::from_samples(grid, vec![0.0; 2]).is_err());
        assert!(Potential::from_samples(grid, vec![0.0, f64::NAN, 0.0]).is_err());
        assert!(Potential::new(grid, vec![0.0; 3], 0.0).is_err());
    }
}
