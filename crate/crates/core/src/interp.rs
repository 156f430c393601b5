//! Cubic interpolation on uniform grids.

use std::ops::{Add, Mul};

/// Four-point Lagrange interpolation of uniformly spaced samples.
///
/// `pos` is the fractional node index. Interior cells use the stencil
/// `k-1..=k+2`; the first and last cells shift the stencil inward so the
/// interpolant stays cubic up to the boundary. Exact at nodes.
pub(crate) fn lagrange4<T>(values: &[T], pos: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = values.len();
    debug_assert!(n >= 4, "cubic interpolation needs four samples");
    let last = (n - 1) as f64;
    let pos = pos.clamp(0.0, last);
    let k = pos.floor() as usize;
    if pos == k as f64 {
        return values[k];
    }
    let start = k.saturating_sub(1).min(n - 4);
    let u = pos - start as f64;
    // Lagrange basis on nodes 0, 1, 2, 3 evaluated at u.
    let w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    let w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    let w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    let w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    values[start] * w0 + values[start + 1] * w1 + values[start + 2] * w2 + values[start + 3] * w3
}

/// Cubic Hermite interpolation from values and first derivatives at the
/// two ends of a cell of width `h`; `u ∈ [0, 1]` is the cell coordinate.
pub(crate) fn hermite(y0: f64, d0: f64, y1: f64, d1: f64, h: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Derivative of [`hermite`] with respect to the physical coordinate.
pub(crate) fn hermite_derivative(y0: f64, d0: f64, y1: f64, d1: f64, h: f64, u: f64) -> f64 {
    let u2 = u * u;
    let dh00 = 6.0 * u2 - 6.0 * u;
    let dh10 = 3.0 * u2 - 4.0 * u + 1.0;
    let dh01 = -6.0 * u2 + 6.0 * u;
    let dh11 = 3.0 * u2 - 2.0 * u;
    (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1
}
