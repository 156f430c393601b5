//! Shared fixtures for the benchmarks.

use mkdv_core::{Potential, SpatialGrid};

/// `amplitude·sech(x)` on the closed grid `[−40, 40]` with `nodes` points.
pub fn sech_on_line(amplitude: f64, nodes: usize) -> Potential {
    let grid = SpatialGrid::closed(-40.0, 40.0, nodes).expect("grid");
    Potential::from_fn(grid, |x| amplitude / x.cosh()).expect("potential")
}

/// `amplitude·sech(x)` on a centred periodic box.
pub fn sech_periodic(amplitude: f64, length: f64, n: usize) -> Potential {
    let grid = SpatialGrid::periodic_centered(length, n).expect("grid");
    Potential::from_fn(grid, |x| amplitude / x.cosh()).expect("potential")
}
