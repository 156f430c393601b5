//! Direct scattering transform: real potential `u0` to the transition
//! matrix `T(z)` and the reflection coefficient `r(z)` on a real grid.

mod jost;
pub(crate) mod mat2;
mod potential;
mod table;

pub use jost::{jost_solve, jost_solve_with, JostOptions, JostScheme, TransitionMatrix};
pub use potential::{Potential, DEFAULT_TAIL_RELATIVE};
pub use table::{reflection_coefficient, reflection_coefficient_with, ReflectionTable};
