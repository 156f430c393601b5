//! Special functions: `arg Γ(iκ)`, the Airy function, and Ablowitz–Segur
//! solutions of Painlevé II.

mod airy;
mod gamma;
mod painleve;

pub use airy::{airy_ai, airy_ai_pair, airy_ai_prime};
pub use gamma::{arg_gamma_i_kappa, ln_gamma};
pub use painleve::{
    painleve2_solve, painleve2_solve_with, painleve_eval, PainleveIntegrator, PainleveOptions,
    PainleveSolution, PainleveWindow,
};
