//! Complex log-Gamma (Lanczos, g = 7, nine terms).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` on the branch continuous off the negative real axis.
///
/// Arguments with `Re z < 1/2` are shifted up with `Γ(z) = Γ(z+n) / z(z+1)…(z+n−1)`,
/// which keeps the imaginary part continuous in `Im z ≠ 0`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let shift = (0.5 - z.re).ceil() as usize;
        let mut correction = Complex64::new(0.0, 0.0);
        for k in 0..shift {
            correction += (z + k as f64).ln();
        }
        return ln_gamma(z + shift as f64) - correction;
    }
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// `arg Γ(iκ)` for `κ > 0`, continuous in `κ`.
///
/// Uses `Γ(iκ) = Γ(1+iκ)/(iκ)`, so the value tends to `−π/2` as `κ → 0⁺`.
/// For the moderate `κ` met in practice this is also the principal value.
pub fn arg_gamma_i_kappa(kappa: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "arg Γ(iκ) needs κ > 0, got {kappa}"
        )));
    }
    Ok(ln_gamma(Complex64::new(1.0, kappa)).im - 0.5 * PI)
}
