//! Exponential time differencing RK4 (Cox–Matthews) for the diagonal
//! linear operator `iξ³` and the dealiased nonlinearity `2∂x(u³)`.

use num_complex::Complex64;

/// `[φ1(z), φ2(z), φ3(z)]`, `φ_k(z) = Σ_j z^j/(j+k)!`.
///
/// Below `|z| = 1` the Taylor series is summed directly; above it the
/// recursion `φ_{k+1} = (φ_k − 1/k!)/z` starts from `φ1 = expm1(z)/z`,
/// with `expm1` written so that `e^z − 1` never cancels.
pub(crate) fn phi_functions(z: Complex64) -> [Complex64; 3] {
    if z.norm() < 1.0 {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let k = k + 1;
            // 1/(j+k)! accumulated incrementally
            let mut denom = (1..=k).fold(1.0, |acc, i| acc * i as f64);
            let mut power = Complex64::new(1.0, 0.0);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..30 {
                if j > 0 {
                    power *= z;
                    denom *= (j + k) as f64;
                }
                sum += power / denom;
            }
            *slot = sum;
        }
        out
    } else {
        let phi1 = expm1(z) / z;
        let phi2 = (phi1 - 1.0) / z;
        let phi3 = (phi2 - 0.5) / z;
        [phi1, phi2, phi3]
    }
}

fn expm1(z: Complex64) -> Complex64 {
    let half_sin = (0.5 * z.im).sin();
    let re = z.re.exp_m1() * z.im.cos() - 2.0 * half_sin * half_sin;
    let im = z.re.exp() * z.im.sin();
    Complex64::new(re, im)
}

/// Per-mode coefficients for one step size `h`.
pub(crate) struct EtdCoefficients {
    pub e: Vec<Complex64>,
    pub e_half: Vec<Complex64>,
    pub q: Vec<Complex64>,
    pub f1: Vec<Complex64>,
    pub f2: Vec<Complex64>,
    pub f3: Vec<Complex64>,
}

impl EtdCoefficients {
    /// `linear[j]` is the symbol of the linear operator on mode `j`.
    pub fn new(linear: &[Complex64], h: f64) -> Self {
        let n = linear.len();
        let mut c = Self {
            e: Vec::with_capacity(n),
            e_half: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &l in linear {
            let z = l * h;
            let [p1, p2, p3] = phi_functions(z);
            let [half1, _, _] = phi_functions(0.5 * z);
            c.e.push(z.exp());
            c.e_half.push((0.5 * z).exp());
            c.q.push(0.5 * h * half1);
            c.f1.push(h * (p1 - 3.0 * p2 + 4.0 * p3));
            c.f2.push(h * (p2 - 2.0 * p3));
            c.f3.push(h * (-p2 + 4.0 * p3));
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(z: Complex64) -> [Complex64; 3] {
        let e = z.exp();
        [
            (e - 1.0) / z,
            (e - 1.0 - z) / (z * z),
            (e - 1.0 - z - 0.5 * z * z) / (z * z * z),
        ]
    }

    #[test]
    fn series_and_recursion_agree_near_switch() {
        for z in [
            Complex64::new(0.0, 0.999),
            Complex64::new(0.0, 1.001),
            Complex64::new(0.3, -0.95),
        ] {
            let got = phi_functions(z);
            let want = direct(z);
            for k in 0..3 {
                assert!((got[k] - want[k]).norm() < 1e-13, "φ{} at {z}", k + 1);
            }
        }
    }

    #[test]
    fn small_arguments_have_no_cancellation() {
        let z = Complex64::new(0.0, 1e-9);
        let [p1, p2, p3] = phi_functions(z);
        assert!((p1 - 1.0).norm() < 1e-9);
        assert!((p2 - 0.5).norm() < 1e-9);
        assert!((p3 - 1.0 / 6.0).norm() < 1e-9);
        let zero = phi_functions(Complex64::new(0.0, 0.0));
        assert_eq!(zero[0], Complex64::new(1.0, 0.0));
        assert_eq!(zero[1], Complex64::new(0.5, 0.0));
    }

    #[test]
    fn large_imaginary_arguments() {
        for y in [3.0, 50.0, 1e4, -2e6] {
            let z = Complex64::new(0.0, y);
            let got = phi_functions(z);
            let want = direct(z);
            for k in 0..3 {
                assert!((got[k] - want[k]).norm() <= 1e-12 * want[k].norm().max(1e-300) + 1e-15);
            }
        }
    }
}
