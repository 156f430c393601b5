use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Mat2(pub [[Complex64; 2]; 2]);

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Mat2([[a, ZERO], [ZERO, d]])
    }

    pub fn scale(self, s: Complex64) -> Self {
        let m = self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    #[cfg(test)]
    pub fn det(&self) -> Complex64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Inverse of a unimodular matrix.
    pub fn adjugate(&self) -> Self {
        let m = self.0;
        Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }

    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.norm()))
    }

    /// `exp(Ω)` for traceless `Ω`, from `Ω² = λ²·I`:
    /// `exp(Ω) = cosh(λ)·I + sinh(λ)/λ·Ω`.
    pub fn exp_traceless(self) -> Self {
        let m = self.0;
        let lambda2 = m[0][0] * m[0][0] + m[0][1] * m[1][0];
        let (c, s) = if lambda2.norm() < 1e-8 {
            // Both factors are even in λ; truncated series in λ².
            let l4 = lambda2 * lambda2;
            (
                ONE + lambda2 / 2.0 + l4 / 24.0,
                ONE + lambda2 / 6.0 + l4 / 120.0,
            )
        } else {
            let lambda = lambda2.sqrt();
            (lambda.cosh(), lambda.sinh() / lambda)
        };
        Mat2::IDENTITY.scale(c) + self.scale(s)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        self.scale(Complex64::new(s, 0.0))
    }
}
