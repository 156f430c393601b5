//! Airy function `Ai` and its derivative on the real line.
//!
//! * `s <= 2.5`, down to `s = −12`: Maclaurin series summed in double-double
//!   arithmetic. The terms grow to ~`e^{(2/3)|s|^{3/2}}` before the sum
//!   settles, so plain `f64` loses ~9 digits at `s = −10`.
//! * `s > 2.5`: `Ai(s) = √(s/3)·K_{1/3}(ζ)/π`, `ζ = (2/3)s^{3/2}`, with the
//!   modified Bessel function from Steed's continued fraction.
//! * `s < −12`: oscillatory asymptotic expansion in `1/ζ`.

use std::f64::consts::PI;

/// `Ai(0)` and `−Ai'(0)` as double-double pairs.
const AI0: Dd = Dd(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const MINUS_AI0_PRIME: Dd = Dd(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

const SERIES_UPPER: f64 = 2.5;
const SERIES_LOWER: f64 = -12.0;

pub fn airy_ai(s: f64) -> f64 {
    airy_ai_pair(s).0
}

pub fn airy_ai_prime(s: f64) -> f64 {
    airy_ai_pair(s).1
}

/// `(Ai(s), Ai'(s))`.
pub fn airy_ai_pair(s: f64) -> (f64, f64) {
    if s.is_nan() {
        (f64::NAN, f64::NAN)
    } else if s > SERIES_UPPER {
        bessel_branch(s)
    } else if s >= SERIES_LOWER {
        maclaurin(s)
    } else if s.is_finite() {
        oscillatory_asymptotic(-s)
    } else {
        (0.0, 0.0)
    }
}

fn maclaurin(s: f64) -> (f64, f64) {
    let s2 = Dd::from(s * s);
    let s3 = s2 * s;
    let s = Dd::from(s);

    // f = Σ f_k, f_{k+1} = f_k s³/((3k+2)(3k+3)); f' = Σ f_k s²/(3k+2)
    // g = Σ g_k, g_{k+1} = g_k s³/((3k+3)(3k+4)), g_0 = s
    // g' = Σ h_k, h_{k+1} = h_k s³/((3k+1)(3k+3)), h_0 = 1
    let mut f_term = Dd::from(1.0);
    let mut g_term = s;
    let mut h_term = Dd::from(1.0);
    let (mut f, mut fp, mut g, mut gp) = (Dd::ZERO, Dd::ZERO, Dd::ZERO, Dd::ZERO);
    for k in 0..200u32 {
        let k3 = 3.0 * f64::from(k);
        f = f + f_term;
        fp = fp + (f_term * s2) / (k3 + 2.0);
        g = g + g_term;
        gp = gp + h_term;
        let small = |t: Dd, acc: Dd| t.0.abs() <= 1e-34 * acc.0.abs().max(1.0);
        if k > 2 && small(f_term, f) && small(g_term, g) && small(h_term, gp) {
            break;
        }
        f_term = f_term * s3 / ((k3 + 2.0) * (k3 + 3.0));
        g_term = g_term * s3 / ((k3 + 3.0) * (k3 + 4.0));
        h_term = h_term * s3 / ((k3 + 1.0) * (k3 + 3.0));
    }
    let ai = AI0 * f - MINUS_AI0_PRIME * g;
    let aip = AI0 * fp - MINUS_AI0_PRIME * gp;
    (ai.to_f64(), aip.to_f64())
}

fn bessel_branch(s: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * s * s.sqrt();
    let (k13, k43) = bessel_k_steed(1.0 / 3.0, zeta);
    // K_{2/3} = K_{−2/3} = K_{4/3} − (2/(3ζ))·K_{1/3}
    let k23 = k43 - 2.0 / (3.0 * zeta) * k13;
    let ai = (s / 3.0).sqrt() * k13 / PI;
    let aip = -s / (PI * 3.0_f64.sqrt()) * k23;
    (ai, aip)
}

/// `(K_μ(x), K_{μ+1}(x))` for `|μ| <= 1/2`, `x >= 2`, by Steed's method
/// on the continued fraction CF2 (Temme's normalization sum).
fn bessel_k_steed(mu: f64, x: f64) -> (f64, f64) {
    debug_assert!(x >= 2.0 && mu.abs() <= 0.5);
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut sum = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = f64::from(i);
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        sum += dels;
        if (dels / sum).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() * (-x).exp() / sum;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    (k_mu, k_mu1)
}

/// Expansion of `Ai(−x)`, `Ai'(−x)` for large `x`.
fn oscillatory_asymptotic(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    // u_k = u_{k−1}(6k−5)(6k−3)(6k−1)/((2k−1)·216·k); v_k = −(6k+1)/(6k−1)·u_k
    let mut u = 1.0;
    let mut inv = 1.0;
    let (mut p, mut q, mut r, mut t) = (0.0, 0.0, 0.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 0..40u32 {
        let kf = f64::from(k);
        if k > 0 {
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            inv /= zeta;
        }
        let v = if k == 0 {
            1.0
        } else {
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u
        };
        let term = u * inv;
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
            r += sign * v * inv;
        } else {
            q += sign * term;
            t += sign * v * inv;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let phase = zeta - 0.25 * PI;
    let (sn, cs) = phase.sin_cos();
    let quarter = x.powf(0.25);
    let norm = PI.sqrt();
    let ai = (cs * p + sn * q) / (norm * quarter);
    let aip = quarter * (sn * r - cs * t) / norm;
    (ai, aip)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd(f64, f64);

impl Dd {
    const ZERO: Dd = Dd(0.0, 0.0);

    fn to_f64(self) -> f64 {
        self.0 + self.1
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd(v, 0.0)
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.0, o.0);
        let (t, f) = two_sum(self.1, o.1);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd(hi, lo)
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd(-o.0, -o.1)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        let (hi, lo) = quick_two_sum(p, e + (self.0 * o.1 + self.1 * o.0));
        Dd(hi, lo)
    }
}

impl std::ops::Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, o: f64) -> Dd {
        self * Dd::from(o)
    }
}

impl std::ops::Div<f64> for Dd {
    type Output = Dd;
    fn div(self, d: f64) -> Dd {
        let q1 = self.0 / d;
        let r = self - Dd::from(q1) * d;
        let q2 = r.0 / d;
        let r = r - Dd::from(q2) * d;
        let q3 = r.0 / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd(hi, 0.0) + Dd(lo, 0.0) + Dd(q3, 0.0)
    }
}
