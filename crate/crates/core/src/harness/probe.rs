//! Pointwise diagnostics of a field sampled through a closure.

const BISECTION_STEPS: usize = 80;

/// Largest `|f|` over `samples` equispaced points of `[center − half, center + half]`.
pub fn window_sup(f: impl Fn(f64) -> f64, center: f64, half: f64, samples: usize) -> f64 {
    let samples = samples.max(2);
    let step = 2.0 * half / (samples - 1) as f64;
    (0..samples)
        .map(|k| f(center - half + k as f64 * step).abs())
        .fold(0.0, f64::max)
}

/// Sign changes of `f` on `samples` equispaced cells of `[a, b]`, each
/// refined by bisection. Exact zeros at sample points are reported as is.
pub fn zero_crossings(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let samples = samples.max(1);
    let step = (b - a) / samples as f64;
    let mut out = Vec::new();
    let mut left = a;
    let mut f_left = f(a);
    if f_left == 0.0 {
        out.push(a);
    }
    for k in 1..=samples {
        let right = a + k as f64 * step;
        let f_right = f(right);
        if f_right == 0.0 {
            out.push(right);
        } else if f_left * f_right < 0.0 {
            out.push(bisect(&f, left, right, f_left));
        }
        left = right;
        f_left = f_right;
    }
    out
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

/// Distance from `x` to the closest entry of `candidates`.
pub fn nearest_distance(x: f64, candidates: &[f64]) -> Option<f64> {
    candidates
        .iter()
        .map(|c| (c - x).abs())
        .min_by(f64::total_cmp)
}
