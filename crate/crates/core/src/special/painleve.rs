//! Ablowitz–Segur solutions of Painlevé II, `P'' = sP + 2P³`, fixed by
//! `P(s) ~ ρ·Ai(s)` as `s → +∞`, tabulated on a uniform grid.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::airy::airy_ai_pair;
use crate::error::{Error, Result};
use crate::interp::{hermite, hermite_derivative};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PainleveIntegrator {
    /// Dormand–Prince 5(4) with local error control, steps capped at `ds`.
    #[default]
    DormandPrince,
    /// Classical RK4 with a fixed number of substeps per grid cell.
    Rk4 { substeps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PainleveOptions {
    pub integrator: PainleveIntegrator,
    /// Mixed absolute/relative local error tolerance for the adaptive integrator.
    pub tolerance: f64,
    /// Integration stops with [`Error::BlowUp`] once `|P|` exceeds this.
    /// Ablowitz–Segur solutions with `|ρ| < 1` stay far below the default.
    pub blow_up_guard: f64,
}

impl Default for PainleveOptions {
    fn default() -> Self {
        Self {
            integrator: PainleveIntegrator::DormandPrince,
            tolerance: 1e-13,
            blow_up_guard: 100.0,
        }
    }
}

/// Tabulation window and spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PainleveWindow {
    pub s_min: f64,
    pub s_max: f64,
    pub ds: f64,
}

impl Default for PainleveWindow {
    fn default() -> Self {
        Self {
            s_min: -12.0,
            s_max: 8.0,
            ds: 1e-3,
        }
    }
}

impl PainleveWindow {
    pub fn solve(&self, rho: f64) -> Result<PainleveSolution> {
        painleve2_solve(rho, self.s_min, self.s_max, self.ds)
    }
}

/// `P` and `P'` on `s_k = s_min + k·ds`, `k = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PainleveSolution {
    rho: f64,
    s_min: f64,
    ds: f64,
    p: Vec<f64>,
    p_prime: Vec<f64>,
}

pub fn painleve2_solve(rho: f64, s_min: f64, s_max: f64, ds: f64) -> Result<PainleveSolution> {
    painleve2_solve_with(rho, s_min, s_max, ds, &PainleveOptions::default())
}

pub fn painleve2_solve_with(
    rho: f64,
    s_min: f64,
    s_max: f64,
    ds: f64,
    opts: &PainleveOptions,
) -> Result<PainleveSolution> {
    if !(rho.is_finite() && rho.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Ablowitz–Segur datum must satisfy |ρ| < 1, got {rho}"
        )));
    }
    if !(s_max >= 8.0 && s_min <= -10.0 && s_max.is_finite() && s_min.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Painlevé window must contain [−10, 8], got [{s_min}, {s_max}]"
        )));
    }
    if !(ds.is_finite() && ds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {ds}"
        )));
    }
    let cells = ((s_max - s_min) / ds).round().max(1.0) as usize;
    let ds = (s_max - s_min) / cells as f64;
    let n = cells + 1;

    let (ai, aip) = airy_ai_pair(s_max);
    let mut p = vec![0.0; n];
    let mut p_prime = vec![0.0; n];
    let mut state = [rho * ai, rho * aip];
    p[n - 1] = state[0];
    p_prime[n - 1] = state[1];

    let mut stepper = Stepper::new(opts, ds);
    for k in (0..cells).rev() {
        let s_from = s_min + (k + 1) as f64 * ds;
        let s_to = s_min + k as f64 * ds;
        state = stepper.advance(state, s_from, s_to)?;
        if !(state[0].abs() <= opts.blow_up_guard) {
            return Err(Error::BlowUp {
                at: s_to,
                magnitude: state[0].abs(),
            });
        }
        p[k] = state[0];
        p_prime[k] = state[1];
    }
    Ok(PainleveSolution {
        rho,
        s_min,
        ds,
        p,
        p_prime,
    })
}

fn rhs(s: f64, y: [f64; 2]) -> [f64; 2] {
    [y[1], s * y[0] + 2.0 * y[0] * y[0] * y[0]]
}

fn axpy(y: [f64; 2], h: f64, terms: &[(f64, [f64; 2])]) -> [f64; 2] {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

struct Stepper {
    integrator: PainleveIntegrator,
    tolerance: f64,
    /// Magnitude of the last accepted adaptive step.
    h: f64,
    max_h: f64,
}

impl Stepper {
    fn new(opts: &PainleveOptions, ds: f64) -> Self {
        Self {
            integrator: opts.integrator,
            tolerance: opts.tolerance,
            h: ds,
            max_h: ds,
        }
    }

    fn advance(&mut self, y: [f64; 2], from: f64, to: f64) -> Result<[f64; 2]> {
        match self.integrator {
            PainleveIntegrator::Rk4 { substeps } => {
                let substeps = substeps.max(1);
                let h = (to - from) / substeps as f64;
                let mut y = y;
                for j in 0..substeps {
                    let s = from + j as f64 * h;
                    let k1 = rhs(s, y);
                    let k2 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, &[(1.0, k1)]));
                    let k3 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, &[(1.0, k2)]));
                    let k4 = rhs(s + h, axpy(y, h, &[(1.0, k3)]));
                    y = axpy(y, h / 6.0, &[(1.0, k1), (2.0, k2), (2.0, k3), (1.0, k4)]);
                }
                Ok(y)
            }
            PainleveIntegrator::DormandPrince => self.dormand_prince(y, from, to),
        }
    }

    fn dormand_prince(&mut self, mut y: [f64; 2], from: f64, to: f64) -> Result<[f64; 2]> {
        let direction = (to - from).signum();
        let mut s = from;
        let mut rejections = 0;
        while (to - s) * direction > 0.0 {
            let remaining = (to - s).abs();
            let h_abs = self.h.min(self.max_h);
            let last = h_abs >= remaining * (1.0 - 1e-12);
            let h = direction * if last { remaining } else { h_abs };
            let (y_new, err) = dp45_step(s, y, h);
            let scale = |i: usize| self.tolerance * (1.0 + y[i].abs().max(y_new[i].abs()));
            let ratio = (err[0] / scale(0)).abs().max((err[1] / scale(1)).abs());
            if ratio <= 1.0 {
                s = if last { to } else { s + h };
                y = y_new;
                rejections = 0;
                let grow = if ratio == 0.0 {
                    5.0
                } else {
                    (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
                };
                self.h = (h.abs() * grow).min(self.max_h);
            } else {
                rejections += 1;
                if rejections > 60 || h.abs() < 1e-14 * (1.0 + s.abs()) {
                    return Err(Error::NonConvergence(format!(
                        "Painlevé step control stalled at s = {s} (step {h:e})"
                    )));
                }
                self.h = h.abs() * (0.9 * ratio.powf(-0.25)).clamp(0.1, 0.9);
            }
        }
        Ok(y)
    }
}

/// One Dormand–Prince step: fifth-order solution and embedded error.
fn dp45_step(s: f64, y: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
    const C2: f64 = 1.0 / 5.0;
    const C3: f64 = 3.0 / 10.0;
    const C4: f64 = 4.0 / 5.0;
    const C5: f64 = 8.0 / 9.0;
    let k1 = rhs(s, y);
    let k2 = rhs(s + C2 * h, axpy(y, h, &[(1.0 / 5.0, k1)]));
    let k3 = rhs(
        s + C3 * h,
        axpy(y, h, &[(3.0 / 40.0, k1), (9.0 / 40.0, k2)]),
    );
    let k4 = rhs(
        s + C4 * h,
        axpy(
            y,
            h,
            &[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)],
        ),
    );
    let k5 = rhs(
        s + C5 * h,
        axpy(
            y,
            h,
            &[
                (19372.0 / 6561.0, k1),
                (-25360.0 / 2187.0, k2),
                (64448.0 / 6561.0, k3),
                (-212.0 / 729.0, k4),
            ],
        ),
    );
    let k6 = rhs(
        s + h,
        axpy(
            y,
            h,
            &[
                (9017.0 / 3168.0, k1),
                (-355.0 / 33.0, k2),
                (46732.0 / 5247.0, k3),
                (49.0 / 176.0, k4),
                (-5103.0 / 18656.0, k5),
            ],
        ),
    );
    let b = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ];
    let y5 = axpy(
        y,
        h,
        &[(b[0], k1), (b[2], k3), (b[3], k4), (b[4], k5), (b[5], k6)],
    );
    let k7 = rhs(s + h, y5);
    // difference between fifth- and fourth-order weights
    let e = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let err = axpy(
        [0.0, 0.0],
        h,
        &[
            (e[0], k1),
            (e[2], k3),
            (e[3], k4),
            (e[4], k5),
            (e[5], k6),
            (e[6], k7),
        ],
    );
    (y5, err)
}

impl PainleveSolution {
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s(self.p.len() - 1)
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn s(&self, k: usize) -> f64 {
        self.s_min + k as f64 * self.ds
    }

    pub fn p_values(&self) -> &[f64] {
        &self.p
    }

    pub fn p_prime_values(&self) -> &[f64] {
        &self.p_prime
    }

    fn locate(&self, s: f64) -> Result<(usize, f64)> {
        let (lo, hi) = (self.s_min, self.s_max());
        if !(s >= lo && s <= hi) {
            return Err(Error::OutOfRange {
                what: "s",
                value: s,
                min: lo,
                max: hi,
            });
        }
        let pos = (s - self.s_min) / self.ds;
        let k = (pos.floor() as usize).min(self.p.len() - 2);
        Ok((k, pos - k as f64))
    }

    /// `P(s)` by cubic Hermite interpolation; exact at nodes.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let (k, u) = self.locate(s)?;
        if u == 0.0 {
            return Ok(self.p[k]);
        }
        Ok(hermite(
            self.p[k],
            self.p_prime[k],
            self.p[k + 1],
            self.p_prime[k + 1],
            self.ds,
            u,
        ))
    }

    /// `P'(s)` from the same interpolant.
    pub fn eval_prime(&self, s: f64) -> Result<f64> {
        let (k, u) = self.locate(s)?;
        if u == 0.0 {
            return Ok(self.p_prime[k]);
        }
        Ok(hermite_derivative(
            self.p[k],
            self.p_prime[k],
            self.p[k + 1],
            self.p_prime[k + 1],
            self.ds,
            u,
        ))
    }

    /// Largest `|P'' − sP − 2P³|` over interior nodes, with `P''` from a
    /// fourth-order central difference of the stored `P'`.
    pub fn max_residual(&self) -> f64 {
        let d = &self.p_prime;
        (2..self.p.len().saturating_sub(2))
            .map(|k| {
                let second =
                    (-d[k + 2] + 8.0 * d[k + 1] - 8.0 * d[k - 1] + d[k - 2]) / (12.0 * self.ds);
                let p = self.p[k];
                (second - self.s(k) * p - 2.0 * p * p * p).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.p.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("s,P,P_prime\n");
        for k in 0..self.p.len() {
            let _ = writeln!(out, "{},{},{}", self.s(k), self.p[k], self.p_prime[k]);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Free-function form of [`PainleveSolution::eval`].
pub fn painleve_eval(sol: &PainleveSolution, s: f64) -> Result<f64> {
    sol.eval(s)
}
