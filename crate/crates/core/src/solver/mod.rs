//! Fourier spectral reference solver for `u_t = −u_xxx + 6u²u_x` on a
//! periodic domain.
//!
//! In Fourier space `û_t = iξ³û + 2iξ·F[u³]`. The stiff linear part is
//! integrated exactly; the cubic term is written in conservative form and
//! dealiased with a mode cutoff.

mod etdrk4;
mod spectral;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::scattering::Potential;
use etdrk4::EtdCoefficients;
use spectral::Spectral;

/// Fraction of the domain, on each side, watched for wrap-around.
pub const BOUNDARY_WINDOW: f64 = 0.05;
/// Boundary-window share of the L² mass that triggers a warning.
pub const WRAP_AROUND_THRESHOLD: f64 = 1e-6;
/// Growth of `‖u‖∞` over its initial value treated as blow-up.
const BLOW_UP_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeScheme {
    #[default]
    Etdrk4,
    StrangSplit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_final: f64,
    #[serde(default)]
    pub record_times: Vec<f64>,
    #[serde(default = "default_dealias")]
    pub dealias_fraction: f64,
    #[serde(default)]
    pub scheme: TimeScheme,
}

fn default_dealias() -> f64 {
    2.0 / 3.0
}

impl EvolutionConfig {
    /// ETDRK4 with 2/3 dealiasing.
    pub fn new(dt: f64, t_final: f64, record_times: Vec<f64>) -> Self {
        Self {
            dt,
            t_final,
            record_times,
            dealias_fraction: default_dealias(),
            scheme: TimeScheme::Etdrk4,
        }
    }

    pub fn with_scheme(mut self, scheme: TimeScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "dealias_fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            )));
        }
        let mut previous = f64::NEG_INFINITY;
        for &t in &self.record_times {
            if !(0.0..=self.t_final).contains(&t) {
                return Err(Error::OutOfRange {
                    what: "record time",
                    value: t,
                    min: 0.0,
                    max: self.t_final,
                });
            }
            if t <= previous {
                return Err(Error::InvalidArgument(
                    "record_times must be strictly increasing".into(),
                ));
            }
            previous = t;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservedQuantities {
    pub i1: f64,
    pub i2: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSnapshot {
    pub t: f64,
    pub grid: SpatialGrid,
    pub field: Vec<f64>,
    /// Largest imaginary part left by the inverse transform.
    pub imag_residue: f64,
    /// Share of `∫u²` sitting in the two boundary windows.
    pub boundary_fraction: f64,
}

impl EvolutionSnapshot {
    pub fn sup_norm(&self) -> f64 {
        self.field.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Value at an arbitrary point, by trigonometric interpolation.
    pub fn interpolant(&self) -> SpectralInterpolant {
        SpectralInterpolant::new(&self.grid, &self.field)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("x,u\n");
        for (x, u) in self.grid.nodes().zip(&self.field) {
            let _ = writeln!(out, "{x},{u}");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Trigonometric interpolant of a real periodic field.
pub struct SpectralInterpolant {
    x_min: f64,
    modes: Vec<(f64, Complex64)>,
    nyquist: Option<(f64, f64)>,
}

impl SpectralInterpolant {
    pub fn new(grid: &SpatialGrid, field: &[f64]) -> Self {
        let n = field.len();
        let mut spectral = Spectral::new(grid);
        let spec = spectral.to_spectrum(field);
        let base = 2.0 * std::f64::consts::PI / grid.length();
        let scale = 1.0 / n as f64;
        let mut modes = Vec::with_capacity(n);
        let mut nyquist = None;
        for (j, c) in spec.into_iter().enumerate() {
            if 2 * j == n {
                nyquist = Some((base * j as f64, c.re * scale));
                continue;
            }
            let k = if 2 * j < n {
                j as f64
            } else {
                j as f64 - n as f64
            };
            modes.push((base * k, c * scale));
        }
        Self {
            x_min: grid.x_min(),
            modes,
            nyquist,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let s = x - self.x_min;
        let mut sum = 0.0;
        for &(k, c) in &self.modes {
            let (sin, cos) = (k * s).sin_cos();
            sum += c.re * cos - c.im * sin;
        }
        if let Some((k, c)) = self.nyquist {
            sum += c * (k * s).cos();
        }
        sum
    }
}

/// One fixed-size run of the evolution, with its diagnostics.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub grid: SpatialGrid,
    pub config: EvolutionConfig,
    pub snapshots: Vec<EvolutionSnapshot>,
    pub conserved: Vec<(f64, ConservedQuantities)>,
    pub warnings: Vec<String>,
    /// `dt·ξ_max³` for the largest retained mode.
    pub stiffness: f64,
    pub steps: usize,
}

impl Evolution {
    pub fn snapshot_at(&self, t: f64) -> Option<&EvolutionSnapshot> {
        self.snapshots
            .iter()
            .find(|s| (s.t - t).abs() <= 1e-12 * t.abs().max(1.0))
    }

    /// Largest relative drift of `I₂` and `E` from their initial values.
    pub fn max_relative_drift(&self) -> (f64, f64) {
        let Some(&(_, first)) = self.conserved.first() else {
            return (0.0, 0.0);
        };
        let rel = |v: f64, v0: f64| {
            if v0 == 0.0 {
                v.abs()
            } else {
                (v - v0).abs() / v0.abs()
            }
        };
        self.conserved.iter().fold((0.0, 0.0), |(a, b), (_, q)| {
            (
                a.max(rel(q.i2, first.i2)),
                b.max(rel(q.energy, first.energy)),
            )
        })
    }

    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "grid": {
                "x_min": self.grid.x_min(),
                "dx": self.grid.dx(),
                "n": self.grid.len(),
                "length": self.grid.length(),
            },
            "config": self.config,
            "times": self.snapshots.iter().map(|s| s.t).collect::<Vec<_>>(),
            "conserved": self.conserved.iter().map(|(t, q)| serde_json::json!({
                "t": t, "i1": q.i1, "i2": q.i2, "energy": q.energy,
            })).collect::<Vec<_>>(),
            "boundary_fraction": self.snapshots.iter().map(|s| s.boundary_fraction).collect::<Vec<_>>(),
            "stiffness": self.stiffness,
            "steps": self.steps,
            "warnings": self.warnings,
        })
    }

    /// Writes `u_t<k>.csv` per snapshot plus `manifest.json`.
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (k, snap) in self.snapshots.iter().enumerate() {
            snap.write_csv(&dir.join(format!("u_t{k}.csv")))?;
        }
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&self.manifest()).expect("manifest serializes");
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }
}

fn require_periodic(grid: &SpatialGrid) -> Result<()> {
    if grid.is_periodic() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "spectral evolution needs a periodic grid".into(),
        ))
    }
}

/// Exact linear flow: every mode is multiplied by `e^{i·t_step·ξ³}`.
pub fn airy_propagator(grid: &SpatialGrid, field: &[f64], t_step: f64) -> Result<Vec<f64>> {
    require_periodic(grid)?;
    if field.len() != grid.len() {
        return Err(Error::InvalidArgument(
            "field length does not match grid".into(),
        ));
    }
    let mut spectral = Spectral::new(grid);
    let mut spec = spectral.to_spectrum(field);
    for (v, &k) in spec.iter_mut().zip(&spectral.wavenumbers) {
        *v *= Complex64::from_polar(1.0, t_step * k * k * k);
    }
    Ok(spectral.to_field(&spec).0)
}

pub fn conserved_quantities(snapshot: &EvolutionSnapshot) -> ConservedQuantities {
    conserved_on(&snapshot.grid, &snapshot.field)
}

/// `I₁ = ∫u`, `I₂ = ∫u²`, `E = ∫(u_x² + u⁴)` by the trapezoid rule, which
/// on a periodic grid is the plain node sum.
pub fn conserved_on(grid: &SpatialGrid, field: &[f64]) -> ConservedQuantities {
    let dx = grid.dx();
    let ux = if grid.is_periodic() && field.len() > 1 {
        Spectral::new(grid).derivative(field)
    } else {
        finite_difference(field, dx)
    };
    let (mut i1, mut i2, mut energy) = (0.0, 0.0, 0.0);
    let last = field.len().saturating_sub(1);
    for (k, (&u, &d)) in field.iter().zip(&ux).enumerate() {
        let w = if !grid.is_periodic() && (k == 0 || k == last) {
            0.5 * dx
        } else {
            dx
        };
        let u2 = u * u;
        i1 += w * u;
        i2 += w * u2;
        energy += w * (d * d + u2 * u2);
    }
    ConservedQuantities { i1, i2, energy }
}

fn finite_difference(field: &[f64], dx: f64) -> Vec<f64> {
    let n = field.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|k| match k {
            0 => (field[1] - field[0]) / dx,
            k if k == n - 1 => (field[n - 1] - field[n - 2]) / dx,
            k => (field[k + 1] - field[k - 1]) / (2.0 * dx),
        })
        .collect()
}

fn boundary_fraction(field: &[f64]) -> f64 {
    let n = field.len();
    let w = ((n as f64 * BOUNDARY_WINDOW).ceil() as usize).min(n / 2);
    let total: f64 = field.iter().map(|u| u * u).sum();
    if total == 0.0 {
        return 0.0;
    }
    let edge: f64 = field[..w]
        .iter()
        .chain(&field[n - w..])
        .map(|u| u * u)
        .sum();
    edge / total
}

struct Stepper {
    spectral: Spectral,
    /// `2iξ` on retained modes, zero elsewhere.
    derivative: Vec<Complex64>,
    linear: Vec<Complex64>,
    scratch: Vec<Complex64>,
    guard: f64,
    t: f64,
}

impl Stepper {
    /// `N(v) = 2iξ·F[(F⁻¹v)³]`, dealiased.
    fn nonlinear(&mut self, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        self.scratch.copy_from_slice(v);
        self.spectral.inverse(&mut self.scratch);
        let mut sup = 0.0_f64;
        for c in self.scratch.iter_mut() {
            let u = c.re;
            sup = sup.max(u.abs());
            *c = Complex64::new(u * u * u, 0.0);
        }
        if !(sup <= self.guard) {
            return Err(Error::BlowUp {
                at: self.t,
                magnitude: sup,
            });
        }
        self.spectral.forward(&mut self.scratch);
        for ((o, s), d) in out.iter_mut().zip(&self.scratch).zip(&self.derivative) {
            *o = s * d;
        }
        Ok(())
    }
}

struct Buffers {
    nv: Vec<Complex64>,
    na: Vec<Complex64>,
    nb: Vec<Complex64>,
    nc: Vec<Complex64>,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
}

impl Buffers {
    fn new(n: usize) -> Self {
        let z = || vec![Complex64::new(0.0, 0.0); n];
        Self {
            nv: z(),
            na: z(),
            nb: z(),
            nc: z(),
            a: z(),
            b: z(),
            c: z(),
        }
    }
}

fn etdrk4_step(
    st: &mut Stepper,
    bufs: &mut Buffers,
    c: &EtdCoefficients,
    v: &mut [Complex64],
) -> Result<()> {
    let Buffers {
        nv,
        na,
        nb,
        nc,
        a,
        b,
        c: cc,
    } = bufs;
    st.nonlinear(v, nv)?;
    for j in 0..v.len() {
        a[j] = c.e_half[j] * v[j] + c.q[j] * nv[j];
    }
    st.nonlinear(a, na)?;
    for j in 0..v.len() {
        b[j] = c.e_half[j] * v[j] + c.q[j] * na[j];
    }
    st.nonlinear(b, nb)?;
    for j in 0..v.len() {
        cc[j] = c.e_half[j] * a[j] + c.q[j] * (2.0 * nb[j] - nv[j]);
    }
    st.nonlinear(cc, nc)?;
    for j in 0..v.len() {
        v[j] = c.e[j] * v[j] + c.f1[j] * nv[j] + 2.0 * c.f2[j] * (na[j] + nb[j]) + c.f3[j] * nc[j];
    }
    Ok(())
}

/// Half linear step, classical RK4 on the nonlinear flow, half linear step.
fn strang_step(
    st: &mut Stepper,
    bufs: &mut Buffers,
    e_half: &[Complex64],
    h: f64,
    v: &mut [Complex64],
) -> Result<()> {
    let Buffers {
        nv, na, nb, nc, a, ..
    } = bufs;
    for (x, e) in v.iter_mut().zip(e_half) {
        *x *= e;
    }
    st.nonlinear(v, nv)?;
    for j in 0..v.len() {
        a[j] = v[j] + 0.5 * h * nv[j];
    }
    st.nonlinear(a, na)?;
    for j in 0..v.len() {
        a[j] = v[j] + 0.5 * h * na[j];
    }
    st.nonlinear(a, nb)?;
    for j in 0..v.len() {
        a[j] = v[j] + h * nb[j];
    }
    st.nonlinear(a, nc)?;
    for j in 0..v.len() {
        v[j] += h / 6.0 * (nv[j] + 2.0 * na[j] + 2.0 * nb[j] + nc[j]);
        v[j] *= e_half[j];
    }
    Ok(())
}

enum StepCoefficients {
    Etd(EtdCoefficients),
    Strang(Vec<Complex64>),
}

/// Evolves `u0` and records snapshots at `cfg.record_times`.
///
/// Each interval between consecutive record times is split into equal
/// steps no longer than `dt`, so snapshots land exactly on the requested
/// times.
pub fn evolve(u0: &Potential, cfg: &EvolutionConfig) -> Result<Evolution> {
    cfg.validate()?;
    let grid = *u0.grid();
    require_periodic(&grid)?;
    let n = grid.len();

    let mut spectral = Spectral::new(&grid);
    let mask = spectral.dealias_mask(cfg.dealias_fraction);
    let derivative: Vec<Complex64> = spectral
        .wavenumbers
        .iter()
        .zip(&mask)
        .map(|(&k, &keep)| {
            if keep {
                Complex64::new(0.0, 2.0 * k)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let linear: Vec<Complex64> = spectral
        .wavenumbers
        .iter()
        .map(|&k| Complex64::new(0.0, k * k * k))
        .collect();
    let k_max = spectral
        .wavenumbers
        .iter()
        .zip(&mask)
        .filter(|(_, &keep)| keep)
        .fold(0.0_f64, |m, (k, _)| m.max(k.abs()));

    let mut v = spectral.to_spectrum(u0.values());
    for (x, &keep) in v.iter_mut().zip(&mask) {
        if !keep {
            *x = Complex64::new(0.0, 0.0);
        }
    }
    let sup0 = u0.sup_norm();
    let guard = if sup0 > 0.0 {
        BLOW_UP_FACTOR * sup0
    } else {
        1.0
    };

    let mut st = Stepper {
        spectral,
        derivative,
        linear,
        scratch: vec![Complex64::new(0.0, 0.0); n],
        guard,
        t: 0.0,
    };
    let mut bufs = Buffers::new(n);
    let mut cache: HashMap<u64, StepCoefficients> = HashMap::new();

    let mut run = Evolution {
        grid,
        config: cfg.clone(),
        snapshots: Vec::with_capacity(cfg.record_times.len()),
        conserved: Vec::new(),
        warnings: Vec::new(),
        stiffness: cfg.dt * k_max.powi(3),
        steps: 0,
    };

    let initial = conserved_on(&grid, u0.values());
    run.conserved.push((0.0, initial));

    let mut targets = cfg.record_times.clone();
    if targets.last().map_or(true, |&t| t < cfg.t_final) {
        targets.push(cfg.t_final);
    }
    let mut t = 0.0;
    for target in targets {
        let span = target - t;
        if span > 0.0 {
            let m = ((span / cfg.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = span / m as f64;
            let coeffs = cache
                .entry(h.to_bits())
                .or_insert_with(|| match cfg.scheme {
                    TimeScheme::Etdrk4 => {
                        StepCoefficients::Etd(EtdCoefficients::new(&st.linear, h))
                    }
                    TimeScheme::StrangSplit => StepCoefficients::Strang(
                        st.linear.iter().map(|&l| (0.5 * h * l).exp()).collect(),
                    ),
                });
            for step in 0..m {
                st.t = t + step as f64 * h;
                match coeffs {
                    StepCoefficients::Etd(c) => etdrk4_step(&mut st, &mut bufs, c, &mut v)?,
                    StepCoefficients::Strang(e) => strang_step(&mut st, &mut bufs, e, h, &mut v)?,
                }
            }
            run.steps += m;
            t = target;
        }
        if cfg.record_times.iter().any(|&r| r == target) {
            let (field, residue) = st.spectral.to_field(&v);
            let snapshot = EvolutionSnapshot {
                t: target,
                grid,
                boundary_fraction: boundary_fraction(&field),
                imag_residue: residue,
                field,
            };
            if snapshot.boundary_fraction > WRAP_AROUND_THRESHOLD {
                run.warnings.push(format!(
                    "wrap-around: boundary window holds {:.3e} of the L2 mass at t = {}",
                    snapshot.boundary_fraction, target
                ));
            }
            if target > 0.0 {
                run.conserved
                    .push((target, conserved_quantities(&snapshot)));
            }
            run.snapshots.push(snapshot);
        }
    }
    Ok(run)
}

#[cfg(test)]
mod tests;
