//! Leading-order long-time asymptotics and their error envelopes.
//!
//! Region I is a modulated cosine with a logarithmic phase correction; the
//! self-similar Regions II–IV share the Painlevé II profile
//! `(3t)^{-1/3} P(x/(3t)^{1/3})`; Region V only has an error bound.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PhaseGeometry, RegionLabel};
use crate::scattering::ReflectionTable;
use crate::special::{arg_gamma_i_kappa, PainleveSolution, PainleveWindow};

/// Disagreement allowed between the two refinement levels of the χ quadrature.
pub const CHI_TOLERANCE: f64 = 1e-10;
/// Residual ratio below which the Painlevé branch is reported ambiguous.
pub const MIN_CALIBRATION_RATIO: f64 = 2.0;
const GAUSS_POINTS: usize = 8;

/// Orientation used when evaluating the Region I phase.
///
/// The table holds `r` for the real-symmetric Lax operator normalized by
/// `e^{-ixzσ3}`. `Literal` inserts it at `z0` exactly as tabulated.
/// `Mirrored` first maps it to the skew gauge `r ↦ i·r` and evaluates the
/// phase at the reflected stationary point `−z0`: `arg r` enters as
/// `arg(i·conj r(z0))` and, since `|r|` is even, the χ term flips sign.
/// Only `Mirrored` reproduces the PDE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    #[default]
    Mirrored,
    Literal,
}

/// Hölder exponent and the free constants of the Region IV and V bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeParams {
    pub p: f64,
    pub eta: f64,
    pub c: f64,
}

impl Default for EnvelopeParams {
    fn default() -> Self {
        Self {
            p: 8.0,
            eta: 0.1,
            c: 1.0,
        }
    }
}

impl EnvelopeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 4.0 && self.p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "p must lie in (4, ∞), got {}",
                self.p
            )));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "c must be positive, got {}",
                self.c
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionIParams {
    pub z0: f64,
    pub kappa: f64,
    pub phi: f64,
    pub amplitude: f64,
}

impl RegionIParams {
    /// `16τ − κ·log(192τ) + φ`.
    pub fn phase(&self, tau: f64) -> f64 {
        16.0 * tau - self.kappa * (192.0 * tau).ln() + self.phi
    }
}

/// `κ = −log(1 − |r|²)/(2π)`.
pub fn kappa_of(r_z0: Complex64) -> Result<f64> {
    let m2 = r_z0.norm_sqr();
    if !(m2 < 1.0) {
        return Err(Error::OutOfRange {
            what: "|r(z0)|",
            value: m2.sqrt(),
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(-(-m2).ln_1p() / (2.0 * PI))
}

fn require_inside(table: &ReflectionTable, z0: f64) -> Result<()> {
    if !(z0 > 0.0 && z0 < table.z_max()) {
        return Err(Error::OutOfRange {
            what: "z0",
            value: z0,
            min: 0.0,
            max: table.z_max(),
        });
    }
    Ok(())
}

/// `(1/π)∫_{−z0}^{z0} log((1−|r(ζ)|²)/(1−|r(z0)|²)) dζ/(ζ−z0)`.
///
/// The numerator vanishes to first order at `ζ = z0`, so the integrand is
/// bounded. Panels break at the table nodes, where the interpolant of `r`
/// changes piece; on each panel an 8-point Gauss rule is applied once
/// whole and once per half, and the two sums must agree.
pub fn chi_integral_at_z0(table: &ReflectionTable, z0: f64) -> Result<f64> {
    require_inside(table, z0)?;
    let m0 = table.r_at(z0)?.norm_sqr();
    if !(m0 < 1.0) {
        return Err(Error::OutOfRange {
            what: "|r(z0)|",
            value: m0.sqrt(),
            min: 0.0,
            max: 1.0,
        });
    }
    let denom = 1.0 - m0;

    let mut breaks = vec![-z0];
    breaks.extend(table.z_grid().into_iter().filter(|&z| z > -z0 && z < z0));
    breaks.push(z0);
    let min_width = 1e-12 * z0;
    breaks.dedup_by(|b, a| (*b - *a).abs() < min_width);
    if let Some(last) = breaks.last_mut() {
        *last = z0;
    }

    let mut failure = None;
    let (coarse, fine) = {
        let mut integrand = |zeta: f64| -> f64 {
            match table.r_at(zeta) {
                Ok(r) => ((m0 - r.norm_sqr()) / denom).ln_1p() / (zeta - z0),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        };
        let rule = GaussLegendre::new(NonZeroUsize::new(GAUSS_POINTS).expect("nonzero"));
        let (mut coarse, mut fine) = (0.0, 0.0);
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            coarse += rule.integrate(a, b, &mut integrand);
            fine += rule.integrate(a, mid, &mut integrand) + rule.integrate(mid, b, &mut integrand);
        }
        (coarse / PI, fine / PI)
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let difference = (fine - coarse).abs();
    let tolerance = CHI_TOLERANCE * fine.abs().max(1.0);
    if difference > tolerance {
        return Err(Error::QuadratureFailure {
            difference,
            tolerance,
        });
    }
    Ok(fine)
}

/// `φ(z0)` under the default convention.
pub fn phase_phi(table: &ReflectionTable, z0: f64) -> Result<f64> {
    phase_phi_with(table, z0, PhaseConvention::default())
}

/// `arg Γ(iκ) − π/4 − arg r(z0) + χ(z0)` in the chosen orientation.
pub fn phase_phi_with(
    table: &ReflectionTable,
    z0: f64,
    convention: PhaseConvention,
) -> Result<f64> {
    require_inside(table, z0)?;
    let r = table.r_at(z0)?;
    let kappa = kappa_of(r)?;
    if kappa <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "phase is undefined where r vanishes (z0 = {z0})"
        )));
    }
    let chi = chi_integral_at_z0(table, z0)?;
    let (r_formula, chi) = match convention {
        PhaseConvention::Literal => (r, chi),
        PhaseConvention::Mirrored => (Complex64::i() * r.conj(), -chi),
    };
    Ok(arg_gamma_i_kappa(kappa)? - 0.25 * PI - r_formula.arg() + chi)
}

pub fn region1_params(
    g: &PhaseGeometry,
    table: &ReflectionTable,
    convention: PhaseConvention,
) -> Result<RegionIParams> {
    if g.x >= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "the oscillatory region needs x < 0, got {}",
            g.x
        )));
    }
    let z0 = g.z0.re;
    require_inside(table, z0)?;
    let kappa = kappa_of(table.r_at(z0)?)?;
    let phi = if kappa > 0.0 {
        phase_phi_with(table, z0, convention)?
    } else {
        0.0
    };
    Ok(RegionIParams {
        z0,
        kappa,
        phi,
        amplitude: (kappa / (3.0 * g.t * z0)).sqrt(),
    })
}

pub fn region1_leading(g: &PhaseGeometry, table: &ReflectionTable) -> Result<f64> {
    region1_leading_with(g, table, PhaseConvention::default())
}

/// `√(κ/(3tz0))·cos(16tz0³ − κ·log(192tz0³) + φ(z0))`.
pub fn region1_leading_with(
    g: &PhaseGeometry,
    table: &ReflectionTable,
    convention: PhaseConvention,
) -> Result<f64> {
    let params = region1_params(g, table, convention)?;
    if params.kappa == 0.0 {
        return Ok(0.0);
    }
    Ok(params.amplitude * params.phase(g.tau).cos())
}

/// `(3t)^{-1/3}·P(x/(3t)^{1/3})`.
pub fn region234_leading(g: &PhaseGeometry, sol: &PainleveSolution) -> Result<f64> {
    let scale = (3.0 * g.t).cbrt();
    Ok(sol.eval(g.x / scale)? / scale)
}

/// Outcome of choosing the sign of the Painlevé datum.
#[derive(Debug, Clone)]
pub struct RhoCalibration {
    pub rho: f64,
    pub r_origin: f64,
    pub residual: f64,
    pub rejected_residual: f64,
    /// `rejected_residual / residual`; infinite for an exact fit.
    pub ratio: f64,
    pub solution: PainleveSolution,
}

impl RhoCalibration {
    /// `"+r(0)"` or `"-r(0)"`.
    pub fn branch(&self) -> &'static str {
        if self.rho == self.r_origin {
            "+r(0)"
        } else {
            "-r(0)"
        }
    }
}

/// Picks `ρ ∈ {+r(0), −r(0)}` minimizing `Σ|u(0,t) − (3t)^{-1/3}P_ρ(0)|`.
pub fn calibrate_rho(
    table: &ReflectionTable,
    samples: &[(f64, f64)],
    window: &PainleveWindow,
) -> Result<RhoCalibration> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "calibration needs at least 3 samples at x = 0, got {}",
            samples.len()
        )));
    }
    if let Some(&(t, _)) = samples.iter().find(|(t, _)| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "sample time must be positive, got {t}"
        )));
    }
    let r0 = table.r_origin();
    if r0.im.abs() > 1e-8 * r0.norm().max(1.0) {
        return Err(Error::InvalidArgument(format!("r(0) = {r0} is not real")));
    }
    let r0 = r0.re;
    let residual = |sol: &PainleveSolution| -> Result<f64> {
        let p0 = sol.eval(0.0)?;
        Ok(samples
            .iter()
            .map(|&(t, u)| (u - p0 / (3.0 * t).cbrt()).abs())
            .sum())
    };
    let plus = window.solve(r0)?;
    let res_plus = residual(&plus)?;
    if r0 == 0.0 {
        return Ok(RhoCalibration {
            rho: 0.0,
            r_origin: 0.0,
            residual: res_plus,
            rejected_residual: res_plus,
            ratio: 1.0,
            solution: plus,
        });
    }
    let minus = window.solve(-r0)?;
    let res_minus = residual(&minus)?;
    let (rho, residual, rejected_residual, solution) = if res_plus <= res_minus {
        (r0, res_plus, res_minus, plus)
    } else {
        (-r0, res_minus, res_plus, minus)
    };
    let ratio = if residual > 0.0 {
        rejected_residual / residual
    } else {
        f64::INFINITY
    };
    if ratio < MIN_CALIBRATION_RATIO {
        return Err(Error::Ambiguous {
            ratio,
            required: MIN_CALIBRATION_RATIO,
        });
    }
    Ok(RhoCalibration {
        rho,
        r_origin: r0,
        residual,
        rejected_residual,
        ratio,
        solution,
    })
}

/// Error order of `label` at `g` with unit constants and default `η`, `c`.
///
/// # Panics
/// If `p ≤ 4`.
pub fn error_envelope(g: &PhaseGeometry, label: RegionLabel, p: f64) -> f64 {
    error_envelope_with(
        g,
        label,
        &EnvelopeParams {
            p,
            ..EnvelopeParams::default()
        },
    )
}

pub fn error_envelope_with(g: &PhaseGeometry, label: RegionLabel, params: &EnvelopeParams) -> f64 {
    let EnvelopeParams { p, eta, c } = *params;
    assert!(p > 4.0, "Hölder exponent must exceed 4, got {p}");
    let t = g.t;
    let tau = g.tau;
    let z0 = g.z0_abs();
    let painleve_rate = t.powf(2.0 / (3.0 * p) - 0.5);
    match label {
        RegionLabel::I => {
            let zt = z0 * t;
            (zt * tau).powf(-0.5) + zt.powf(-0.75)
        }
        RegionLabel::II => {
            let q = p / (p - 1.0);
            tau.powf(-1.0 / (2.0 * q)) * (tau / t).powf(0.5 - 2.0 / (3.0 * p))
        }
        RegionLabel::III => painleve_rate,
        RegionLabel::IV => t.powf(-0.5) + (-16.0 * tau.powf(2.0 / 3.0) * eta).exp() * painleve_rate,
        RegionLabel::V => {
            let decay = (-c * tau).exp();
            decay * t.powf(-1.0 / 3.0) + g.x.abs().powf(-1.5) + decay * t.powf(-2.0 / 3.0)
        }
    }
}
