//! Stationary-phase geometry of the oscillatory phase `θ(z) = 4tz³ + xz`
//! and the classification of `(x, t)` into the five asymptotic regions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(x, t)` together with the stationary point `z0` of `θ` and the
/// self-similar variable `τ = |z0|³ t`.
///
/// For `x < 0` the stationary points `±z0` are real; for `x > 0` they are
/// purely imaginary and `z0` is stored on the positive imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGeometry {
    pub x: f64,
    pub t: f64,
    pub z0: Complex64,
    pub tau: f64,
}

impl PhaseGeometry {
    /// Builds the geometry for a point of the upper half plane `t > 0`.
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "time must be positive, got {t}"
            )));
        }
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "position {x} is not finite"
            )));
        }
        let modulus = (x.abs() / (12.0 * t)).sqrt();
        let z0 = if x < 0.0 {
            Complex64::new(modulus, 0.0)
        } else {
            Complex64::new(0.0, modulus)
        };
        Ok(Self {
            x,
            t,
            z0,
            tau: modulus.powi(3) * t,
        })
    }

    /// `|z0|`, the modulus of the stationary point.
    pub fn z0_abs(&self) -> f64 {
        self.z0.norm()
    }

    /// `θ(z; x, t) = 4tz³ + xz`.
    pub fn theta(&self, z: Complex64) -> Complex64 {
        4.0 * self.t * z * z * z + self.x * z
    }

    /// `∂θ/∂z = 12tz² + x`.
    pub fn theta_prime(&self, z: Complex64) -> Complex64 {
        12.0 * self.t * z * z + self.x
    }

    /// Self-similar Painlevé variable `s = x / (3t)^{1/3}`.
    pub fn painleve_variable(&self) -> f64 {
        self.x / (3.0 * self.t).cbrt()
    }
}

/// Free-function form of [`PhaseGeometry::new`].
pub fn make_geometry(x: f64, t: f64) -> Result<PhaseGeometry> {
    PhaseGeometry::new(x, t)
}

/// Free-function form of [`PhaseGeometry::theta`].
pub fn phase_theta(g: &PhaseGeometry, z: Complex64) -> Complex64 {
    g.theta(z)
}

/// Region boundaries expressed through `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionThresholds {
    /// Half-width `M'` of Region III in `τ`.
    pub m_prime: f64,
    /// Smallest `τ` treated as Region I on `x < 0`.
    pub tau_i: f64,
    /// Smallest `τ` treated as Region V on `x > 0`.
    pub tau_v: f64,
    /// Region II requires `τ <= t^growth_exponent`.
    pub growth_exponent: f64,
}

impl Default for RegionThresholds {
    fn default() -> Self {
        Self {
            m_prime: 1.0,
            tau_i: 10.0,
            tau_v: 10.0,
            growth_exponent: 0.4,
        }
    }
}

impl RegionThresholds {
    pub fn new(m_prime: f64, tau_i: f64, tau_v: f64, growth_exponent: f64) -> Result<Self> {
        let th = Self {
            m_prime,
            tau_i,
            tau_v,
            growth_exponent,
        };
        th.validate()?;
        Ok(th)
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            m_prime,
            tau_i,
            tau_v,
            growth_exponent,
        } = *self;
        if !(m_prime.is_finite() && m_prime > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "M' must be positive, got {m_prime}"
            )));
        }
        if !(tau_i > m_prime) {
            return Err(Error::InvalidArgument(format!(
                "tau_I = {tau_i} must exceed M' = {m_prime}"
            )));
        }
        if !(tau_v > 1.0 / m_prime) {
            return Err(Error::InvalidArgument(format!(
                "tau_V = {tau_v} must exceed 1/M' = {}",
                1.0 / m_prime
            )));
        }
        if !(growth_exponent > 0.0 && growth_exponent <= 0.4) {
            return Err(Error::InvalidArgument(format!(
                "growth exponent must lie in (0, 2/5], got {growth_exponent}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionLabel {
    I,
    II,
    III,
    IV,
    V,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 5] = [Self::I, Self::II, Self::III, Self::IV, Self::V];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
            Self::V => "V",
        }
    }

    /// Regions whose leading term is the Painlevé II profile.
    pub fn is_self_similar(&self) -> bool {
        matches!(self, Self::II | Self::III | Self::IV)
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown region label {s:?}")))
    }
}

/// Assigns exactly one region to `g`.
///
/// The regions overlap, so a fixed precedence is applied: Region III
/// (`τ <= M'`) first, then on `x < 0` Region I for `τ >= tau_I`, Region II
/// while `τ <= t^growth_exponent`, and Region I otherwise; on `x > 0`
/// Region IV up to `tau_V` and Region V beyond.
pub fn classify_region(g: &PhaseGeometry, th: &RegionThresholds) -> RegionLabel {
    let tau = g.tau;
    if tau <= th.m_prime {
        RegionLabel::III
    } else if g.x < 0.0 {
        if tau >= th.tau_i {
            RegionLabel::I
        } else if tau <= g.t.powf(th.growth_exponent) {
            RegionLabel::II
        } else {
            RegionLabel::I
        }
    } else if tau <= th.tau_v {
        RegionLabel::IV
    } else {
        RegionLabel::V
    }
}
