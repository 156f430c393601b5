//! Experiment orchestration: evolve a profile, evaluate the matching
//! leading-order term along probe rays, and report the discrepancy.

mod fit;
mod probe;
mod report;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    calibrate_rho, error_envelope_with, region1_leading_with, region234_leading, EnvelopeParams,
    PhaseConvention,
};
use crate::error::{Error, Result};
use crate::geometry::{classify_region, PhaseGeometry, RegionLabel, RegionThresholds};
use crate::grid::SpatialGrid;
use crate::scattering::{reflection_coefficient, Potential, ReflectionTable};
use crate::solver::{evolve, EvolutionConfig, TimeScheme};
use crate::special::{PainleveSolution, PainleveWindow};

pub use fit::{fit_decay, read_series_csv, DecayFit};
pub use probe::{nearest_distance, window_sup, zero_crossings};
pub use report::{emit_report, fits_csv, render_svg, results_csv};

/// Initial datum `u0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    /// `amplitude·sech(x/width)`.
    Sech { amplitude: f64, width: f64 },
    /// `amplitude·exp(−(x/width)²)`.
    Gaussian { amplitude: f64, width: f64 },
    /// Uniformly spaced `x,u` samples; zero outside their span.
    File { path: PathBuf },
}

impl Profile {
    fn validate(&self) -> Result<()> {
        match *self {
            Profile::Sech { amplitude, width } | Profile::Gaussian { amplitude, width } => {
                if !(amplitude.is_finite() && amplitude > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "profile amplitude must be positive, got {amplitude}"
                    )));
                }
                if !(width.is_finite() && width > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "profile width must be positive, got {width}"
                    )));
                }
                Ok(())
            }
            Profile::File { .. } => Ok(()),
        }
    }
}

/// Samples of a profile, in a form that can be resampled anywhere.
#[derive(Debug, Clone)]
pub enum ProfileData {
    Analytic(Profile),
    Sampled(Potential),
}

impl ProfileData {
    pub fn load(profile: &Profile) -> Result<Self> {
        profile.validate()?;
        match profile {
            Profile::File { path } => Ok(Self::Sampled(read_profile_csv(path)?)),
            other => Ok(Self::Analytic(other.clone())),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Analytic(Profile::Sech { amplitude, width }) => amplitude / (x / width).cosh(),
            Self::Analytic(Profile::Gaussian { amplitude, width }) => {
                amplitude * (-(x / width).powi(2)).exp()
            }
            Self::Analytic(Profile::File { .. }) => unreachable!("file profiles load as samples"),
            Self::Sampled(p) => linear_sample(p, x),
        }
    }

    /// `u0` on the grid used for the scattering transform. Sampled profiles
    /// keep their own nodes.
    pub fn scattering_potential(&self, settings: &ScatteringSettings) -> Result<Potential> {
        match self {
            Self::Sampled(p) => Ok(p.clone()),
            Self::Analytic(_) => {
                let grid =
                    SpatialGrid::closed(-settings.half_width, settings.half_width, settings.nodes)?;
                Potential::from_fn(grid, |x| self.eval(x))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Analytic(_) => false,
            Self::Sampled(p) => p.values().iter().all(|v| *v == 0.0),
        }
    }
}

fn linear_sample(p: &Potential, x: f64) -> f64 {
    let grid = p.grid();
    let s = (x - grid.x_min()) / grid.dx();
    let last = (grid.len() - 1) as f64;
    if !(0.0..=last).contains(&s) {
        return 0.0;
    }
    let k = (s.floor() as usize).min(grid.len() - 2);
    let w = s - k as f64;
    let v = p.values();
    (1.0 - w) * v[k] + w * v[k + 1]
}

/// Reads a profile from an `x,u` CSV with a header line and uniform spacing.
pub fn read_profile_csv(path: &Path) -> Result<Potential> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let series = read_series_csv(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    if series.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "{}: a profile needs at least two samples",
            path.display()
        )));
    }
    let (a, b) = (series[0].0, series[series.len() - 1].0);
    let grid = SpatialGrid::closed(a, b, series.len())?;
    for (k, &(x, _)) in series.iter().enumerate() {
        if (x - grid.x(k)).abs() > 1e-9 * grid.dx().max(x.abs()) {
            return Err(Error::InvalidArgument(format!(
                "{}: sample {k} at x = {x} breaks the uniform spacing",
                path.display()
            )));
        }
    }
    Potential::from_samples(grid, series.into_iter().map(|p| p.1).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub length: f64,
    pub n: usize,
    pub dt: f64,
    pub dealias_fraction: f64,
    pub scheme: TimeScheme,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            length: 1600.0,
            n: 1 << 14,
            dt: 0.02,
            dealias_fraction: 2.0 / 3.0,
            scheme: TimeScheme::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatteringSettings {
    pub z_max: f64,
    pub dz: f64,
    /// Analytic profiles are sampled on `[−half_width, half_width]`.
    pub half_width: f64,
    pub nodes: usize,
}

impl Default for ScatteringSettings {
    fn default() -> Self {
        Self {
            z_max: 6.0,
            dz: 0.005,
            half_width: 40.0,
            nodes: 8001,
        }
    }
}

/// Probe ray: `x = ratio·t` or a fixed `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Ray {
    Ratio { ratio: f64 },
    Fixed { x: f64 },
}

impl Ray {
    pub fn x_at(&self, t: f64) -> f64 {
        match *self {
            Ray::Ratio { ratio } => ratio * t,
            Ray::Fixed { x } => x,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Ray::Ratio { ratio } => format!("x={ratio}t"),
            Ray::Fixed { x } => format!("x={x}"),
        }
    }
}

/// How the Painlevé datum `ρ = ±r(0)` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoChoice {
    /// Fit both signs to `u_num(0, t)` over the configured times.
    #[default]
    Calibrate,
    Plus,
    Minus,
}

fn default_painleve_window() -> PainleveWindow {
    PainleveWindow {
        s_min: -40.0,
        s_max: 40.0,
        ds: 1e-3,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub profile: Profile,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub scattering: ScatteringSettings,
    #[serde(default = "default_painleve_window")]
    pub painleve: PainleveWindow,
    #[serde(default)]
    pub thresholds: RegionThresholds,
    #[serde(default)]
    pub envelope: EnvelopeParams,
    #[serde(default)]
    pub phase_convention: PhaseConvention,
    #[serde(default)]
    pub rho: RhoChoice,
    pub rays: Vec<Ray>,
    pub times: Vec<f64>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.profile.validate()?;
        self.thresholds.validate()?;
        self.envelope.validate()?;
        if self.times.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one probe time is required".into(),
            ));
        }
        let mut previous = 0.0;
        for &t in &self.times {
            if !(t.is_finite() && t > previous) {
                return Err(Error::InvalidArgument(format!(
                    "times must be positive and strictly increasing, got {:?}",
                    self.times
                )));
            }
            previous = t;
        }
        if self.rho == RhoChoice::Calibrate && self.times.len() < 3 {
            return Err(Error::InvalidArgument(
                "calibrating rho needs at least 3 times; set rho = \"plus\" or \"minus\"".into(),
            ));
        }
        if let Some(x) = self.rays.iter().find_map(|r| match *r {
            Ray::Ratio { ratio } if !ratio.is_finite() => Some(ratio),
            Ray::Fixed { x } if !x.is_finite() => Some(x),
            _ => None,
        }) {
            return Err(Error::InvalidArgument(format!(
                "ray parameter {x} is not finite"
            )));
        }
        self.evolution_config().validate()
    }

    pub fn evolution_config(&self) -> EvolutionConfig {
        let t_final = self.times.last().copied().unwrap_or(0.0);
        let mut cfg = EvolutionConfig::new(self.solver.dt, t_final, self.times.clone())
            .with_scheme(self.solver.scheme);
        cfg.dealias_fraction = self.solver.dealias_fraction;
        cfg
    }

    /// Periodic solver grid centred on the origin.
    pub fn solver_grid(&self) -> Result<SpatialGrid> {
        SpatialGrid::periodic_centered(self.solver.length, self.solver.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub ray: usize,
    pub x: f64,
    pub t: f64,
    pub tau: f64,
    pub region: RegionLabel,
    pub u_num: f64,
    pub u_as: f64,
    pub err: f64,
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayFit {
    pub ray: usize,
    pub label: String,
    /// `None` when fewer than three positive errors are available.
    pub fit: Option<DecayFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSummary {
    pub rho: f64,
    pub r_origin: f64,
    pub branch: String,
    /// Residual ratio of the rejected branch; absent unless calibrated.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareReport {
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
    pub fits: Vec<RayFit>,
    pub calibration: Option<CalibrationSummary>,
    /// The initial datum vanishes identically, so every comparison is trivial.
    pub degenerate: bool,
    pub drift_i2: f64,
    pub drift_energy: f64,
    pub boundary_fraction: Vec<f64>,
    pub warnings: Vec<String>,
}

impl CompareReport {
    /// A report with no rows, used for dry runs and as a format reference.
    pub fn empty(config: ExperimentConfig) -> Self {
        Self {
            config,
            rows: Vec::new(),
            fits: Vec::new(),
            calibration: None,
            degenerate: false,
            drift_i2: 0.0,
            drift_energy: 0.0,
            boundary_fraction: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn rows_for(&self, ray: usize) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.ray == ray)
    }

    pub fn fit_for(&self, ray: usize) -> Option<&DecayFit> {
        self.fits
            .iter()
            .find(|f| f.ray == ray)
            .and_then(|f| f.fit.as_ref())
    }
}

fn at_probe(x: f64, t: f64) -> impl FnOnce(Error) -> Error {
    move |source| Error::Probe {
        x,
        t,
        source: Box::new(source),
    }
}

/// Everything `run_compare` computes before it touches the probe rays.
pub struct CompareContext {
    pub table: ReflectionTable,
    pub evolution: crate::solver::Evolution,
    pub painleve: PainleveSolution,
    pub calibration: Option<CalibrationSummary>,
    pub degenerate: bool,
}

pub fn prepare_compare(cfg: &ExperimentConfig) -> Result<CompareContext> {
    cfg.validate()?;
    let data = ProfileData::load(&cfg.profile)?;
    let scattering_u0 = data.scattering_potential(&cfg.scattering)?;
    let table = reflection_coefficient(&scattering_u0, cfg.scattering.z_max, cfg.scattering.dz)?;
    let grid = cfg.solver_grid()?;
    let u0 = Potential::from_fn(grid, |x| data.eval(x))?;
    let evolution = evolve(&u0, &cfg.evolution_config())?;
    let r0 = table.r_origin().re;
    let (painleve, calibration) = match cfg.rho {
        RhoChoice::Calibrate => {
            let samples: Vec<(f64, f64)> = evolution
                .snapshots
                .iter()
                .filter(|s| s.t > 0.0)
                .map(|s| (s.t, s.interpolant().eval(0.0)))
                .collect();
            let cal = calibrate_rho(&table, &samples, &cfg.painleve)?;
            let summary = CalibrationSummary {
                rho: cal.rho,
                r_origin: cal.r_origin,
                branch: cal.branch().to_string(),
                ratio: Some(cal.ratio),
            };
            (cal.solution, Some(summary))
        }
        choice => {
            let (rho, branch) = if choice == RhoChoice::Plus {
                (r0, "+r(0)")
            } else {
                (-r0, "-r(0)")
            };
            let summary = CalibrationSummary {
                rho,
                r_origin: r0,
                branch: branch.to_string(),
                ratio: None,
            };
            (cfg.painleve.solve(rho)?, Some(summary))
        }
    };
    Ok(CompareContext {
        table,
        evolution,
        painleve,
        calibration,
        degenerate: data.is_zero(),
    })
}

/// Leading-order prediction for the region `label` at `g`. Region V has no
/// leading term beyond its error bound, so the prediction there is zero.
pub fn leading_term(
    g: &PhaseGeometry,
    label: RegionLabel,
    table: &ReflectionTable,
    painleve: &PainleveSolution,
    convention: PhaseConvention,
) -> Result<f64> {
    match label {
        RegionLabel::I => region1_leading_with(g, table, convention),
        RegionLabel::II | RegionLabel::III | RegionLabel::IV => region234_leading(g, painleve),
        RegionLabel::V => Ok(0.0),
    }
}

/// Evaluates every probe of `cfg` against a prepared run.
pub fn compare_with(cfg: &ExperimentConfig, ctx: &CompareContext) -> Result<CompareReport> {
    let mut rows = Vec::with_capacity(cfg.rays.len() * cfg.times.len());
    let interpolants: Vec<_> = cfg
        .times
        .iter()
        .map(|&t| {
            ctx.evolution
                .snapshot_at(t)
                .map(|s| s.interpolant())
                .ok_or_else(|| Error::InvalidArgument(format!("no snapshot recorded at t = {t}")))
        })
        .collect::<Result<_>>()?;
    for (k, ray) in cfg.rays.iter().enumerate() {
        for (&t, interp) in cfg.times.iter().zip(&interpolants) {
            let x = ray.x_at(t);
            let g = PhaseGeometry::new(x, t).map_err(at_probe(x, t))?;
            let region = classify_region(&g, &cfg.thresholds);
            let u_num = interp.eval(x);
            let u_as = leading_term(&g, region, &ctx.table, &ctx.painleve, cfg.phase_convention)
                .map_err(at_probe(x, t))?;
            rows.push(ReportRow {
                ray: k,
                x,
                t,
                tau: g.tau,
                region,
                u_num,
                u_as,
                err: (u_num - u_as).abs(),
                envelope: error_envelope_with(&g, region, &cfg.envelope),
            });
        }
    }
    let fits = cfg
        .rays
        .iter()
        .enumerate()
        .map(|(k, ray)| {
            let series: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.ray == k && r.err > 0.0)
                .map(|r| (r.t, r.err))
                .collect();
            RayFit {
                ray: k,
                label: ray.label(),
                fit: fit_decay(&series).ok(),
            }
        })
        .collect();
    let (drift_i2, drift_energy) = ctx.evolution.max_relative_drift();
    Ok(CompareReport {
        config: cfg.clone(),
        rows,
        fits,
        calibration: ctx.calibration.clone(),
        degenerate: ctx.degenerate,
        drift_i2,
        drift_energy,
        boundary_fraction: ctx
            .evolution
            .snapshots
            .iter()
            .map(|s| s.boundary_fraction)
            .collect(),
        warnings: ctx.evolution.warnings.clone(),
    })
}

/// Full pipeline: scattering data, reference evolution, branch calibration
/// and the per-probe comparison.
pub fn run_compare(cfg: &ExperimentConfig) -> Result<CompareReport> {
    let ctx = prepare_compare(cfg)?;
    compare_with(cfg, &ctx)
}
