use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jost::{jost_solve_with, JostOptions};
use super::potential::Potential;
use crate::error::{Error, Result};
use crate::interp::lagrange4;

/// Reflection coefficient sampled on the symmetric grid
/// `z_k = −z_max + k·dz`, `k = 0..=2m`, `m·dz = z_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionTable {
    z_max: f64,
    dz: f64,
    r_values: Vec<Complex64>,
    max_unitarity_residual: f64,
}

#[derive(Serialize, Deserialize)]
struct TableDocument {
    z_max: f64,
    dz: f64,
    n: usize,
    max_unitarity_residual: f64,
    z: Vec<f64>,
    re_r: Vec<f64>,
    im_r: Vec<f64>,
}

/// Number of half-grid steps `m = z_max/dz`, required to be integral.
fn half_count(z_max: f64, dz: f64) -> Result<usize> {
    if !(z_max.is_finite() && z_max > 0.0 && dz.is_finite() && dz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "z grid needs z_max > 0 and dz > 0, got z_max = {z_max}, dz = {dz}"
        )));
    }
    let m = (z_max / dz).round();
    if m < 2.0 || ((m * dz - z_max) / z_max).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "z_max = {z_max} must be an integer multiple (>= 2) of dz = {dz}"
        )));
    }
    Ok(m as usize)
}

impl ReflectionTable {
    /// Wraps precomputed samples; `r_values.len()` must be `2·z_max/dz + 1`.
    pub fn from_samples(z_max: f64, dz: f64, r_values: Vec<Complex64>) -> Result<Self> {
        let m = half_count(z_max, dz)?;
        if r_values.len() != 2 * m + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} reflection samples, got {}",
                2 * m + 1,
                r_values.len()
            )));
        }
        if let Some(k) = r_values
            .iter()
            .position(|r| !(r.re.is_finite() && r.im.is_finite()) || r.norm() >= 1.0)
        {
            return Err(Error::InvalidArgument(format!(
                "|r| = {} at z = {} violates |r| < 1",
                r_values[k].norm(),
                -z_max + k as f64 * dz
            )));
        }
        Ok(Self {
            z_max,
            dz: z_max / m as f64,
            r_values,
            max_unitarity_residual: 0.0,
        })
    }

    /// Builds a table by sampling a closure, e.g. a closed-form coefficient.
    pub fn from_fn(z_max: f64, dz: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let m = half_count(z_max, dz)?;
        let step = z_max / m as f64;
        let values = (0..=2 * m).map(|k| f(z_node(z_max, step, k))).collect();
        Self::from_samples(z_max, dz, values)
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn len(&self) -> usize {
        self.r_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_values.is_empty()
    }

    pub fn z(&self, k: usize) -> f64 {
        z_node(self.z_max, self.dz, k)
    }

    pub fn z_grid(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.z(k)).collect()
    }

    pub fn r_values(&self) -> &[Complex64] {
        &self.r_values
    }

    /// Largest `| |a|² − |b|² − 1 |` seen while building the table.
    pub fn max_unitarity_residual(&self) -> f64 {
        self.max_unitarity_residual
    }

    /// `max_k |r(−z_k) − conj r(z_k)|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|k| (self.r_values[n - 1 - k] - self.r_values[k].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.r_values.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// `r(0)`, the central sample.
    pub fn r_origin(&self) -> Complex64 {
        self.r_values[self.len() / 2]
    }

    /// Cubic interpolation of the samples; exact at nodes.
    pub fn r_at(&self, z: f64) -> Result<Complex64> {
        if !(z.abs() <= self.z_max) {
            return Err(Error::OutOfRange {
                what: "z",
                value: z,
                min: -self.z_max,
                max: self.z_max,
            });
        }
        let pos = (z + self.z_max) / self.dz;
        let nearest = pos.round();
        if (pos - nearest).abs() < 1e-9 {
            return Ok(self.r_values[nearest as usize]);
        }
        Ok(lagrange4(&self.r_values, pos))
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("z,re_r,im_r\n");
        for (k, r) in self.r_values.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", self.z(k), r.re, r.im);
        }
        out
    }

    /// Parses the CSV layout written by [`Self::to_csv_string`].
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?;
        if headers != vec!["z", "re_r", "im_r"] {
            return Err(Error::Parse(format!(
                "unexpected reflection table header {headers:?}"
            )));
        }
        let mut z = Vec::new();
        let mut r = Vec::new();
        for record in reader.deserialize::<(f64, f64, f64)>() {
            let (zk, re, im) = record.map_err(|e| Error::Parse(e.to_string()))?;
            z.push(zk);
            r.push(Complex64::new(re, im));
        }
        if z.len() < 5 {
            return Err(Error::Parse(
                "reflection table needs at least five rows".into(),
            ));
        }
        let z_max = -z[0];
        let dz = (z[z.len() - 1] - z[0]) / (z.len() - 1) as f64;
        let table = Self::from_samples(z_max, dz, r)?;
        if table.z(table.len() - 1) != z[z.len() - 1] {
            return Err(Error::Parse(
                "reflection table grid is not symmetric".into(),
            ));
        }
        Ok(table)
    }

    pub fn to_json_string(&self) -> String {
        let doc = TableDocument {
            z_max: self.z_max,
            dz: self.dz,
            n: self.len(),
            max_unitarity_residual: self.max_unitarity_residual,
            z: self.z_grid(),
            re_r: self.r_values.iter().map(|r| r.re).collect(),
            im_r: self.r_values.iter().map(|r| r.im).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("table document serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: TableDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.re_r.len() != doc.n || doc.im_r.len() != doc.n {
            return Err(Error::Parse(
                "reflection table arrays disagree with n".into(),
            ));
        }
        let values = doc
            .re_r
            .iter()
            .zip(&doc.im_r)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        let mut table = Self::from_samples(doc.z_max, doc.dz, values)?;
        table.max_unitarity_residual = doc.max_unitarity_residual;
        Ok(table)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }
}

fn z_node(z_max: f64, dz: f64, k: usize) -> f64 {
    -z_max + k as f64 * dz
}

pub fn reflection_coefficient(u0: &Potential, z_max: f64, dz: f64) -> Result<ReflectionTable> {
    reflection_coefficient_with(u0, z_max, dz, &JostOptions::default())
}

/// Samples `r(z) = conj(b(z))/a(z)` across the grid. Nodes are solved in
/// parallel and gathered in grid order; the first failing node aborts.
pub fn reflection_coefficient_with(
    u0: &Potential,
    z_max: f64,
    dz: f64,
    opts: &JostOptions,
) -> Result<ReflectionTable> {
    let m = half_count(z_max, dz)?;
    let step = z_max / m as f64;
    let nodes: Vec<_> = (0..=2 * m)
        .into_par_iter()
        .map(|k| jost_solve_with(u0, z_node(z_max, step, k), opts))
        .collect::<Result<_>>()?;
    let residual = nodes
        .iter()
        .map(|t| t.unitarity_residual.abs())
        .fold(0.0, f64::max);
    let values = nodes.iter().map(|t| t.b.conj() / t.a).collect();
    let mut table = ReflectionTable::from_samples(z_max, dz, values)?;
    table.max_unitarity_residual = residual;
    Ok(table)
}
