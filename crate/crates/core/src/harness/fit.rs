use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law `err ≈ e^{intercept}·t^{exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Fits a straight line to `(log t, log err)`.
///
/// A series with constant `err` has no variance to explain; it is reported
/// with `r² = 1` since the line reproduces it exactly.
pub fn fit_decay(series: &[(f64, f64)]) -> Result<DecayFit> {
    if series.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a decay fit needs at least 3 points, got {}",
            series.len()
        )));
    }
    if let Some(&(t, e)) = series
        .iter()
        .find(|&&(t, e)| !(t.is_finite() && t > 0.0 && e.is_finite() && e > 0.0))
    {
        return Err(Error::InvalidArgument(format!(
            "decay fit needs positive finite (t, err), got ({t}, {e})"
        )));
    }
    let n = series.len() as f64;
    let logs: Vec<(f64, f64)> = series.iter().map(|&(t, e)| (t.ln(), e.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = logs.iter().map(|&(_, y)| (y - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument(
            "decay fit needs at least two distinct times".into(),
        ));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = logs
        .iter()
        .map(|&(x, y)| (y - intercept - exponent * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(DecayFit {
        exponent,
        intercept,
        r_squared,
        n_points: series.len(),
    })
}

/// Reads a `t,err` series with a header line.
pub fn read_series_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("series row {k}: {e}")))?;
        if record.len() < 2 {
            return Err(Error::Parse(format!("series row {k} needs two columns")));
        }
        let field = |i: usize| -> Result<f64> {
            record[i]
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("series row {k}, column {i}: {e}")))
        };
        out.push((field(0)?, field(1)?));
    }
    Ok(out)
}
