use std::fmt::Write as _;
use std::path::Path;

use super::{CompareReport, ReportRow};
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

pub fn results_csv(report: &CompareReport) -> String {
    let mut out = String::from("x,t,region,u_num,u_as,err,envelope\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.x, r.t, r.region, r.u_num, r.u_as, r.err, r.envelope
        );
    }
    out
}

pub fn fits_csv(report: &CompareReport) -> String {
    let mut out = String::from("ray,exponent,r_squared\n");
    for f in &report.fits {
        match &f.fit {
            Some(fit) => {
                let _ = writeln!(out, "{},{},{}", f.label, fit.exponent, fit.r_squared);
            }
            None => {
                let _ = writeln!(out, "{},,", f.label);
            }
        }
    }
    out
}

fn manifest(report: &CompareReport) -> serde_json::Value {
    serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": report.config,
        "calibration": report.calibration,
        "degenerate": report.degenerate,
        "rows": report.rows.len(),
        "fits": report.fits,
        "drift": { "i2": report.drift_i2, "energy": report.drift_energy },
        "boundary_fraction": report.boundary_fraction,
        "warnings": report.warnings,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `results.csv`, `fits.csv`, `manifest.json` and `ray_<k>.svg`.
/// Output depends only on the report, so identical runs give identical bytes.
pub fn emit_report(report: &CompareReport, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    write(&out_dir.join("results.csv"), &results_csv(report))?;
    write(&out_dir.join("fits.csv"), &fits_csv(report))?;
    let text = serde_json::to_string_pretty(&manifest(report)).expect("manifest serializes");
    write(&out_dir.join("manifest.json"), &text)?;
    for (k, ray) in report.config.rays.iter().enumerate() {
        let rows: Vec<&ReportRow> = report.rows_for(k).collect();
        if rows.is_empty() {
            continue;
        }
        write(
            &out_dir.join(format!("ray_{k}.svg")),
            &render_svg(&ray.label(), &rows),
        )?;
    }
    Ok(())
}

struct LogAxes {
    t: (f64, f64),
    y: (f64, f64),
}

impl LogAxes {
    fn px(&self, t: f64) -> f64 {
        let (a, b) = self.t;
        MARGIN + (t.log10() - a) / (b - a) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        let (a, b) = self.y;
        let v = y.log10().clamp(a, b);
        HEIGHT - MARGIN - (v - a) / (b - a) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite() && *v > 0.0)
        .map(f64::log10)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo < 1e-3 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn polyline(axes: &LogAxes, points: &[(f64, f64)], colour: &str, dashed: bool) -> String {
    let coords: Vec<String> = points
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|&(t, y)| format!("{:.2},{:.2}", axes.px(t), axes.py(y)))
        .collect();
    let dash = if dashed {
        " stroke-dasharray=\"6 4\""
    } else {
        ""
    };
    let mut out = format!(
        "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\"{dash} points=\"{}\"/>\n",
        coords.join(" ")
    );
    for c in &coords {
        let (cx, cy) = c.split_once(',').expect("formatted pair");
        let _ = writeln!(
            out,
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"3\" fill=\"{colour}\"/>"
        );
    }
    out
}

/// Log–log overlay of `|u_num|`, `|u_as|` and the band `|u_as| ± envelope`
/// against `t` for one ray.
pub fn render_svg(label: &str, rows: &[&ReportRow]) -> String {
    let num: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.u_num.abs())).collect();
    let asy: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.u_as.abs())).collect();
    let upper: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.t, r.u_as.abs() + r.envelope))
        .collect();
    let lower: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.t, r.u_as.abs() - r.envelope))
        .collect();
    let axes = LogAxes {
        t: padded_range(rows.iter().map(|r| r.t)),
        y: padded_range(num.iter().chain(&asy).chain(&upper).map(|p| p.1)),
    };
    let floor = 10f64.powf(axes.y.0);
    let mut band: Vec<String> = upper
        .iter()
        .map(|&(t, y)| format!("{:.2},{:.2}", axes.px(t), axes.py(y)))
        .collect();
    band.extend(
        lower
            .iter()
            .rev()
            .map(|&(t, y)| format!("{:.2},{:.2}", axes.px(t), axes.py(y.max(floor)))),
    );

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
        WIDTH / 2.0,
        escape(label)
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for (value, pixel) in decade_ticks(axes.t).map(|d| (d, axes.px(10f64.powi(d)))) {
        let _ = writeln!(
            svg,
            "<text x=\"{pixel:.2}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e{value}</text>",
            HEIGHT - MARGIN + 16.0
        );
    }
    for (value, pixel) in decade_ticks(axes.y).map(|d| (d, axes.py(10f64.powi(d)))) {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{pixel:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e{value}</text>",
            MARGIN - 6.0
        );
    }
    let _ = writeln!(
        svg,
        "<polygon fill=\"steelblue\" fill-opacity=\"0.2\" stroke=\"none\" points=\"{}\"/>",
        band.join(" ")
    );
    svg.push_str(&polyline(&axes, &num, "black", false));
    svg.push_str(&polyline(&axes, &asy, "crimson", true));
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">t (log)   black: |u_num|   red: |u_as|   band: |u_as| ± envelope</text>",
        MARGIN,
        HEIGHT - 16.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn decade_ticks((lo, hi): (f64, f64)) -> impl Iterator<Item = i32> {
    (lo.ceil() as i32)..=(hi.floor() as i32)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
