use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mkdv_core::harness::{emit_report, fit_decay, read_series_csv, ProfileData};
use mkdv_core::{
    evolve, reflection_coefficient, run_compare, Error, ExperimentConfig, PainleveWindow, Potential,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "mkdv",
    version,
    about = "Defocusing mKdV: scattering data, asymptotics and a reference solver"
)]
struct Cli {
    /// Worker threads for the parallel parts (scattering sweep).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for synthetic noise; only `fit --synthetic-exponent` draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Reflection coefficient of the configured profile.
    Scatter(Common),
    /// Evolve the configured profile and write one snapshot per time.
    Evolve(Common),
    /// Tabulate the Painlevé II solution with P(s) ~ rho·Ai(s).
    Painleve {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = -12.0, allow_hyphen_values = true)]
        s_min: f64,
        #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
        s_max: f64,
        #[arg(long, default_value_t = 1e-3)]
        ds: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full comparison of the asymptotic formulas against the solver.
    Compare(Common),
    /// Power-law fit of a `t,err` series.
    Fit {
        /// CSV with header and columns t, err.
        #[arg(long, conflicts_with = "synthetic_exponent")]
        input: Option<PathBuf>,
        /// Fit `t^exponent·(1 + noise·U(−1,1))` on a geometric time ladder instead.
        #[arg(long, allow_hyphen_values = true)]
        synthetic_exponent: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = 8)]
        points: usize,
        /// Also write `fit.json` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn create_dir(dir: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("json serializes");
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn synthetic_series(exponent: f64, noise: f64, points: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..points)
        .map(|k| {
            let t = 25.0 * 2f64.powf(k as f64 / 2.0);
            let u: f64 = rng.random_range(-1.0..1.0);
            (t, t.powf(exponent) * (1.0 + noise * u))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Scatter(Common { config, out }) => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let data = ProfileData::load(&cfg.profile)?;
            let u0 = data.scattering_potential(&cfg.scattering)?;
            let table = reflection_coefficient(&u0, cfg.scattering.z_max, cfg.scattering.dz)?;
            create_dir(&out)?;
            table.write_csv(&out.join("reflection.csv"))?;
            table.write_json(&out.join("reflection.json"))?;
            println!(
                "{}",
                serde_json::json!({
                    "nodes": table.len(),
                    "max_unitarity_residual": table.max_unitarity_residual(),
                    "symmetry_defect": table.symmetry_defect(),
                    "max_modulus": table.max_modulus(),
                })
            );
        }
        Command::Evolve(Common { config, out }) => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let data = ProfileData::load(&cfg.profile)?;
            let u0 = Potential::from_fn(cfg.solver_grid()?, |x| data.eval(x))?;
            let run = evolve(&u0, &cfg.evolution_config())?;
            run.write_files(&out)?;
            let (i2, energy) = run.max_relative_drift();
            println!(
                "{}",
                serde_json::json!({ "snapshots": run.snapshots.len(), "drift_i2": i2, "drift_energy": energy, "warnings": run.warnings })
            );
        }
        Command::Painleve {
            rho,
            s_min,
            s_max,
            ds,
            out,
        } => {
            let sol = PainleveWindow { s_min, s_max, ds }.solve(rho)?;
            create_dir(&out)?;
            sol.write_csv(&out.join("painleve.csv"))?;
            println!(
                "{}",
                serde_json::json!({ "rho": rho, "nodes": sol.len(), "max_residual": sol.max_residual() })
            );
        }
        Command::Compare(Common { config, out }) => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let report = run_compare(&cfg)?;
            emit_report(&report, &out)?;
            println!(
                "{}",
                serde_json::json!({ "rows": report.rows.len(), "calibration": report.calibration, "fits": report.fits })
            );
        }
        Command::Fit {
            input,
            synthetic_exponent,
            noise,
            points,
            out,
        } => {
            let series = match (input, synthetic_exponent) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Io { path, source: e })?;
                    read_series_csv(&text)?
                }
                (None, Some(exponent)) => synthetic_series(exponent, noise, points, cli.seed),
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "fit needs --input or --synthetic-exponent".into(),
                    ))
                }
            };
            let fit = fit_decay(&series)?;
            let value = serde_json::to_value(fit).expect("fit serializes");
            if let Some(dir) = out {
                create_dir(&dir)?;
                write_json(&dir.join("fit.json"), &value)?;
            }
            println!("{value}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!(
                "{}",
                serde_json::json!({ "error": "threads", "message": e.to_string() })
            );
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.kind(), "message": e.to_string() })
            );
            ExitCode::from(1)
        }
    }
}
