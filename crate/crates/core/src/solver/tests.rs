use super::*;

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn sech_profile(amplitude: f64, length: f64, n: usize) -> Potential {
    let grid = SpatialGrid::periodic_centered(length, n).unwrap();
    Potential::from_fn(grid, |x| amplitude * sech(x)).unwrap()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn l2_diff(grid: &SpatialGrid, a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() * grid.dx()).sqrt()
}

#[test]
fn zero_data_stays_zero() {
    let u0 = sech_profile(0.0, 200.0, 1024);
    let run = evolve(&u0, &EvolutionConfig::new(0.1, 5.0, vec![0.0, 2.5, 5.0])).unwrap();
    assert_eq!(run.snapshots.len(), 3);
    for s in &run.snapshots {
        assert!(s.field.iter().all(|&u| u == 0.0));
        let q = conserved_quantities(s);
        assert_eq!((q.i1, q.i2, q.energy), (0.0, 0.0, 0.0));
    }
    assert!(run.warnings.is_empty());
}

#[test]
fn propagator_identity_and_single_mode() {
    let grid = SpatialGrid::periodic_centered(2.0 * std::f64::consts::PI, 64).unwrap();
    let f = grid.sample(|x| (3.0 * x).cos() + 0.5 * (5.0 * x).sin());
    assert!(max_diff(&airy_propagator(&grid, &f, 0.0).unwrap(), &f) < 1e-14);

    // cos(ξ₀x) ↦ cos(ξ₀x + tξ₀³)
    let t = 0.37;
    let g = grid.sample(|x| (3.0 * x).cos());
    let want = grid.sample(|x| (3.0 * x + 27.0 * t).cos());
    assert!(max_diff(&airy_propagator(&grid, &g, t).unwrap(), &want) < 1e-13);
}

#[test]
fn propagator_is_a_semigroup() {
    let grid = SpatialGrid::periodic_centered(100.0, 1024).unwrap();
    let f = grid.sample(|x| (-(x - 3.0) * (x - 3.0)).exp() + 0.3 * sech(x + 10.0));
    let once = airy_propagator(&grid, &f, 2.5).unwrap();
    let twice = airy_propagator(&grid, &airy_propagator(&grid, &f, 1.0).unwrap(), 1.5).unwrap();
    assert!(max_diff(&once, &twice) < 1e-12);
}

#[test]
fn propagator_needs_periodic_grid() {
    let grid = SpatialGrid::closed(0.0, 1.0, 16).unwrap();
    assert!(airy_propagator(&grid, &[0.0; 16], 1.0).is_err());
}

#[test]
fn small_amplitude_follows_linear_flow() {
    let u0 = sech_profile(1e-3, 400.0, 4096);
    let run = evolve(&u0, &EvolutionConfig::new(0.01, 10.0, vec![10.0])).unwrap();
    let linear = airy_propagator(u0.grid(), u0.values(), 10.0).unwrap();
    let d = max_diff(&run.snapshots[0].field, &linear);
    assert!(d < 1e-8, "distance to linear flow {d:e}");
}

#[test]
fn sech_has_unit_l2_mass_twice() {
    let grid = SpatialGrid::periodic_centered(200.0, 4096).unwrap();
    let field = grid.sample(sech);
    let q = conserved_on(&grid, &field);
    assert!((q.i2 - 2.0).abs() < 1e-10, "I2 = {}", q.i2);
    assert!((q.i1 - std::f64::consts::PI).abs() < 1e-10);
    // ∫ sech²tanh² + sech⁴ = ∫ sech² = 2
    assert!((q.energy - 2.0).abs() < 1e-10, "E = {}", q.energy);
}

// The dispersive problem is stiff enough that ETDRK4 only reaches its
// asymptotic rate below dt ≈ 0.01; the tolerance needs dt = 0.0025.
#[test]
fn step_halving_at_t50() {
    let u0 = sech_profile(0.3, 400.0, 4096);
    let coarse = evolve(&u0, &EvolutionConfig::new(0.0025, 50.0, vec![50.0])).unwrap();
    let fine = evolve(&u0, &EvolutionConfig::new(0.00125, 50.0, vec![50.0])).unwrap();
    let d = l2_diff(
        u0.grid(),
        &coarse.snapshots[0].field,
        &fine.snapshots[0].field,
    );
    assert!(d < 1e-7, "L2 step-halving difference {d:e}");
}

/// `e(dt)/e(dt/2)` against a `dt/4` reference.
fn order_ratio(scheme: TimeScheme, dt: f64) -> f64 {
    let u0 = sech_profile(0.3, 200.0, 1024);
    let at = |dt: f64| {
        evolve(
            &u0,
            &EvolutionConfig::new(dt, 4.0, vec![4.0]).with_scheme(scheme),
        )
        .unwrap()
        .snapshots
        .remove(0)
        .field
    };
    let reference = at(dt / 4.0);
    let e1 = max_diff(&at(dt), &reference);
    let e2 = max_diff(&at(dt / 2.0), &reference);
    e1 / e2
}

#[test]
fn etdrk4_is_fourth_order() {
    let ratio = order_ratio(TimeScheme::Etdrk4, 0.01);
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn strang_split_is_second_order() {
    let ratio = order_ratio(TimeScheme::StrangSplit, 0.01);
    assert!((2.0..=8.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn schemes_agree() {
    let u0 = sech_profile(0.3, 400.0, 4096);
    let a = evolve(&u0, &EvolutionConfig::new(0.02, 10.0, vec![10.0])).unwrap();
    let b = evolve(
        &u0,
        &EvolutionConfig::new(0.005, 10.0, vec![10.0]).with_scheme(TimeScheme::StrangSplit),
    )
    .unwrap();
    let d = max_diff(&a.snapshots[0].field, &b.snapshots[0].field);
    assert!(d < 1e-6, "{d:e}");
}

#[test]
fn spatial_doubling_is_invisible() {
    let coarse = sech_profile(0.3, 400.0, 4096);
    let fine = sech_profile(0.3, 400.0, 8192);
    let cfg = EvolutionConfig::new(0.02, 20.0, vec![20.0]);
    let a = evolve(&coarse, &cfg).unwrap();
    let b = evolve(&fine, &cfg).unwrap();
    let fb: Vec<f64> = b.snapshots[0].field.iter().step_by(2).copied().collect();
    let d = max_diff(&a.snapshots[0].field, &fb);
    assert!(d < 1e-8, "{d:e}");
}

#[test]
fn conservation_and_reality() {
    let u0 = sech_profile(0.3, 400.0, 4096);
    let run = evolve(
        &u0,
        &EvolutionConfig::new(0.02, 30.0, vec![10.0, 20.0, 30.0]),
    )
    .unwrap();
    let (di2, de) = run.max_relative_drift();
    assert!(di2 < 1e-7, "I2 drift {di2:e}");
    assert!(de < 1e-6, "E drift {de:e}");
    for s in &run.snapshots {
        assert!(s.imag_residue <= 1e-10 * s.sup_norm());
    }
}

#[test]
fn wrap_around_is_reported() {
    let u0 = sech_profile(0.3, 60.0, 512);
    let run = evolve(&u0, &EvolutionConfig::new(0.05, 20.0, vec![20.0])).unwrap();
    assert!(!run.warnings.is_empty());
    let quiet = evolve(
        &sech_profile(0.3, 400.0, 4096),
        &EvolutionConfig::new(0.05, 1.0, vec![1.0]),
    )
    .unwrap();
    assert!(quiet.warnings.is_empty());
}

#[test]
fn snapshots_land_on_record_times() {
    let u0 = sech_profile(0.3, 200.0, 1024);
    let run = evolve(&u0, &EvolutionConfig::new(0.07, 1.0, vec![0.0, 0.33, 1.0])).unwrap();
    let times: Vec<f64> = run.snapshots.iter().map(|s| s.t).collect();
    assert_eq!(times, vec![0.0, 0.33, 1.0]);
    assert_eq!(run.snapshots[0].field.len(), 1024);
    assert!(run.snapshot_at(0.33).is_some());
    assert_eq!(run.conserved.len(), 3);
}

#[test]
fn config_validation() {
    let ok = EvolutionConfig::new(0.1, 1.0, vec![0.5]);
    assert!(ok.validate().is_ok());
    assert!(EvolutionConfig::new(0.0, 1.0, vec![]).validate().is_err());
    assert!(EvolutionConfig::new(0.1, 1.0, vec![2.0])
        .validate()
        .is_err());
    assert!(EvolutionConfig::new(0.1, 1.0, vec![0.5, 0.5])
        .validate()
        .is_err());
    let mut bad = ok.clone();
    bad.dealias_fraction = 0.0;
    assert!(bad.validate().is_err());
    let closed = Potential::from_fn(SpatialGrid::closed(-1.0, 1.0, 9).unwrap(), sech).unwrap();
    assert!(evolve(&closed, &ok).is_err());
}

#[test]
fn interpolant_reproduces_nodes_and_bandlimited_values() {
    let grid = SpatialGrid::periodic_centered(2.0 * std::f64::consts::PI, 32).unwrap();
    let f = |x: f64| 1.0 + (2.0 * x).cos() - 0.3 * (7.0 * x).sin();
    let field = grid.sample(f);
    let interp = SpectralInterpolant::new(&grid, &field);
    for k in [0, 5, 31] {
        assert!((interp.eval(grid.x(k)) - field[k]).abs() < 1e-13);
    }
    for x in [0.123, -2.9, 1.7] {
        assert!((interp.eval(x) - f(x)).abs() < 1e-13);
    }
}

#[test]
fn files_round_trip() {
    let u0 = sech_profile(0.3, 100.0, 256);
    let run = evolve(&u0, &EvolutionConfig::new(0.05, 0.5, vec![0.5])).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run.write_files(dir.path()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("u_t0.csv")).unwrap();
    assert!(csv.starts_with("x,u\n"));
    assert_eq!(csv.lines().count(), 257);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["grid"]["n"], 256);
    assert_eq!(manifest["times"][0], 0.5);
}

#[test]
fn periodic_quadrature_weights_every_node_equally() {
    // regression: a half weight on the first node shows up as spurious
    // drift once radiation reaches the edge of the box
    let grid = SpatialGrid::periodic_centered(10.0, 64).unwrap();
    let q = conserved_on(&grid, &vec![2.0; 64]);
    assert!((q.i1 - 20.0).abs() < 1e-12);
    assert!((q.i2 - 40.0).abs() < 1e-12);
    assert!((q.energy - 160.0).abs() < 1e-12);
    let closed = SpatialGrid::closed(0.0, 1.0, 11).unwrap();
    assert!((conserved_on(&closed, &vec![1.0; 11]).i1 - 1.0).abs() < 1e-14);
}
