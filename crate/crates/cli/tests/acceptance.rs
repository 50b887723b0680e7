//! Acceptance suite: one test per shipped guarantee, each checking the
//! stated tolerance. Test names double as the pass/fail report lines.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thermal_dwell::dynamics::{
    evolve_bloch, evolve_density, DensityMatrix, DissipatorMode, EvolutionConfig,
};
use thermal_dwell::model::{BathParams, DriveField, SystemParams};
use thermal_dwell::stationary::{consistency_report, decay_constant};
use thermal_dwell::weakmeas::{
    dwell_closed, dwell_integral, dwell_thermal, ladder_decay, weak_projection, LadderConfig,
    MeasurementWindow,
};
use thermal_dwell_cli::sweep::{run_sweep, Spacing, SweepConfig, SweepRow};

fn reference_system() -> SystemParams {
    SystemParams::new(1.0, 0.5, 1.0).unwrap()
}

fn reference_drive() -> DriveField {
    DriveField::new(0.0, 1.0).unwrap()
}

fn reference_sweep_rows() -> Vec<SweepRow> {
    let cfg = SweepConfig {
        z_min: 0.0,
        z_max: 100.0,
        points: 200,
        spacing: Spacing::Linear,
        sys: reference_system(),
        drive: reference_drive(),
    };
    run_sweep(&cfg).unwrap()
}

#[test]
fn criterion_01_quadrature_dwell_matches_the_closed_form() {
    for gamma in [1.0, 2.5] {
        for i in 0..20 {
            let x = 1e-3 * 10f64.powf(4.0 * i as f64 / 19.0); // gamma * tau in [1e-3, 10]
            let tau = x / gamma;
            let window = MeasurementWindow::new(0.0, tau, 0, 0.0).unwrap();
            let by_quadrature = dwell_integral(&window, gamma).unwrap();
            let closed = dwell_closed(gamma, tau).unwrap();
            assert!(
                (by_quadrature - closed).abs() <= 1e-10,
                "gamma tau = {x}: {by_quadrature} vs {closed}"
            );
        }
    }
}

#[test]
fn criterion_02_thermal_dwell_equals_the_decay_resummation() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for i in 0..1000 {
        let sys = SystemParams::new(
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.05..5.0),
            rng.gen_range(0.1..3.0),
        )
        .unwrap();
        let drive =
            DriveField::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0)).unwrap();
        // keep a slice of exactly-cold draws in the mix
        let temperature = if i % 10 == 0 { 0.0 } else { rng.gen_range(0.0..20.0) };
        let bath = BathParams::new(temperature).unwrap();

        let gamma = decay_constant(&sys, &bath, &drive).unwrap().gamma;
        let expected = 1.0 / (2.0 * sys.omega() + gamma);
        let tau = dwell_thermal(&sys, &bath, &drive).unwrap();
        assert!(
            (tau - expected).abs() <= 1e-12 * expected.abs(),
            "draw {i}: {tau} vs {expected}"
        );
    }
}

#[test]
fn criterion_03_dwell_ratio_rises_from_six_sevenths_to_saturation() {
    let rows = reference_sweep_rows();
    assert_eq!(rows.len(), 200);
    assert!((rows[0].f - 6.0 / 7.0).abs() <= 1e-12);
    for pair in rows.windows(2) {
        assert!(pair[1].f > pair[0].f, "f not strictly increasing at z = {}", pair[1].z);
    }
    assert!(rows.last().unwrap().f > 0.999);
    assert!(rows.iter().all(|r| r.f < 1.0));
}

#[test]
fn criterion_04_decay_constant_falls_with_temperature() {
    let rows = reference_sweep_rows();
    for pair in rows.windows(2) {
        assert!(
            pair[1].gamma < pair[0].gamma,
            "gamma not strictly decreasing at z = {}",
            pair[1].z
        );
    }
    // independent cold evaluation of the same constant
    let sys = reference_system();
    let drive = reference_drive();
    let g_omega = sys.g() * sys.omega();
    let gamma0 = (2.0 * sys.delta() * drive.lambda_im() / g_omega)
        / (1.0 + 2.0 * drive.magnitude_squared() / (g_omega * g_omega));
    assert!((rows[0].gamma - gamma0).abs() <= 1e-12 * gamma0);
}

#[test]
fn criterion_05_undriven_relaxation_reaches_the_thermal_point() {
    let sys = SystemParams::new(1.0, 0.5, 1.0).unwrap();
    let drive = DriveField::zero();
    for z in [0.0, 0.5, 1.0, 5.0] {
        let bath = BathParams::new(z * sys.omega()).unwrap();
        let weight = 2.0 * bath.occupation(&sys) + 1.0;
        // 50 lifetimes of the slowest (coherence) mode
        let horizon = 50.0 / (2.0 * weight);
        let cfg = EvolutionConfig::new(horizon, 25_000, DissipatorMode::Standard).unwrap();

        let start = DensityMatrix::x_polarized();
        let density = evolve_density(&start, &sys, &bath, &drive, &cfg).unwrap();
        for i in 0..density.len() {
            assert!((density.trace(i) - 1.0).abs() <= 1e-9, "trace drift at sample {i}");
            assert!(density.min_eigenvalue(i) >= -1e-9, "positivity loss at sample {i}");
        }
        let last = density.len() - 1;
        assert!(
            (density.sigma_z(last) + 1.0 / weight).abs() <= 1e-6,
            "z = {z}: sz = {} vs {}",
            density.sigma_z(last),
            -1.0 / weight
        );

        let bloch = evolve_bloch(&start.to_bloch(), &sys, &bath, &drive, &cfg).unwrap();
        assert!((bloch.final_sp() - density.sigma_plus(last)).norm() <= 1e-8);
        assert!((bloch.final_sz() - density.sigma_z(last)).abs() <= 1e-8);
    }
}

#[test]
fn criterion_06_coherence_decay_rate_is_recovered_by_fit() {
    let sys = SystemParams::new(1.3, 0.5, 0.9).unwrap();
    let bath = BathParams::new(0.7).unwrap();
    let drive = DriveField::zero();
    let rate = 2.0 * sys.g() * sys.g() * sys.omega() * (2.0 * bath.occupation(&sys) + 1.0);

    let cfg = EvolutionConfig::new(3.0 / rate, 6000, DissipatorMode::Standard).unwrap();
    let ev = evolve_density(&DensityMatrix::x_polarized(), &sys, &bath, &drive, &cfg).unwrap();

    let h = cfg.step_size();
    let (mut ts, mut logs) = (Vec::new(), Vec::new());
    for i in 0..ev.len() {
        ts.push(i as f64 * h);
        logs.push(ev.sigma_plus(i).norm().ln());
    }
    let n = ts.len() as f64;
    let (mx, my) = (ts.iter().sum::<f64>() / n, logs.iter().sum::<f64>() / n);
    let sxx: f64 = ts.iter().map(|t| (t - mx) * (t - mx)).sum();
    let sxy: f64 = ts.iter().zip(&logs).map(|(t, l)| (t - mx) * (l - my)).sum();
    let fitted = -sxy / sxx;

    assert!(
        (fitted - rate).abs() <= 1e-4 * rate,
        "fitted {fitted} vs analytic {rate}"
    );
}

#[test]
fn criterion_07_projection_is_one_at_entry_and_zero_at_exit() {
    let window = MeasurementWindow::new(0.0, 2.0, 0, 0.0).unwrap();
    let entry = weak_projection(0.0, &window, 1.0).unwrap();
    assert_eq!(entry.re, 1.0);
    assert_eq!(entry.im, 0.0);
    let exit = weak_projection(2.0, &window, 1.0).unwrap();
    assert_eq!(exit.re, 0.0);
    assert_eq!(exit.im, 0.0);

    let midpoint = weak_projection(1.0, &window, 1.0).unwrap();
    assert!((midpoint.re - 1.0 / (1.0 + std::f64::consts::E)).abs() <= 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for _ in 0..1000 {
        let gamma = (rng.gen_range(1e-2f64.ln()..10f64.ln())).exp();
        let t_i = rng.gen_range(-5.0..5.0);
        let tau = rng.gen_range(1e-3..20.0);
        let w = MeasurementWindow::new(t_i, t_i + tau, 0, 0.0).unwrap();
        let t = t_i + tau * rng.gen_range(0.0..1.0);
        let p = weak_projection(t, &w, gamma).unwrap();
        assert_eq!(p.im, 0.0, "projection picked up an imaginary part");
        assert!((0.0..=1.0).contains(&p.re), "projection {} outside [0,1]", p.re);
    }
}

#[test]
fn criterion_08_ladder_decay_matches_the_golden_rule_rate() {
    let started = Instant::now();
    let cfg = LadderConfig::new(400, 0.05, 0.05, 20.0, 20_000).unwrap();
    let window = MeasurementWindow::new(0.0, 20.0, 0, 0.05).unwrap();
    let out = ladder_decay(&cfg, &window).unwrap();

    let golden_rule = std::f64::consts::TAU * cfg.coupling() * cfg.coupling() / cfg.delta_e();
    assert!(
        (out.rate - golden_rule).abs() <= 0.05 * golden_rule,
        "fitted {} vs golden rule {golden_rule}",
        out.rate
    );
    assert!(out.max_conservation_defect <= 1e-8);
    assert!(started.elapsed().as_secs() < 30, "ladder run exceeded its time budget");
}

#[test]
fn criterion_09_recorded_discrepancies_stay_nonzero() {
    // the unhalved dissipator bleeds trace from the excited state
    let sys = reference_system();
    let cold = BathParams::new(0.0).unwrap();
    let cfg = EvolutionConfig::new(6.0, 6000, DissipatorMode::Verbatim).unwrap();
    let ev = evolve_density(&DensityMatrix::excited(), &sys, &cold, &DriveField::zero(), &cfg)
        .unwrap();
    let trace_loss = 1.0 - ev.trace(ev.len() - 1);
    assert!(trace_loss > 0.4, "verbatim trace loss {trace_loss} vanished");

    // the driven transport fixed point is not the printed stationary state
    let report = consistency_report(&sys, &cold, &reference_drive(), 40.0).unwrap();
    assert!(report.settled);
    let driven_gap = report.abs_diff.sp_re.max(report.abs_diff.sz);
    assert!(driven_gap > 1e-3, "driven fixed-point gap {driven_gap} vanished");

    // the compact cold dwell expression carries a doubled thermal floor
    let drive = reference_drive();
    let d = decay_constant(&sys, &cold, &drive).unwrap();
    let g_omega = sys.g() * sys.omega();
    let x = d.pi_q * (1.0 + g_omega * g_omega / drive.magnitude_squared());
    let short_form = x / (1.0 + 2.0 * x);
    let actual = dwell_thermal(&sys, &cold, &drive).unwrap();
    let cold_gap = (short_form - actual).abs();
    assert!(cold_gap > 1e-3, "cold short-form gap {cold_gap} vanished");
}

#[test]
fn criterion_10_sweep_output_is_deterministic() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let config = manifest.join("../../configs/reference.json");
    let dir = tempfile::tempdir().unwrap();

    let mut runs = Vec::new();
    for name in ["first.csv", "second.csv"] {
        let path = dir.path().join(name);
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_thermal-dwell"))
            .args(["sweep", "--config", config.to_str().unwrap()])
            .args(["--output", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        runs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(runs[0], runs[1], "two sweep runs differ");

    let golden = std::fs::read(manifest.join("tests/data/reference_sweep.csv")).unwrap();
    assert_eq!(runs[0], golden, "sweep output drifted from the recorded run");
}
