//! Subcommand execution and exit-code policy: 0 on success, 1 for parameter
//! or usage problems, 2 for numerical/convergence failures.

use crate::args::{
    Cli, Command, ConsistencyArgs, DissipatorArg, DwellArgs, DwellMode, EvolveArgs,
    InitialStateArg, LadderArgs, RepresentationArg, SpacingArg, SweepArgs,
};
use crate::config::{self, Inputs, Resolved};
use crate::output::{human_lines, to_json_string};
use crate::sweep::{run_sweep, write_csv, Spacing, SweepConfig};
use clap::Parser;
use serde_json::{json, Value};
use std::f64::consts::TAU;
use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use thermal_dwell::dynamics::{
    evolve_bloch, evolve_density, DensityMatrix, DissipatorMode, EvolutionConfig,
};
use thermal_dwell::stationary::{consistency_report, decay_constant, stationary_state};
use thermal_dwell::weakmeas::{
    dwell_approx, dwell_closed, dwell_integral, dwell_resonant, dwell_thermal, ladder_decay,
    LadderConfig, MeasurementWindow,
};
use thermal_dwell::ErrorKind;

pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<thermal_dwell::Error> for Failure {
    fn from(e: thermal_dwell::Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Parameter => 1,
            ErrorKind::Numerical => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

/// Parses and executes one invocation, returning the process exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file_cfg = match &cli.config {
        Some(p) => config::load(p).map_err(|message| Failure { code: 1, message })?,
        None => config::FileConfig::default(),
    };
    let resolved = config::resolve(&cli.shared, &file_cfg)?;
    let body = match &cli.command {
        Command::Stationary => cmd_stationary(&resolved),
        Command::Decay => cmd_decay(&resolved)?,
        Command::Dwell(a) => cmd_dwell(&resolved, a)?,
        Command::Evolve(a) => cmd_evolve(&resolved, a)?,
        Command::Ladder(a) => cmd_ladder(&resolved, a)?,
        Command::Consistency(a) => cmd_consistency(&resolved, a)?,
        Command::Sweep(a) => cmd_sweep(&resolved, a)?,
    };
    emit(&cli, body, &resolved.inputs);
    Ok(())
}

fn emit(cli: &Cli, mut body: Value, inputs: &Inputs) {
    if cli.json {
        body.as_object_mut()
            .expect("command output is always an object")
            .insert(
                "inputs".to_string(),
                serde_json::to_value(inputs).expect("inputs are plain numbers"),
            );
        println!("{}", to_json_string(&body));
    } else {
        print!("{}", human_lines(&body));
    }
}

fn cmd_stationary(r: &Resolved) -> Value {
    let s = stationary_state(&r.sys, &r.bath, &r.drive);
    json!({ "sp_re": s.sp().re, "sp_im": s.sp().im, "sz": s.sz() })
}

fn cmd_decay(r: &Resolved) -> Result<Value, Failure> {
    let d = decay_constant(&r.sys, &r.bath, &r.drive)?;
    Ok(json!({ "gamma": d.gamma, "alpha": d.alpha, "pi_th": d.pi_th, "pi_q": d.pi_q }))
}

fn cmd_dwell(r: &Resolved, a: &DwellArgs) -> Result<Value, Failure> {
    let gamma = decay_constant(&r.sys, &r.bath, &r.drive)?.gamma;
    let resonant_window = 1.0 / r.sys.omega();
    let fixed_window = matches!(a.mode, DwellMode::Resonant | DwellMode::Thermal);
    if fixed_window && a.tau_m.is_some() {
        log::warn!("this mode fixes the window at tau_m = 1/omega; --tau-m is ignored");
    }
    let tau_m = if fixed_window {
        resonant_window
    } else {
        a.tau_m.unwrap_or(resonant_window)
    };
    let (mode, tau_d) = match a.mode {
        DwellMode::Integral => {
            let w = MeasurementWindow::new(0.0, tau_m, 0, 0.0)?;
            ("integral", dwell_integral(&w, gamma)?)
        }
        DwellMode::Closed => ("closed", dwell_closed(gamma, tau_m)?),
        DwellMode::Approx => ("approx", dwell_approx(gamma, tau_m)?),
        DwellMode::Resonant => ("resonant", dwell_resonant(&r.sys, gamma)?),
        DwellMode::Thermal => ("thermal", dwell_thermal(&r.sys, &r.bath, &r.drive)?),
    };
    Ok(json!({ "mode": mode, "gamma": gamma, "tau_m": tau_m, "tau_d": tau_d }))
}

fn cmd_evolve(r: &Resolved, a: &EvolveArgs) -> Result<Value, Failure> {
    let mode = match a.dissipator {
        DissipatorArg::Standard => DissipatorMode::Standard,
        DissipatorArg::Verbatim => DissipatorMode::Verbatim,
    };
    let cfg = EvolutionConfig::new(a.t_max, a.steps, mode)?.with_hamiltonian(a.with_hamiltonian);
    let initial = match a.initial {
        InitialStateArg::Excited => DensityMatrix::excited(),
        InitialStateArg::Ground => DensityMatrix::ground(),
        InitialStateArg::Mixed => DensityMatrix::maximally_mixed(),
        InitialStateArg::XPolarized => DensityMatrix::x_polarized(),
    };
    let (representation, sp, sz, trace, min_eig) = match a.representation {
        RepresentationArg::Density => {
            let run = evolve_density(&initial, &r.sys, &r.bath, &r.drive, &cfg)?;
            if let Some(path) = &a.output {
                run.write_csv(BufWriter::new(File::create(path)?))?;
            }
            let last = run.len() - 1;
            (
                "density",
                run.sigma_plus(last),
                run.sigma_z(last),
                run.trace(last),
                run.min_eigenvalue(last),
            )
        }
        RepresentationArg::Bloch => {
            let run = evolve_bloch(&initial.to_bloch(), &r.sys, &r.bath, &r.drive, &cfg)?;
            if let Some(path) = &a.output {
                run.write_csv(BufWriter::new(File::create(path)?))?;
            }
            let sp = run.final_sp();
            let sz = run.final_sz();
            let min_eig = 0.5 * (1.0 - (sz * sz + 4.0 * sp.norm_sqr()).sqrt());
            ("bloch", sp, sz, 1.0, min_eig)
        }
    };
    Ok(json!({
        "dissipator": match a.dissipator {
            DissipatorArg::Standard => "standard",
            DissipatorArg::Verbatim => "verbatim",
        },
        "representation": representation,
        "t_max": a.t_max,
        "steps": a.steps,
        "re_sp": sp.re,
        "im_sp": sp.im,
        "sz": sz,
        "trace": trace,
        "min_eigenvalue": min_eig,
    }))
}

fn cmd_ladder(r: &Resolved, a: &LadderArgs) -> Result<Value, Failure> {
    let _ = r; // the ladder is parameterized by its own config, not the bath
    let cfg = LadderConfig::new(a.n_levels, a.delta_e, a.coupling, a.t_max, a.steps)?;
    let window = MeasurementWindow::new(0.0, a.t_max, a.k, a.delta_e)?;
    let out = ladder_decay(&cfg, &window)?;
    if let Some(path) = &a.output {
        out.write_csv(BufWriter::new(File::create(path)?))?;
    }
    Ok(json!({
        "rate": out.rate,
        "r_squared": out.r_squared,
        "conservation_defect": out.max_conservation_defect,
        "golden_rule": TAU * a.coupling * a.coupling / a.delta_e,
    }))
}

fn cmd_consistency(r: &Resolved, a: &ConsistencyArgs) -> Result<Value, Failure> {
    let horizon = a.horizon.unwrap_or_else(|| {
        // long enough for the slowest (coherence) mode to settle to 1e-8
        let n = r.bath.occupation(&r.sys);
        100.0 / (r.sys.g() * r.sys.g() * r.sys.omega() * (2.0 * n + 1.0))
    });
    let report = consistency_report(&r.sys, &r.bath, &r.drive, horizon)?;
    let mut v = serde_json::to_value(&report).expect("report is plain data");
    v.as_object_mut()
        .expect("report serializes to an object")
        .insert("horizon".to_string(), json!(horizon));
    Ok(v)
}

fn cmd_sweep(r: &Resolved, a: &SweepArgs) -> Result<Value, Failure> {
    let cfg = SweepConfig {
        z_min: a.z_min,
        z_max: a.z_max,
        points: a.points,
        spacing: match a.spacing {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        },
        sys: r.sys,
        drive: r.drive,
    };
    let rows = run_sweep(&cfg)?;
    write_csv(&rows, BufWriter::new(File::create(&a.output)?))?;
    Ok(json!({
        "points": rows.len(),
        "z_min": a.z_min,
        "z_max": a.z_max,
        "f_first": rows.first().expect("at least two rows").f,
        "f_last": rows.last().expect("at least two rows").f,
        "output": a.output.display().to_string(),
    }))
}

