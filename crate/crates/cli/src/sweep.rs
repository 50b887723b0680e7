//! Temperature sweep of the dwell time over the dimensionless axis
//! z = T/omega, emitting the normalized F = 2 omega tau_d curve that rises
//! monotonically from its cold floor and saturates at one.

use std::io::{self, Write};
use thermal_dwell::model::{BathParams, DriveField, SystemParams};
use thermal_dwell::stationary::decay_constant;
use thermal_dwell::weakmeas::dwell_thermal;
use thermal_dwell::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

pub struct SweepConfig {
    pub z_min: f64,
    pub z_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub sys: SystemParams,
    pub drive: DriveField,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub z: f64,
    pub temperature: f64,
    pub occupation: f64,
    pub pi_th: f64,
    pub pi_q: f64,
    pub gamma: f64,
    pub tau_d: f64,
    pub f: f64,
}

fn annotate(z: f64, e: Error) -> Error {
    Error::InvalidParameter {
        name: "sweep",
        message: format!("at z = {z}: {e}"),
    }
}

/// Evaluates the decay constant and dwell time on the z grid, in increasing
/// z order. Fully deterministic: identical configs produce identical rows.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.points < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            message: format!("need at least 2 grid points, got {}", cfg.points),
        });
    }
    if !(cfg.z_min < cfg.z_max) {
        return Err(Error::InvalidParameter {
            name: "z_min",
            message: format!("need z_min < z_max, got [{}, {}]", cfg.z_min, cfg.z_max),
        });
    }
    if cfg.z_min < 0.0 {
        return Err(Error::InvalidParameter {
            name: "z_min",
            message: format!("z is a temperature ratio and must be >= 0, got {}", cfg.z_min),
        });
    }
    if cfg.spacing == Spacing::Log && cfg.z_min <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "spacing",
            message: "log spacing requires z_min > 0".to_string(),
        });
    }

    let omega = cfg.sys.omega();
    let n_max = cfg.points - 1;
    let mut rows = Vec::with_capacity(cfg.points);
    for i in 0..cfg.points {
        let frac = i as f64 / n_max as f64;
        let z = match cfg.spacing {
            Spacing::Linear => cfg.z_min + (cfg.z_max - cfg.z_min) * frac,
            Spacing::Log => (cfg.z_min.ln() + (cfg.z_max.ln() - cfg.z_min.ln()) * frac).exp(),
        };
        let temperature = z * omega;
        let bath = BathParams::new(temperature).map_err(|e| annotate(z, e))?;
        let d = decay_constant(&cfg.sys, &bath, &cfg.drive).map_err(|e| annotate(z, e))?;
        let tau_d = dwell_thermal(&cfg.sys, &bath, &cfg.drive).map_err(|e| annotate(z, e))?;
        rows.push(SweepRow {
            z,
            temperature,
            occupation: bath.occupation(&cfg.sys),
            pi_th: d.pi_th,
            pi_q: d.pi_q,
            gamma: d.gamma,
            tau_d,
            f: 2.0 * omega * tau_d,
        });
    }
    Ok(rows)
}

/// CSV with 17 significant digits per value and LF line endings.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut w: W) -> io::Result<()> {
    writeln!(w, "z,temperature,occupation,pi_th,pi_q,gamma,tau_d,f")?;
    for r in rows {
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.z, r.temperature, r.occupation, r.pi_th, r.pi_q, r.gamma, r.tau_d, r.f
        )?;
    }
    Ok(())
}
