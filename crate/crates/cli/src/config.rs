//! Physics-parameter resolution: flag, then config file, then the reference
//! configuration the repository documents (g = omega = 1, delta = 1/2,
//! lambda = i, cold bath).

use crate::args::SharedArgs;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;
use thermal_dwell::model::{BathParams, DriveField, SystemParams};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub omega: Option<f64>,
    pub delta: Option<f64>,
    pub g: Option<f64>,
    pub lambda_re: Option<f64>,
    pub lambda_im: Option<f64>,
    pub temperature: Option<f64>,
}

pub fn load(path: &Path) -> Result<FileConfig, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed config {}: {e}", path.display()))
}

/// The six resolved physics inputs, echoed verbatim into JSON output.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Inputs {
    pub omega: f64,
    pub delta: f64,
    pub g: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub temperature: f64,
}

pub struct Resolved {
    pub sys: SystemParams,
    pub bath: BathParams,
    pub drive: DriveField,
    pub inputs: Inputs,
}

pub fn resolve(shared: &SharedArgs, file: &FileConfig) -> thermal_dwell::Result<Resolved> {
    let inputs = Inputs {
        omega: shared.omega.or(file.omega).unwrap_or(1.0),
        delta: shared.delta.or(file.delta).unwrap_or(0.5),
        g: shared.g.or(file.g).unwrap_or(1.0),
        lambda_re: shared.lambda_re.or(file.lambda_re).unwrap_or(0.0),
        lambda_im: shared.lambda_im.or(file.lambda_im).unwrap_or(1.0),
        temperature: shared.temperature.or(file.temperature).unwrap_or(0.0),
    };
    Ok(Resolved {
        sys: SystemParams::new(inputs.omega, inputs.delta, inputs.g)?,
        bath: BathParams::new(inputs.temperature)?,
        drive: DriveField::new(inputs.lambda_re, inputs.lambda_im)?,
        inputs,
    })
}
