use thiserror::Error;

/// Coarse failure classification, used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// The inputs themselves are unusable.
    Parameter,
    /// The computation could not reach its accuracy or convergence target.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("degenerate decay constant: {0}")]
    DegenerateDecay(String),

    #[error("step too coarse: h*rate = {h_rate:.3e} exceeds {limit:.1e}; raise the step count")]
    StepTooCoarse { h_rate: f64, limit: f64 },

    #[error("evolved state drifted at t = {t}: {detail}")]
    StateDrift { t: f64, detail: String },

    #[error("t = {t} lies outside the measurement window [{t_i}, {t_f}]")]
    OutsideWindow { t: f64, t_i: f64, t_f: f64 },

    #[error("degenerate measurement window: denominator modulus {modulus:.3e}")]
    DegenerateWindow { modulus: f64 },

    #[error("singular matrix-element denominator (gamma and level detuning both vanish)")]
    SingularDenominator,

    #[error("quadrature stalled at error {achieved:.3e} with target {requested:.3e}")]
    QuadratureTolerance { requested: f64, achieved: f64 },

    #[error("evolution not settled: trailing relative change {residual:.3e}")]
    NotSettled { residual: f64 },

    #[error("undriven stationary state disagrees with the integrated limit by {max_diff:.3e}")]
    StationaryMismatch { max_diff: f64 },

    #[error("fit domain: {0}")]
    FitDomain(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter { .. }
            | Error::InvalidState(_)
            | Error::DegenerateDecay(_)
            | Error::StepTooCoarse { .. }
            | Error::OutsideWindow { .. }
            | Error::DegenerateWindow { .. }
            | Error::SingularDenominator => ErrorKind::Parameter,
            Error::StateDrift { .. }
            | Error::QuadratureTolerance { .. }
            | Error::NotSettled { .. }
            | Error::StationaryMismatch { .. }
            | Error::FitDomain(_) => ErrorKind::Numerical,
        }
    }
}

pub(crate) fn bad_param(name: &'static str, message: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        message: message.into(),
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> crate::Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(bad_param(name, format!("must be finite, got {value}")))
    }
}
