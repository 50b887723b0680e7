//! Parameter types and the thermal occupation helpers shared by every other
//! module. Natural units: hbar = k_B = 1.

use crate::error::{bad_param, require_finite};
use crate::tol;
use crate::Result;
use num_complex::Complex64;

/// Static parameters of the two-level system and its coupling to the noise
/// field: level splitting omega, perturbation strength delta entering the
/// decay constant, and coupling g.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    omega: f64,
    delta: f64,
    g: f64,
}

impl SystemParams {
    pub fn new(omega: f64, delta: f64, g: f64) -> Result<Self> {
        require_finite("omega", omega)?;
        require_finite("delta", delta)?;
        require_finite("g", g)?;
        if omega <= 0.0 {
            return Err(bad_param("omega", format!("must be > 0, got {omega}")));
        }
        if delta < 0.0 {
            return Err(bad_param("delta", format!("must be >= 0, got {delta}")));
        }
        if g <= 0.0 {
            return Err(bad_param("g", format!("must be > 0, got {g}")));
        }
        Ok(SystemParams { omega, delta, g })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

/// Complex amplitude of the classical drive component of the noise field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveField {
    lambda_re: f64,
    lambda_im: f64,
}

impl DriveField {
    pub fn new(lambda_re: f64, lambda_im: f64) -> Result<Self> {
        require_finite("lambda_re", lambda_re)?;
        require_finite("lambda_im", lambda_im)?;
        Ok(DriveField {
            lambda_re,
            lambda_im,
        })
    }

    pub fn zero() -> Self {
        DriveField {
            lambda_re: 0.0,
            lambda_im: 0.0,
        }
    }

    pub fn lambda_re(&self) -> f64 {
        self.lambda_re
    }

    pub fn lambda_im(&self) -> f64 {
        self.lambda_im
    }

    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.lambda_re, self.lambda_im)
    }

    pub fn magnitude_squared(&self) -> f64 {
        self.lambda_re * self.lambda_re + self.lambda_im * self.lambda_im
    }
}

/// Bath temperature in energy units (k_B = 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathParams {
    temperature: f64,
}

impl BathParams {
    pub fn new(temperature: f64) -> Result<Self> {
        require_finite("temperature", temperature)?;
        if temperature < 0.0 {
            return Err(bad_param(
                "temperature",
                format!("must be >= 0, got {temperature}"),
            ));
        }
        Ok(BathParams { temperature })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Mean occupation of the bath mode at the system frequency.
    pub fn occupation(&self, sys: &SystemParams) -> f64 {
        occupation_raw(sys.omega(), self.temperature)
    }
}

/// Mean thermal occupation 1/(e^{omega/T} - 1) of a bath mode.
///
/// T = 0 is an explicit branch returning exactly 0. The exponential is taken
/// through expm1, so the high-temperature regime comes out as T/omega - 1/2
/// without cancellation.
pub fn planck_occupation(omega: f64, temperature: f64) -> Result<f64> {
    validate_mode_args(omega, temperature)?;
    Ok(occupation_raw(omega, temperature))
}

/// coth^2(omega/2T) = (2N + 1)^2, the squared thermal weight entering the
/// decay constant. Exactly 1 at T = 0, and clamped to 1 once omega/2T passes
/// `tol::COTH_SATURATION`, beyond which coth is 1 to double precision.
pub fn thermal_weight(omega: f64, temperature: f64) -> Result<f64> {
    validate_mode_args(omega, temperature)?;
    Ok(weight_raw(omega, temperature))
}

fn validate_mode_args(omega: f64, temperature: f64) -> Result<()> {
    require_finite("omega", omega)?;
    require_finite("temperature", temperature)?;
    if omega <= 0.0 {
        return Err(bad_param("omega", format!("must be > 0, got {omega}")));
    }
    if temperature < 0.0 {
        return Err(bad_param(
            "temperature",
            format!("must be >= 0, got {temperature}"),
        ));
    }
    Ok(())
}

pub(crate) fn occupation_raw(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    1.0 / f64::exp_m1(omega / temperature)
}

pub(crate) fn weight_raw(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 || omega / (2.0 * temperature) > tol::COTH_SATURATION {
        return 1.0;
    }
    // coth(x/2) = 1 + 2/(e^x - 1) = 2N + 1 with x = omega/T
    let coth = 1.0 + 2.0 / f64::exp_m1(omega / temperature);
    coth * coth
}
