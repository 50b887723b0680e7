//! Numeric tolerances shared across the crate, named so tests and library
//! code agree on one value per concern.

/// Hermiticity defect accepted when constructing a density matrix.
pub const HERMITICITY: f64 = 1e-12;

/// Deviation of the trace from one accepted on construction.
pub const UNIT_TRACE: f64 = 1e-12;

/// Eigenvalues may undershoot zero by this much on construction.
pub const POSITIVITY: f64 = 1e-10;

/// Positivity slack for states produced by integration; looser than the
/// construction tolerance to absorb accumulated roundoff.
pub const EVOLVED_POSITIVITY: f64 = 1e-9;

/// Trace drift tolerated over a full trace-preserving evolution.
pub const EVOLVED_TRACE: f64 = 1e-9;

/// Hermiticity drift tolerated over a full evolution.
pub const EVOLVED_HERMITICITY: f64 = 1e-10;

/// Step size times the fastest generator rate above this draws a warning.
pub const STEP_WARN: f64 = 0.01;

/// Step size times the fastest generator rate above this is refused.
pub const STEP_REFUSE: f64 = 0.1;

/// Absolute quadrature target for the dwell integral, one order sharper than
/// the closed-form comparison it backs.
pub const QUADRATURE_ABS: f64 = 1e-12;

/// Relative max-norm change over the trailing tenth of a run below which an
/// evolution counts as settled.
pub const SETTLED: f64 = 1e-8;

/// Smallest denominator modulus accepted in the weak-value ratio.
pub const WINDOW_DEGENERACY: f64 = 1e-30;

/// gamma*tau below this switches the closed dwell form to its series to avoid
/// cancellation in 1 - x/(e^x - 1).
pub const DWELL_SERIES_CUTOFF: f64 = 1e-4;

/// gamma*tau above this voids the quadratic dwell approximation.
pub const APPROX_VALIDITY: f64 = 0.1;

/// coth(x) differs from 1 by less than double precision beyond this argument.
pub const COTH_SATURATION: f64 = 20.0;
