//! Relaxation, stationary structure and weak-value dwell times of a two-level
//! particle coupled to a thermal magnetic noise field.
//!
//! Natural units throughout: hbar = k_B = 1. Basis convention: index 0 is the
//! excited level (sigma_z eigenvalue +1), index 1 the ground level, and
//! sigma_plus = |0><1|, so the coherence <sigma_plus> sits in the rho_10 entry
//! and relaxation drives <sigma_z> toward -1.

pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod stationary;
pub mod tol;
pub mod weakmeas;

mod fit;
mod ode;
mod quadrature;

pub use error::{Error, ErrorKind};

pub type Result<T> = std::result::Result<T, Error>;
