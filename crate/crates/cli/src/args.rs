//! Command-line surface. Physics flags are global so they can follow the
//! subcommand; unset values fall back to the config file, then to the
//! documented reference configuration.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "thermal-dwell",
    version,
    about = "Dwell times, decay constants and relaxation dynamics of a two-level system in thermal magnetic noise"
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: SharedArgs,

    /// JSON file with the physics parameters; explicit flags override it
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Emit one JSON object instead of human-readable lines
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct SharedArgs {
    /// Level splitting (default 1)
    #[arg(long, global = true)]
    pub omega: Option<f64>,

    /// Perturbation strength (default 0.5)
    #[arg(long, global = true)]
    pub delta: Option<f64>,

    /// System-bath coupling (default 1)
    #[arg(long, global = true)]
    pub g: Option<f64>,

    /// Real part of the drive amplitude (default 0)
    #[arg(long, global = true)]
    pub lambda_re: Option<f64>,

    /// Imaginary part of the drive amplitude (default 1)
    #[arg(long, global = true)]
    pub lambda_im: Option<f64>,

    /// Bath temperature (default 0)
    #[arg(long, global = true)]
    pub temperature: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form stationary Pauli expectations
    Stationary,
    /// Decay constant with its thermal and quantum contributions
    Decay,
    /// Dwell time in the requested formulation
    Dwell(DwellArgs),
    /// Integrate the master equation and export the time series
    Evolve(EvolveArgs),
    /// Integrate the finite amplitude ladder and fit the survival decay
    Ladder(LadderArgs),
    /// Compare the closed-form stationary state against the settled dynamics
    Consistency(ConsistencyArgs),
    /// Sweep the dwell time over dimensionless temperature z = T/omega
    Sweep(SweepArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DwellMode {
    /// Adaptive quadrature of the weak projection
    Integral,
    /// Closed form of the same integral
    Closed,
    /// Short-window quadratic truncation
    Approx,
    /// Resonant window tau_m = 1/omega
    Resonant,
    /// Temperature-dependent resonant dwell time
    Thermal,
}

#[derive(Args, Debug)]
pub struct DwellArgs {
    #[arg(long, value_enum)]
    pub mode: DwellMode,

    /// Measurement window length; defaults to the resonant choice 1/omega
    #[arg(long)]
    pub tau_m: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DissipatorArg {
    Standard,
    Verbatim,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitialStateArg {
    Excited,
    Ground,
    Mixed,
    XPolarized,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepresentationArg {
    Density,
    Bloch,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[arg(long, value_enum, default_value_t = DissipatorArg::Standard)]
    pub dissipator: DissipatorArg,

    #[arg(long, default_value_t = 5.0)]
    pub t_max: f64,

    #[arg(long, default_value_t = 5000)]
    pub steps: usize,

    #[arg(long, value_enum, default_value_t = InitialStateArg::XPolarized)]
    pub initial: InitialStateArg,

    #[arg(long, value_enum, default_value_t = RepresentationArg::Density)]
    pub representation: RepresentationArg,

    /// Add the free-precession Hamiltonian term (density path only)
    #[arg(long)]
    pub with_hamiltonian: bool,

    /// Write the full time series as CSV here
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LadderArgs {
    /// Ladder half-width N; levels run -N..N
    #[arg(long, default_value_t = 400)]
    pub n_levels: usize,

    /// Level spacing
    #[arg(long, default_value_t = 0.05)]
    pub delta_e: f64,

    /// Uniform coupling matrix element
    #[arg(long, default_value_t = 0.05)]
    pub coupling: f64,

    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,

    #[arg(long, default_value_t = 8000)]
    pub steps: usize,

    /// Post-selected level index
    #[arg(long, default_value_t = 0)]
    pub k: i32,

    /// Write the amplitude time series as CSV here
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConsistencyArgs {
    /// Integration horizon; defaults to 100 coherence times
    #[arg(long)]
    pub horizon: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub z_min: f64,

    #[arg(long, default_value_t = 100.0)]
    pub z_max: f64,

    #[arg(long, default_value_t = 200)]
    pub points: usize,

    #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
    pub spacing: SpacingArg,

    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
}
