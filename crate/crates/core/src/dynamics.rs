//! Time evolution of the two-level state under the driven thermal master
//! equation, in both the density-matrix and the transport (Bloch) picture,
//! with a fixed-step RK4 integrator.

use crate::error::{bad_param, require_finite};
use crate::linalg::{anticommutator, commutator, sigma_minus, sigma_plus, sigma_z, Matrix2, I_C};
use crate::model::{occupation_raw, BathParams, DriveField, SystemParams};
use crate::ode::{rk4_step, OdeState};
use crate::tol;
use crate::{Error, Result};
use num_complex::Complex64;
use std::io::{self, Write};

/// Which dissipator the density-matrix path integrates.
///
/// `Standard` uses the trace-preserving form with half-anticommutator and
/// rates 4g^2.omega.(N+1) down, 4g^2.omega.N up, calibrated so its projection
/// onto Pauli expectations matches the transport equations term for term.
/// `Verbatim` keeps the printed coefficients 2g^2.omega.(N+1), 2g^2.omega.N
/// with a bare anticommutator; it does not preserve the trace and exists so
/// that tests can document exactly how it fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DissipatorMode {
    Standard,
    Verbatim,
}

/// Validated 2x2 density matrix: Hermitian, unit trace, positive
/// semidefinite, all within the `tol` construction tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    m: Matrix2,
}

impl DensityMatrix {
    pub fn new(
        rho00: Complex64,
        rho01: Complex64,
        rho10: Complex64,
        rho11: Complex64,
    ) -> Result<Self> {
        Self::from_matrix(Matrix2::new(rho00, rho01, rho10, rho11))
    }

    pub fn from_matrix(m: Matrix2) -> Result<Self> {
        for row in &m.0 {
            for e in row {
                if !e.re.is_finite() || !e.im.is_finite() {
                    return Err(Error::InvalidState(format!("non-finite entry {e}")));
                }
            }
        }
        let herm = m.hermiticity_defect();
        if herm > tol::HERMITICITY {
            return Err(Error::InvalidState(format!(
                "hermiticity defect {herm:.3e} exceeds {:.1e}",
                tol::HERMITICITY
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::UNIT_TRACE {
            return Err(Error::InvalidState(format!(
                "trace {} deviates from one beyond {:.1e}",
                tr.re,
                tol::UNIT_TRACE
            )));
        }
        let (lo, _) = m.hermitian_eigenvalues();
        if lo < -tol::POSITIVITY {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lo:.3e} beyond -{:.1e}",
                tol::POSITIVITY
            )));
        }
        Ok(DensityMatrix { m })
    }

    pub fn excited() -> Self {
        DensityMatrix {
            m: Matrix2::diag(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        }
    }

    pub fn ground() -> Self {
        DensityMatrix {
            m: Matrix2::diag(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        }
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            m: Matrix2::identity().scaled_re(0.5),
        }
    }

    /// Pure state (|0> + |1>)/sqrt(2): the x-polarized preparation.
    pub fn x_polarized() -> Self {
        let half = Complex64::new(0.5, 0.0);
        DensityMatrix {
            m: Matrix2::new(half, half, half, half),
        }
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.m.hermitian_eigenvalues().0
    }

    pub fn to_bloch(&self) -> BlochState {
        // valid density matrices always map into the Bloch ball
        BlochState::new_unchecked(self.m.0[1][0], (self.m.0[0][0] - self.m.0[1][1]).re)
    }
}

/// Pauli-expectation representation of a state: sp = <sigma_plus> (the rho_10
/// entry) and sz = <sigma_z>; <sigma_minus> is conjugate(sp).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochState {
    sp: Complex64,
    sz: f64,
}

impl BlochState {
    pub fn new(sp: Complex64, sz: f64) -> Result<Self> {
        if !sp.re.is_finite() || !sp.im.is_finite() || !sz.is_finite() {
            return Err(Error::InvalidState(format!(
                "non-finite components sp={sp}, sz={sz}"
            )));
        }
        let min_eig = 0.5 * (1.0 - (sz * sz + 4.0 * sp.norm_sqr()).sqrt());
        if min_eig < -tol::POSITIVITY {
            return Err(Error::InvalidState(format!(
                "components leave the Bloch ball: reconstructed eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(BlochState { sp, sz })
    }

    /// Skips the Bloch-ball check. The closed-form stationary values of the
    /// driven system land outside the physical ball; they are represented with
    /// this constructor and flagged by the consistency report, not rejected.
    pub fn new_unchecked(sp: Complex64, sz: f64) -> Self {
        BlochState { sp, sz }
    }

    pub fn sp(&self) -> Complex64 {
        self.sp
    }

    pub fn sz(&self) -> f64 {
        self.sz
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_matrix(reconstruct(self.sp, self.sz))
    }
}

fn reconstruct(sp: Complex64, sz: f64) -> Matrix2 {
    Matrix2::new(
        Complex64::new(0.5 * (1.0 + sz), 0.0),
        sp.conj(),
        sp,
        Complex64::new(0.5 * (1.0 - sz), 0.0),
    )
}

/// Integration window and step count for `evolve_density`/`evolve_bloch`.
/// The step size is checked against the generator rate bound at run time:
/// h*rate above `tol::STEP_WARN` warns, above `tol::STEP_REFUSE` refuses.
#[derive(Clone, Copy, Debug)]
pub struct EvolutionConfig {
    t_max: f64,
    steps: usize,
    mode: DissipatorMode,
    include_hamiltonian: bool,
}

impl EvolutionConfig {
    pub fn new(t_max: f64, steps: usize, mode: DissipatorMode) -> Result<Self> {
        require_finite("t_max", t_max)?;
        if t_max <= 0.0 {
            return Err(bad_param("t_max", format!("must be > 0, got {t_max}")));
        }
        if steps < 1 {
            return Err(bad_param("steps", "must be >= 1".to_string()));
        }
        Ok(EvolutionConfig {
            t_max,
            steps,
            mode,
            include_hamiltonian: false,
        })
    }

    /// Adds the coherent -i[omega/2 sigma_z, rho] term to the density-matrix
    /// path for lab-frame runs. The transport equations are written in the
    /// rotating frame and never include it.
    pub fn with_hamiltonian(mut self, include: bool) -> Self {
        self.include_hamiltonian = include;
        self
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn mode(&self) -> DissipatorMode {
        self.mode
    }

    pub fn step_size(&self) -> f64 {
        self.t_max / self.steps as f64
    }
}

struct Coeffs {
    gamma_down: f64,
    gamma_up: f64,
    g: f64,
    lambda: Complex64,
    omega: f64,
    include_hamiltonian: bool,
}

impl Coeffs {
    fn new(sys: &SystemParams, bath: &BathParams, drive: &DriveField, include_h: bool) -> Self {
        let n = occupation_raw(sys.omega(), bath.temperature());
        let base = 4.0 * sys.g() * sys.g() * sys.omega();
        Coeffs {
            gamma_down: base * (n + 1.0),
            gamma_up: base * n,
            g: sys.g(),
            lambda: drive.lambda(),
            omega: sys.omega(),
            include_hamiltonian: include_h,
        }
    }
}

/// Largest rate appearing in the evolution generator: population damping plus
/// the Rabi scale of the drive. Used to size integration steps.
pub fn generator_rate_bound(sys: &SystemParams, bath: &BathParams, drive: &DriveField) -> f64 {
    let n = occupation_raw(sys.omega(), bath.temperature());
    4.0 * sys.g() * sys.g() * sys.omega() * (2.0 * n + 1.0)
        + 2.0 * sys.g() * drive.magnitude_squared().sqrt()
}

fn dissipator_halved(l: &Matrix2, rho: &Matrix2) -> Matrix2 {
    let ldag = l.adjoint();
    let ldl = ldag * *l;
    *l * *rho * ldag - anticommutator(&ldl, rho).scaled_re(0.5)
}

fn dissipator_unhalved(l: &Matrix2, rho: &Matrix2) -> Matrix2 {
    let ldag = l.adjoint();
    let ldl = ldag * *l;
    *l * *rho * ldag - anticommutator(&ldl, rho)
}

fn liouvillian(rho: &Matrix2, c: &Coeffs, mode: DissipatorMode) -> Matrix2 {
    let sm = sigma_minus();
    let sp = sigma_plus();
    let mut out = match mode {
        DissipatorMode::Standard => {
            dissipator_halved(&sm, rho).scaled_re(c.gamma_down)
                + dissipator_halved(&sp, rho).scaled_re(c.gamma_up)
        }
        // printed coefficients: half the standard rates, but no half on the
        // anticommutator, which is what breaks trace preservation
        DissipatorMode::Verbatim => {
            dissipator_unhalved(&sm, rho).scaled_re(0.5 * c.gamma_down)
                + dissipator_unhalved(&sp, rho).scaled_re(0.5 * c.gamma_up)
        }
    };
    if c.lambda != Complex64::new(0.0, 0.0) {
        let h_drive = sp.scaled(c.lambda) + sm.scaled(c.lambda.conj());
        out = out + commutator(&h_drive, rho).scaled(-I_C * c.g);
    }
    if c.include_hamiltonian {
        out = out + commutator(&sigma_z(), rho).scaled(-I_C * (0.5 * c.omega));
    }
    out
}

/// Right-hand side of the master equation for a validated state.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    sys: &SystemParams,
    bath: &BathParams,
    drive: &DriveField,
    mode: DissipatorMode,
) -> Matrix2 {
    let c = Coeffs::new(sys, bath, drive, false);
    liouvillian(rho.matrix(), &c, mode)
}

/// Time derivative of the Pauli expectations. Both components are returned as
/// complex numbers exactly as the transport equations produce them; the sz
/// component is real up to roundoff (its drive term is i times an imaginary
/// quantity) and the integrator keeps only its real part.
#[derive(Clone, Copy, Debug)]
pub struct BlochDerivative {
    pub sp: Complex64,
    pub sz: Complex64,
}

fn bloch_derivative(sp: Complex64, sz: f64, c: &Coeffs) -> BlochDerivative {
    let coherence_rate = 0.5 * (c.gamma_down + c.gamma_up);
    let population_rate = c.gamma_down + c.gamma_up;
    let pump = c.gamma_down - c.gamma_up;
    let dsp = -coherence_rate * sp - I_C * c.g * c.lambda.conj() * sz;
    let drive = (c.lambda * sp - c.lambda.conj() * sp.conj()) * (I_C * (0.5 * c.g));
    let dsz = Complex64::new(-population_rate * sz - pump, 0.0) - drive;
    BlochDerivative { sp: dsp, sz: dsz }
}

/// Right-hand side of the transport equations for the Pauli expectations.
pub fn bloch_rhs(
    state: &BlochState,
    sys: &SystemParams,
    bath: &BathParams,
    drive: &DriveField,
) -> BlochDerivative {
    let c = Coeffs::new(sys, bath, drive, false);
    bloch_derivative(state.sp(), state.sz(), &c)
}

#[derive(Clone, Copy)]
struct BlochVec {
    sp: Complex64,
    sz: f64,
}

impl OdeState for BlochVec {
    fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        BlochVec {
            sp: self.sp + factor * other.sp,
            sz: self.sz + factor * other.sz,
        }
    }
}

fn check_step(h: f64, rate: f64) -> Result<()> {
    let h_rate = h * rate;
    if h_rate > tol::STEP_REFUSE {
        return Err(Error::StepTooCoarse {
            h_rate,
            limit: tol::STEP_REFUSE,
        });
    }
    if h_rate > tol::STEP_WARN {
        log::warn!(
            "step size h = {h:.3e} resolves the fastest rate only to h*rate = {h_rate:.3e}; \
             results degrade above {:.0e}",
            tol::STEP_WARN
        );
    }
    Ok(())
}

/// Density-matrix time series produced by `evolve_density`. States are raw
/// matrices so that the verbatim mode can exhibit its trace loss.
pub struct DensityEvolution {
    pub times: Vec<f64>,
    pub states: Vec<Matrix2>,
}

impl DensityEvolution {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn sigma_plus(&self, i: usize) -> Complex64 {
        self.states[i].0[1][0]
    }

    pub fn sigma_z(&self, i: usize) -> f64 {
        (self.states[i].0[0][0] - self.states[i].0[1][1]).re
    }

    pub fn trace(&self, i: usize) -> f64 {
        self.states[i].trace().re
    }

    pub fn min_eigenvalue(&self, i: usize) -> f64 {
        self.states[i].hermitian_eigenvalues().0
    }

    pub fn final_state(&self) -> &Matrix2 {
        self.states.last().expect("evolution is never empty")
    }

    /// Columns: t, re_sp, im_sp, sz, trace, min_eigenvalue.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,re_sp,im_sp,sz,trace,min_eigenvalue")?;
        for i in 0..self.len() {
            let sp = self.sigma_plus(i);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i],
                sp.re,
                sp.im,
                self.sigma_z(i),
                self.trace(i),
                self.min_eigenvalue(i)
            )?;
        }
        Ok(())
    }
}

/// Pauli-expectation time series produced by `evolve_bloch`. Samples are raw
/// (sp, sz) pairs: the printed driven equations can leave the Bloch ball, and
/// that excursion is data, not an error.
pub struct BlochEvolution {
    pub times: Vec<f64>,
    pub sp: Vec<Complex64>,
    pub sz: Vec<f64>,
}

impl BlochEvolution {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_sp(&self) -> Complex64 {
        *self.sp.last().expect("evolution is never empty")
    }

    pub fn final_sz(&self) -> f64 {
        *self.sz.last().expect("evolution is never empty")
    }

    /// Same columns as the density export; trace and min_eigenvalue are those
    /// of the reconstructed matrix (trace is identically one).
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,re_sp,im_sp,sz,trace,min_eigenvalue")?;
        for i in 0..self.len() {
            let min_eig = 0.5 * (1.0 - (self.sz[i] * self.sz[i] + 4.0 * self.sp[i].norm_sqr()).sqrt());
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i], self.sp[i].re, self.sp[i].im, self.sz[i], 1.0, min_eig
            )?;
        }
        Ok(())
    }
}

/// Integrates the master equation from `initial`, recording the state at
/// every step. In standard mode each recorded state is checked against the
/// trace, Hermiticity and positivity drift tolerances.
pub fn evolve_density(
    initial: &DensityMatrix,
    sys: &SystemParams,
    bath: &BathParams,
    drive: &DriveField,
    cfg: &EvolutionConfig,
) -> Result<DensityEvolution> {
    let rate = generator_rate_bound(sys, bath, drive);
    let h = cfg.step_size();
    check_step(h, rate)?;

    let c = Coeffs::new(sys, bath, drive, cfg.include_hamiltonian);
    let mode = cfg.mode();
    let rhs = |_t: f64, m: &Matrix2| liouvillian(m, &c, mode);

    let mut times = Vec::with_capacity(cfg.steps() + 1);
    let mut states = Vec::with_capacity(cfg.steps() + 1);
    let mut state = *initial.matrix();
    let mut t = 0.0;
    times.push(t);
    states.push(state);
    for step in 1..=cfg.steps() {
        state = rk4_step(&state, t, h, &rhs);
        t = h * step as f64;
        if mode == DissipatorMode::Standard {
            drift_check(&state, t)?;
        }
        times.push(t);
        states.push(state);
    }
    Ok(DensityEvolution { times, states })
}

fn drift_check(m: &Matrix2, t: f64) -> Result<()> {
    let trace_err = (m.trace().re - 1.0).abs();
    if trace_err > tol::EVOLVED_TRACE {
        return Err(Error::StateDrift {
            t,
            detail: format!("trace deviates by {trace_err:.3e}"),
        });
    }
    let herm = m.hermiticity_defect();
    if herm > tol::EVOLVED_HERMITICITY {
        return Err(Error::StateDrift {
            t,
            detail: format!("hermiticity defect {herm:.3e}"),
        });
    }
    let (lo, _) = m.hermitian_eigenvalues();
    if lo < -tol::EVOLVED_POSITIVITY {
        return Err(Error::StateDrift {
            t,
            detail: format!("eigenvalue {lo:.3e} below -{:.1e}", tol::EVOLVED_POSITIVITY),
        });
    }
    Ok(())
}

/// Integrates the transport equations from `initial`, recording every step.
pub fn evolve_bloch(
    initial: &BlochState,
    sys: &SystemParams,
    bath: &BathParams,
    drive: &DriveField,
    cfg: &EvolutionConfig,
) -> Result<BlochEvolution> {
    let rate = generator_rate_bound(sys, bath, drive);
    let h = cfg.step_size();
    check_step(h, rate)?;

    let c = Coeffs::new(sys, bath, drive, false);
    let rhs = |_t: f64, y: &BlochVec| {
        let d = bloch_derivative(y.sp, y.sz, &c);
        BlochVec {
            sp: d.sp,
            sz: d.sz.re,
        }
    };

    let mut times = Vec::with_capacity(cfg.steps() + 1);
    let mut sp = Vec::with_capacity(cfg.steps() + 1);
    let mut sz = Vec::with_capacity(cfg.steps() + 1);
    let mut y = BlochVec {
        sp: initial.sp(),
        sz: initial.sz(),
    };
    let mut t = 0.0;
    times.push(t);
    sp.push(y.sp);
    sz.push(y.sz);
    for step in 1..=cfg.steps() {
        y = rk4_step(&y, t, h, &rhs);
        t = h * step as f64;
        times.push(t);
        sp.push(y.sp);
        sz.push(y.sz);
    }
    Ok(BlochEvolution { times, sp, sz })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_line;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sys() -> SystemParams {
        SystemParams::new(1.0, 0.5, 1.0).unwrap()
    }

    fn cold() -> BathParams {
        BathParams::new(0.0).unwrap()
    }

    fn random_density(rng: &mut ChaCha8Rng) -> DensityMatrix {
        // uniform in the closed Bloch ball
        loop {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let y: f64 = rng.gen_range(-1.0..1.0);
            let z: f64 = rng.gen_range(-1.0..1.0);
            if x * x + y * y + z * z <= 1.0 {
                let sp = Complex64::new(0.5 * x, 0.5 * y);
                return BlochState::new(sp, z).unwrap().to_density().unwrap();
            }
        }
    }

    #[test]
    fn ground_state_is_stationary_cold_undriven() {
        let rhs = lindblad_rhs(
            &DensityMatrix::ground(),
            &sys(),
            &cold(),
            &DriveField::zero(),
            DissipatorMode::Standard,
        );
        assert_eq!(rhs.max_abs_diff(&Matrix2::zero()), 0.0);
    }

    #[test]
    fn standard_rhs_is_traceless_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bath = BathParams::new(0.8).unwrap();
        let drive = DriveField::new(0.4, 1.2).unwrap();
        for _ in 0..100 {
            let rho = random_density(&mut rng);
            let rhs = lindblad_rhs(&rho, &sys(), &bath, &drive, DissipatorMode::Standard);
            assert!(rhs.trace().norm() < 1e-13);
        }
    }

    #[test]
    fn verbatim_rhs_loses_trace_at_half_the_down_rate() {
        // excited state, cold undriven bath: d(tr)/dt = -gamma_down/2
        let rhs = lindblad_rhs(
            &DensityMatrix::excited(),
            &sys(),
            &cold(),
            &DriveField::zero(),
            DissipatorMode::Verbatim,
        );
        let gamma_down = 4.0 * 1.0 * 1.0 * 1.0;
        assert_relative_eq!(rhs.trace().re, -0.5 * gamma_down, max_relative = 1e-14);
        assert!(rhs.trace().re < 0.0);
    }

    #[test]
    fn bloch_rhs_reference_points() {
        let zero = bloch_rhs(
            &BlochState::new(Complex64::new(0.0, 0.0), -1.0).unwrap(),
            &sys(),
            &cold(),
            &DriveField::zero(),
        );
        assert_eq!(zero.sp.norm(), 0.0);
        assert_eq!(zero.sz.norm(), 0.0);

        let center = bloch_rhs(
            &BlochState::new(Complex64::new(0.0, 0.0), 0.0).unwrap(),
            &sys(),
            &BathParams::new(0.7).unwrap(),
            &DriveField::zero(),
        );
        assert_relative_eq!(center.sz.re, -4.0, max_relative = 1e-14);
    }

    #[test]
    fn sz_derivative_is_real_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bath = BathParams::new(1.3).unwrap();
        for _ in 0..100 {
            let rho = random_density(&mut rng).to_bloch();
            let drive = DriveField::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)).unwrap();
            let d = bloch_rhs(&rho, &sys(), &bath, &drive);
            assert!(d.sz.im.abs() < 1e-13, "imag part {}", d.sz.im);
        }
    }

    #[test]
    fn relaxation_reaches_thermal_population() {
        for temperature in [0.0, 0.5, 1.0, 5.0] {
            let bath = BathParams::new(temperature).unwrap();
            let n = bath.occupation(&sys());
            let target = -1.0 / (2.0 * n + 1.0);
            let rate = generator_rate_bound(&sys(), &bath, &DriveField::zero());
            let horizon = 50.0 / (0.5 * rate);
            let steps = (horizon * rate / 0.008).ceil() as usize;
            let cfg = EvolutionConfig::new(horizon, steps, DissipatorMode::Standard).unwrap();
            let run = evolve_density(
                &DensityMatrix::maximally_mixed(),
                &sys(),
                &bath,
                &DriveField::zero(),
                &cfg,
            )
            .unwrap();
            let last = run.len() - 1;
            assert!(
                (run.sigma_z(last) - target).abs() < 1e-6,
                "T = {temperature}: sz = {} target = {target}",
                run.sigma_z(last)
            );
        }
    }

    #[test]
    fn halving_the_step_barely_moves_the_endpoint() {
        let bath = BathParams::new(1.0).unwrap();
        let drive = DriveField::zero();
        let run = |steps: usize| {
            let cfg = EvolutionConfig::new(6.0, steps, DissipatorMode::Standard).unwrap();
            *evolve_density(&DensityMatrix::x_polarized(), &sys(), &bath, &drive, &cfg)
                .unwrap()
                .final_state()
        };
        let coarse = run(4000);
        let fine = run(8000);
        assert!(coarse.max_abs_diff(&fine) < 1e-8);
    }

    #[test]
    fn bloch_and_density_paths_agree_undriven() {
        for temperature in [0.0, 1.0, 5.0] {
            let bath = BathParams::new(temperature).unwrap();
            let drive = DriveField::zero();
            let rate = generator_rate_bound(&sys(), &bath, &drive);
            let horizon = 50.0 / (0.5 * rate);
            let steps = (horizon * rate / 0.008).ceil() as usize;
            let cfg = EvolutionConfig::new(horizon, steps, DissipatorMode::Standard).unwrap();
            let start = DensityMatrix::x_polarized();
            let dens = evolve_density(&start, &sys(), &bath, &drive, &cfg).unwrap();
            let bloch = evolve_bloch(&start.to_bloch(), &sys(), &bath, &drive, &cfg).unwrap();
            for i in 0..dens.len() {
                let dsp = (dens.sigma_plus(i) - bloch.sp[i]).norm();
                let dsz = (dens.sigma_z(i) - bloch.sz[i]).abs();
                assert!(dsp.max(dsz) < 1e-8, "paths diverge at sample {i}");
            }
        }
    }

    #[test]
    fn coherence_decays_at_the_projected_rate() {
        let bath = BathParams::new(1.0).unwrap();
        let n = bath.occupation(&sys());
        let expected = 2.0 * (2.0 * n + 1.0);
        let cfg = EvolutionConfig::new(1.0, 2000, DissipatorMode::Standard).unwrap();
        let run = evolve_density(
            &DensityMatrix::x_polarized(),
            &sys(),
            &bath,
            &DriveField::zero(),
            &cfg,
        )
        .unwrap();
        let ys: Vec<f64> = (0..run.len())
            .map(|i| run.sigma_plus(i).norm().ln())
            .collect();
        let f = fit_line(&run.times, &ys);
        assert_relative_eq!(-f.slope, expected, max_relative = 1e-6);
    }

    #[test]
    fn verbatim_trace_decreases_monotonically() {
        let cfg = EvolutionConfig::new(2.0, 2000, DissipatorMode::Verbatim).unwrap();
        let run = evolve_density(
            &DensityMatrix::excited(),
            &sys(),
            &cold(),
            &DriveField::zero(),
            &cfg,
        )
        .unwrap();
        for i in 1..run.len() {
            assert!(run.trace(i) < run.trace(i - 1));
        }
        assert!(run.trace(run.len() - 1) < 0.9);
    }

    #[test]
    fn refuses_steps_that_cannot_resolve_the_rates() {
        let cfg = EvolutionConfig::new(10.0, 10, DissipatorMode::Standard).unwrap();
        let r = evolve_density(
            &DensityMatrix::excited(),
            &sys(),
            &cold(),
            &DriveField::zero(),
            &cfg,
        );
        assert!(matches!(r, Err(Error::StepTooCoarse { .. })));
    }

    #[test]
    fn conversion_round_trip_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rho = random_density(&mut rng);
            let back = rho.to_bloch().to_density().unwrap();
            assert!(rho.matrix().max_abs_diff(back.matrix()) < 1e-14);
        }
    }

    #[test]
    fn named_states_have_expected_coordinates() {
        let excited = BlochState::new(Complex64::new(0.0, 0.0), 1.0)
            .unwrap()
            .to_density()
            .unwrap();
        assert_eq!(*excited.matrix(), *DensityMatrix::excited().matrix());

        let x = DensityMatrix::x_polarized().to_bloch();
        assert_eq!(x.sp(), Complex64::new(0.5, 0.0));
        assert_eq!(x.sz(), 0.0);
        // pure state: smallest eigenvalue is zero
        assert!(DensityMatrix::x_polarized().min_eigenvalue().abs() < 1e-15);
    }

    #[test]
    fn construction_rejects_unphysical_inputs() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // trace 2
        assert!(DensityMatrix::new(one, zero, zero, one).is_err());
        // non-hermitian
        assert!(DensityMatrix::new(
            Complex64::new(0.5, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(-0.3, 0.0),
            Complex64::new(0.5, 0.0)
        )
        .is_err());
        // coherence too large for the populations
        assert!(DensityMatrix::new(
            Complex64::new(0.5, 0.0),
            Complex64::new(0.6, 0.0),
            Complex64::new(0.6, 0.0),
            Complex64::new(0.5, 0.0)
        )
        .is_err());
        assert!(BlochState::new(Complex64::new(0.8, 0.0), 0.8).is_err());
    }

    #[test]
    fn csv_export_has_the_documented_columns() {
        let cfg = EvolutionConfig::new(0.5, 250, DissipatorMode::Standard).unwrap();
        let run = evolve_density(
            &DensityMatrix::x_polarized(),
            &sys(),
            &cold(),
            &DriveField::zero(),
            &cfg,
        )
        .unwrap();
        let mut buf = Vec::new();
        run.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,re_sp,im_sp,sz,trace,min_eigenvalue"
        );
        assert_eq!(lines.count(), 251);
        assert!(!text.contains('\r'));
    }
}
