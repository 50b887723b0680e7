//! Weak-measurement calculus for the decaying level: evolution-matrix
//! elements, the weak value of the survival projector over a pre/post
//! selection window, the finite ladder of equispaced final states, and the
//! dwell-time expressions built on them.

use crate::error::{bad_param, require_finite};
use crate::fit::fit_line;
use crate::linalg::Matrix2;
use crate::model::{BathParams, DriveField, SystemParams};
use crate::ode::rk4_step;
use crate::quadrature::integrate;
use crate::stationary::decay_constant;
use crate::tol;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::io::{self, Write};

/// Pre/post-selection window: the system is prepared at `t_i`, post-selected
/// in ladder level `k` at `t_f`, and the weak probe acts in between.
/// `tau_m = t_f - t_i` is the measurement time.
#[derive(Clone, Copy, Debug)]
pub struct MeasurementWindow {
    t_i: f64,
    t_f: f64,
    k: i32,
    delta_e: f64,
}

impl MeasurementWindow {
    pub fn new(t_i: f64, t_f: f64, k: i32, delta_e: f64) -> Result<Self> {
        require_finite("t_i", t_i)?;
        require_finite("t_f", t_f)?;
        require_finite("delta_e", delta_e)?;
        if t_f <= t_i {
            return Err(bad_param(
                "t_f",
                format!("measurement time must be positive, got t_i={t_i}, t_f={t_f}"),
            ));
        }
        if delta_e < 0.0 {
            return Err(bad_param("delta_e", format!("must be >= 0, got {delta_e}")));
        }
        Ok(MeasurementWindow { t_i, t_f, k, delta_e })
    }

    pub fn t_i(&self) -> f64 {
        self.t_i
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn tau_m(&self) -> f64 {
        self.t_f - self.t_i
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn delta_e(&self) -> f64 {
        self.delta_e
    }
}

/// Finite ladder of 2N+1 equispaced final levels n = -N..N plus the initial
/// level, with uniform coupling h.
#[derive(Clone, Copy, Debug)]
pub struct LadderConfig {
    n_levels: usize,
    delta_e: f64,
    coupling: f64,
    t_max: f64,
    steps: usize,
}

impl LadderConfig {
    pub fn new(n_levels: usize, delta_e: f64, coupling: f64, t_max: f64, steps: usize) -> Result<Self> {
        if n_levels == 0 {
            return Err(bad_param("n_levels", "must be >= 1".to_string()));
        }
        require_finite("delta_e", delta_e)?;
        if delta_e <= 0.0 {
            return Err(bad_param("delta_e", format!("must be > 0, got {delta_e}")));
        }
        require_finite("coupling", coupling)?;
        if coupling < 0.0 {
            return Err(bad_param("coupling", format!("must be >= 0, got {coupling}")));
        }
        require_finite("t_max", t_max)?;
        if t_max <= 0.0 {
            return Err(bad_param("t_max", format!("must be > 0, got {t_max}")));
        }
        if steps < 1 {
            return Err(bad_param("steps", "must be >= 1".to_string()));
        }
        let recurrence = TAU / delta_e;
        if 2.0 * t_max >= recurrence {
            log::warn!(
                "t_max = {t_max} reaches into the ladder recurrence at 2pi/delta_e = \
                 {recurrence:.3}; the decay fit is restricted to its first 40% regardless"
            );
        }
        Ok(LadderConfig {
            n_levels,
            delta_e,
            coupling,
            t_max,
            steps,
        })
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn delta_e(&self) -> f64 {
        self.delta_e
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// Barrier region [0, L) on the position axis.
#[derive(Clone, Copy, Debug)]
pub struct BarrierWindow {
    length: f64,
}

impl BarrierWindow {
    pub fn new(length: f64) -> Result<Self> {
        require_finite("length", length)?;
        if length <= 0.0 {
            return Err(bad_param("length", format!("must be > 0, got {length}")));
        }
        Ok(BarrierWindow { length })
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Indicator of the barrier region, right-open: 1 iff 0 <= x < L.
pub fn barrier_indicator(x: f64, window: &BarrierWindow) -> f64 {
    if (0.0..window.length).contains(&x) {
        1.0
    } else {
        0.0
    }
}

/// Free two-level propagator diag(e^{i omega t/2}, e^{-i omega t/2}).
pub fn free_evolution(t: f64, sys: &SystemParams) -> Matrix2 {
    let half = 0.5 * sys.omega() * t;
    Matrix2::diag(Complex64::from_polar(1.0, half), Complex64::from_polar(1.0, -half))
}

fn check_gamma(gamma: f64) -> Result<()> {
    require_finite("gamma", gamma)?;
    if gamma <= 0.0 {
        return Err(bad_param("gamma", format!("must be > 0, got {gamma}")));
    }
    Ok(())
}

/// Surviving-amplitude matrix element e^{-gamma t}.
pub fn u00(t: f64, gamma: f64) -> Result<Complex64> {
    check_gamma(gamma)?;
    require_finite("t", t)?;
    if t < 0.0 {
        return Err(bad_param("t", format!("must be >= 0, got {t}")));
    }
    Ok(Complex64::new((-gamma * t).exp(), 0.0))
}

/// Transition matrix element into ladder level n:
/// i h (e^{(-gamma + i n delta_e) t} - 1) / (gamma - i n delta_e).
pub fn un0(t: f64, n: i32, gamma: f64, delta_e: f64, coupling: f64) -> Result<Complex64> {
    check_gamma(gamma)?;
    require_finite("t", t)?;
    if t < 0.0 {
        return Err(bad_param("t", format!("must be >= 0, got {t}")));
    }
    require_finite("delta_e", delta_e)?;
    require_finite("coupling", coupling)?;
    let den = Complex64::new(gamma, -f64::from(n) * delta_e);
    if den.norm() < tol::WINDOW_DEGENERACY {
        return Err(Error::SingularDenominator);
    }
    let z = -den; // exponent rate -gamma + i n delta_e
    let num = (z * t).exp() - Complex64::new(1.0, 0.0);
    Ok(Complex64::new(0.0, coupling) * num / den)
}

/// Weak value of the survival projector at time t inside the window:
/// e^{-gamma (t - t_i)} (1 - e^{z (t_f - t)}) / (1 - e^{z tau_m}) with
/// z = -gamma + i k delta_e. Equals 1 at t_i and 0 at t_f by construction,
/// and is real for k = 0.
pub fn weak_projection(t: f64, window: &MeasurementWindow, gamma: f64) -> Result<Complex64> {
    check_gamma(gamma)?;
    require_finite("t", t)?;
    if t < window.t_i || t > window.t_f {
        return Err(Error::OutsideWindow {
            t,
            t_i: window.t_i,
            t_f: window.t_f,
        });
    }
    let z = Complex64::new(-gamma, f64::from(window.k) * window.delta_e);
    let den = Complex64::new(1.0, 0.0) - (z * window.tau_m()).exp();
    if den.norm() < tol::WINDOW_DEGENERACY {
        return Err(Error::DegenerateWindow { modulus: den.norm() });
    }
    let num = Complex64::new(1.0, 0.0) - (z * (window.t_f - t)).exp();
    Ok((-gamma * (t - window.t_i)).exp() * num / den)
}

/// Dwell time as the integral of the (real, k = 0) weak projection over the
/// measurement window, by adaptive quadrature to absolute tolerance 1e-12.
pub fn dwell_integral(window: &MeasurementWindow, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if window.k != 0 {
        return Err(bad_param(
            "window.k",
            format!("dwell integral is defined for the k = 0 window, got k = {}", window.k),
        ));
    }
    let tau = window.tau_m();
    let den = -(-gamma * tau).exp_m1();
    if den < tol::WINDOW_DEGENERACY {
        return Err(Error::DegenerateWindow { modulus: den });
    }
    let t_i = window.t_i;
    let t_f = window.t_f;
    let p = move |t: f64| (-gamma * (t - t_i)).exp() * -(-gamma * (t_f - t)).exp_m1() / den;
    integrate(&p, t_i, t_f, tol::QUADRATURE_ABS)
}

/// Closed form of the dwell integral: (1/gamma)(1 - gamma tau/(e^{gamma tau} - 1)).
/// Below gamma*tau = 1e-4 the difference cancels catastrophically, so the
/// series tau/2 - gamma tau^2/12 + gamma^3 tau^4/720 takes over there.
pub fn dwell_closed(gamma: f64, tau_m: f64) -> Result<f64> {
    check_gamma(gamma)?;
    require_finite("tau_m", tau_m)?;
    if tau_m <= 0.0 {
        return Err(bad_param("tau_m", format!("must be > 0, got {tau_m}")));
    }
    let x = gamma * tau_m;
    if x < tol::DWELL_SERIES_CUTOFF {
        let x2 = x * x;
        return Ok(tau_m * (0.5 - x / 12.0 + x2 * x / 720.0));
    }
    Ok((1.0 - x / x.exp_m1()) / gamma)
}

/// Short-window approximation tau_m / (2 + gamma tau_m), valid for
/// gamma*tau_m well below one; warns outside that regime.
pub fn dwell_approx(gamma: f64, tau_m: f64) -> Result<f64> {
    check_gamma(gamma)?;
    require_finite("tau_m", tau_m)?;
    if tau_m <= 0.0 {
        return Err(bad_param("tau_m", format!("must be > 0, got {tau_m}")));
    }
    if gamma * tau_m > tol::APPROX_VALIDITY {
        log::warn!(
            "gamma*tau_m = {:.3} is outside the short-window regime (< {}); \
             the quadratic truncation is unreliable here",
            gamma * tau_m,
            tol::APPROX_VALIDITY
        );
    }
    Ok(tau_m / (2.0 + gamma * tau_m))
}

/// Dwell time at the resonant measurement window tau_m = 1/omega:
/// 1 / (2 omega + gamma).
pub fn dwell_resonant(sys: &SystemParams, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(1.0 / (2.0 * sys.omega() + gamma))
}

/// Temperature-dependent dwell time Pi / (1 + 2 omega Pi) with
/// Pi = pi_th + pi_q = 1/gamma; rises with temperature and saturates at
/// 1/(2 omega).
pub fn dwell_thermal(sys: &SystemParams, bath: &BathParams, drive: &DriveField) -> Result<f64> {
    let d = decay_constant(sys, bath, drive)?;
    let pi = d.pi_th + d.pi_q;
    Ok(pi / (1.0 + 2.0 * sys.omega() * pi))
}

/// Result of integrating the amplitude ladder: the fitted decay rate of the
/// survival probability |a_0|^2, the fit quality, and the recorded series.
pub struct LadderDecay {
    pub rate: f64,
    pub r_squared: f64,
    pub max_conservation_defect: f64,
    pub times: Vec<f64>,
    pub a0_magnitude: Vec<f64>,
    pub total_probability: Vec<f64>,
}

impl LadderDecay {
    /// Columns: t, a0_abs, total_prob.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,a0_abs,total_prob")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                self.times[i], self.a0_magnitude[i], self.total_probability[i]
            )?;
        }
        Ok(())
    }
}

/// Integrates the (2N+2)-amplitude ladder system
/// da_0/dt = -i h sum_n a_n e^{-i n delta_e t}, da_n/dt = -i h a_0 e^{i n delta_e t}
/// from a_0 = 1, fits log|a_0| on t in [0, min(t_max, 0.4 * 2pi/delta_e)] and
/// returns twice the negated slope: the decay rate of the survival
/// probability, which the golden-rule limit puts at 2 pi h^2 / delta_e.
pub fn ladder_decay(cfg: &LadderConfig, window: &MeasurementWindow) -> Result<LadderDecay> {
    let n = cfg.n_levels;
    if window.k().unsigned_abs() as usize > n {
        return Err(bad_param(
            "window.k",
            format!("post-selected level {} is outside the ladder -{n}..{n}", window.k()),
        ));
    }

    let len = 2 * n + 2; // slot 0 is a_0; slot j > 0 is level n = j - 1 - N
    let minus_i_h = Complex64::new(0.0, -cfg.coupling);
    let rhs = move |t: f64, a: &Vec<Complex64>| {
        let base = Complex64::from_polar(1.0, cfg.delta_e * t);
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        let mut phase = base.powi(-(n as i32));
        let a0 = a[0];
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 1..len {
            sum += a[j] * phase.conj();
            out[j] = minus_i_h * a0 * phase;
            phase *= base;
        }
        out[0] = minus_i_h * sum;
        out
    };

    let h_step = cfg.t_max / cfg.steps as f64;
    let mut state = vec![Complex64::new(0.0, 0.0); len];
    state[0] = Complex64::new(1.0, 0.0);

    let mut times = Vec::with_capacity(cfg.steps + 1);
    let mut a0_magnitude = Vec::with_capacity(cfg.steps + 1);
    let mut total_probability = Vec::with_capacity(cfg.steps + 1);
    let mut defect: f64 = 0.0;
    let mut record = |t: f64, a: &Vec<Complex64>, defect: &mut f64| {
        let total: f64 = a.iter().map(|c| c.norm_sqr()).sum();
        *defect = defect.max((total - 1.0).abs());
        times.push(t);
        a0_magnitude.push(a[0].norm());
        total_probability.push(total);
    };
    record(0.0, &state, &mut defect);
    let mut t = 0.0;
    for step in 1..=cfg.steps {
        state = rk4_step(&state, t, h_step, &rhs);
        t = h_step * step as f64;
        record(t, &state, &mut defect);
    }

    let fit_end = cfg.t_max.min(0.4 * TAU / cfg.delta_e);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &ti) in times.iter().enumerate() {
        if ti <= fit_end {
            xs.push(ti);
            ys.push(a0_magnitude[i].ln());
        }
    }
    if xs.len() < 2 {
        return Err(Error::FitDomain(format!(
            "only {} samples below the fit horizon {fit_end}",
            xs.len()
        )));
    }
    let f = fit_line(&xs, &ys);
    let rate = -2.0 * f.slope;
    if !rate.is_finite() || !f.r_squared.is_finite() {
        return Err(Error::FitDomain(
            "survival amplitude left the log-linear regime".to_string(),
        ));
    }
    if cfg.coupling > 0.0 && f.r_squared < 0.999 {
        log::warn!(
            "survival decay is not cleanly exponential (r^2 = {:.6}); \
             the ladder is too sparse or the window too long for a golden-rule fit",
            f.r_squared
        );
    }
    Ok(LadderDecay {
        rate,
        r_squared: f.r_squared,
        max_conservation_defect: defect,
        times,
        a0_magnitude,
        total_probability,
    })
}
