//! Time integration of the regularized flow, diagnostics, gradient checks,
//! ε-continuation sweeps and the command-line front end.
//!
//! The state is the row-major array of ambient node coordinates. Every step
//! (and every RK4 stage) ends with a node-wise reprojection onto the target.

mod cli;
mod config;
mod gradcheck;
mod io;
mod sweep;

pub use cli::{run_cli, EXIT_CONFIG, EXIT_IDENTITY, EXIT_NUMERICAL, EXIT_OK};
pub use config::{InitialData, OutputConfig, RunConfig, TargetConfig};
pub use gradcheck::{gradient_check, EnergyKind, GradientCheckReport, GradientCheckRow};
pub use io::{read_checkpoint, write_checkpoint, write_diagnostics_csv, CHECKPOINT_MAGIC, CHECKPOINT_VERSION, CSV_HEADER};
pub use sweep::{epsilon_sweep, SweepPair, SweepReport, SweepRunSummary};

use crate::curve::DiscreteCurve;
use crate::energy::{energies, Energies};
use crate::error::{AbortReason, FlowError, Result};
use crate::flow::{rhs_regularized, FlowParams, HamiltonianParams};
use crate::gauge::{gauge_constants, gauge_norms, GaugeConstants, GaugeNorms};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Largest allowed constraint drift of an accepted state.
pub const DRIFT_LIMIT: f64 = 1e-8;
pub const DEFAULT_STABILITY_FACTOR: f64 = 0.2;
/// `|a| / ε` above which the IMEX scheme is expected to go unstable at high modes.
pub const IMEX_DISPERSION_RATIO: f64 = 0.35;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order semi-implicit BDF: `-ε∂⁴` implicit, everything else extrapolated.
    ImexBdf2,
    ExplicitRk4,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::ImexBdf2 => "imex-bdf2",
            Scheme::ExplicitRk4 => "rk4",
        })
    }
}

impl FromStr for Scheme {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "imex-bdf2" | "imex_bdf2" | "imex" | "bdf2" => Ok(Scheme::ImexBdf2),
            "rk4" | "explicit-rk4" | "explicit_rk4" => Ok(Scheme::ExplicitRk4),
            other => Err(FlowError::Config(format!("unknown scheme '{other}' (expected imex-bdf2 or rk4)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub dt: f64,
    /// Rounded to a whole number of steps of size `dt`.
    pub t_end: f64,
    pub record_every: usize,
    /// Sobolev index of the monitored gauge energy `N_k`.
    pub k_diag: usize,
    pub stability_factor: f64,
}

impl IntegratorConfig {
    pub fn new(scheme: Scheme, dt: f64, t_end: f64) -> Self {
        IntegratorConfig { scheme, dt, t_end, record_every: 1, k_diag: 4, stability_factor: DEFAULT_STABILITY_FACTOR }
    }

    pub fn with_record_every(mut self, n: usize) -> Self {
        self.record_every = n;
        self
    }

    pub fn with_k_diag(mut self, k: usize) -> Self {
        self.k_diag = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(FlowError::Config(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        if self.k_diag < 4 {
            return bad(format!("k_diag must be at least 4, got {}", self.k_diag));
        }
        if !(self.stability_factor > 0.0 && self.stability_factor.is_finite()) {
            return bad(format!("stability_factor must be positive, got {}", self.stability_factor));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }
}

/// Explicit RK4 step bound `stability_factor · (2π/M)⁴ / (|a| + ε)`.
pub fn cfl_bound(points: usize, params: &FlowParams, stability_factor: f64) -> f64 {
    let h = 2.0 * PI / points as f64;
    stability_factor * h.powi(4) / (params.a.abs() + params.epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub t: f64,
    pub energies: Energies,
    /// `E_{α,β,γ}` with `(α, β, γ)` read back from the flow coefficients.
    pub total: f64,
    pub norms: GaugeNorms,
    /// Largest embedding violation over the nodes.
    pub constraint_drift: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Curves at the recorded steps, starting with the initial curve.
    pub curves: Vec<DiscreteCurve>,
    pub records: Vec<DiagnosticsRecord>,
}

impl Trajectory {
    pub fn final_curve(&self) -> &DiscreteCurve {
        self.curves.last().expect("trajectory holds the initial curve")
    }
}

struct Diagnostics {
    gc: GaugeConstants,
    hp: HamiltonianParams,
}

impl Diagnostics {
    fn new(params: &FlowParams, k: usize) -> Result<Self> {
        let gc = gauge_constants(k, params.a, params.b, params.c)
            .map_err(|e| FlowError::Config(format!("gauge diagnostics unavailable: {e}")))?;
        Ok(Diagnostics { gc, hp: HamiltonianParams::from_flow(params) })
    }

    fn record(&self, curve: &DiscreteCurve, step: usize, t: f64) -> DiagnosticsRecord {
        let e = energies(curve);
        let total = self.hp.alpha * e.dirichlet + self.hp.beta * e.bi + self.hp.gamma * e.star;
        DiagnosticsRecord {
            step,
            t,
            energies: e,
            total,
            norms: gauge_norms(curve, &self.gc),
            constraint_drift: curve.max_constraint_violation(),
        }
    }
}

/// Integrates `u_t = rhs_regularized(u)` from `curve0`.
///
/// Aborts with [`FlowError::NumericalAbort`] on non-finite state, on
/// constraint drift above [`DRIFT_LIMIT`], and when `N_k` at a recorded step
/// exceeds twice its initial value ("time-cut reached").
pub fn integrate(curve0: &DiscreteCurve, params: &FlowParams, cfg: &IntegratorConfig) -> Result<Trajectory> {
    params.validate().map_err(|e| FlowError::Config(e.to_string()))?;
    cfg.validate()?;
    let m = curve0.len();
    if cfg.scheme == Scheme::ExplicitRk4 {
        let bound = cfl_bound(m, params, cfg.stability_factor);
        if cfg.dt > bound {
            return Err(FlowError::Config(format!(
                "dt = {:e} exceeds the explicit stability bound {:e} for M = {m}",
                cfg.dt, bound
            )));
        }
    }
    if params.epsilon == 0.0 {
        log::info!("epsilon = 0: integrating the unregularized flow (experimental)");
    }
    if cfg.scheme == Scheme::ImexBdf2 && params.a.abs() > IMEX_DISPERSION_RATIO * params.epsilon {
        log::warn!(
            "imex-bdf2 treats aJ∂⁴ explicitly; |a| = {} > {} * epsilon may be unstable at high modes",
            params.a.abs(),
            IMEX_DISPERSION_RATIO
        );
    }
    let diag = Diagnostics::new(params, cfg.k_diag)?;
    let steps = cfg.steps();
    let first = diag.record(curve0, 0, 0.0);
    let mut traj = Trajectory { curves: vec![curve0.clone()], records: vec![first] };
    let nk0 = first.norms.nk;

    let mut stepper = Stepper::new(params, cfg);
    let mut u = curve0.clone();
    for n in 1..=steps {
        let t = n as f64 * cfg.dt;
        u = stepper.advance(&u).map_err(|reason| FlowError::NumericalAbort { step: n, t, reason })?;
        let drift = u.max_constraint_violation();
        if !drift.is_finite() {
            return Err(FlowError::NumericalAbort { step: n, t, reason: AbortReason::NonFinite });
        }
        if drift > DRIFT_LIMIT {
            return Err(FlowError::NumericalAbort { step: n, t, reason: AbortReason::ConstraintDrift(drift) });
        }
        if n % cfg.record_every == 0 || n == steps {
            let rec = diag.record(&u, n, t);
            if !record_is_finite(&rec) {
                return Err(FlowError::NumericalAbort { step: n, t, reason: AbortReason::NonFinite });
            }
            if rec.norms.nk > 2.0 * nk0 {
                return Err(FlowError::NumericalAbort {
                    step: n,
                    t,
                    reason: AbortReason::TimeCut { n4: rec.norms.nk, n4_initial: nk0 },
                });
            }
            traj.records.push(rec);
            traj.curves.push(u.clone());
        }
    }
    Ok(traj)
}

fn record_is_finite(r: &DiagnosticsRecord) -> bool {
    [r.energies.dirichlet, r.energies.bi, r.energies.star, r.total, r.norms.hk1, r.norms.vk_l2, r.norms.nk, r.norms.hk_naive]
        .iter()
        .all(|v| v.is_finite())
}

struct Stepper<'a> {
    params: &'a FlowParams,
    cfg: &'a IntegratorConfig,
    /// Previous state and explicit part, for the two-step scheme.
    prev: Option<(Vec<f64>, Vec<f64>)>,
}

impl<'a> Stepper<'a> {
    fn new(params: &'a FlowParams, cfg: &'a IntegratorConfig) -> Self {
        Stepper { params, cfg, prev: None }
    }

    fn advance(&mut self, u: &DiscreteCurve) -> std::result::Result<DiscreteCurve, AbortReason> {
        match self.cfg.scheme {
            Scheme::ExplicitRk4 => self.rk4(u),
            Scheme::ImexBdf2 => self.imex(u),
        }
    }

    fn rhs(&self, u: &DiscreteCurve) -> std::result::Result<Vec<f64>, AbortReason> {
        let f = rhs_regularized(u, self.params).into_data();
        if f.iter().all(|v| v.is_finite()) {
            Ok(f)
        } else {
            Err(AbortReason::NonFinite)
        }
    }

    fn rk4(&self, u: &DiscreteCurve) -> std::result::Result<DiscreteCurve, AbortReason> {
        let dt = self.cfg.dt;
        let x = u.points();
        let stage = |k: &[f64], h: f64| retract(u, &axpy(x, h, k));
        let k1 = self.rhs(u)?;
        let k2 = self.rhs(&stage(&k1, 0.5 * dt)?)?;
        let k3 = self.rhs(&stage(&k2, 0.5 * dt)?)?;
        let k4 = self.rhs(&stage(&k3, dt)?)?;
        let next: Vec<f64> =
            (0..x.len()).map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect();
        retract(u, &next)
    }

    /// `(3u^{n+1} - 4u^n + u^{n-1}) / 2dt = -ε∂⁴u^{n+1} + 2N^n - N^{n-1}`, with an
    /// implicit Euler start. `N = rhs_regularized + ε∂⁴u` using the dealiased
    /// `∂⁴`, so modes above the cutoff are purely damped.
    fn imex(&mut self, u: &DiscreteCurve) -> std::result::Result<DiscreteCurve, AbortReason> {
        let dt = self.cfg.dt;
        let eps = self.params.epsilon;
        let grid = u.grid();
        let dim = u.dim();
        let x = u.points();
        let mut nl = self.rhs(u)?;
        if eps != 0.0 {
            let d4 = grid.derivative(x, dim, 4);
            for (n, d) in nl.iter_mut().zip(&d4) {
                *n += eps * d;
            }
        }
        let (rhs, c0, c1) = match &self.prev {
            None => (axpy(x, dt, &nl), 1.0, dt),
            Some((xp, np)) => {
                let r = (0..x.len()).map(|i| 4.0 * x[i] - xp[i] + 2.0 * dt * (2.0 * nl[i] - np[i])).collect();
                (r, 3.0, 2.0 * dt)
            }
        };
        let next = grid.apply_symbol(&rhs, dim, false, |k| Complex64::new(1.0 / (c0 + c1 * eps * k.powi(4)), 0.0));
        self.prev = Some((x.to_vec(), nl));
        retract(u, &next)
    }
}

fn axpy(x: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn retract(like: &DiscreteCurve, coords: &[f64]) -> std::result::Result<DiscreteCurve, AbortReason> {
    DiscreteCurve::reprojected(like.target().clone(), like.grid().clone(), coords).map_err(|_| AbortReason::NonFinite)
}
