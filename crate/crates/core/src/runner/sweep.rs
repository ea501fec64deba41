//! ε-continuation: the same initial data integrated for a decreasing list of ε.

use super::{integrate, DiagnosticsRecord, IntegratorConfig};
use crate::curve::{velocity_field, DiscreteCurve};
use crate::error::{invalid, FlowError, Result};
use crate::flow::FlowParams;

#[derive(Debug, Clone)]
pub struct SweepRunSummary {
    pub epsilon: f64,
    pub final_curve: DiscreteCurve,
    pub records: Vec<DiagnosticsRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPair {
    pub eps_a: f64,
    pub eps_b: f64,
    /// `H^{k-1}` distance between the final velocity fields.
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub runs: Vec<SweepRunSummary>,
    /// Every pair `i < j`.
    pub pairs: Vec<SweepPair>,
    /// Distances between consecutive ε, in sweep order.
    pub consecutive: Vec<f64>,
    /// Whether `consecutive` is non-increasing.
    pub monotone: bool,
}

impl SweepReport {
    pub fn to_table(&self) -> String {
        let mut out = String::from("eps_a,eps_b,distance\n");
        for p in &self.pairs {
            out.push_str(&format!("{:e},{:e},{:.16e}\n", p.eps_a, p.eps_b, p.distance));
        }
        out.push_str(&format!("consecutive distances non-increasing: {}\n", self.monotone));
        out
    }
}

/// Runs [`integrate`] for every ε concurrently and compares the final states.
///
/// Velocity fields of different curves live in different tangent spaces, so
/// the distance is taken between the ambient fields with flat derivatives:
/// `(Σ_{l<k} ‖∂^l(u_x - v_x)‖²_{L²})^{1/2}` with `k = cfg.k_diag`.
pub fn epsilon_sweep(
    curve0: &DiscreteCurve,
    params: &FlowParams,
    epsilons: &[f64],
    cfg: &IntegratorConfig,
) -> Result<SweepReport> {
    if epsilons.is_empty() {
        return invalid("need at least one epsilon");
    }
    if epsilons.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
        return invalid("every epsilon must lie in (0, 1]");
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("epsilons must be strictly descending");
    }
    let results: Vec<Result<SweepRunSummary>> = std::thread::scope(|scope| {
        let handles: Vec<_> = epsilons
            .iter()
            .map(|&eps| {
                scope.spawn(move || {
                    let p = params.with_epsilon(eps)?;
                    let traj = integrate(curve0, &p, cfg)?;
                    Ok(SweepRunSummary { epsilon: eps, final_curve: traj.final_curve().clone(), records: traj.records })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut runs = Vec::with_capacity(results.len());
    for (r, &eps) in results.into_iter().zip(epsilons) {
        runs.push(r.map_err(|e| FlowError::SweepRun { epsilon: eps, source: Box::new(e) })?);
    }

    let vel: Vec<Vec<f64>> = runs.iter().map(|r| velocity_field(&r.final_curve).into_data()).collect();
    let mut pairs = Vec::new();
    let mut consecutive = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            let d = flat_distance(curve0, &vel[i], &vel[j], cfg.k_diag);
            pairs.push(SweepPair { eps_a: runs[i].epsilon, eps_b: runs[j].epsilon, distance: d });
            if j == i + 1 {
                consecutive.push(d);
            }
        }
    }
    let monotone = consecutive.windows(2).all(|w| w[1] <= w[0]);
    Ok(SweepReport { runs, pairs, consecutive, monotone })
}

fn flat_distance(curve: &DiscreteCurve, a: &[f64], b: &[f64], k: usize) -> f64 {
    let grid = curve.grid();
    let dim = curve.dim();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mut total = 0.0;
    for l in 0..k {
        let d = if l == 0 { diff.clone() } else { grid.derivative(&diff, dim, l as u32) };
        let sq: Vec<f64> = d.chunks_exact(dim).map(|v| v.iter().map(|x| x * x).sum()).collect();
        total += grid.integrate(&sq);
    }
    total.sqrt()
}
