//! Finite-difference check of the L² gradients of `E`, `E₂`, `E_*` and `E_{α,β,γ}`.
//!
//! Along the path `s ↦ reproject(u + sξ)` the central difference
//! `(F(s) - F(-s)) / 2s` converges to `∫h(∇F, ξ)` with error `O(s²)`.

use crate::curve::{l2_inner, l2_norm, DiscreteCurve, TangentField};
use crate::energy::{energy_total, gradient_total};
use crate::error::{invalid, Result};
use crate::flow::HamiltonianParams;
use std::fmt::{self, Write as _};

/// Random directions per energy.
pub const DIRECTIONS: usize = 10;
pub const RELATIVE_TOLERANCE: f64 = 1e-5;
/// Directional derivatives this small count as matching zero.
pub const ABSOLUTE_FLOOR: f64 = 1e-10;
pub const ORDER_TOLERANCE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyKind {
    Dirichlet,
    Bi,
    Star,
    Total(HamiltonianParams),
}

impl EnergyKind {
    fn weights(&self) -> HamiltonianParams {
        let w = |alpha, beta, gamma| HamiltonianParams { alpha, beta, gamma };
        match *self {
            EnergyKind::Dirichlet => w(1.0, 0.0, 0.0),
            EnergyKind::Bi => w(0.0, 1.0, 0.0),
            EnergyKind::Star => w(0.0, 0.0, 1.0),
            EnergyKind::Total(hp) => hp,
        }
    }
}

impl fmt::Display for EnergyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyKind::Dirichlet => f.write_str("E"),
            EnergyKind::Bi => f.write_str("E2"),
            EnergyKind::Star => f.write_str("Estar"),
            EnergyKind::Total(_) => f.write_str("Etotal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheckRow {
    pub energy: EnergyKind,
    pub seed: u64,
    /// `∫h(∇F, ξ)`.
    pub exact: f64,
    /// Central differences, one per step.
    pub differences: Vec<f64>,
    pub abs_errors: Vec<f64>,
    /// `abs_error / |exact|`.
    pub rel_errors: Vec<f64>,
    /// `log(err_i / err_{i+1}) / log(h_i / h_{i+1})` for consecutive steps whose
    /// errors are above the rounding level; `None` when no pair qualifies.
    pub order: Option<f64>,
}

impl GradientCheckRow {
    pub fn passed(&self) -> bool {
        let last = self.abs_errors.len() - 1;
        let close = self.rel_errors[last] <= RELATIVE_TOLERANCE || self.abs_errors[last] <= ABSOLUTE_FLOOR;
        let order_ok = self.order.is_none_or(|p| (p - 2.0).abs() <= ORDER_TOLERANCE);
        close && order_ok
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheckReport {
    pub steps: Vec<f64>,
    pub rows: Vec<GradientCheckRow>,
}

impl GradientCheckReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(GradientCheckRow::passed)
    }

    pub fn worst_rel_error(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.abs_errors[r.abs_errors.len() - 1] > ABSOLUTE_FLOOR)
            .map(|r| r.rel_errors[r.rel_errors.len() - 1])
            .fold(0.0, f64::max)
    }

    /// Observed orders, skipping rows at rounding level.
    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "steps: {:?}", self.steps);
        let _ = writeln!(out, "{:<7} {:>20} {:>12} {:>12} {:>7}  status", "energy", "seed", "exact", "rel err", "order");
        for r in &self.rows {
            let order = r.order.map_or("-".to_string(), |p| format!("{p:.3}"));
            let _ = writeln!(
                out,
                "{:<7} {:>20} {:>12.4e} {:>12.3e} {:>7}  {}",
                r.energy.to_string(),
                r.seed,
                r.exact,
                r.rel_errors[r.rel_errors.len() - 1],
                order,
                if r.passed() { "pass" } else { "FAIL" }
            );
        }
        out
    }
}

/// Checks `E`, `E₂`, `E_*` and `E_{α,β,γ}` against [`gradient_total`] along
/// ten random bandlimited directions (modes 1..=4). Direction `i`
/// uses seed `seed + i`.
pub fn gradient_check(curve: &DiscreteCurve, hp: &HamiltonianParams, steps: &[f64], seed: u64) -> Result<GradientCheckReport> {
    if steps.is_empty() || steps.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return invalid("steps must be positive");
    }
    if steps.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("steps must be strictly descending");
    }
    let dirs: Vec<(u64, TangentField)> = (0..DIRECTIONS as u64)
        .map(|i| {
            let s = seed.wrapping_add(i);
            let xi = TangentField::random_bandlimited(curve, s, 1, 4);
            let n = l2_norm(&xi);
            (s, if n > 0.0 { xi.scaled(1.0 / n) } else { xi })
        })
        .collect();
    let mut rows = Vec::new();
    for kind in [EnergyKind::Dirichlet, EnergyKind::Bi, EnergyKind::Star, EnergyKind::Total(*hp)] {
        let w = kind.weights();
        let grad = gradient_total(curve, &w);
        let f0 = energy_total(curve, &w).abs().max(1.0);
        for (s, xi) in &dirs {
            rows.push(check_direction(curve, &w, kind, &grad, xi, *s, steps, f0)?);
        }
    }
    Ok(GradientCheckReport { steps: steps.to_vec(), rows })
}

#[allow(clippy::too_many_arguments)]
fn check_direction(
    curve: &DiscreteCurve,
    w: &HamiltonianParams,
    kind: EnergyKind,
    grad: &TangentField,
    xi: &TangentField,
    seed: u64,
    steps: &[f64],
    f_scale: f64,
) -> Result<GradientCheckRow> {
    let exact = l2_inner(grad, xi);
    let moved = |s: f64| -> Result<f64> {
        let q: Vec<f64> = curve.points().iter().zip(xi.data()).map(|(p, x)| p + s * x).collect();
        let c = DiscreteCurve::reprojected(curve.target().clone(), curve.grid().clone(), &q)?;
        Ok(energy_total(&c, w))
    };
    let mut differences = Vec::with_capacity(steps.len());
    for &h in steps {
        differences.push((moved(h)? - moved(-h)?) / (2.0 * h));
    }
    let abs_errors: Vec<f64> = differences.iter().map(|d| (d - exact).abs()).collect();
    let rel_errors: Vec<f64> = abs_errors
        .iter()
        .map(|&e| {
            if e == 0.0 {
                0.0
            } else if exact == 0.0 {
                f64::INFINITY
            } else {
                e / exact.abs()
            }
        })
        .collect();
    // a central difference at step h carries rounding error of order eps·|F|/h
    let resolved = |i: usize| abs_errors[i] > 30.0 * f64::EPSILON * f_scale / steps[i];
    let orders: Vec<f64> = (0..steps.len().saturating_sub(1))
        .filter(|&i| resolved(i) && resolved(i + 1))
        .map(|i| (abs_errors[i] / abs_errors[i + 1]).ln() / (steps[i] / steps[i + 1]).ln())
        .collect();
    let order = orders.last().copied();
    Ok(GradientCheckRow { energy: kind, seed, exact, differences, abs_errors, rel_errors, order })
}
