//! Gauge-corrected higher derivative `V_k = ∇^k u_x + Λ`, the energy `N_k`,
//! and the commutator bookkeeping behind the corrector.

use crate::curve::{covariant_derivative, derivative_ladder, l2_norm, DiscreteCurve, TangentField};
use crate::error::{invalid, Result};
use crate::manifold::{dot, TargetManifold};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeConstants {
    pub k: usize,
    /// Dispersive coefficient the constants were built from.
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
    pub d6: f64,
    pub d7: f64,
    pub e1: f64,
    pub e2: f64,
}

/// Constants for Sobolev index `k ≥ 4`.
///
/// `e1 = -d1` and `e2 = -d3 - e1`, so both cancellations hold exactly in
/// floating point. [`e2_closed_form`] gives the expanded expression.
pub fn gauge_constants(k: usize, a: f64, b: f64, c: f64) -> Result<GaugeConstants> {
    if k < 4 {
        return invalid(format!("gauge constants need k >= 4, got {k}"));
    }
    if a == 0.0 || ![a, b, c].iter().all(|v| v.is_finite()) {
        return invalid("gauge constants need finite coefficients with a != 0");
    }
    let kf = k as f64;
    let c1 = (2.0 * kf - 1.0) * a - 2.0 * b + (2.0 * kf + 2.0) * c;
    let c2 = -(kf - 1.0) * a + b;
    let c3 = -(2.0 * kf - 1.0) * a + kf * b - 2.0 * c;
    let c4 = (kf + 1.0) * b;
    let d1 = -a + b;
    let d3 = (kf - 0.5) * a + (kf - 1.5) * b + (2.0 * kf + 1.0) * c;
    let e1 = -d1;
    let e2 = -d3 - e1;
    Ok(GaugeConstants {
        k,
        a,
        c1,
        c2,
        c3,
        c4,
        d1,
        d2: b + c,
        d3,
        d4: c2,
        d5: (c3 - c4) / 2.0,
        d6: (c3 + c4) / 4.0,
        d7: (c3 + c4) / 4.0,
        e1,
        e2,
    })
}

/// `(-k - 1/2)a + (-k + 5/2)b - (2k + 1)c`.
pub fn e2_closed_form(k: usize, a: f64, b: f64, c: f64) -> f64 {
    let kf = k as f64;
    (-kf - 0.5) * a + (-kf + 2.5) * b - (2.0 * kf + 1.0) * c
}

fn corrector_from(curve: &DiscreteCurve, gc: &GaugeConstants, ux: &TangentField, low: &TangentField) -> TangentField {
    let t = curve.target();
    let s1 = -gc.e1 / (2.0 * gc.a);
    let s2 = gc.e2 / (8.0 * gc.a);
    let data = curve.map_nodes(|j, p| {
        let (u1, v) = (ux.vector(j), low.vector(j));
        let ju1 = t.complex_structure(p, u1);
        let jv = t.complex_structure(p, v);
        let l1 = t.curvature_raw(p, v, u1, u1);
        let l2 = t.curvature_raw(p, &ju1, u1, &jv);
        (0..p.len()).map(|i| s1 * l1[i] + s2 * l2[i]).collect()
    });
    TangentField::from_raw(curve, data)
}

/// `Λ = -(e1/2a) R(∇^{k-2}u_x, u_x)u_x + (e2/8a) R(Ju_x, u_x) J∇^{k-2}u_x`.
pub fn gauge_corrector(curve: &DiscreteCurve, gc: &GaugeConstants) -> TangentField {
    let d = derivative_ladder(curve, gc.k - 2);
    corrector_from(curve, gc, &d[0], &d[gc.k - 2])
}

/// `V_k = ∇^k u_x + Λ`.
pub fn gauge_field(curve: &DiscreteCurve, gc: &GaugeConstants) -> TangentField {
    let d = derivative_ladder(curve, gc.k);
    let lambda = corrector_from(curve, gc, &d[0], &d[gc.k - 2]);
    d[gc.k].add_scaled(1.0, &lambda)
}

/// Norms monitored along a run, all from one derivative ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeNorms {
    /// `‖u_x‖_{H^{k-1}}`.
    pub hk1: f64,
    /// `‖V_k‖_{L²}`.
    pub vk_l2: f64,
    /// `N_k = (‖u_x‖²_{H^{k-1}} + ‖V_k‖²_{L²})^{1/2}`.
    pub nk: f64,
    /// `‖u_x‖_{H^k}` without the corrector.
    pub hk_naive: f64,
}

pub fn gauge_norms(curve: &DiscreteCurve, gc: &GaugeConstants) -> GaugeNorms {
    let d = derivative_ladder(curve, gc.k);
    let sq: Vec<f64> = d.iter().map(|f| l2_norm(f).powi(2)).collect();
    let hk1_sq: f64 = sq[..gc.k].iter().sum();
    let lambda = corrector_from(curve, gc, &d[0], &d[gc.k - 2]);
    let vk = d[gc.k].add_scaled(1.0, &lambda);
    let vk_sq = l2_norm(&vk).powi(2);
    GaugeNorms {
        hk1: hk1_sq.sqrt(),
        vk_l2: vk_sq.sqrt(),
        nk: (hk1_sq + vk_sq).sqrt(),
        hk_naive: (hk1_sq + sq[gc.k]).sqrt(),
    }
}

/// `N_k`.
pub fn energy_nk(curve: &DiscreteCurve, gc: &GaugeConstants) -> f64 {
    gauge_norms(curve, gc).nk
}

/// L² norms of the pieces of `[aJ∇⁴, Φ∇⁻²]Y`, where
/// `Φ = -(e1/2a) R(·, u_x)u_x + (e2/8a) R(Ju_x, u_x)J`.
///
/// `residual` is `LHS - principal`. `remainder` is the exact zeroth-order
/// part of the Leibniz expansion, so `expansion_defect = LHS - principal - remainder`
/// only carries discretization error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorDecomposition {
    /// `‖∇²W‖`, the probe actually used (see [`commutator_decomposition`]).
    pub probe: f64,
    pub lhs: f64,
    pub principal: f64,
    pub residual: f64,
    pub remainder: f64,
    pub expansion_defect: f64,
}

const PROBE_MEAN_TOLERANCE: f64 = 1e-10;
const INVERSE_SWEEPS: usize = 4;

/// `‖[aJ∇⁴, Φ∇⁻²]Y - principal terms‖_{L²}`.
pub fn cancellation_residual(curve: &DiscreteCurve, gc: &GaugeConstants, probe: &TangentField) -> Result<f64> {
    Ok(commutator_decomposition(curve, gc, probe)?.residual)
}

/// Evaluates both sides of the commutator expansion on a mean-free probe `Y`.
///
/// `W = ∇⁻²Y` is built from the spectral antiderivative with a few
/// defect-correction sweeps; every term is then evaluated with `∇²W` in
/// place of `Y`, so the two sides see the same field.
pub fn commutator_decomposition(
    curve: &DiscreteCurve,
    gc: &GaugeConstants,
    probe: &TangentField,
) -> Result<CommutatorDecomposition> {
    if probe.curve() != curve {
        return invalid("probe is attached to a different curve");
    }
    let t = curve.target();
    let dim = curve.dim();
    let grid = curve.grid();
    let mean = grid.mean(probe.data(), dim);
    let rms = l2_norm(probe) / (2.0 * std::f64::consts::PI).sqrt();
    let mean_norm = crate::manifold::norm(&mean);
    if mean_norm > PROBE_MEAN_TOLERANCE * rms.max(f64::MIN_POSITIVE) {
        return invalid(format!("probe has a nonzero mean mode ({mean_norm:.3e}); the inverse Laplacian is undefined"));
    }

    let mut w = curve.project_field(&grid.inverse_second_derivative(probe.data(), dim));
    for _ in 0..INVERSE_SWEEPS {
        let lap = covariant_derivative(&covariant_derivative(&w));
        let defect = probe.add_scaled(-1.0, &lap);
        let corr = curve.project_field(&grid.inverse_second_derivative(defect.data(), dim));
        w = w.add_scaled(1.0, &corr);
    }
    let mut wl = vec![w];
    for i in 0..4 {
        let next = covariant_derivative(&wl[i]);
        wl.push(next);
    }
    // wl[2] = Y, wl[3] = ∇Y, wl[4] = ∇²Y
    let u = derivative_ladder(curve, 4);
    let s1 = -gc.e1 / (2.0 * gc.a);
    let s2 = gc.e2 / (8.0 * gc.a);
    let a = gc.a;

    let phi = |p: &[f64], u1: &[f64], z: &[f64]| -> Vec<f64> {
        let ju1 = t.complex_structure(p, u1);
        let jz = t.complex_structure(p, z);
        let r1 = t.curvature_raw(p, z, u1, u1);
        let r2 = t.curvature_raw(p, &ju1, u1, &jz);
        (0..p.len()).map(|i| s1 * r1[i] + s2 * r2[i]).collect()
    };

    let phi_w = TangentField::from_raw(curve, curve.map_nodes(|j, p| phi(p, u[0].vector(j), wl[0].vector(j))));
    let mut d4 = phi_w;
    for _ in 0..4 {
        d4 = covariant_derivative(&d4);
    }
    let lhs = curve.map_nodes(|j, p| {
        let first = t.complex_structure(p, d4.vector(j));
        let jq = t.complex_structure(p, wl[4].vector(j));
        let second = phi(p, u[0].vector(j), &jq);
        (0..dim).map(|i| a * (first[i] - second[i])).collect()
    });

    let inner = TangentField::from_raw(
        curve,
        curve.map_nodes(|j, p| {
            let u1 = u[0].vector(j);
            let ju1 = t.complex_structure(p, u1);
            t.curvature_raw(p, &ju1, u1, wl[3].vector(j))
        }),
    );
    let div = covariant_derivative(&inner);
    let (e1, e2) = (gc.e1, gc.e2);
    let principal = curve.map_nodes(|j, p| {
        let (u1, u2) = (u[0].vector(j), u[1].vector(j));
        let (y1, y2) = (wl[3].vector(j), wl[4].vector(j));
        let ju1 = t.complex_structure(p, u1);
        let ju2 = t.complex_structure(p, u2);
        let p1 = t.curvature_raw(p, y2, &ju1, u1);
        let p3 = t.curvature_raw(p, &ju2, u1, y1);
        let a2 = add(&t.curvature_raw(p, y1, u2, &ju1), &t.curvature_raw(p, y1, &ju1, u2));
        let a3 = add(&t.curvature_raw(p, y1, u1, &ju2), &t.curvature_raw(p, y1, &ju2, u1));
        let dv = div.vector(j);
        (0..dim).map(|i| -e1 * p1[i] - 0.5 * e1 * dv[i] + (-e1 - e2) * p3[i] - e1 * (a2[i] + a3[i])).collect()
    });

    let remainder = curve.map_nodes(|j, p| {
        let ud: Vec<&[f64]> = (0..5).map(|i| u[i].vector(j)).collect();
        let terms: [(usize, &[f64], f64, f64); 3] = [
            (2, wl[2].vector(j), -3.0 * e1, 0.75 * e2),
            (3, wl[1].vector(j), -2.0 * e1, 0.5 * e2),
            (4, wl[0].vector(j), -0.5 * e1, 0.125 * e2),
        ];
        let mut acc = vec![0.0; dim];
        for (order, z, w1, w2) in terms {
            let jz = t.complex_structure(p, z);
            for i in 0..=order {
                let bin = binomial(order, i);
                let r1 = t.curvature_raw(p, z, ud[i], ud[order - i]);
                let ji = t.complex_structure(p, ud[i]);
                let r2 = t.curvature_raw(p, &ji, ud[order - i], &jz);
                for q in 0..dim {
                    acc[q] += bin * (w1 * r1[q] + w2 * r2[q]);
                }
            }
        }
        t.complex_structure(p, &acc)
    });

    let norm_of = |v: &[f64]| -> f64 {
        let vals: Vec<f64> = v.chunks_exact(dim).map(|x| dot(x, x)).collect();
        grid.integrate(&vals).max(0.0).sqrt()
    };
    let res: Vec<f64> = lhs.iter().zip(&principal).map(|(l, p)| l - p).collect();
    let defect: Vec<f64> = res.iter().zip(&remainder).map(|(r, q)| r - q).collect();
    Ok(CommutatorDecomposition {
        probe: l2_norm(&wl[2]),
        lhs: norm_of(&lhs),
        principal: norm_of(&principal),
        residual: norm_of(&res),
        remainder: norm_of(&remainder),
        expansion_defect: norm_of(&defect),
    })
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A mean-free probe of unit L² norm with ambient modes in `(cap/2, cap]`.
pub fn mean_free_probe(curve: &DiscreteCurve, cap: u32, seed: u64) -> TangentField {
    let dim = curve.dim();
    let mut y = TangentField::random_bandlimited(curve, seed, cap / 2 + 1, cap);
    for _ in 0..100 {
        let mean = curve.grid().mean(y.data(), dim);
        if crate::manifold::norm(&mean) <= 1e-15 * l2_norm(&y) {
            break;
        }
        let shifted: Vec<f64> = y.data().iter().enumerate().map(|(i, v)| v - mean[i % dim]).collect();
        y = curve.project_field(&shifted);
    }
    let n = l2_norm(&y);
    y.scaled(1.0 / n)
}

/// Growth of the commutator pieces with the probe frequency cap.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorScaling {
    pub caps: Vec<u32>,
    pub decompositions: Vec<CommutatorDecomposition>,
    /// Least-squares slope of `log₂(principal / probe)` against `log₂(cap)`.
    pub principal_slope: f64,
    /// Same for the residual.
    pub residual_slope: f64,
}

impl CommutatorScaling {
    pub fn slope_gap(&self) -> f64 {
        self.principal_slope - self.residual_slope
    }
}

pub fn commutator_scaling(
    curve: &DiscreteCurve,
    gc: &GaugeConstants,
    caps: &[u32],
    seed: u64,
) -> Result<CommutatorScaling> {
    if caps.len() < 2 {
        return invalid("need at least two frequency caps");
    }
    let mut decs = Vec::with_capacity(caps.len());
    for (i, &cap) in caps.iter().enumerate() {
        let probe = mean_free_probe(curve, cap, seed.wrapping_add(i as u64));
        decs.push(commutator_decomposition(curve, gc, &probe)?);
    }
    let xs: Vec<f64> = caps.iter().map(|&c| (c as f64).log2()).collect();
    let py: Vec<f64> = decs.iter().map(|d| (d.principal / d.probe).log2()).collect();
    let ry: Vec<f64> = decs.iter().map(|d| (d.residual / d.probe).log2()).collect();
    Ok(CommutatorScaling {
        caps: caps.to_vec(),
        principal_slope: slope(&xs, &py),
        residual_slope: slope(&xs, &ry),
        decompositions: decs,
    })
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Upper bound `K` with `|R(X,Y)Z| ≤ K|X||Y||Z|`.
pub fn curvature_bound(target: &TargetManifold) -> f64 {
    2.0 * target.curvature_scale()
}

#[cfg(test)]
mod tests;
