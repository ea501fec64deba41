//! Randomized checks of the curvature algebra and the rewriting identities
//! the flow derivation relies on.
//!
//! Every check returns an [`IdentityReport`]: one [`IdentityRecord`] per
//! identity holding the worst violation seen, the tolerance, and a witness
//! (trial seed, node, both sides) for the worst case. Violations are relative
//! to `max(1, scale)` where `scale` is the natural size of the multilinear
//! expression (curvature bound times the norms of its arguments).

use crate::curve::{covariant_derivative, derivative_ladder, DiscreteCurve, TangentField};
use crate::energy::hamiltonian_vector_field;
use crate::error::{invalid, FlowError, Result};
use crate::flow::{map_hamiltonian_params, map_lpd_params, map_surface_params, rhs_lpd, rhs_main, rhs_surface};
use crate::flow::{FlowParams, HamiltonianParams};
use crate::gauge::curvature_bound;
use crate::manifold::{dot, norm, TargetManifold};
use crate::spectral::GridSpec;
use std::fmt::Write as _;

/// Tolerance for identities that are pure pointwise algebra.
pub const POINTWISE_TOLERANCE: f64 = 1e-10;
/// Tolerance for identities involving one spectral derivative of a product.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-7;
/// Tolerance for the flow-equation reformulations.
pub const REDUCTION_TOLERANCE: f64 = 1e-8;
/// Tolerance for the Hamiltonian form of the flow.
pub const HAMILTONIAN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub seed: Option<u64>,
    pub node: Option<usize>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRecord {
    pub name: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub witness: Option<Witness>,
}

impl IdentityRecord {
    pub fn passed(&self) -> bool {
        self.max_violation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IdentityReport {
    pub records: Vec<IdentityRecord>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(IdentityRecord::passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Merges `other` into `self`, keeping the worse record per identity.
    pub fn merge(&mut self, other: IdentityReport) {
        for rec in other.records {
            match self.records.iter_mut().find(|r| r.name == rec.name) {
                Some(mine) => {
                    mine.samples += rec.samples;
                    mine.tolerance = mine.tolerance.min(rec.tolerance);
                    if rec.max_violation > mine.max_violation || rec.max_violation.is_nan() {
                        mine.max_violation = rec.max_violation;
                        mine.witness = rec.witness;
                    }
                }
                None => self.records.push(rec),
            }
        }
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<34} {:>14} {:>10} {:>8}  status", "identity", "max violation", "tolerance", "samples");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<34} {:>14.3e} {:>10.1e} {:>8}  {}",
                r.name,
                r.max_violation,
                r.tolerance,
                r.samples,
                if r.passed() { "pass" } else { "FAIL" }
            );
            if !r.passed() {
                if let Some(w) = &r.witness {
                    let _ = writeln!(out, "    witness seed={:?} node={:?}", w.seed, w.node);
                    let _ = writeln!(out, "    lhs={:?}", w.lhs);
                    let _ = writeln!(out, "    rhs={:?}", w.rhs);
                }
            }
        }
        out
    }

    /// One `key=value` line per identity.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(
                out,
                "identity={} status={} max_violation={:e} tolerance={:e} samples={}",
                r.name,
                if r.passed() { "pass" } else { "fail" },
                r.max_violation,
                r.tolerance,
                r.samples
            );
            if let Some(w) = &r.witness {
                let seed = w.seed.map_or("none".to_string(), |s| s.to_string());
                let node = w.node.map_or("none".to_string(), |s| s.to_string());
                let _ = write!(out, " seed={seed} node={node} lhs={} rhs={}", join(&w.lhs), join(&w.rhs));
            }
            out.push('\n');
        }
        out
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",")
}

struct Tracker {
    rec: IdentityRecord,
}

impl Tracker {
    fn new(name: &str, tolerance: f64) -> Self {
        Tracker {
            rec: IdentityRecord { name: name.into(), max_violation: 0.0, tolerance, samples: 0, witness: None },
        }
    }

    fn observe(&mut self, seed: Option<u64>, node: Option<usize>, lhs: &[f64], rhs: &[f64], scale: f64) {
        let diff: f64 = lhs.iter().zip(rhs).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let v = diff / scale.max(1.0);
        self.rec.samples += 1;
        if self.rec.witness.is_none() || v > self.rec.max_violation || v.is_nan() {
            self.rec.max_violation = if v.is_nan() { f64::INFINITY } else { v };
            self.rec.witness = Some(Witness { seed, node, lhs: lhs.to_vec(), rhs: rhs.to_vec() });
        }
    }
}

fn report(trackers: Vec<Tracker>) -> IdentityReport {
    IdentityReport { records: trackers.into_iter().map(|t| t.rec).collect() }
}

fn trial_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

fn neg(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| -x).collect()
}

fn lin(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let n = terms[0].1.len();
    (0..n).map(|i| terms.iter().map(|(c, v)| c * v[i]).sum()).collect()
}

/// Properties (i)–(vi) of the curvature tensor plus `J² = -I` and `|JX| = |X|`.
///
/// Trial `i` draws its point from `random_point(s)` and `X, Y, Z, W` from
/// `random_tangent(p, s + 1..=s + 4)` with `s` the witness seed.
pub fn check_curvature_properties(target: &TargetManifold, trials: usize, seed: u64) -> IdentityReport {
    let tol = POINTWISE_TOLERANCE;
    let mut tr: Vec<Tracker> = [
        "curvature_antisymmetry",
        "curvature_pair_symmetry",
        "curvature_bianchi",
        "curvature_commutes_with_j",
        "curvature_j_invariance",
        "curvature_j_slot_exchange",
        "j_squares_to_minus_identity",
        "j_is_isometry",
    ]
    .iter()
    .map(|n| Tracker::new(n, tol))
    .collect();
    let k = curvature_bound(target);
    for i in 0..trials {
        let s = trial_seed(seed, i);
        let p = target.random_point(s);
        let p = p.coords();
        let v: Vec<Vec<f64>> = (1..=4).map(|o| target.random_tangent_at(p, s + o)).collect();
        let (x, y, z, w) = (&v[0], &v[1], &v[2], &v[3]);
        let r = |a: &[f64], b: &[f64], c: &[f64]| target.curvature_raw(p, a, b, c);
        let j = |a: &[f64]| target.complex_structure(p, a);
        let sc = k * norm(x) * norm(y) * norm(z);
        let (so, no) = (Some(s), None);

        tr[0].observe(so, no, &r(x, y, z), &neg(&r(y, x, z)), sc);
        let h1 = dot(&r(x, y, z), w);
        let h2 = dot(&r(z, w, x), y);
        let h3 = dot(&r(w, z, y), x);
        tr[1].observe(so, no, &[h1, h1], &[h2, h3], sc * norm(w));
        let b = lin(&[(1.0, &r(x, y, z)), (1.0, &r(y, z, x)), (1.0, &r(z, x, y))]);
        tr[2].observe(so, no, &b, &vec![0.0; b.len()], sc);
        tr[3].observe(so, no, &r(x, y, &j(z)), &j(&r(x, y, z)), sc);
        tr[4].observe(so, no, &r(&j(x), &j(y), z), &r(x, y, z), sc);
        let a1 = r(&j(x), y, z);
        let a2 = neg(&r(x, &j(y), z));
        let a3 = r(&j(y), x, z);
        tr[5].observe(so, no, &[a1.clone(), a1].concat(), &[a2, a3].concat(), sc);
        tr[6].observe(so, no, &j(&j(x)), &neg(x), norm(x));
        tr[7].observe(so, no, &[dot(&j(x), &j(y))], &[dot(x, y)], norm(x) * norm(y));
    }
    report(tr)
}

fn curvature_field(curve: &DiscreteCurve, a: &TangentField, b: &TangentField, c: &TangentField) -> TangentField {
    let t = curve.target();
    TangentField::from_raw(curve, curve.map_nodes(|j, p| t.curvature_raw(p, a.vector(j), b.vector(j), c.vector(j))))
}

/// `∇{R(Y1,Y2)Y3} = R(∇Y1,Y2)Y3 + R(Y1,∇Y2)Y3 + R(Y1,Y2)∇Y3` at every node.
pub fn check_parallel_curvature(curve: &DiscreteCurve, fields: [&TangentField; 3]) -> IdentityReport {
    let mut tr = Tracker::new("parallel_curvature", DERIVATIVE_TOLERANCE);
    let [y1, y2, y3] = fields;
    let lhs = covariant_derivative(&curvature_field(curve, y1, y2, y3));
    let (d1, d2, d3) = (covariant_derivative(y1), covariant_derivative(y2), covariant_derivative(y3));
    let t1 = curvature_field(curve, &d1, y2, y3);
    let t2 = curvature_field(curve, y1, &d2, y3);
    let t3 = curvature_field(curve, y1, y2, &d3);
    let k = curvature_bound(curve.target());
    for j in 0..curve.len() {
        let n = |f: &TangentField| norm(f.vector(j));
        let sc = k * (n(&d1) * n(y2) * n(y3) + n(y1) * n(&d2) * n(y3) + n(y1) * n(y2) * n(&d3));
        let rhs = lin(&[(1.0, t1.vector(j)), (1.0, t2.vector(j)), (1.0, t3.vector(j))]);
        tr.observe(None, Some(j), lhs.vector(j), &rhs, sc);
    }
    report(vec![tr])
}

/// Symmetry of `A1, A2, A3` and of `R(∇u_x, u_x)J` at random nodes with random `Y, Z`.
///
/// Trial `i` uses node `s mod M` and `Y, Z` from projected normal samples
/// seeded `s + 1`, `s + 2` with `s` the witness seed.
pub fn check_ai_symmetry(curve: &DiscreteCurve, trials: usize, seed: u64) -> IdentityReport {
    let mut tr: Vec<Tracker> =
        ["a1_symmetric", "a2_symmetric", "a3_symmetric", "r_dux_ux_j_symmetric"].iter().map(|n| Tracker::new(n, POINTWISE_TOLERANCE)).collect();
    let t = curve.target();
    let d = derivative_ladder(curve, 1);
    let k = curvature_bound(t);
    for i in 0..trials {
        let s = trial_seed(seed, i);
        let j = (s % curve.len() as u64) as usize;
        let p = curve.node(j);
        let (u1, u2) = (d[0].vector(j), d[1].vector(j));
        let y = t.random_tangent_at(p, s + 1);
        let z = t.random_tangent_at(p, s + 2);
        let ops = AOps::new(t, p, u1, u2);
        let sc = k * norm(u1) * norm(u2) * norm(&y) * norm(&z);
        let pairs = [
            (ops.a1(&y), ops.a1(&z)),
            (ops.a2(&y), ops.a2(&z)),
            (ops.a3(&y), ops.a3(&z)),
            (ops.rj(&y), ops.rj(&z)),
        ];
        for (idx, (ay, az)) in pairs.iter().enumerate() {
            tr[idx].observe(Some(s), Some(j), &[dot(ay, &z)], &[dot(&y, az)], sc);
        }
    }
    report(tr)
}

struct AOps<'a> {
    t: &'a TargetManifold,
    p: &'a [f64],
    u1: &'a [f64],
    u2: &'a [f64],
    ju1: Vec<f64>,
    ju2: Vec<f64>,
}

impl<'a> AOps<'a> {
    fn new(t: &'a TargetManifold, p: &'a [f64], u1: &'a [f64], u2: &'a [f64]) -> Self {
        AOps { t, p, u1, u2, ju1: t.complex_structure(p, u1), ju2: t.complex_structure(p, u2) }
    }

    fn r(&self, a: &[f64], b: &[f64], c: &[f64]) -> Vec<f64> {
        self.t.curvature_raw(self.p, a, b, c)
    }

    /// `R(Y,∇u_x)Ju_x - R(Y,u_x)J∇u_x`.
    fn a1(&self, y: &[f64]) -> Vec<f64> {
        lin(&[(1.0, &self.r(y, self.u2, &self.ju1)), (-1.0, &self.r(y, self.u1, &self.ju2))])
    }

    /// `R(Y,∇u_x)Ju_x + R(Y,Ju_x)∇u_x`.
    fn a2(&self, y: &[f64]) -> Vec<f64> {
        lin(&[(1.0, &self.r(y, self.u2, &self.ju1)), (1.0, &self.r(y, &self.ju1, self.u2))])
    }

    /// `R(Y,u_x)J∇u_x + R(Y,J∇u_x)u_x`.
    fn a3(&self, y: &[f64]) -> Vec<f64> {
        lin(&[(1.0, &self.r(y, self.u1, &self.ju2)), (1.0, &self.r(y, &self.ju2, self.u1))])
    }

    /// `R(∇u_x,u_x)JY`.
    fn rj(&self, y: &[f64]) -> Vec<f64> {
        self.r(self.u2, self.u1, &self.t.complex_structure(self.p, y))
    }
}

/// The rewriting identities used to isolate the derivative-losing terms.
///
/// Pointwise ones use random `Y, Z` at random nodes. `bianchi_divergence_rewrite`
/// uses a random bandlimited field `Z` (modes 1..=4, seeded with the witness
/// seed) and `Y = ∇Z` at every node.
pub fn check_resolution_identities(curve: &DiscreteCurve, trials: usize, seed: u64) -> IdentityReport {
    let names = [
        "resolve_r_y_dux_jux",
        "resolve_r_y_ux_jdux",
        "j_slot_swap",
        "bianchi_divergence_rewrite",
        "j_slot_bianchi_rewrite",
        "double_bianchi_rewrite",
        "antisymmetry_rewrite",
        "j_pair_swap",
    ];
    let mut tr: Vec<Tracker> = names
        .iter()
        .map(|n| Tracker::new(n, if *n == "bianchi_divergence_rewrite" { DERIVATIVE_TOLERANCE } else { POINTWISE_TOLERANCE }))
        .collect();
    let t = curve.target();
    let d = derivative_ladder(curve, 1);
    let k = curvature_bound(t);
    for i in 0..trials {
        let s = trial_seed(seed, i);
        let j = (s % curve.len() as u64) as usize;
        let p = curve.node(j);
        let (u1, u2) = (d[0].vector(j), d[1].vector(j));
        let y = t.random_tangent_at(p, s + 1);
        let z = t.random_tangent_at(p, s + 2);
        let o = AOps::new(t, p, u1, u2);
        let jf = |a: &[f64]| t.complex_structure(p, a);
        let r = |a: &[f64], b: &[f64], c: &[f64]| o.r(a, b, c);
        let (ju1, ju2) = (o.ju1.clone(), o.ju2.clone());
        let (so, no) = (Some(s), Some(j));
        let sc = k * norm(u1) * norm(u2) * norm(&y);
        let scz = k * norm(u1) * norm(u2) * norm(&z);

        let rj = r(&ju2, u1, &y);
        let quarter = lin(&[(0.25, &o.a2(&y)), (0.25, &o.a3(&y))]);
        let half_a1 = o.a1(&y);
        let rhs1 = lin(&[(0.5, &rj), (0.5, &half_a1), (1.0, &quarter)]);
        tr[0].observe(so, no, &r(&y, u2, &ju1), &rhs1, sc);
        let rhs2 = lin(&[(0.5, &rj), (-0.5, &half_a1), (1.0, &quarter)]);
        tr[1].observe(so, no, &r(&y, u1, &ju2), &rhs2, sc);

        let sc11 = k * norm(u1) * norm(u1) * norm(&y);
        tr[2].observe(so, no, &r(&jf(&y), u1, u1), &neg(&r(&y, &ju1, u1)), sc11);

        let l0 = r(&jf(&z), u1, u2);
        let l1 = r(&ju1, &z, u2);
        let l2 = lin(&[(-1.0, &r(&z, u2, &ju1)), (-1.0, &r(u2, &ju1, &z))]);
        let l3 = lin(&[(-1.0, &r(&z, u2, &ju1)), (1.0, &r(&ju2, u1, &z))]);
        tr[4].observe(so, no, &[l0.clone(), l0.clone(), l0].concat(), &[l1, l2, l3].concat(), scz);

        let jz = jf(&z);
        let m0 = r(&jz, u2, u1);
        let m1 = lin(&[(-1.0, &r(u2, u1, &jz)), (-1.0, &r(u1, &jz, u2))]);
        let m2 = lin(&[(-1.0, &r(u2, u1, &jz)), (1.0, &r(&jz, u1, u2))]);
        let m3 = lin(&[(-1.0, &r(u2, u1, &jz)), (-1.0, &r(&z, u2, &ju1)), (1.0, &r(&ju2, u1, &z))]);
        tr[5].observe(so, no, &[m0.clone(), m0.clone(), m0].concat(), &[m1, m2, m3].concat(), scz);

        tr[6].observe(so, no, &r(u2, &z, &ju1), &neg(&r(&z, u2, &ju1)), scz);
        tr[7].observe(so, no, &r(&ju1, u2, &z), &r(&ju2, u1, &z), scz);
    }

    // Y = ∇Z along the whole curve
    let fields = trials.clamp(1, 5);
    for f in 0..fields {
        let s = trial_seed(seed ^ 0x5EED, f);
        let zf = TangentField::random_bandlimited(curve, s, 1, 4);
        let yf = covariant_derivative(&zf);
        let inner = TangentField::from_raw(
            curve,
            curve.map_nodes(|j, p| {
                let u1 = d[0].vector(j);
                t.curvature_raw(p, &t.complex_structure(p, u1), u1, zf.vector(j))
            }),
        );
        let div = covariant_derivative(&inner);
        for j in 0..curve.len() {
            let p = curve.node(j);
            let (u1, u2) = (d[0].vector(j), d[1].vector(j));
            let (y, z) = (yf.vector(j), zf.vector(j));
            let ju1 = t.complex_structure(p, u1);
            let ju2 = t.complex_structure(p, u2);
            let r = |a: &[f64], b: &[f64], c: &[f64]| t.curvature_raw(p, a, b, c);
            let dv = div.vector(j);
            let l0 = r(y, u1, &ju1);
            let l1 = lin(&[(-1.0, &r(u1, &ju1, y)), (-1.0, &r(&ju1, y, u1))]);
            let l2 = lin(&[(1.0, &r(&ju1, u1, y)), (1.0, &r(y, &ju1, u1))]);
            let l3 = lin(&[(1.0, dv), (-1.0, &r(&ju2, u1, z)), (-1.0, &r(&ju1, u2, z)), (1.0, &r(y, &ju1, u1))]);
            let l4 = lin(&[(1.0, dv), (-2.0, &r(&ju2, u1, z)), (1.0, &r(y, &ju1, u1))]);
            let sc = k * (norm(u1) * norm(u1) * norm(y) + norm(u1) * norm(u2) * norm(z));
            tr[3].observe(
                Some(s),
                Some(j),
                &[l0.clone(), l0.clone(), l0.clone(), l0].concat(),
                &[l1, l2, l3, l4].concat(),
                sc,
            );
        }
    }
    report(tr)
}

/// Reduction of the main flow to its surface form on a 2-dimensional target
/// of constant curvature `s`.
pub fn check_surface_reduction(curve: &DiscreteCurve, params: &FlowParams, s: f64) -> Result<IdentityReport> {
    let t = curve.target();
    if t.tangent_dim() != 2 {
        return invalid(format!("surface reduction needs a 2-dimensional target, got dimension {}", t.tangent_dim()));
    }
    let d = derivative_ladder(curve, 2);
    let mut frame = Tracker::new("surface_frame_expansion", REDUCTION_TOLERANCE);
    let mut curv = Tracker::new("surface_curvature_reduction", REDUCTION_TOLERANCE);
    let mut flow = Tracker::new("surface_rhs_equivalence", REDUCTION_TOLERANCE);
    let scale_u = d[0].max_node_norm();
    for j in 0..curve.len() {
        let u1 = d[0].vector(j);
        if norm(u1) <= 1e-10 * scale_u.max(1e-300) || norm(u1) == 0.0 {
            return Err(FlowError::PreconditionViolation { node: j, reason: "u_x vanishes".into() });
        }
    }
    let k = curvature_bound(t);
    for j in 0..curve.len() {
        let p = curve.node(j);
        let (u1, u2) = (d[0].vector(j), d[1].vector(j));
        let ju1 = t.complex_structure(p, u1);
        let h11 = dot(u1, u1);
        for y in [u2, d[2].vector(j)] {
            let lhs: Vec<f64> = y.iter().map(|v| h11 * v).collect();
            let rhs = lin(&[(dot(y, u1), u1), (dot(y, &ju1), &ju1)]);
            frame.observe(None, Some(j), &lhs, &rhs, h11 * norm(y));
        }
        let lhs = t.curvature_raw(p, &ju1, u1, u2);
        let rhs: Vec<f64> = t.complex_structure(p, u2).iter().map(|v| s * h11 * v).collect();
        curv.observe(None, Some(j), &lhs, &rhs, k * h11 * norm(u2));
    }
    let main = rhs_main(curve, params);
    let surf = rhs_surface(curve, &map_surface_params(params, s));
    let sc = main.max_node_norm();
    for j in 0..curve.len() {
        flow.observe(None, Some(j), main.vector(j), surf.vector(j), sc);
    }
    Ok(report(vec![frame, curv, flow]))
}

/// The flat-derivative sphere form against the main flow under the LPD dictionary.
pub fn check_lpd_reduction(curve: &DiscreteCurve, a1: f64, a2: f64) -> Result<IdentityReport> {
    let lpd = rhs_lpd(curve, a1, a2)?;
    let main = rhs_main(curve, &map_lpd_params(a1, a2)?);
    let mut tr = Tracker::new("lpd_rhs_equivalence", REDUCTION_TOLERANCE);
    let sc = main.max_node_norm();
    for j in 0..curve.len() {
        tr.observe(None, Some(j), lpd.vector(j), main.vector(j), sc);
    }
    Ok(report(vec![tr]))
}

/// `J∇E_{α,β,γ}` against the main flow under the Hamiltonian dictionary.
pub fn check_hamiltonian_form(curve: &DiscreteCurve, hp: &HamiltonianParams) -> IdentityReport {
    let x = hamiltonian_vector_field(curve, hp);
    let main = rhs_main(curve, &map_hamiltonian_params(hp));
    let mut tr = Tracker::new("hamiltonian_rhs_equivalence", HAMILTONIAN_TOLERANCE);
    let sc = main.max_node_norm();
    for j in 0..curve.len() {
        tr.observe(None, Some(j), x.vector(j), main.vector(j), sc);
    }
    report(vec![tr])
}

/// Grid size used by [`run_identity_suite`] for its random curves.
pub const SUITE_GRID_POINTS: usize = 128;

/// Every check on one target: curvature properties over `trials` random
/// points, and the curve-based checks on the random curve `random_smooth(seed)`
/// with `M = 128`. Surface and LPD reductions run only on 2-dimensional targets.
pub fn run_identity_suite(target: &TargetManifold, trials: usize, seed: u64) -> Result<IdentityReport> {
    if trials == 0 {
        return invalid("trials must be at least 1");
    }
    let mut rep = check_curvature_properties(target, trials, seed);
    let grid = GridSpec::with_points(SUITE_GRID_POINTS)?;
    let curve = DiscreteCurve::random_smooth(target.clone(), grid, seed);
    let f: Vec<TangentField> =
        (0..3).map(|i| TangentField::random_bandlimited(&curve, trial_seed(seed, 1000 + i), 1, 4)).collect();
    rep.merge(check_parallel_curvature(&curve, [&f[0], &f[1], &f[2]]));
    rep.merge(check_ai_symmetry(&curve, trials, seed));
    rep.merge(check_resolution_identities(&curve, trials, seed));
    let hp = HamiltonianParams { alpha: 0.7, beta: 1.3, gamma: -0.4 };
    rep.merge(check_hamiltonian_form(&curve, &hp));
    if target.tangent_dim() == 2 {
        let params = FlowParams { a: 1.0, b: 5.0, c: -6.0, lambda: 1.0, epsilon: 0.0 };
        rep.merge(check_surface_reduction(&curve, &params, target.curvature_scale())?);
        rep.merge(check_lpd_reduction(&curve, 1.0, 1.0)?);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests;
