//! Right-hand sides of the curve flows and the parameter maps between them.

use crate::curve::{derivative_ladder, DiscreteCurve, TangentField};
use crate::error::{invalid, Result};
use crate::manifold::{dot, TargetKind};

/// Coefficients of
/// `u_t = (-ε + aJ)∇³u_x + λJ∇u_x + bR(∇u_x,u_x)Ju_x + cR(Ju_x,u_x)∇u_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lambda: f64,
    pub epsilon: f64,
}

impl FlowParams {
    pub fn new(a: f64, b: f64, c: f64, lambda: f64, epsilon: f64) -> Result<Self> {
        let p = FlowParams { a, b, c, lambda, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.a, self.b, self.c, self.lambda, self.epsilon].iter().all(|v| v.is_finite()) {
            return invalid("flow parameters must be finite");
        }
        if self.a == 0.0 {
            return invalid("the dispersive coefficient a must be nonzero");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return invalid(format!("epsilon must lie in [0, 1], got {}", self.epsilon));
        }
        Ok(())
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }
}

/// Coefficients of
/// `u_t = b1 J∇³u_x + b2 J∇u_x + b3 h(u_x,u_x) J∇u_x + b4 h(∇u_x,u_x) Ju_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParams {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
}

impl SurfaceParams {
    pub fn new(b1: f64, b2: f64, b3: f64, b4: f64) -> Result<Self> {
        if b1 == 0.0 || ![b1, b2, b3, b4].iter().all(|v| v.is_finite()) {
            return invalid("surface flow needs finite coefficients with b1 != 0");
        }
        Ok(SurfaceParams { b1, b2, b3, b4 })
    }
}

/// Weights of `E_{α,β,γ} = αE + βE₂ + γE_*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl HamiltonianParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if beta == 0.0 || ![alpha, beta, gamma].iter().all(|v| v.is_finite()) {
            return invalid("hamiltonian weights must be finite with beta != 0");
        }
        Ok(HamiltonianParams { alpha, beta, gamma })
    }

    /// Inverse of [`map_hamiltonian_params`] on its image: `α = -λ, β = a, γ = -c/12`.
    pub fn from_flow(params: &FlowParams) -> Self {
        HamiltonianParams { alpha: -params.lambda, beta: params.a, gamma: -params.c / 12.0 }
    }
}

/// `a = β, λ = -α, b = β + 8γ, c = -12γ`, with `ε = 0`.
pub fn map_hamiltonian_params(hp: &HamiltonianParams) -> FlowParams {
    FlowParams { a: hp.beta, lambda: -hp.alpha, b: hp.beta + 8.0 * hp.gamma, c: -12.0 * hp.gamma, epsilon: 0.0 }
}

/// Surface coefficients for a target of constant sectional curvature `s`.
pub fn map_surface_params(params: &FlowParams, s: f64) -> SurfaceParams {
    SurfaceParams { b1: params.a, b2: params.lambda, b3: (params.b + params.c) * s, b4: -params.b * s }
}

/// `a = a1, λ = 1, b = 5a1 - 2a2, c = -6a1 + 3a2`, with `ε = 0`.
pub fn map_lpd_params(a1: f64, a2: f64) -> Result<FlowParams> {
    if a1 == 0.0 {
        return invalid("a1 must be nonzero");
    }
    Ok(FlowParams { a: a1, lambda: 1.0, b: 5.0 * a1 - 2.0 * a2, c: -6.0 * a1 + 3.0 * a2, epsilon: 0.0 })
}

pub fn rhs_main(curve: &DiscreteCurve, params: &FlowParams) -> TangentField {
    let d = derivative_ladder(curve, 3);
    main_terms(curve, params, &d)
}

fn main_terms(curve: &DiscreteCurve, params: &FlowParams, d: &[TangentField]) -> TangentField {
    let t = curve.target();
    let FlowParams { a, b, c, lambda, .. } = *params;
    let data = curve.map_nodes(|j, p| {
        let (u1, u2, u4) = (d[0].vector(j), d[1].vector(j), d[3].vector(j));
        let ju1 = t.complex_structure(p, u1);
        let disp = t.complex_structure(p, u4);
        let lin = t.complex_structure(p, u2);
        let rb = t.curvature_raw(p, u2, u1, &ju1);
        let rc = t.curvature_raw(p, &ju1, u1, u2);
        (0..p.len()).map(|i| a * disp[i] + lambda * lin[i] + b * rb[i] + c * rc[i]).collect()
    });
    TangentField::from_raw(curve, data)
}

/// [`rhs_main`] plus `-ε∇³u_x`.
pub fn rhs_regularized(curve: &DiscreteCurve, params: &FlowParams) -> TangentField {
    let d = derivative_ladder(curve, 3);
    let main = main_terms(curve, params, &d);
    if params.epsilon == 0.0 {
        return main;
    }
    main.add_scaled(-params.epsilon, &d[3])
}

pub fn rhs_surface(curve: &DiscreteCurve, sp: &SurfaceParams) -> TangentField {
    let t = curve.target();
    let d = derivative_ladder(curve, 3);
    let data = curve.map_nodes(|j, p| {
        let (u1, u2, u4) = (d[0].vector(j), d[1].vector(j), d[3].vector(j));
        let j4 = t.complex_structure(p, u4);
        let j2 = t.complex_structure(p, u2);
        let j1 = t.complex_structure(p, u1);
        let h11 = dot(u1, u1);
        let h21 = dot(u2, u1);
        (0..p.len()).map(|i| sp.b1 * j4[i] + sp.b2 * j2[i] + sp.b3 * h11 * j2[i] + sp.b4 * h21 * j1[i]).collect()
    });
    TangentField::from_raw(curve, data)
}

/// `u ∧ [a1 ∂³u_x + (1 + a2|u_x|²) ∂u_x + 2a2 (∂u_x · u_x) u_x]` with flat derivatives.
pub fn rhs_lpd(curve: &DiscreteCurve, a1: f64, a2: f64) -> Result<TangentField> {
    if curve.target().kind() != TargetKind::Sphere2 {
        return invalid("the LPD form is only defined on the 2-sphere");
    }
    let g = curve.grid();
    let u1 = g.derivative(curve.points(), 3, 1);
    let u2 = g.derivative(&u1, 3, 1);
    let u4 = g.derivative(&u2, 3, 2);
    let data = curve.map_nodes(|j, p| {
        let r = j * 3..j * 3 + 3;
        let (v1, v2, v4) = (&u1[r.clone()], &u2[r.clone()], &u4[r]);
        let s = 1.0 + a2 * dot(v1, v1);
        let t = 2.0 * a2 * dot(v2, v1);
        let w: Vec<f64> = (0..3).map(|i| a1 * v4[i] + s * v2[i] + t * v1[i]).collect();
        curve.target().complex_structure(p, &w)
    });
    Ok(TangentField::from_raw(curve, data))
}
