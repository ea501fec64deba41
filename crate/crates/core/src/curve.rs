//! Periodic curves `u: T -> N` sampled on a [`GridSpec`] and tangent fields along them.
//!
//! Covariant derivatives are extrinsic: the pseudospectral derivative of the
//! ambient coordinates followed by tangent projection at every node.

use crate::error::{invalid, Result};
use crate::manifold::{dot, ManifoldPoint, TargetManifold};
use crate::spectral::GridSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::sync::Arc;

/// Constraint tolerance for curve nodes and tangent fields.
pub const CURVE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    target: TargetManifold,
    grid: GridSpec,
    points: Arc<Vec<f64>>,
}

impl DiscreteCurve {
    /// Validates every node against the embedding constraint.
    pub fn new(target: TargetManifold, grid: GridSpec, coords: Vec<f64>) -> Result<Self> {
        let dim = target.ambient_dim();
        if coords.len() != grid.points() * dim {
            return invalid(format!(
                "curve data has length {} but expected {} nodes x {} components",
                coords.len(),
                grid.points(),
                dim
            ));
        }
        for (j, p) in coords.chunks_exact(dim).enumerate() {
            let v = target.constraint_violation(p);
            if v.is_nan() || v > CURVE_TOLERANCE {
                return invalid(format!("node {j} violates the embedding constraint by {v:.3e}"));
            }
        }
        Ok(Self::from_raw(target, grid, coords))
    }

    /// Reprojects every node of the ambient samples onto the target.
    pub fn reprojected(target: TargetManifold, grid: GridSpec, coords: &[f64]) -> Result<Self> {
        let dim = target.ambient_dim();
        if coords.len() != grid.points() * dim {
            return invalid("curve data length does not match grid and target");
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return invalid("curve data contains non-finite values");
        }
        let pts: Vec<f64> = coords.chunks_exact(dim).flat_map(|q| target.reproject(q)).collect();
        Ok(Self::from_raw(target, grid, pts))
    }

    pub(crate) fn from_raw(target: TargetManifold, grid: GridSpec, coords: Vec<f64>) -> Self {
        DiscreteCurve { target, grid, points: Arc::new(coords) }
    }

    pub fn constant(target: TargetManifold, grid: GridSpec, p: &ManifoldPoint) -> Self {
        let coords = p.coords().repeat(grid.points());
        Self::from_raw(target, grid, coords)
    }

    /// Great circle `x ↦ (cos wx, sin wx, 0)`, embedded in the target.
    pub fn great_circle(target: TargetManifold, grid: GridSpec, winding: u32) -> Self {
        let w = winding as f64;
        Self::from_sphere_fn(target, grid, |x| [(w * x).cos(), (w * x).sin(), 0.0])
    }

    /// Circle of latitude `theta`.
    pub fn latitude(target: TargetManifold, grid: GridSpec, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_sphere_fn(target, grid, |x| [c * x.cos(), c * x.sin(), s])
    }

    /// `normalize((cos x, sin x, amplitude · cos(mode x)))`, embedded.
    pub fn perturbed_great_circle(target: TargetManifold, grid: GridSpec, amplitude: f64, mode: u32) -> Self {
        let m = mode as f64;
        Self::from_sphere_fn(target, grid, |x| {
            let v = [x.cos(), x.sin(), amplitude * (m * x).cos()];
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            [v[0] / r, v[1] / r, v[2] / r]
        })
    }

    /// Embedded great circle moved node-wise by a random bandlimited isometry.
    ///
    /// The generator has modes `0..=modes` with standard-normal ambient
    /// coefficients scaled by `amplitude / (m + 1)`. The result is an entire
    /// function of `x`, so its spectrum decays faster than exponentially.
    pub fn random_smooth_with(
        target: TargetManifold,
        grid: GridSpec,
        seed: u64,
        amplitude: f64,
        modes: u32,
    ) -> Self {
        let base = Self::great_circle(target.clone(), grid.clone(), 1);
        let dim = target.ambient_dim();
        let gen = random_modes(&grid, dim, seed, 0, modes, |m| amplitude / (m + 1) as f64);
        let pts: Vec<f64> = (0..grid.points())
            .flat_map(|j| target.rotate(base.node(j), &gen[j * dim..(j + 1) * dim]))
            .collect();
        Self::from_raw(target, grid, pts)
    }

    /// [`random_smooth_with`](Self::random_smooth_with) with amplitude 0.5 and one mode.
    /// Resolved to rounding error from `M = 64` on.
    pub fn random_smooth(target: TargetManifold, grid: GridSpec, seed: u64) -> Self {
        Self::random_smooth_with(target, grid, seed, 0.5, 1)
    }

    fn from_sphere_fn(target: TargetManifold, grid: GridSpec, f: impl Fn(f64) -> [f64; 3]) -> Self {
        let coords: Vec<f64> = grid.nodes().into_iter().flat_map(|x| target.embed_sphere_point(&f(x))).collect();
        Self::from_raw(target, grid, coords)
    }

    pub fn target(&self) -> &TargetManifold {
        &self.target
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.target.ambient_dim()
    }

    pub fn len(&self) -> usize {
        self.grid.points()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat row-major node coordinates.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn node(&self, j: usize) -> &[f64] {
        let d = self.dim();
        &self.points[j * d..(j + 1) * d]
    }

    pub fn max_constraint_violation(&self) -> f64 {
        self.points.chunks_exact(self.dim()).map(|p| self.target.constraint_violation(p)).fold(0.0, f64::max)
    }

    /// Projects ambient samples (one vector per node) onto the tangent spaces.
    pub fn project_field(&self, ambient: &[f64]) -> TangentField {
        let d = self.dim();
        let data: Vec<f64> = ambient
            .chunks_exact(d)
            .enumerate()
            .flat_map(|(j, v)| self.target.project(self.node(j), v))
            .collect();
        TangentField { curve: self.clone(), data }
    }

    /// Applies `f(node index, point)` at every node and collects the vectors.
    pub(crate) fn map_nodes(&self, f: impl Fn(usize, &[f64]) -> Vec<f64>) -> Vec<f64> {
        (0..self.len()).flat_map(|j| f(j, self.node(j))).collect()
    }
}

/// Sum of modes `lo..=hi` with standard-normal ambient coefficients scaled by `weight(m)`.
fn random_modes(grid: &GridSpec, dim: usize, seed: u64, lo: u32, hi: u32, weight: impl Fn(u32) -> f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0.0; grid.points() * dim];
    let nodes = grid.nodes();
    for m in lo..=hi {
        let w = weight(m);
        let a: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let b: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        for (j, &x) in nodes.iter().enumerate() {
            let (s, c) = (m as f64 * x).sin_cos();
            for i in 0..dim {
                out[j * dim + i] += w * (a[i] * c + b[i] * s);
            }
        }
    }
    out
}

/// One tangent vector per node of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentField {
    curve: DiscreteCurve,
    data: Vec<f64>,
}

impl TangentField {
    /// Validates tangency at every node.
    pub fn new(curve: &DiscreteCurve, data: Vec<f64>) -> Result<Self> {
        if data.len() != curve.points.len() {
            return invalid("field data length does not match the curve");
        }
        let d = curve.dim();
        for (j, v) in data.chunks_exact(d).enumerate() {
            let t = curve.target.tangency_violation(curve.node(j), v);
            if t.is_nan() || t > CURVE_TOLERANCE {
                return invalid(format!("vector at node {j} is not tangent ({t:.3e})"));
            }
        }
        Ok(Self::from_raw(curve, data))
    }

    pub(crate) fn from_raw(curve: &DiscreteCurve, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), curve.points.len());
        TangentField { curve: curve.clone(), data }
    }

    pub fn zeros(curve: &DiscreteCurve) -> Self {
        Self::from_raw(curve, vec![0.0; curve.points.len()])
    }

    /// Projection of a random ambient field with modes `lo..=hi` (unit-variance coefficients).
    pub fn random_bandlimited(curve: &DiscreteCurve, seed: u64, lo: u32, hi: u32) -> Self {
        let amb = random_modes(curve.grid(), curve.dim(), seed, lo, hi, |_| 1.0);
        curve.project_field(&amb)
    }

    pub fn curve(&self) -> &DiscreteCurve {
        &self.curve
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        let d = self.curve.dim();
        &self.data[j * d..(j + 1) * d]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_raw(&self.curve, self.data.iter().map(|v| s * v).collect())
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, s: f64, other: &TangentField) -> Self {
        Self::from_raw(&self.curve, self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect())
    }

    /// Largest node-wise Euclidean norm of `self - other`.
    pub fn max_node_distance(&self, other: &TangentField) -> f64 {
        let d = self.curve.dim();
        self.data
            .chunks_exact(d)
            .zip(other.data.chunks_exact(d))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    pub fn max_node_norm(&self) -> f64 {
        self.data.chunks_exact(self.curve.dim()).map(crate::manifold::norm).fold(0.0, f64::max)
    }

    pub fn max_tangency_violation(&self) -> f64 {
        let d = self.curve.dim();
        self.data
            .chunks_exact(d)
            .enumerate()
            .map(|(j, v)| self.curve.target.tangency_violation(self.curve.node(j), v))
            .fold(0.0, f64::max)
    }
}

/// `u_x`: projected pseudospectral derivative of the node coordinates.
pub fn velocity_field(curve: &DiscreteCurve) -> TangentField {
    let du = curve.grid.derivative(&curve.points, curve.dim(), 1);
    curve.project_field(&du)
}

/// `∇_x V = P(∂_x V)`.
pub fn covariant_derivative(field: &TangentField) -> TangentField {
    let c = &field.curve;
    let dv = c.grid.derivative(&field.data, c.dim(), 1);
    c.project_field(&dv)
}

/// `∇_x^m u_x`.
pub fn higher_cov_derivative(curve: &DiscreteCurve, m: usize) -> TangentField {
    let mut f = velocity_field(curve);
    for _ in 0..m {
        f = covariant_derivative(&f);
    }
    f
}

/// `u_x, ∇u_x, ..., ∇^m u_x`.
pub fn derivative_ladder(curve: &DiscreteCurve, m: usize) -> Vec<TangentField> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(velocity_field(curve));
    for i in 0..m {
        let next = covariant_derivative(&out[i]);
        out.push(next);
    }
    out
}

/// `∫ h(V, W) dx`.
pub fn l2_inner(a: &TangentField, b: &TangentField) -> f64 {
    let d = a.curve.dim();
    let vals: Vec<f64> = a.data.chunks_exact(d).zip(b.data.chunks_exact(d)).map(|(x, y)| dot(x, y)).collect();
    a.curve.grid.integrate(&vals)
}

pub fn l2_norm(field: &TangentField) -> f64 {
    l2_inner(field, field).max(0.0).sqrt()
}

/// `(Σ_{ℓ≤m} ∫ |∇_x^ℓ V|² dx)^{1/2}`.
pub fn sobolev_norm(field: &TangentField, m: usize) -> f64 {
    let mut f = field.clone();
    let mut sum = l2_inner(&f, &f);
    for _ in 0..m {
        f = covariant_derivative(&f);
        sum += l2_inner(&f, &f);
    }
    sum.max(0.0).sqrt()
}
