//! Pointwise geometry of the target manifold `(N, J, h)`.
//!
//! Every target is realized inside a real vector space whose Euclidean dot
//! product is the Kähler metric:
//!
//! * `Sphere2`: the unit sphere in `R^3`, `J_u = u ∧`, `R(X,Y)Z = h(Y,Z)X - h(X,Z)Y`.
//! * `ComplexProjective(n)` and `GrassmannianCompact(n, k)`: hermitian
//!   projectors of trace `k` (`k = 1` for projective space), scaled by
//!   `sqrt(2 / c)` where `c` is the curvature scale. With that scaling the
//!   holomorphic sectional curvature of `CP^n` is exactly `c`, and
//!   `J X = i[P, X]`, `R(X,Y)Z = (c/2) [[X,Y],Z]` in the scaled coordinates.
//!
//! The slice-based kernels (`project`, `complex_structure`, `curvature_raw`,
//! `reproject`) do no validation and are what the field code calls per node.
//! The typed API on [`ManifoldPoint`] / [`TangentVector`] validates its inputs.

mod hermitian;

use crate::error::{invalid, FlowError, Result};
use hermitian::CMat;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Constraint tolerance for a single [`ManifoldPoint`].
pub const POINT_TOLERANCE: f64 = 1e-12;
/// Tangency tolerance, relative to `max(1, |v|)`.
pub const TANGENT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    Sphere2,
    /// `CP^n`, complex dimension `n`, realized as rank-one projectors on `C^(n+1)`.
    ComplexProjective(usize),
    /// `G_{n,k}`: rank-`k` projectors on `C^n`.
    GrassmannianCompact { n: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetManifold {
    kind: TargetKind,
    curvature_scale: f64,
}

impl TargetManifold {
    pub fn sphere2() -> Self {
        TargetManifold { kind: TargetKind::Sphere2, curvature_scale: 1.0 }
    }

    pub fn complex_projective(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("complex projective space needs n >= 1");
        }
        Ok(TargetManifold { kind: TargetKind::ComplexProjective(n), curvature_scale: 1.0 })
    }

    pub fn grassmannian(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return invalid(format!("grassmannian needs 0 < k < n, got n = {n}, k = {k}"));
        }
        Ok(TargetManifold { kind: TargetKind::GrassmannianCompact { n, k }, curvature_scale: 1.0 })
    }

    pub fn from_kind(kind: TargetKind) -> Result<Self> {
        match kind {
            TargetKind::Sphere2 => Ok(Self::sphere2()),
            TargetKind::ComplexProjective(n) => Self::complex_projective(n),
            TargetKind::GrassmannianCompact { n, k } => Self::grassmannian(n, k),
        }
    }

    /// Sets the holomorphic sectional curvature scale. `Sphere2` only accepts 1.
    pub fn with_curvature_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return invalid(format!("curvature scale must be positive, got {scale}"));
        }
        if self.kind == TargetKind::Sphere2 && scale != 1.0 {
            return invalid("the sphere target has curvature scale fixed to 1");
        }
        self.curvature_scale = scale;
        Ok(self)
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn curvature_scale(&self) -> f64 {
        self.curvature_scale
    }

    /// Size of the projector matrices, `None` for the sphere.
    pub fn matrix_size(&self) -> Option<usize> {
        match self.kind {
            TargetKind::Sphere2 => None,
            TargetKind::ComplexProjective(n) => Some(n + 1),
            TargetKind::GrassmannianCompact { n, .. } => Some(n),
        }
    }

    fn rank(&self) -> usize {
        match self.kind {
            TargetKind::Sphere2 => 0,
            TargetKind::ComplexProjective(_) => 1,
            TargetKind::GrassmannianCompact { k, .. } => k,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self.matrix_size() {
            None => 3,
            Some(n) => hermitian::real_dim(n),
        }
    }

    /// Real dimension of the manifold (of each tangent space).
    pub fn tangent_dim(&self) -> usize {
        match self.kind {
            TargetKind::Sphere2 => 2,
            TargetKind::ComplexProjective(n) => 2 * n,
            TargetKind::GrassmannianCompact { n, k } => 2 * k * (n - k),
        }
    }

    /// Ratio between scaled coordinates and the true projector matrix.
    fn coord_scale(&self) -> f64 {
        (2.0 / self.curvature_scale).sqrt()
    }

    fn projector(&self, p: &[f64]) -> CMat {
        let n = self.matrix_size().expect("projector target");
        hermitian::to_matrix(n, p) / Complex64::new(self.coord_scale(), 0.0)
    }

    fn check_dim(&self, v: &[f64], what: &str) -> Result<()> {
        if v.len() != self.ambient_dim() {
            return invalid(format!(
                "{what} has length {} but ambient dimension is {}",
                v.len(),
                self.ambient_dim()
            ));
        }
        Ok(())
    }

    // ---- raw kernels -------------------------------------------------------

    /// Orthogonal projection of the ambient vector `v` onto `T_p N`.
    pub fn project(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        match self.kind {
            TargetKind::Sphere2 => {
                let s = dot(p, v);
                vec![v[0] - s * p[0], v[1] - s * p[1], v[2] - s * p[2]]
            }
            _ => {
                let n = self.matrix_size().unwrap();
                let pm = self.projector(p);
                let q = CMat::identity(n, n) - &pm;
                let vm = hermitian::to_matrix(n, v);
                let out = &pm * &vm * &q + &q * &vm * &pm;
                hermitian::from_matrix(&out)
            }
        }
    }

    /// `J_p x`.
    pub fn complex_structure(&self, p: &[f64], x: &[f64]) -> Vec<f64> {
        match self.kind {
            TargetKind::Sphere2 => cross(p, x),
            _ => {
                let n = self.matrix_size().unwrap();
                let pm = self.projector(p);
                let xm = hermitian::to_matrix(n, x);
                let out = hermitian::commutator(&pm, &xm) * Complex64::new(0.0, 1.0);
                hermitian::from_matrix(&out)
            }
        }
    }

    /// `R(x, y) z` at `p`.
    pub fn curvature_raw(&self, _p: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        match self.kind {
            TargetKind::Sphere2 => {
                let s = self.curvature_scale;
                let yz = dot(y, z);
                let xz = dot(x, z);
                (0..3).map(|i| s * (yz * x[i] - xz * y[i])).collect()
            }
            _ => {
                let n = self.matrix_size().unwrap();
                let xm = hermitian::to_matrix(n, x);
                let ym = hermitian::to_matrix(n, y);
                let zm = hermitian::to_matrix(n, z);
                let xy = hermitian::commutator(&xm, &ym);
                let out = hermitian::commutator(&xy, &zm)
                    * Complex64::new(0.5 * self.curvature_scale, 0.0);
                hermitian::from_matrix(&out)
            }
        }
    }

    /// Closest point of `N` to the ambient point `q`.
    pub fn reproject(&self, q: &[f64]) -> Vec<f64> {
        match self.kind {
            TargetKind::Sphere2 => {
                let r = norm(q);
                q.iter().map(|x| x / r).collect()
            }
            _ => {
                let pm = hermitian::leading_projector(&self.projector(q), self.rank());
                let s = self.coord_scale();
                hermitian::from_matrix(&pm).into_iter().map(|x| x * s).collect()
            }
        }
    }

    /// Size of the embedding-constraint violation at `p`.
    pub fn constraint_violation(&self, p: &[f64]) -> f64 {
        match self.kind {
            TargetKind::Sphere2 => (norm(p) - 1.0).abs(),
            _ => {
                let pm = self.projector(p);
                let idem = (&pm * &pm - &pm).norm();
                let tr = (pm.trace().re - self.rank() as f64).abs();
                idem.max(tr)
            }
        }
    }

    /// Normal component of `v` at `p`, relative to `max(1, |v|)`.
    pub fn tangency_violation(&self, p: &[f64], v: &[f64]) -> f64 {
        let t = self.project(p, v);
        let diff: f64 = v.iter().zip(&t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        diff / norm(v).max(1.0)
    }

    // ---- typed API ---------------------------------------------------------

    /// Validates `coords` as a point of the target.
    pub fn point(&self, coords: Vec<f64>) -> Result<ManifoldPoint> {
        self.check_dim(&coords, "point")?;
        let viol = self.constraint_violation(&coords);
        if viol.is_nan() || viol > POINT_TOLERANCE {
            return invalid(format!("point violates the embedding constraint by {viol:.3e}"));
        }
        Ok(ManifoldPoint { coords })
    }

    /// Validates `coords` as a tangent vector at `p`.
    pub fn tangent(&self, p: &ManifoldPoint, coords: Vec<f64>) -> Result<TangentVector> {
        self.check_dim(&coords, "vector")?;
        let viol = self.tangency_violation(&p.coords, &coords);
        if viol.is_nan() || viol > TANGENT_TOLERANCE {
            return invalid(format!("vector is not tangent at the base point ({viol:.3e})"));
        }
        Ok(TangentVector { base: p.clone(), coords })
    }

    pub fn project_tangent(&self, p: &ManifoldPoint, v: &[f64]) -> Result<TangentVector> {
        self.check_dim(v, "vector")?;
        Ok(TangentVector { base: p.clone(), coords: self.project(&p.coords, v) })
    }

    pub fn metric(&self, p: &ManifoldPoint, x: &TangentVector, y: &TangentVector) -> Result<f64> {
        same_base(p, x)?;
        same_base(p, y)?;
        Ok(dot(&x.coords, &y.coords))
    }

    pub fn apply_j(&self, p: &ManifoldPoint, x: &TangentVector) -> Result<TangentVector> {
        same_base(p, x)?;
        let viol = self.tangency_violation(&p.coords, &x.coords);
        if viol.is_nan() || viol > TANGENT_TOLERANCE {
            return invalid(format!("vector is not tangent at the base point ({viol:.3e})"));
        }
        Ok(TangentVector { base: p.clone(), coords: self.complex_structure(&p.coords, &x.coords) })
    }

    pub fn curvature(
        &self,
        p: &ManifoldPoint,
        x: &TangentVector,
        y: &TangentVector,
        z: &TangentVector,
    ) -> Result<TangentVector> {
        same_base(p, x)?;
        same_base(p, y)?;
        same_base(p, z)?;
        Ok(TangentVector {
            base: p.clone(),
            coords: self.curvature_raw(&p.coords, &x.coords, &y.coords, &z.coords),
        })
    }

    /// First-order retraction `p + x` followed by reprojection.
    pub fn retract(&self, p: &ManifoldPoint, x: &TangentVector) -> Result<ManifoldPoint> {
        same_base(p, x)?;
        let q: Vec<f64> = p.coords.iter().zip(&x.coords).map(|(a, b)| a + b).collect();
        if x.coords.iter().all(|&v| v == 0.0) {
            return Ok(p.clone());
        }
        Ok(ManifoldPoint { coords: self.reproject(&q) })
    }

    /// Standard-normal ambient sample projected onto `T_p N`.
    pub fn random_tangent(&self, p: &ManifoldPoint, seed: u64) -> TangentVector {
        TangentVector { base: p.clone(), coords: self.random_tangent_at(&p.coords, seed) }
    }

    pub(crate) fn random_tangent_at(&self, p: &[f64], seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..self.ambient_dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
        self.project(p, &v)
    }

    /// A random point; uniform on the sphere, Haar-distributed for projectors.
    pub fn random_point(&self, seed: u64) -> ManifoldPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self.kind {
            TargetKind::Sphere2 => {
                let v: Vec<f64> = (0..3).map(|_| StandardNormal.sample(&mut rng)).collect();
                ManifoldPoint { coords: self.reproject(&v) }
            }
            _ => {
                let n = self.matrix_size().unwrap();
                let k = self.rank();
                let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(k);
                while cols.len() < k {
                    let mut v: Vec<Complex64> = (0..n)
                        .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                        .collect();
                    for c in &cols {
                        let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                        for (vi, ci) in v.iter_mut().zip(c) {
                            *vi -= proj * ci;
                        }
                    }
                    let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if nv > 1e-8 {
                        cols.push(v.into_iter().map(|z| z / nv).collect());
                    }
                }
                let mut pm = CMat::zeros(n, n);
                for c in &cols {
                    for i in 0..n {
                        for j in 0..n {
                            pm[(i, j)] += c[i] * c[j].conj();
                        }
                    }
                }
                let s = self.coord_scale();
                ManifoldPoint { coords: hermitian::from_matrix(&pm).into_iter().map(|x| x * s).collect() }
            }
        }
    }

    /// Moves `p` by the isometry generated by `gen` (an ambient-sized vector).
    ///
    /// On the sphere `gen = ω` rotates by `exp(ω ∧)`; on projector targets
    /// `gen` is read as a hermitian `H` and `P ↦ e^{iH} P e^{-iH}`.
    pub(crate) fn rotate(&self, p: &[f64], gen: &[f64]) -> Vec<f64> {
        match self.kind {
            TargetKind::Sphere2 => {
                let theta = norm(gen);
                if theta == 0.0 {
                    return p.to_vec();
                }
                let k: Vec<f64> = gen.iter().map(|g| g / theta).collect();
                let kxp = cross(&k, p);
                let kp = dot(&k, p);
                let (s, c) = theta.sin_cos();
                (0..3).map(|i| p[i] * c + kxp[i] * s + k[i] * kp * (1.0 - c)).collect()
            }
            _ => {
                let n = self.matrix_size().unwrap();
                let eig = nalgebra::SymmetricEigen::new(hermitian::to_matrix(n, gen));
                let phases = CMat::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(0.0, l).exp()));
                let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
                let pm = hermitian::to_matrix(n, p);
                hermitian::from_matrix(&(&u * pm * u.adjoint()))
            }
        }
    }

    /// Embeds a point of the unit sphere as a point of the target.
    ///
    /// For projector targets the sphere is mapped isometrically onto a totally
    /// geodesic `CP^1` through `x ↦ (I + x·σ)/2` in the leading `2 x 2` block,
    /// padded with a fixed rank-`(k-1)` projector.
    pub fn embed_sphere_point(&self, x: &[f64; 3]) -> Vec<f64> {
        match self.kind {
            TargetKind::Sphere2 => x.to_vec(),
            _ => {
                let n = self.matrix_size().unwrap();
                let k = self.rank();
                let mut pm = CMat::zeros(n, n);
                pm[(0, 0)] = Complex64::new(0.5 * (1.0 + x[2]), 0.0);
                pm[(1, 1)] = Complex64::new(0.5 * (1.0 - x[2]), 0.0);
                pm[(0, 1)] = Complex64::new(0.5 * x[0], -0.5 * x[1]);
                pm[(1, 0)] = Complex64::new(0.5 * x[0], 0.5 * x[1]);
                for i in 0..k - 1 {
                    pm[(2 + i, 2 + i)] = Complex64::new(1.0, 0.0);
                }
                let s = self.coord_scale();
                hermitian::from_matrix(&pm).into_iter().map(|v| v * s).collect()
            }
        }
    }
}

fn same_base(p: &ManifoldPoint, v: &TangentVector) -> Result<()> {
    if v.base.coords != p.coords {
        return Err(FlowError::InvalidArgument("tangent vector is based at a different point".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    coords: Vec<f64>,
}

impl ManifoldPoint {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: ManifoldPoint,
    coords: Vec<f64>,
}

impl TangentVector {
    pub fn base(&self) -> &ManifoldPoint {
        &self.base
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[cfg(test)]
mod tests;
