//! The energies `E`, `E₂`, `E_*`, their L² gradients and the Hamiltonian vector field.

use crate::curve::{derivative_ladder, DiscreteCurve, TangentField};
use crate::flow::HamiltonianParams;
use crate::manifold::dot;

/// `½∫|u_x|²`.
pub fn energy_dirichlet(curve: &DiscreteCurve) -> f64 {
    let d = derivative_ladder(curve, 0);
    half_square(curve, &d[0])
}

/// `½∫|∇_x u_x|²`.
pub fn energy_bi(curve: &DiscreteCurve) -> f64 {
    let d = derivative_ladder(curve, 1);
    half_square(curve, &d[1])
}

/// `∫ h(R(u_x, Ju_x)Ju_x, u_x)`.
pub fn energy_star(curve: &DiscreteCurve) -> f64 {
    let d = derivative_ladder(curve, 0);
    star_from(curve, &d[0])
}

/// `αE + βE₂ + γE_*`.
pub fn energy_total(curve: &DiscreteCurve, hp: &HamiltonianParams) -> f64 {
    let e = energies(curve);
    hp.alpha * e.dirichlet + hp.beta * e.bi + hp.gamma * e.star
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies {
    pub dirichlet: f64,
    pub bi: f64,
    pub star: f64,
}

/// All three energies from one derivative evaluation.
pub fn energies(curve: &DiscreteCurve) -> Energies {
    let d = derivative_ladder(curve, 1);
    Energies { dirichlet: half_square(curve, &d[0]), bi: half_square(curve, &d[1]), star: star_from(curve, &d[0]) }
}

fn half_square(curve: &DiscreteCurve, f: &TangentField) -> f64 {
    let vals: Vec<f64> = (0..curve.len()).map(|j| dot(f.vector(j), f.vector(j))).collect();
    0.5 * curve.grid().integrate(&vals)
}

fn star_from(curve: &DiscreteCurve, ux: &TangentField) -> f64 {
    let t = curve.target();
    let vals: Vec<f64> = (0..curve.len())
        .map(|j| {
            let p = curve.node(j);
            let u1 = ux.vector(j);
            let ju1 = t.complex_structure(p, u1);
            dot(&t.curvature_raw(p, u1, &ju1, &ju1), u1)
        })
        .collect();
    curve.grid().integrate(&vals)
}

/// `α∇E + β∇E₂ + γ∇E_*` with
/// `∇E = -∇u_x`, `∇E₂ = ∇³u_x + R(∇u_x,u_x)u_x`,
/// `∇E_* = -12 R(u_x,Ju_x)J∇u_x + 8 R(∇u_x,u_x)u_x`.
pub fn gradient_total(curve: &DiscreteCurve, hp: &HamiltonianParams) -> TangentField {
    let t = curve.target();
    let d = derivative_ladder(curve, 3);
    let HamiltonianParams { alpha, beta, gamma } = *hp;
    let data = curve.map_nodes(|j, p| {
        let (u1, u2, u4) = (d[0].vector(j), d[1].vector(j), d[3].vector(j));
        let r21 = t.curvature_raw(p, u2, u1, u1);
        let (ju1, ju2) = (t.complex_structure(p, u1), t.complex_structure(p, u2));
        let rs = t.curvature_raw(p, u1, &ju1, &ju2);
        (0..p.len())
            .map(|i| {
                alpha * (-u2[i]) + beta * (u4[i] + r21[i]) + gamma * (-12.0 * rs[i] + 8.0 * r21[i])
            })
            .collect()
    });
    TangentField::from_raw(curve, data)
}

/// `J∇E_{α,β,γ}`.
pub fn hamiltonian_vector_field(curve: &DiscreteCurve, hp: &HamiltonianParams) -> TangentField {
    let g = gradient_total(curve, hp);
    let t = curve.target();
    let data = curve.map_nodes(|j, p| t.complex_structure(p, g.vector(j)));
    TangentField::from_raw(curve, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::l2_inner;
    use crate::flow::{map_hamiltonian_params, rhs_main};
    use crate::manifold::TargetManifold;
    use crate::spectral::GridSpec;
    use std::f64::consts::PI;

    fn grid(m: usize) -> GridSpec {
        GridSpec::with_points(m).unwrap()
    }

    #[test]
    fn energies_of_circles() {
        let s = TargetManifold::sphere2();
        let c = DiscreteCurve::great_circle(s.clone(), grid(64), 1);
        let e = energies(&c);
        assert!((e.dirichlet - PI).abs() < 1e-10);
        assert!(e.bi.abs() < 1e-18);
        assert!((e.star - 2.0 * PI).abs() < 1e-10);

        let c2 = DiscreteCurve::great_circle(s.clone(), grid(64), 2);
        assert!((energy_dirichlet(&c2) - 4.0 * PI).abs() < 1e-10);
        assert!((energy_star(&c2) - 32.0 * PI).abs() < 1e-8);

        let p = s.random_point(4);
        let k = DiscreteCurve::constant(s, grid(32), &p);
        assert_eq!(energy_dirichlet(&k), 0.0);
        assert_eq!(energy_bi(&k), 0.0);
        assert_eq!(energy_star(&k), 0.0);
    }

    #[test]
    fn bi_energy_of_latitude_circle() {
        // ∇u_x on a latitude circle is the geodesic-curvature vector; compare with a fine grid
        let s = TargetManifold::sphere2();
        let theta = 0.4;
        let coarse = energy_bi(&DiscreteCurve::latitude(s.clone(), grid(32), theta));
        let fine = energy_bi(&DiscreteCurve::latitude(s, grid(256), theta));
        assert!((coarse - fine).abs() < 1e-6);
        // |∇u_x| = cos θ sin θ
        let exact = 0.5 * 2.0 * PI * (theta.cos() * theta.sin()).powi(2);
        assert!((fine - exact).abs() < 1e-10);
    }

    #[test]
    fn hamiltonian_field_is_orthogonal_to_gradient() {
        let hp = HamiltonianParams::new(0.7, 1.2, -0.4).unwrap();
        for t in [TargetManifold::sphere2(), TargetManifold::complex_projective(2).unwrap()] {
            let c = DiscreteCurve::random_smooth(t, grid(64), 5);
            let g = gradient_total(&c, &hp);
            let x = hamiltonian_vector_field(&c, &hp);
            assert!(l2_inner(&g, &x).abs() < 1e-10 * l2_inner(&g, &g).max(1.0));
        }
    }

    #[test]
    fn hamiltonian_field_matches_main_rhs() {
        let hp = HamiltonianParams::new(1.0, 1.0, 1.0).unwrap();
        let c = DiscreteCurve::random_smooth(TargetManifold::sphere2(), grid(64), 6);
        let x = hamiltonian_vector_field(&c, &hp);
        let m = rhs_main(&c, &map_hamiltonian_params(&hp));
        assert!(x.max_node_distance(&m) < 1e-6 * m.max_node_norm().max(1.0));
    }

    #[test]
    fn gradients_vanish_on_great_circle() {
        let c = DiscreteCurve::great_circle(TargetManifold::sphere2(), grid(64), 1);
        let g = gradient_total(&c, &HamiltonianParams::new(1.0, 1e-300, 0.0).unwrap());
        assert!(g.max_node_norm() < 1e-12);
        let x = hamiltonian_vector_field(&c, &HamiltonianParams::new(0.3, 1.0, 2.0).unwrap());
        assert!(x.max_node_norm() < 1e-9);
    }
}
