use super::*;
use crate::curve::{higher_cov_derivative, sobolev_norm, velocity_field};
use crate::spectral::GridSpec;

fn grid(m: usize) -> GridSpec {
    GridSpec::with_points(m).unwrap()
}

#[test]
fn constants_for_k4_pure_dispersion() {
    let g = gauge_constants(4, 1.0, 0.0, 0.0).unwrap();
    assert_eq!((g.c1, g.c2, g.c3, g.c4), (7.0, -3.0, -7.0, 0.0));
    assert_eq!((g.d1, g.d3, g.e1, g.e2), (-1.0, 3.5, 1.0, -4.5));
    assert_eq!(g.e2, e2_closed_form(4, 1.0, 0.0, 0.0));
}

#[test]
fn constants_for_k4_unit_coefficients() {
    let g = gauge_constants(4, 1.0, 1.0, 1.0).unwrap();
    assert_eq!((g.d1, g.e1, g.d3, g.e2), (0.0, 0.0, 15.0, -15.0));
    assert_eq!(g.d2, 2.0);
    assert_eq!(g.d4, g.c2);
    assert_eq!(g.d6, g.d7);
}

#[test]
fn constants_reject_small_k_and_zero_a() {
    assert!(gauge_constants(3, 1.0, 0.0, 0.0).is_err());
    assert!(gauge_constants(4, 0.0, 1.0, 0.0).is_err());
}

#[test]
fn corrector_vanishes_on_trivial_curves() {
    let gc = gauge_constants(4, 1.0, 0.3, -0.7).unwrap();
    for t in [TargetManifold::sphere2(), TargetManifold::complex_projective(2).unwrap()] {
        let g = DiscreteCurve::great_circle(t.clone(), grid(64), 1);
        assert!(gauge_corrector(&g, &gc).max_node_norm() < 1e-9);
        assert!(gauge_field(&g, &gc).max_node_norm() < 1e-9);
        let nk = energy_nk(&g, &gc);
        assert!((nk - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-9);
        let p = t.random_point(2);
        let k = DiscreteCurve::constant(t, grid(32), &p);
        assert_eq!(gauge_corrector(&k, &gc).max_node_norm(), 0.0);
        assert_eq!(energy_nk(&k, &gc), 0.0);
    }
}

#[test]
fn zero_coefficients_give_zero_corrector() {
    // a = b kills e1; c = -2a/3 kills e2 at k = 4
    let gc = gauge_constants(4, 9.0, 9.0, -6.0).unwrap();
    assert_eq!((gc.e1, gc.e2), (0.0, 0.0));
    let c = DiscreteCurve::random_smooth(TargetManifold::sphere2(), grid(64), 1);
    assert!(gauge_corrector(&c, &gc).data().iter().all(|&v| v == 0.0));
    assert_eq!(gauge_field(&c, &gc).data(), higher_cov_derivative(&c, 4).data());
    let probe = mean_free_probe(&c, 8, 3);
    assert_eq!(cancellation_residual(&c, &gc, &probe).unwrap(), 0.0);
}

#[test]
fn corrector_is_bounded_by_lower_derivative() {
    let gc = gauge_constants(4, 1.0, -0.5, 0.8).unwrap();
    for t in [TargetManifold::sphere2(), TargetManifold::grassmannian(4, 2).unwrap()] {
        let c = DiscreteCurve::random_smooth(t.clone(), grid(64), 7);
        let ux = velocity_field(&c);
        let sup_sq = ux.max_node_norm().powi(2);
        let lam = gauge_corrector(&c, &gc);
        let low = higher_cov_derivative(&c, gc.k - 2);
        let bound = (gc.e1.abs() / (2.0 * gc.a.abs()) + gc.e2.abs() / (8.0 * gc.a.abs())) * curvature_bound(&t) * sup_sq;
        assert!(l2_norm(&lam) <= bound * l2_norm(&low) * (1.0 + 1e-12));
    }
}

#[test]
fn nk_is_equivalent_to_naive_norm_on_small_curves() {
    let gc = gauge_constants(4, 1.0, 2.0, -1.0).unwrap();
    for theta in [1.45, 1.5, 1.55] {
        let c = DiscreteCurve::latitude(TargetManifold::sphere2(), grid(64), theta);
        let ux = velocity_field(&c);
        assert!(sobolev_norm(&ux, 4) <= 1.0);
        let n = gauge_norms(&c, &gc);
        assert!(n.nk / 2.0 <= n.hk_naive && n.hk_naive <= 2.0 * n.nk);
    }
}

#[test]
fn probe_with_mean_is_rejected() {
    let c = DiscreteCurve::great_circle(TargetManifold::sphere2(), grid(32), 1);
    let gc = gauge_constants(4, 1.0, 0.0, 0.0).unwrap();
    // the constant field (0,0,1) is tangent along the equator
    let data: Vec<f64> = (0..32).flat_map(|_| [0.0, 0.0, 1.0]).collect();
    let probe = TangentField::new(&c, data).unwrap();
    assert!(cancellation_residual(&c, &gc, &probe).is_err());
    assert_eq!(cancellation_residual(&c, &gc, &TangentField::zeros(&c)).unwrap(), 0.0);
}

#[test]
fn commutator_expansion_is_exact_up_to_discretization() {
    let gc = gauge_constants(4, 1.0, -0.3, 0.4).unwrap();
    for t in [TargetManifold::sphere2(), TargetManifold::complex_projective(2).unwrap()] {
        let c = DiscreteCurve::random_smooth(t, grid(128), 2);
        let probe = mean_free_probe(&c, 8, 1);
        let d = commutator_decomposition(&c, &gc, &probe).unwrap();
        assert!(d.principal > 1.0);
        assert!(d.expansion_defect < 1e-8 * d.lhs, "{d:?}");
    }
}
