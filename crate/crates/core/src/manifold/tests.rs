use super::*;

fn sphere_pt(c: [f64; 3]) -> ManifoldPoint {
    TargetManifold::sphere2().point(c.to_vec()).unwrap()
}

fn all_targets() -> Vec<TargetManifold> {
    vec![
        TargetManifold::sphere2(),
        TargetManifold::complex_projective(2).unwrap(),
        TargetManifold::grassmannian(4, 2).unwrap(),
        TargetManifold::complex_projective(3).unwrap().with_curvature_scale(2.5).unwrap(),
    ]
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn project_tangent_examples() {
    let s = TargetManifold::sphere2();
    let p = sphere_pt([0.0, 0.0, 1.0]);
    assert_eq!(s.project_tangent(&p, &[1.0, 0.0, 0.0]).unwrap().coords(), &[1.0, 0.0, 0.0]);
    assert_eq!(s.project_tangent(&p, &[0.0, 0.0, 5.0]).unwrap().coords(), &[0.0, 0.0, 0.0]);
    assert_eq!(s.project_tangent(&p, &[2.0, 3.0, 4.0]).unwrap().coords(), &[2.0, 3.0, 0.0]);
    assert!(matches!(s.project_tangent(&p, &[1.0, 2.0]), Err(FlowError::InvalidArgument(_))));
}

#[test]
fn metric_examples() {
    let s = TargetManifold::sphere2();
    let p = sphere_pt([0.0, 0.0, 1.0]);
    let x = s.tangent(&p, vec![1.0, 0.0, 0.0]).unwrap();
    let y = s.tangent(&p, vec![0.0, 1.0, 0.0]).unwrap();
    assert_eq!(s.metric(&p, &x, &y).unwrap(), 0.0);
    assert_eq!(s.metric(&p, &x, &x).unwrap(), 1.0);
    let a = s.tangent(&p, vec![2.0, 3.0, 0.0]).unwrap();
    let b = s.tangent(&p, vec![1.0, -1.0, 0.0]).unwrap();
    assert_eq!(s.metric(&p, &a, &b).unwrap(), -1.0);

    let q = sphere_pt([1.0, 0.0, 0.0]);
    let other = s.tangent(&q, vec![0.0, 1.0, 0.0]).unwrap();
    assert!(s.metric(&p, &x, &other).is_err());
}

#[test]
fn apply_j_examples() {
    let s = TargetManifold::sphere2();
    let p = sphere_pt([0.0, 0.0, 1.0]);
    let x = s.tangent(&p, vec![1.0, 0.0, 0.0]).unwrap();
    assert_eq!(s.apply_j(&p, &x).unwrap().coords(), &[0.0, 1.0, 0.0]);
    let y = s.tangent(&p, vec![0.0, 1.0, 0.0]).unwrap();
    let jjy = s.apply_j(&p, &s.apply_j(&p, &y).unwrap()).unwrap();
    assert_eq!(jjy.coords(), &[0.0, -1.0, 0.0]);

    // a normal vector is rejected
    let bad = TangentVector { base: p.clone(), coords: vec![0.0, 0.0, 1.0] };
    assert!(s.apply_j(&p, &bad).is_err());

    for t in all_targets() {
        let p = t.random_point(3);
        let zero = t.tangent(&p, vec![0.0; t.ambient_dim()]).unwrap();
        assert!(t.apply_j(&p, &zero).unwrap().coords().iter().all(|&v| v == 0.0));
    }
}

#[test]
fn curvature_examples() {
    let s = TargetManifold::sphere2();
    let p = sphere_pt([0.0, 0.0, 1.0]);
    let x = s.tangent(&p, vec![1.0, 0.0, 0.0]).unwrap();
    let y = s.tangent(&p, vec![0.0, 1.0, 0.0]).unwrap();
    assert_eq!(s.curvature(&p, &x, &y, &y).unwrap().coords(), &[1.0, 0.0, 0.0]);

    for t in all_targets() {
        let p = t.random_point(11);
        let x = t.random_tangent(&p, 1);
        let z = t.random_tangent(&p, 2);
        let r = t.curvature(&p, &x, &x, &z).unwrap();
        assert!(r.norm() < 1e-14, "R(X,X)Z = {:?}", r.coords());
    }
}

/// Independent closed form for constant holomorphic sectional curvature `c`:
/// `R(X,Y)Z = c/4 [h(Y,Z)X - h(X,Z)Y + h(JY,Z)JX - h(JX,Z)JY + 2h(X,JY)JZ]`.
fn holomorphic_closed_form(t: &TargetManifold, p: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
    let c = t.curvature_scale();
    let jx = t.complex_structure(p, x);
    let jy = t.complex_structure(p, y);
    let jz = t.complex_structure(p, z);
    let (yz, xz, jyz, jxz, xjy) = (dot(y, z), dot(x, z), dot(&jy, z), dot(&jx, z), dot(x, &jy));
    (0..x.len())
        .map(|i| 0.25 * c * (yz * x[i] - xz * y[i] + jyz * jx[i] - jxz * jy[i] + 2.0 * xjy * jz[i]))
        .collect()
}

fn orthonormal_triple(t: &TargetManifold, p: &ManifoldPoint, seed: u64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut s = seed;
    while basis.len() < 3 {
        let mut v = t.random_tangent(p, s).coords().to_vec();
        s += 1;
        for b in &basis {
            let d = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= d * bi);
        }
        let n = norm(&v);
        if n > 1e-6 {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

#[test]
fn projective_curvature_matches_holomorphic_closed_form() {
    for scale in [1.0, 0.5, 3.0] {
        let t = TargetManifold::complex_projective(2).unwrap().with_curvature_scale(scale).unwrap();
        for trial in 0..25 {
            let p = t.random_point(100 + trial);
            let b = orthonormal_triple(&t, &p, 1000 * trial);
            let lie = t.curvature_raw(p.coords(), &b[0], &b[1], &b[2]);
            let closed = holomorphic_closed_form(&t, p.coords(), &b[0], &b[1], &b[2]);
            assert!(close(&lie, &closed, 1e-12), "scale {scale} trial {trial}: {lie:?} vs {closed:?}");
        }
    }
}

#[test]
fn holomorphic_sectional_curvature_equals_scale() {
    for scale in [1.0, 2.0] {
        let t = TargetManifold::complex_projective(3).unwrap().with_curvature_scale(scale).unwrap();
        let p = t.random_point(5);
        let x = t.random_tangent(&p, 6);
        let xs: Vec<f64> = x.coords().iter().map(|v| v / x.norm()).collect();
        let jx = t.complex_structure(p.coords(), &xs);
        let k = dot(&t.curvature_raw(p.coords(), &xs, &jx, &jx), &xs);
        assert!((k - scale).abs() < 1e-12, "{k} vs {scale}");
    }
}

#[test]
fn embedded_great_circle_has_unit_speed() {
    // the embedding of the unit sphere is isometric
    for t in all_targets() {
        let h: f64 = 1e-6;
        let a = t.embed_sphere_point(&[1.0, 0.0, 0.0]);
        let b = t.embed_sphere_point(&[h.cos(), h.sin(), 0.0]);
        assert!(t.constraint_violation(&a) < 1e-14);
        let d: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let expected = 1.0 / t.curvature_scale().sqrt();
        assert!((d / h - expected).abs() < 1e-6, "{}", d / h);
    }
}

#[test]
fn j_is_isometric_complex_structure() {
    for t in all_targets() {
        for seed in 0..20 {
            let p = t.random_point(seed);
            let x = t.random_tangent(&p, seed + 100);
            let y = t.random_tangent(&p, seed + 200);
            let jx = t.complex_structure(p.coords(), x.coords());
            let jy = t.complex_structure(p.coords(), y.coords());
            assert!(t.tangency_violation(p.coords(), &jx) < 1e-13);
            let jjx = t.complex_structure(p.coords(), &jx);
            let sum: Vec<f64> = jjx.iter().zip(x.coords()).map(|(a, b)| a + b).collect();
            assert!(norm(&sum) < 1e-12);
            assert!((dot(&jx, &jy) - dot(x.coords(), y.coords())).abs() < 1e-12);
        }
    }
}

#[test]
fn projection_is_idempotent_and_self_adjoint() {
    for t in all_targets() {
        let p = t.random_point(9);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let v: Vec<f64> = (0..t.ambient_dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
            let w: Vec<f64> = (0..t.ambient_dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
            let pv = t.project(p.coords(), &v);
            let ppv = t.project(p.coords(), &pv);
            assert!(close(&pv, &ppv, 1e-12));
            let pw = t.project(p.coords(), &w);
            assert!((dot(&pv, &w) - dot(&v, &pw)).abs() < 1e-12);
            // v - Pv is orthogonal to every tangent vector
            let normal: Vec<f64> = v.iter().zip(&pv).map(|(a, b)| a - b).collect();
            assert!(dot(&normal, &pw).abs() < 1e-12);
        }
    }
}

#[test]
fn retract_examples() {
    let s = TargetManifold::sphere2();
    let p = sphere_pt([0.0, 0.0, 1.0]);
    let zero = s.tangent(&p, vec![0.0; 3]).unwrap();
    assert_eq!(s.retract(&p, &zero).unwrap(), p);

    let q = sphere_pt([1.0, 0.0, 0.0]);
    for sc in [1e-3, 1e-6, 1e-9] {
        let x = s.tangent(&q, vec![0.0, std::f64::consts::FRAC_PI_2 * sc, 0.0]).unwrap();
        let r = s.retract(&q, &x).unwrap();
        assert!((norm(r.coords()) - 1.0).abs() <= 1e-15);
    }
    let x = s.tangent(&q, vec![0.0, 1.0, 0.0]).unwrap();
    let r = s.retract(&q, &x).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!(close(r.coords(), &[h, h, 0.0], 1e-15));

    for t in all_targets() {
        let p = t.random_point(4);
        let x = t.random_tangent(&p, 5);
        let small: Vec<f64> = x.coords().iter().map(|v| 0.3 * v).collect();
        let x = t.tangent(&p, small).unwrap();
        let r = t.retract(&p, &x).unwrap();
        assert!(t.constraint_violation(r.coords()) < 1e-12);
        let zero = t.tangent(&p, vec![0.0; t.ambient_dim()]).unwrap();
        assert_eq!(t.retract(&p, &zero).unwrap(), p);
    }
}

#[test]
fn retract_is_second_order_close_to_geodesic_on_sphere() {
    let s = TargetManifold::sphere2();
    let p = sphere_pt([1.0, 0.0, 0.0]);
    let mut prev = None;
    for step in [1e-1, 5e-2, 2.5e-2] {
        let x = s.tangent(&p, vec![0.0, step, 0.0]).unwrap();
        let r = s.retract(&p, &x).unwrap();
        let geo = [step.cos(), step.sin(), 0.0];
        let err = norm(&[r.coords()[0] - geo[0], r.coords()[1] - geo[1], 0.0]);
        if let Some(e) = prev {
            // O(t^3) here in fact; at least second order
            assert!(e / err > 3.9);
        }
        prev = Some(err);
    }
}

#[test]
fn random_tangent_is_deterministic_and_tangent() {
    for t in all_targets() {
        let p = t.random_point(1);
        let a = t.random_tangent(&p, 42);
        let b = t.random_tangent(&p, 42);
        assert_eq!(a, b);
        let again = t.project(p.coords(), a.coords());
        assert!(close(&again, a.coords(), 1e-14));
    }
}

/// Mean of the chi distribution with `d` degrees of freedom, via
/// `m(1) = sqrt(2/pi)`, `m(2) = sqrt(pi/2)` and `m(d) m(d+1) = d`.
fn chi_mean(d: usize) -> f64 {
    let mut m = [(2.0 / std::f64::consts::PI).sqrt(), (std::f64::consts::PI / 2.0).sqrt()];
    if d == 1 {
        return m[0];
    }
    for k in 2..d {
        let next = k as f64 / m[1];
        m = [m[1], next];
    }
    m[1]
}

#[test]
fn random_tangent_norm_follows_chi_distribution() {
    assert!((chi_mean(3) - 2.0 * (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-14);
    for t in all_targets() {
        let p = t.random_point(2);
        let n = 10_000;
        let mean: f64 = (0..n).map(|s| t.random_tangent(&p, s as u64).norm()).sum::<f64>() / n as f64;
        let expected = chi_mean(t.tangent_dim());
        assert!((mean - expected).abs() < 0.1 * expected, "{mean} vs {expected}");
    }
}

#[test]
fn constructors_validate() {
    assert!(TargetManifold::grassmannian(4, 0).is_err());
    assert!(TargetManifold::grassmannian(4, 4).is_err());
    assert!(TargetManifold::complex_projective(0).is_err());
    assert!(TargetManifold::sphere2().with_curvature_scale(2.0).is_err());
    assert_eq!(TargetManifold::grassmannian(4, 2).unwrap().ambient_dim(), 16);
    assert_eq!(TargetManifold::complex_projective(2).unwrap().ambient_dim(), 9);
    assert!(TargetManifold::sphere2().point(vec![1.0, 0.0, 1e-5]).is_err());
}
