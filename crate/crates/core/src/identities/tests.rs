use super::*;

fn grid(m: usize) -> GridSpec {
    GridSpec::with_points(m).unwrap()
}

fn targets() -> Vec<TargetManifold> {
    vec![
        TargetManifold::sphere2(),
        TargetManifold::complex_projective(2).unwrap(),
        TargetManifold::grassmannian(4, 2).unwrap(),
    ]
}

#[test]
fn curvature_properties_hold_on_all_targets() {
    for t in targets() {
        let rep = check_curvature_properties(&t, 50, 3);
        assert!(rep.passed(), "{}", rep.to_table());
        assert_eq!(rep.records.len(), 8);
        assert!(rep.records.iter().all(|r| r.samples == 50));
    }
}

#[test]
fn sphere_properties_are_exact_to_rounding() {
    let rep = check_curvature_properties(&TargetManifold::sphere2(), 100, 11);
    for r in &rep.records {
        assert!(r.max_violation <= 1e-12, "{}: {}", r.name, r.max_violation);
    }
}

#[test]
fn parallel_curvature_on_great_circle() {
    let t = TargetManifold::sphere2();
    let c = DiscreteCurve::great_circle(t.clone(), grid(64), 1);
    let ux = crate::curve::velocity_field(&c);
    let jux = TangentField::from_raw(&c, c.map_nodes(|j, p| t.complex_structure(p, ux.vector(j))));
    let rep = check_parallel_curvature(&c, [&ux, &jux, &ux]);
    assert!(rep.records[0].max_violation <= 1e-9, "{}", rep.to_table());

    let p = t.random_point(1);
    let k = DiscreteCurve::constant(t.clone(), grid(32), &p);
    let v = t.random_tangent_at(p.coords(), 2);
    let f = TangentField::from_raw(&k, (0..32).flat_map(|_| v.clone()).collect());
    assert_eq!(check_parallel_curvature(&k, [&f, &f, &f]).records[0].max_violation, 0.0);
}

#[test]
fn parallel_curvature_matches_refined_grid() {
    for t in targets() {
        let c = DiscreteCurve::random_smooth(t, grid(128), 4);
        let f: Vec<TangentField> = (0..3).map(|i| TangentField::random_bandlimited(&c, 20 + i, 1, 4)).collect();
        let rep = check_parallel_curvature(&c, [&f[0], &f[1], &f[2]]);
        assert!(rep.passed(), "{}", rep.to_table());
    }
}

#[test]
fn symmetric_operators_on_curves() {
    for t in targets() {
        let c = DiscreteCurve::random_smooth(t, grid(64), 9);
        let rep = check_ai_symmetry(&c, 100, 5);
        assert!(rep.passed(), "{}", rep.to_table());
    }
    let g = DiscreteCurve::great_circle(TargetManifold::sphere2(), grid(64), 1);
    let rep = check_ai_symmetry(&g, 100, 5);
    assert!(rep.records.iter().all(|r| r.max_violation <= 1e-12));
}

#[test]
fn rewriting_identities_on_curves() {
    for t in targets() {
        let c = DiscreteCurve::random_smooth(t, grid(128), 13);
        let rep = check_resolution_identities(&c, 100, 8);
        assert!(rep.passed(), "{}", rep.to_table());
        assert_eq!(rep.records.len(), 8);
        assert_eq!(rep.get("bianchi_divergence_rewrite").unwrap().tolerance, DERIVATIVE_TOLERANCE);
    }
}

#[test]
fn surface_reduction_on_sphere() {
    let s = TargetManifold::sphere2();
    let params = FlowParams::new(1.0, 5.0, -6.0, 1.0, 0.0).unwrap();
    let g = DiscreteCurve::great_circle(s.clone(), grid(64), 1);
    let rep = check_surface_reduction(&g, &params, 1.0).unwrap();
    assert!(rep.records.iter().all(|r| r.max_violation <= 1e-10), "{}", rep.to_table());

    // normalize(u + 0.05 (0,0,cos 3x)) on the equator
    let m = 128;
    let gr = grid(m);
    let coords: Vec<f64> = (0..m)
        .flat_map(|j| {
            let x = gr.node(j);
            s.embed_sphere_point(&[x.cos(), x.sin(), 0.05 * (3.0 * x).cos()])
        })
        .collect();
    let c = DiscreteCurve::reprojected(s.clone(), gr, &coords).unwrap();
    let rep = check_surface_reduction(&c, &params, 1.0).unwrap();
    assert!(rep.passed(), "{}", rep.to_table());
    assert!(check_lpd_reduction(&c, 1.0, 1.0).unwrap().passed());
}

#[test]
fn surface_reduction_rejects_bad_inputs() {
    let params = FlowParams::new(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
    let cp = DiscreteCurve::random_smooth(TargetManifold::complex_projective(2).unwrap(), grid(32), 1);
    assert!(matches!(check_surface_reduction(&cp, &params, 1.0), Err(FlowError::InvalidArgument(_))));
    let s = TargetManifold::sphere2();
    let p = s.random_point(3);
    let k = DiscreteCurve::constant(s, grid(32), &p);
    assert!(matches!(check_surface_reduction(&k, &params, 1.0), Err(FlowError::PreconditionViolation { node: 0, .. })));
}

#[test]
fn hamiltonian_form_matches() {
    let hp = HamiltonianParams::new(0.4, 1.0, 0.3).unwrap();
    for t in targets() {
        let c = DiscreteCurve::random_smooth(t, grid(64), 21);
        assert!(check_hamiltonian_form(&c, &hp).passed());
    }
}

#[test]
fn failing_record_carries_witness() {
    let mut t = Tracker::new("demo", 1e-10);
    t.observe(Some(4), Some(7), &[1.0, 0.0], &[1.0, 0.0], 1.0);
    t.observe(Some(5), Some(2), &[1.0, 0.5], &[1.0, 0.0], 1.0);
    t.observe(Some(6), Some(3), &[0.0], &[0.1], 1.0);
    let rep = report(vec![t]);
    assert!(!rep.passed());
    let w = rep.records[0].witness.as_ref().unwrap();
    assert_eq!((w.seed, w.node), (Some(5), Some(2)));
    assert_eq!(w.lhs, vec![1.0, 0.5]);
    let kv = rep.to_records();
    assert!(kv.starts_with("identity=demo status=fail"));
    assert!(kv.contains("seed=5 node=2"));
    assert!(rep.to_table().contains("FAIL"));
}

#[test]
fn merge_keeps_worst_record() {
    let mut a = report(vec![Tracker::new("x", 1.0)]);
    let mut t = Tracker::new("x", 1.0);
    t.observe(Some(1), None, &[2.0], &[0.0], 1.0);
    a.merge(report(vec![t, Tracker::new("y", 1.0)]));
    assert_eq!(a.records.len(), 2);
    assert_eq!(a.get("x").unwrap().max_violation, 2.0);
    assert_eq!(a.get("x").unwrap().samples, 1);
}

#[test]
fn suite_is_deterministic_and_passes() {
    let t = TargetManifold::sphere2();
    let a = run_identity_suite(&t, 20, 7).unwrap();
    let b = run_identity_suite(&t, 20, 7).unwrap();
    assert!(a.passed(), "{}", a.to_table());
    assert_eq!(a, b);
    assert!(run_identity_suite(&t, 0, 7).is_err());
}
