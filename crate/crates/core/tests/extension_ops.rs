mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use tropext::curve::{CurveType, Edge, Flag, Vertex};
use tropext::error::Error;
use tropext::extension::{trivial_extension, validate_extension};
use tropext::extension_ops::{check_open_universality, classify, face_restrict, pullback_certificate, pullback_extension};
use tropext::kernel::rational::{rat, rats};
use tropext::kernel::{AffineMap, Constraint, Polyhedron, Rat};
use tropext::random::{forest_subsets, random_monodromy_curve, random_pullback, random_smooth_curve, rng};
use tropext::universal::build_pu;

use common::fixture;

fn map(source: usize, linear: &[&[i64]], translate: &[i64]) -> AffineMap {
    AffineMap::from_i64(source, linear, &rats(translate))
}

fn no_extra() -> BTreeMap<String, Vec<AffineMap>> {
    BTreeMap::new()
}

#[test]
fn pullback_along_identity_is_the_same_extension() {
    for name in ["ray_target.json", "smooth_two_edge.json", "monodromy_swap.json", "corner.json"] {
        let u = build_pu(&fixture(name).curve).unwrap();
        let n = u.pu.ambient_dim();
        let s = pullback_extension(&u.structure, &AffineMap::identity(n), &u.pu, &u.basepoint).unwrap();
        assert_eq!(s, u.structure, "{name}");
    }
}

#[test]
fn pullback_to_basepoint_is_trivial_extension() {
    for name in ["ray_target.json", "smooth_two_edge.json", "leg_chain.json"] {
        let c = fixture(name).curve;
        let u = build_pu(&c).unwrap();
        let inc = AffineMap::constant(0, u.basepoint.clone());
        let s = pullback_extension(&u.structure, &inc, &Polyhedron::universe(0), &[]).unwrap();
        assert_eq!(s, trivial_extension(&c).unwrap(), "{name}");
    }
}

#[test]
fn pullback_lengths_are_composed() {
    let p = fixture("ray_target_pullback.json");
    let pb = p.params.pullback.unwrap();
    let u = build_pu(&p.curve).unwrap();
    let s = pullback_extension(&u.structure, &pb.map, &pb.base, &pb.basepoint).unwrap();
    // ρ(x) = x₂ composed with t ↦ (1 + t, 3 + 2t, 2 + t)
    assert_eq!(s.edges[0].rho, map(1, &[&[1]], &[2]));
    assert!(validate_extension(&p.curve, &s).passed());
}

#[test]
fn pullback_rejects_bad_maps() {
    let u = build_pu(&fixture("ray_target.json").curve).unwrap();
    let off = AffineMap::constant(0, rats(&[1, 3, 3]));
    let e = pullback_extension(&u.structure, &off, &Polyhedron::universe(0), &[]).unwrap_err();
    assert_eq!(e.code(), "NOT_CONTAINED");
    let elsewhere = AffineMap::constant(0, rats(&[0, 2, 2]));
    let e = pullback_extension(&u.structure, &elsewhere, &Polyhedron::universe(0), &[]).unwrap_err();
    assert_eq!(e.code(), "BASEPOINT_MISMATCH");
    let short = AffineMap::constant(0, rats(&[1, 3]));
    let e = pullback_extension(&u.structure, &short, &Polyhedron::universe(0), &[]).unwrap_err();
    assert_eq!(e.code(), "DIMENSION_MISMATCH");
}

#[test]
fn pullback_is_functorial() {
    let p = fixture("ray_target_pullback.json");
    let pb = p.params.pullback.unwrap();
    let u = build_pu(&p.curve).unwrap();
    let s1 = pullback_extension(&u.structure, &pb.map, &pb.base, &pb.basepoint).unwrap();
    let m2 = map(1, &[&[2]], &[0]);
    let lhs = pullback_extension(&s1, &m2, &Polyhedron::orthant(1), &rats(&[0])).unwrap();
    let rhs = pullback_extension(&u.structure, &pb.map.compose(&m2).unwrap(), &Polyhedron::orthant(1), &rats(&[0])).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn classify_universal_is_identity() {
    for name in common::fixture_names() {
        let u = build_pu(&fixture(&name).curve).unwrap();
        let cm = classify(&u, &u.structure).unwrap();
        assert!(cm.map.is_identity(), "{name}");
        assert!(cm.certificate.passed());
    }
}

#[test]
fn classify_trivial_is_basepoint() {
    for name in common::fixture_names() {
        let c = fixture(&name).curve;
        let u = build_pu(&c).unwrap();
        let cm = classify(&u, &trivial_extension(&c).unwrap()).unwrap();
        assert_eq!(cm.map, AffineMap::constant(0, u.basepoint.clone()), "{name}");
    }
}

#[test]
fn classify_recovers_the_fixture_map() {
    let p = fixture("ray_target_pullback_2d.json");
    let pb = p.params.pullback.unwrap();
    let u = build_pu(&p.curve).unwrap();
    let s = pullback_extension(&u.structure, &pb.map, &pb.base, &pb.basepoint).unwrap();
    assert_eq!(classify(&u, &s).unwrap().map, pb.map);
}

#[test]
fn perturbed_map_fails_certificate() {
    let p = fixture("ray_target_pullback.json");
    let pb = p.params.pullback.unwrap();
    let u = build_pu(&p.curve).unwrap();
    let s = pullback_extension(&u.structure, &pb.map, &pb.base, &pb.basepoint).unwrap();
    assert!(pullback_certificate(&u, &s, &pb.map).passed());
    let bent = map(1, &[&[1], &[3], &[2]], &[1, 3, 2]);
    assert!(!pullback_certificate(&u, &s, &bent).passed());
}

#[test]
fn face_restrict_empty_set_is_identity() {
    for name in ["ray_target.json", "smooth_two_edge.json", "corner.json"] {
        let u = build_pu(&fixture(name).curve).unwrap();
        let (fr, r) = check_open_universality(&u, &[], &no_extra()).unwrap();
        assert_eq!(fr.face, u.pu.canonical());
        assert!(r.passed());
        assert_eq!(r.checks.last().unwrap().detail, "identity", "{name}");
    }
}

#[test]
fn face_restrict_smooth_one_edge() {
    let u = build_pu(&fixture("smooth_two_edge.json").curve).unwrap();
    let (fr, r) = check_open_universality(&u, &[0], &no_extra()).unwrap();
    let expected = Polyhedron::new(2, vec![Constraint::from_i64(&[0, 1], rat(0, 1))], vec![Constraint::from_i64(&[1, 0], rat(0, 1))]).unwrap();
    assert!(fr.face.same_set(&expected));
    assert_eq!(fr.contracted_curve.vertices.len(), 1);
    assert_eq!(fr.contracted_curve.vertices[0].id, "v1+v2");
    assert_eq!(fr.contracted_curve.edges.len(), 1);
    assert_eq!(fr.edge_map, vec![None, Some(0)]);
    assert!(r.passed());
}

#[test]
fn face_restrict_ray_example() {
    let u = build_pu(&fixture("ray_target.json").curve).unwrap();
    let fr = face_restrict(&u, &[0], &no_extra()).unwrap();
    let expected = Polyhedron::new(
        3,
        vec![Constraint::from_i64(&[1, 0, 0], rat(0, 1))],
        vec![Constraint::from_i64(&[0, 0, 1], rat(0, 1)), Constraint::from_i64(&[1, -1, 0], rat(0, 1))],
    )
    .unwrap();
    assert!(fr.face.same_set(&expected));
    assert_eq!(fr.witness_point, rats(&[1, 1, 0]));
    assert_eq!(fr.contracted_curve.vertices[0].position, rats(&[1]));
}

#[test]
fn smoothing_a_cycle_needs_monodromy() {
    let u = build_pu(&fixture("smooth_two_edge.json").curve).unwrap();
    match face_restrict(&u, &[0, 1], &no_extra()) {
        Err(Error::NewCycle(ids)) => assert_eq!(ids, vec!["e2".to_string()]),
        other => panic!("expected NEW_CYCLE, got {other:?}"),
    }
    let mut extra = no_extra();
    extra.insert("v1".into(), vec![]);
    assert!(face_restrict(&u, &[0, 1], &extra).is_ok());
}

#[test]
fn parallel_edges_have_no_interior_witness() {
    let mut c = fixture("ray_target.json").curve;
    let mut e2 = c.edges[0].clone();
    e2.id = "e2".into();
    c.edges.push(e2);
    let u = build_pu(&c).unwrap();
    match face_restrict(&u, &[0], &no_extra()) {
        Err(Error::NoInteriorWitness(ids)) => assert_eq!(ids, vec!["e2".to_string()]),
        other => panic!("expected NO_INTERIOR_WITNESS, got {other:?}"),
    }
}

#[test]
fn fixed_length_edge_has_empty_face() {
    let mut c = CurveType::default();
    let pt = c.add_stratum("pt", Polyhedron::universe(0));
    let seg = c.add_stratum("seg", Polyhedron::interval(rat(0, 1), rat(3, 1)));
    for id in ["v1", "v2"] {
        c.vertices.push(Vertex { id: id.into(), stratum: pt, position: vec![], monodromy: vec![] });
    }
    c.edges.push(Edge {
        id: "e".into(),
        length: rat(3, 1),
        stratum: seg,
        trajectory: AffineMap::identity(1),
        flags: [
            Flag { vertex: 0, germ: AffineMap::constant(0, rats(&[0])) },
            Flag { vertex: 1, germ: AffineMap::constant(0, rats(&[3])) },
        ],
    });
    let u = build_pu(&c).unwrap();
    assert_eq!(u.pu.vrep().vertices, vec![rats(&[3])]);
    assert!(matches!(face_restrict(&u, &[0], &no_extra()), Err(Error::EmptyFace)));
}

#[test]
fn every_forest_on_fixtures() {
    for name in common::fixture_names() {
        let c = fixture(&name).curve;
        let u = build_pu(&c).unwrap();
        for s in forest_subsets(&c, 64) {
            match check_open_universality(&u, &s, &no_extra()) {
                Ok((_, r)) => assert!(r.passed(), "{name} {s:?}: {r}"),
                Err(Error::NoInteriorWitness(_) | Error::EmptyFace) => {}
                Err(e) => panic!("{name} {s:?}: {e}"),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classify_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        let c = if seed % 2 == 0 { random_smooth_curve(&mut g, 4) } else { random_monodromy_curve(&mut g) };
        let u = build_pu(&c).unwrap();
        if let Some(sample) = random_pullback(&mut g, &u) {
            let s = pullback_extension(&u.structure, &sample.map, &sample.base, &sample.basepoint).unwrap();
            prop_assert!(validate_extension(&c, &s).passed());
            let cm = classify(&u, &s).unwrap();
            prop_assert_eq!(cm.map, sample.map);
        }
    }

    #[test]
    fn smooth_forests_are_open_universal(seed in any::<u64>()) {
        let mut g = rng(seed);
        let c = random_smooth_curve(&mut g, 4);
        let u = build_pu(&c).unwrap();
        for s in forest_subsets(&c, 16) {
            let (_, r) = check_open_universality(&u, &s, &no_extra()).unwrap();
            prop_assert!(r.passed(), "{:?}: {}", s, r);
        }
    }
}

#[test]
fn basepoint_is_rational_when_lengths_are() {
    let u = build_pu(&fixture("smooth_two_edge.json").curve).unwrap();
    assert_eq!(u.basepoint, vec![Rat::from_integer(1.into()), Rat::from_integer(3.into())]);
}
