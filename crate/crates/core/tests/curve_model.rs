mod common;

use proptest::prelude::*;
use tropext::curve::validate_curve_type;
use tropext::extension::{fiber_at, node_polyhedron, trivial_extension, validate_extension};
use tropext::kernel::rational::{rat, rats};
use tropext::kernel::{Polyhedron, Rat};
use tropext::random::{random_monodromy_curve, random_smooth_curve, rng};
use tropext::universal::build_pu;

use common::fixture;

#[test]
fn two_vertex_smooth_is_valid() {
    let p = fixture("two_vertex_smooth.json");
    let r = validate_curve_type(&p.curve);
    assert!(r.passed(), "{r}");
}

#[test]
fn non_injective_germ_is_reported_on_its_flag() {
    let p = fixture("invalid/non_injective_germ.json");
    let r = validate_curve_type(&p.curve);
    let bad: Vec<_> = r.failures().filter(|c| c.name == "germ_iso_onto_face").map(|c| c.subject.as_str()).collect();
    assert_eq!(bad, vec!["edge e flag 0", "edge e flag 1"]);
}

#[test]
fn endpoint_mismatch_names_both_points() {
    // the valid ray example with the trajectory moved up by one
    let p = fixture("invalid/flag_endpoint_mismatch.json");
    let r = validate_curve_type(&p.curve);
    let f: Vec<_> = r.failures().collect();
    assert_eq!(f.len(), 2, "{r}");
    assert_eq!(f[0].name, "endpoint_compatible");
    assert_eq!(f[0].subject, "edge e flag 0");
    assert_eq!(f[0].detail, "germ(position) = (1) but trajectory endpoint = (2)");
    assert_eq!(f[1].detail, "germ(position) = (3) but trajectory endpoint = (4)");
}

#[test]
fn curve_without_vertices_is_rejected() {
    let mut c = fixture("point_vertex.json").curve;
    c.vertices.clear();
    let r = validate_curve_type(&c);
    assert_eq!(r.failures().next().unwrap().name, "has_vertex");
}

#[test]
fn disconnected_and_zero_length_are_rejected() {
    let mut c = fixture("two_vertex_smooth.json").curve;
    c.edges[0].length = rat(0, 1);
    let r = validate_curve_type(&c);
    assert!(r.failures().any(|f| f.name == "edge_length_positive"));
    c.edges.clear();
    let r = validate_curve_type(&c);
    assert!(r.failures().any(|f| f.name == "connected"));
}

#[test]
fn trivial_extension_validates() {
    let c = fixture("ray_target.json").curve;
    let s = trivial_extension(&c).unwrap();
    assert_eq!(s.base_dim(), 0);
    let r = validate_extension(&c, &s);
    assert!(r.passed(), "{r}");
}

#[test]
fn universal_structure_validates() {
    for name in ["ray_target.json", "corner.json", "monodromy_swap.json", "smooth_two_edge.json"] {
        let c = fixture(name).curve;
        let u = build_pu(&c).unwrap();
        let r = validate_extension(&c, &u.structure);
        assert!(r.passed(), "{name}: {r}");
    }
}

#[test]
fn node_polyhedron_of_wrong_shape_fails_pullback_check() {
    let c = fixture("ray_target.json").curve;
    let mut s = build_pu(&c).unwrap().structure;
    s.edges[0].poly = Polyhedron::product(&[&s.base, &Polyhedron::orthant(1), &Polyhedron::universe(1)]);
    let r = validate_extension(&c, &s);
    let names: Vec<_> = r.failures().map(|f| f.name.as_str()).collect();
    assert!(names.contains(&"node_is_pullback"), "{r}");
    // and the right shape passes that check
    s.edges[0].poly = node_polyhedron(&s.base, &s.edges[0].rho).unwrap();
    assert!(validate_extension(&c, &s).passed());
}

#[test]
fn fiber_at_basepoint_is_the_curve() {
    let c = fixture("smooth_two_edge.json").curve;
    let u = build_pu(&c).unwrap();
    assert_eq!(fiber_at(&c, &u.structure, &u.basepoint).unwrap(), c);
}

#[test]
fn fiber_at_other_point_reads_lengths() {
    let c = fixture("smooth_two_edge.json").curve;
    let u = build_pu(&c).unwrap();
    let f = fiber_at(&c, &u.structure, &rats(&[1, 3])).unwrap();
    let lengths: Vec<Rat> = f.edges.iter().map(|e| e.length.clone()).collect();
    assert_eq!(lengths, rats(&[1, 3]));
    assert_eq!(f.vertices, c.vertices);
}

#[test]
fn fiber_on_zero_length_face_is_an_error() {
    let c = fixture("smooth_two_edge.json").curve;
    let u = build_pu(&c).unwrap();
    let e = fiber_at(&c, &u.structure, &rats(&[0, 2])).unwrap_err();
    assert_eq!(e.code(), "ZERO_LENGTH_EDGE");
    assert_eq!(e.to_string(), "zero-length edges at fiber point: e1");
}

#[test]
fn fiber_of_ray_example_moves_positions() {
    let c = fixture("ray_target.json").curve;
    let u = build_pu(&c).unwrap();
    // x1 = 2, ℓ = 5 forces x2 = 7
    let f = fiber_at(&c, &u.structure, &rats(&[2, 7, 5])).unwrap();
    assert_eq!(f.vertices[0].position, rats(&[2]));
    assert_eq!(f.vertices[1].position, rats(&[7]));
    assert_eq!(f.edges[0].trajectory.apply(&[rat(5, 1)]), rats(&[7]));
    assert!(validate_curve_type(&f).passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trivial_extension_of_random_curves(seed in any::<u64>()) {
        let mut g = rng(seed);
        let c = if seed % 2 == 0 { random_smooth_curve(&mut g, 6) } else { random_monodromy_curve(&mut g) };
        prop_assert!(validate_curve_type(&c).passed());
        let s = trivial_extension(&c).unwrap();
        prop_assert!(validate_extension(&c, &s).passed());
        prop_assert_eq!(fiber_at(&c, &s, &[]).unwrap(), c);
    }
}
