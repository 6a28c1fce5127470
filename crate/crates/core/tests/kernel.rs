mod common;

use proptest::prelude::*;
use tropext::error::Error;
use tropext::kernel::rational::{int, rat, rats};
use tropext::kernel::{
    affine_interpolate, equalizer, fiber_product, fixed_locus, image, is_iso_onto_face, preimage, AffineMap,
    Constraint, InterpolationConstraint, Polyhedron, Rat,
};
use tropext::random::{coordinate_rotation, rng};

use common::oracle::{self, h_of};
use common::{random_map, random_polyhedron};

fn eq(normal: &[i64], offset: i64) -> Constraint {
    Constraint::from_i64(normal, rat(offset, 1))
}

fn poly(dim: usize, ineqs: &[(&[i64], i64)], eqs: &[(&[i64], i64)]) -> Polyhedron {
    Polyhedron::new(
        dim,
        ineqs.iter().map(|(n, b)| eq(n, *b)).collect(),
        eqs.iter().map(|(n, b)| eq(n, *b)).collect(),
    )
    .unwrap()
}

fn map(source: usize, linear: &[&[i64]], translate: &[i64]) -> AffineMap {
    AffineMap::from_i64(source, linear, &rats(translate))
}

fn sum_map() -> AffineMap {
    map(2, &[&[1, 1]], &[0])
}

#[test]
fn image_of_orthant_under_sum_is_ray() {
    let im = image(&Polyhedron::orthant(2), &sum_map()).unwrap();
    assert_eq!(im, Polyhedron::orthant(1).canonical());
}

#[test]
fn image_under_identity_is_same_set() {
    let p = poly(2, &[(&[1, 0], 0), (&[1, -2], -3)], &[]);
    let im = image(&p, &AffineMap::identity(2)).unwrap();
    assert_eq!(im, p.canonical());
}

#[test]
fn image_of_simplex_coordinate_is_unit_interval() {
    let simplex = poly(2, &[(&[1, 0], 0), (&[0, 1], 0)], &[(&[1, 1], 1)]);
    let im = image(&simplex, &map(2, &[&[1, 0]], &[0])).unwrap();
    assert_eq!(im, Polyhedron::interval(rat(0, 1), rat(1, 1)).canonical());
}

#[test]
fn image_dimension_mismatch() {
    let e = image(&Polyhedron::orthant(3), &sum_map()).unwrap_err();
    assert_eq!(e.code(), "DIMENSION_MISMATCH");
}

#[test]
fn preimage_of_point_under_sum_is_line() {
    let p = Polyhedron::point(&rats(&[1]));
    let pre = preimage(&p, &sum_map()).unwrap();
    assert_eq!(pre, poly(2, &[], &[(&[1, 1], 1)]).canonical());
    assert_eq!(pre.dimension(), 1);
}

#[test]
fn preimage_under_identity() {
    let pre = preimage(&Polyhedron::orthant(1), &AffineMap::identity(1)).unwrap();
    assert_eq!(pre, Polyhedron::orthant(1).canonical());
}

#[test]
fn preimage_of_interval_under_doubling() {
    let p = Polyhedron::interval(rat(0, 1), rat(3, 1));
    let pre = preimage(&p, &map(1, &[&[2]], &[0])).unwrap();
    // interval arithmetic: 0 ≤ 2t ≤ 3 exactly when 0 ≤ t ≤ 3/2
    assert_eq!(pre, Polyhedron::interval(rat(0, 1), rat(3, 2)).canonical());
    assert!(pre.contains(&[rat(3, 2)]));
    assert!(!pre.contains(&[rat(7, 4)]));
}

#[test]
fn fiber_product_over_sum() {
    let (fp, p1, p2) =
        fiber_product(&Polyhedron::orthant(1), &AffineMap::identity(1), &Polyhedron::orthant(2), &sum_map()).unwrap();
    let expected = poly(3, &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0)], &[(&[1, -1, -1], 0)]);
    assert!(fp.same_set(&expected));
    assert_eq!(p1, map(3, &[&[1, 0, 0]], &[0]));
    assert_eq!(p2, map(3, &[&[0, 1, 0], &[0, 0, 1]], &[0, 0]));
}

#[test]
fn fiber_product_along_identity_is_graph() {
    let p1 = poly(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, -1], -4)], &[]);
    let a1 = map(2, &[&[1, 2]], &[1]);
    let (fp, proj1, _) = fiber_product(&p1, &a1, &Polyhedron::universe(1), &AffineMap::identity(1)).unwrap();
    let cert = is_iso_onto_face(&proj1, &fp, &p1).expect("projection of a graph is an isomorphism");
    assert!(cert.face.same_set(&p1));
}

#[test]
fn fiber_product_of_point_is_segment() {
    let (fp, _, proj2) =
        fiber_product(&Polyhedron::point(&rats(&[3])), &AffineMap::identity(1), &Polyhedron::orthant(2), &sum_map())
            .unwrap();
    let seg = image(&fp, &proj2).unwrap();
    let mut vs = seg.vrep().vertices.clone();
    vs.sort();
    assert_eq!(vs, vec![rats(&[0, 3]), rats(&[3, 0])]);
    assert!(seg.vrep().rays.is_empty());
}

#[test]
fn ray_inclusion_is_face() {
    let a = map(1, &[&[0], &[1]], &[0, 0]);
    let cert = is_iso_onto_face(&a, &Polyhedron::orthant(1), &Polyhedron::orthant(2)).unwrap();
    assert!(cert.face.same_set(&poly(2, &[(&[0, 1], 0)], &[(&[1, 0], 0)])));
    assert_eq!(cert.inverse_on_face.compose(&a).unwrap(), AffineMap::identity(1));
}

#[test]
fn identity_is_face_of_itself() {
    let p = poly(2, &[(&[1, 0], 0), (&[1, -1], -2)], &[]);
    let cert = is_iso_onto_face(&AffineMap::identity(2), &p, &p).unwrap();
    assert!(cert.face.same_set(&p));
    assert!(cert.tight_inequalities.is_empty());
}

#[test]
fn sum_is_not_injective() {
    assert!(is_iso_onto_face(&sum_map(), &Polyhedron::orthant(2), &Polyhedron::orthant(1)).is_none());
}

#[test]
fn scaling_is_not_integral_isomorphism() {
    // t ↦ 2t is injective, but its inverse is not integral
    let a = map(1, &[&[2]], &[0]);
    assert!(is_iso_onto_face(&a, &Polyhedron::orthant(1), &Polyhedron::orthant(1)).is_none());
}

#[test]
fn interpolate_node_map() {
    let l = rat(5, 2);
    let ambient = Polyhedron::orthant(2);
    let face = InterpolationConstraint {
        embed: map(1, &[&[0], &[1]], &[0, 0]),
        sub: Polyhedron::orthant(1),
        value: AffineMap::constant(1, vec![Rat::from_integer(0.into())]),
    };
    let segment = InterpolationConstraint {
        embed: AffineMap::new(1, vec![vec![int(1)], vec![int(-1)]], vec![rat(0, 1), l.clone()]).unwrap(),
        sub: Polyhedron::interval(rat(0, 1), l),
        value: AffineMap::identity(1),
    };
    let a = affine_interpolate(&[face, segment], &ambient).unwrap();
    assert_eq!(a, map(2, &[&[1, 0]], &[0]));
}

#[test]
fn interpolate_single_full_constraint() {
    let value = map(2, &[&[3, -1], &[0, 2]], &[1, 0]);
    let c = InterpolationConstraint { embed: AffineMap::identity(2), sub: Polyhedron::orthant(2), value: value.clone() };
    assert_eq!(affine_interpolate(&[c], &Polyhedron::orthant(2)).unwrap(), value);
}

#[test]
fn interpolate_conflict() {
    let ambient = Polyhedron::orthant(2);
    let on_axis = |k: usize, v: i64| InterpolationConstraint {
        embed: if k == 0 { map(1, &[&[1], &[0]], &[0, 0]) } else { map(1, &[&[0], &[1]], &[0, 0]) },
        sub: Polyhedron::orthant(1),
        value: AffineMap::constant(1, rats(&[v])),
    };
    let e = affine_interpolate(&[on_axis(0, 0), on_axis(1, 1)], &ambient).unwrap_err();
    assert!(matches!(e, Error::Inconsistent(_)), "{e}");
}

#[test]
fn interpolate_underdetermined_and_non_integral() {
    let ambient = Polyhedron::orthant(2);
    let axis = InterpolationConstraint {
        embed: map(1, &[&[1], &[0]], &[0, 0]),
        sub: Polyhedron::orthant(1),
        value: AffineMap::identity(1),
    };
    assert_eq!(affine_interpolate(&[axis], &ambient).unwrap_err(), Error::Underdetermined);
    // value t on the segment t ↦ 2t forces slope 1/2
    let half = InterpolationConstraint {
        embed: map(1, &[&[2]], &[0]),
        sub: Polyhedron::orthant(1),
        value: AffineMap::identity(1),
    };
    let e = affine_interpolate(&[half], &Polyhedron::orthant(1)).unwrap_err();
    assert_eq!(e.code(), "NON_INTEGRAL");
}

#[test]
fn equalizer_examples() {
    let p = Polyhedron::orthant(2);
    let a = map(2, &[&[1, 0]], &[0]);
    assert_eq!(equalizer(&p, &a, &a).unwrap(), p.canonical());
    let diag = equalizer(&p, &a, &map(2, &[&[0, 1]], &[0])).unwrap();
    assert_eq!(diag.vrep().rays, vec![vec![int(1), int(1)]]);
    assert_eq!(diag.dimension(), 1);

    let cube = Polyhedron::orthant(3);
    let e = equalizer(&cube, &map(3, &[&[0, 1, 0]], &[0]), &map(3, &[&[1, 0, 1]], &[0])).unwrap();
    let hand = poly(3, &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0)], &[(&[-1, 1, -1], 0)]);
    assert!(oracle::same_set(&h_of(&e), &h_of(&hand)));
    let g = oracle::generators(&h_of(&e));
    assert_eq!(g.vertices.len(), 1);
    assert_eq!(g.rays.len(), 2);
}

#[test]
fn fixed_locus_examples() {
    let p = Polyhedron::orthant(2);
    assert_eq!(fixed_locus(&p, &[]).unwrap(), p.canonical());
    let diag = fixed_locus(&p, &[coordinate_rotation(2)]).unwrap();
    assert_eq!(diag.vrep().rays, vec![vec![int(1), int(1)]]);

    let f = fixed_locus(&Polyhedron::orthant(3), &[coordinate_rotation(3)]).unwrap();
    // every point of the orbit of x is x itself exactly on the diagonal
    let g = coordinate_rotation(3);
    for x in [rats(&[1, 1, 1]), rats(&[0, 2, 1]), rats(&[2, 2, 0])] {
        let orbit_fixed = g.apply(&x) == x && g.compose(&g).unwrap().apply(&x) == x;
        assert_eq!(f.contains(&x), orbit_fixed, "{x:?}");
    }
    assert_eq!(f.vrep().rays, vec![vec![int(1), int(1), int(1)]]);
}

#[test]
fn canonical_form_of_empty_set() {
    let p = poly(1, &[(&[1], 1), (&[-1], 0)], &[]);
    assert!(p.is_empty());
    assert_eq!(p.canonical(), Polyhedron::empty(1).canonical());
    assert_eq!(p.dimension(), -1);
}

#[test]
fn canonical_normals_are_primitive() {
    let p = poly(2, &[(&[2, 4], 1), (&[0, 3], 0)], &[]).canonical();
    for c in p.inequalities().iter().chain(p.equalities()) {
        let g = c.normal.iter().fold(int(0), |acc, x| num_integer::Integer::gcd(&acc, x));
        assert_eq!(g, int(1), "{c:?}");
    }
}

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identity_image_round_trip(seed in seeds()) {
        let mut g = rng(seed);
        let p = random_polyhedron(&mut g, 4, 7);
        let im = image(&p, &AffineMap::identity(p.ambient_dim())).unwrap();
        prop_assert_eq!(im.canonical(), p.canonical());
    }

    #[test]
    fn image_is_functorial(seed in seeds()) {
        let mut g = rng(seed);
        let p = random_polyhedron(&mut g, 3, 6);
        let a = random_map(&mut g, p.ambient_dim(), 3);
        let b = random_map(&mut g, 3, 2);
        let twice = image(&image(&p, &a).unwrap(), &b).unwrap();
        let once = image(&p, &b.compose(&a).unwrap()).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn graph_projects_onto_first_factor(seed in seeds()) {
        let mut g = rng(seed);
        let p1 = random_polyhedron(&mut g, 3, 6);
        let a1 = random_map(&mut g, p1.ambient_dim(), 2);
        let (fp, proj1, _) = fiber_product(&p1, &a1, &Polyhedron::universe(2), &AffineMap::identity(2)).unwrap();
        prop_assert!(image(&fp, &proj1).unwrap().same_set(&p1));
    }

    #[test]
    fn equalizer_is_subset_where_maps_agree(seed in seeds()) {
        let mut g = rng(seed);
        let p = random_polyhedron(&mut g, 4, 7);
        let n = p.ambient_dim();
        let a1 = random_map(&mut g, n, 2);
        let a2 = random_map(&mut g, n, 2);
        let e = equalizer(&p, &a1, &a2).unwrap();
        prop_assert!(p.contains_poly(&e));
        let v = e.vrep();
        for x in &v.vertices {
            prop_assert_eq!(a1.apply(x), a2.apply(x));
        }
        for r in v.rays.iter().chain(&v.lines) {
            prop_assert_eq!(a1.apply_linear_int(r), a2.apply_linear_int(r));
        }
    }

    #[test]
    fn face_certificate_is_sound(seed in seeds()) {
        let mut g = rng(seed);
        let src = random_polyhedron(&mut g, 3, 5);
        let a = random_map(&mut g, src.ambient_dim(), 3);
        for target in [Polyhedron::orthant(3), image(&src, &a).unwrap()] {
            if let Some(cert) = is_iso_onto_face(&a, &src, &target) {
                prop_assert!(image(&src, &a).unwrap().same_set(&cert.face));
                prop_assert!(target.contains_poly(&cert.face));
                let back = cert.inverse_on_face.compose(&a).unwrap();
                let v = src.vrep();
                for x in &v.vertices {
                    prop_assert_eq!(&back.apply(x), x);
                }
                for r in v.rays.iter().chain(&v.lines) {
                    prop_assert_eq!(&back.apply_linear_int(r), r);
                }
            }
        }
    }

    #[test]
    fn equal_sets_have_equal_canonical_forms(seed in seeds()) {
        let mut g = rng(seed);
        let p = random_polyhedron(&mut g, 4, 6);
        // scale every normal, add an implied inequality, reverse the order
        let mut ineqs: Vec<Constraint> = p.inequalities().iter().rev().map(|c| Constraint::new(
            c.normal.iter().map(|x| x * 3).collect(), &c.offset * Rat::from_integer(3.into()))).collect();
        if p.inequalities().len() >= 2 {
            let (c1, c2) = (&p.inequalities()[0], &p.inequalities()[1]);
            ineqs.push(Constraint::new(
                c1.normal.iter().zip(&c2.normal).map(|(x, y)| x + y).collect(),
                &c1.offset + &c2.offset - Rat::from_integer(1.into()),
            ));
        }
        let q = Polyhedron::new(p.ambient_dim(), ineqs, p.equalities().to_vec()).unwrap();
        prop_assert_eq!(q.canonical(), p.canonical());
    }

    #[test]
    fn interpolation_recovers_map(seed in seeds()) {
        let mut g = rng(seed);
        let p = random_polyhedron(&mut g, 3, 5);
        if p.is_empty() {
            return Ok(());
        }
        let value = random_map(&mut g, p.ambient_dim(), 2);
        let c = InterpolationConstraint { embed: AffineMap::identity(p.ambient_dim()), sub: p.clone(), value: value.clone() };
        let got = affine_interpolate(&[c], &p).unwrap();
        prop_assert!(got.agrees_on(&value, &p));
    }

    #[test]
    fn operations_match_enumeration_oracle(seed in seeds()) {
        let mut g = rng(seed);
        let p = random_polyhedron(&mut g, 4, 8);
        let n = p.ambient_dim();
        let hp = h_of(&p);
        let m = rand::Rng::gen_range(&mut g, 1..=3);
        let a = random_map(&mut g, n, m);
        prop_assert!(oracle::image_matches(&hp, &a, &h_of(&image(&p, &a).unwrap())));
        let b = random_map(&mut g, 2, n);
        let pre = preimage(&p, &b).unwrap();
        prop_assert!(oracle::same_set(&h_of(&pre), &oracle::preimage(&hp, &b)));
    }
}
