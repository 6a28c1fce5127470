#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use tropext::io::{parse_problem, Problem};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> Problem {
    parse_problem(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// All valid fixture files, sorted by name.
pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture dir")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

use rand::Rng;
use tropext::kernel::rational::{int, rat};
use tropext::kernel::{AffineMap, Constraint, Int, Polyhedron, Rat};
use tropext::random::TestRng;

pub fn random_constraint(rng: &mut TestRng, n: usize) -> Constraint {
    let normal: Vec<Int> = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
    Constraint::new(normal, rat(rng.gen_range(-3..=3), rng.gen_range(1..=2)))
}

/// Up to `max_constraints` random constraints in dimension `1..=max_dim`,
/// about one in seven an equality.
pub fn random_polyhedron(rng: &mut TestRng, max_dim: usize, max_constraints: usize) -> Polyhedron {
    let n = rng.gen_range(1..=max_dim);
    let m = rng.gen_range(1..=max_constraints);
    let (mut ineqs, mut eqs) = (Vec::new(), Vec::new());
    for _ in 0..m {
        let c = random_constraint(rng, n);
        if rng.gen_range(0..7) == 0 {
            eqs.push(c);
        } else {
            ineqs.push(c);
        }
    }
    Polyhedron::new(n, ineqs, eqs).expect("dimensions agree")
}

pub fn random_map(rng: &mut TestRng, source: usize, target: usize) -> AffineMap {
    let linear = (0..target).map(|_| (0..source).map(|_| int(rng.gen_range(-2..=2))).collect()).collect();
    let translate: Vec<Rat> = (0..target).map(|_| rat(rng.gen_range(-2..=2), rng.gen_range(1..=2))).collect();
    AffineMap::new(source, linear, translate).expect("shapes agree")
}
