//! Randomized property suites behind the `selftest` command.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::curve::validate_curve_type;
use crate::extension::{fiber_at, trivial_extension, validate_extension};
use crate::extension_ops::{check_open_universality, classify, pullback_extension};
use crate::kernel::{image, is_iso_onto_face, AffineMap, Polyhedron, Rat};
use crate::pushout::{pushout_extension, pushout_report, subdivide_edge, validate_degree_one, DegreeOneMap};
use crate::random::{
    forest_subsets, random_monodromy_curve, random_pullback, random_smooth_curve, rng, twist_germs, TestRng,
};
use crate::universal::build_pu;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summary {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures.is_empty())
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        writeln!(f, "{:<24} {:>6} {:>7}", "suite", "cases", "failed")?;
        for s in &self.suites {
            writeln!(f, "{:<24} {:>6} {:>7}", s.name, s.cases, s.failures.len())?;
        }
        for s in &self.suites {
            for m in s.failures.iter().take(3) {
                writeln!(f, "  {}: {m}", s.name)?;
            }
        }
        Ok(())
    }
}

fn suite(name: &str, cases: usize, rng: &mut TestRng, mut case: impl FnMut(&mut TestRng) -> Result<(), String>) -> SuiteResult {
    let mut failures = Vec::new();
    for i in 0..cases {
        if let Err(m) = case(rng) {
            failures.push(format!("case {i}: {m}"));
        }
    }
    SuiteResult { name: name.to_string(), cases, failures }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

/// `P_u` is the orthant and the lengths give an isomorphism onto it.
pub fn smooth_law_case(rng: &mut TestRng) -> Result<(), String> {
    let c = random_smooth_curve(rng, 8);
    let u = build_pu(&c).map_err(err)?;
    let n = c.edges.len();
    let lengths = AffineMap::stack(u.pu.ambient_dim(), &u.rho.iter().collect::<Vec<_>>()).map_err(err)?;
    let orthant = Polyhedron::orthant(n);
    let cert = is_iso_onto_face(&lengths, &u.pu, &orthant).ok_or("lengths are not an isomorphism onto a face")?;
    ensure(cert.face.same_set(&orthant), "the face is not the whole orthant")
}

fn distinguished_case(c: &crate::curve::CurveType) -> Result<(), String> {
    let u = build_pu(c).map_err(err)?;
    ensure(u.pu.contains(&u.basepoint), "basepoint outside P_u")?;
    let f = fiber_at(c, &u.structure, &u.basepoint).map_err(err)?;
    ensure(&f == c, "fiber at the basepoint differs from the curve")?;
    let r = validate_extension(c, &u.structure);
    ensure(r.passed(), &r.to_string())?;
    let t = trivial_extension(c).map_err(err)?;
    let r = validate_extension(c, &t);
    ensure(r.passed(), &r.to_string())
}

pub fn classify_case(rng: &mut TestRng) -> Result<(), String> {
    let c = if rng.gen_bool(0.5) { random_smooth_curve(rng, 4) } else { random_monodromy_curve(rng) };
    let u = build_pu(&c).map_err(err)?;
    let Some(sample) = random_pullback(rng, &u) else {
        return Ok(());
    };
    let s = pullback_extension(&u.structure, &sample.map, &sample.base, &sample.basepoint).map_err(err)?;
    let cm = classify(&u, &s).map_err(err)?;
    ensure(cm.certificate.passed(), "certificate fails")?;
    ensure(cm.map == sample.map, "recovered map differs")
}

pub fn open_universality_case(rng: &mut TestRng) -> Result<(), String> {
    let c = random_smooth_curve(rng, 5);
    let u = build_pu(&c).map_err(err)?;
    for s in forest_subsets(&c, 64) {
        let (_, r) = check_open_universality(&u, &s, &BTreeMap::new()).map_err(|e| format!("{s:?}: {e}"))?;
        ensure(r.passed(), &format!("{s:?}: {r}"))?;
    }
    Ok(())
}

pub fn class_independence_case(rng: &mut TestRng) -> Result<(), String> {
    let c = random_monodromy_curve(rng);
    let twisted = twist_germs(&c, rng);
    let r = validate_curve_type(&twisted);
    ensure(r.passed(), &r.to_string())?;
    let a = build_pu(&c).map_err(err)?.pu.canonical();
    let b = build_pu(&twisted).map_err(err)?.pu.canonical();
    ensure(a == b, "P_u depends on the path class")
}

pub fn subdivision_case(rng: &mut TestRng) -> Result<(), String> {
    let c = random_smooth_curve(rng, 5);
    let d = if c.edges.is_empty() {
        DegreeOneMap::identity(&c)
    } else {
        let e = rng.gen_range(0..c.edges.len());
        let t = &c.edges[e].length * Rat::new(1.into(), rng.gen_range(2..=4).into());
        subdivide_edge(&c, e, &t).map_err(err)?
    };
    let r = validate_degree_one(&d);
    ensure(r.passed(), &r.to_string())?;
    let p0 = build_pu(&d.source).map_err(err)?.structure;
    let res = pushout_extension(&p0, &d).map_err(err)?;
    let r = pushout_report(&p0, &d, &res);
    ensure(r.passed(), &r.to_string())
}

pub fn run_selftest(seed: u64) -> Summary {
    let mut g = rng(seed);
    let mut suites = vec![
        suite("smooth_target_law", 50, &mut g, smooth_law_case),
        suite("distinguished_point", 40, &mut g, |rng| {
            let c = if rng.gen_bool(0.5) { random_smooth_curve(rng, 6) } else { random_monodromy_curve(rng) };
            distinguished_case(&c)
        }),
        suite("classification", 30, &mut g, classify_case),
        suite("open_universality", 10, &mut g, open_universality_case),
        suite("class_independence", 20, &mut g, class_independence_case),
        suite("pushout_subdivision", 20, &mut g, subdivision_case),
    ];
    suites.push(suite("monodromy_closure", 20, &mut g, |rng| {
        let c = random_monodromy_curve(rng);
        for (v, x) in c.vertices.iter().enumerate() {
            for g1 in &x.monodromy {
                for g2 in &x.monodromy {
                    let gh = g1.compose(g2).map_err(err)?;
                    let im = image(c.vertex_polytope(v), &gh).map_err(err)?;
                    ensure(c.vertex_polytope(v).contains_poly(&im), "composite leaves the stratum")?;
                }
            }
        }
        Ok(())
    }));
    Summary { seed, suites }
}
