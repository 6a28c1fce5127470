//! The acceptance criteria, one line each. Runs without the libtest harness
//! so the lines are always printed.

mod common;

use std::collections::BTreeMap;
use std::process::{Command as Process, ExitCode};
use std::time::{Duration, Instant};

use rand::Rng;
use tropext::cli::Command;
use tropext::extension::{fiber_at, validate_extension};
use tropext::extension_ops::{check_open_universality, classify, pullback_extension};
use tropext::io::parse_polyhedron;
use tropext::kernel::{equalizer, image, preimage, AffineMap};
use tropext::pushout::{pushout_extension, pushout_report, validate_degree_one};
use tropext::random::{forest_subsets, random_monodromy_curve, random_pullback, random_smooth_curve, rng};
use tropext::selftest::{class_independence_case, smooth_law_case};
use tropext::universal::build_pu;

use common::oracle::{self, h_of, Q};
use common::{fixture, fixture_dir, fixture_names, fixture_text, random_map, random_polyhedron};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    match limit {
        Some(l) if took > l => Err(format!("{detail}; took {took:.2?}, limit {l:?}")),
        _ => Ok(format!("{detail}; {took:.2?}")),
    }
}

fn smooth_target_law() -> Outcome {
    timed(Some(Duration::from_secs(10)), || {
        let mut g = rng(1);
        for i in 0..200 {
            smooth_law_case(&mut g).map_err(|e| format!("curve {i}: {e}"))?;
        }
        Ok("200 curves".into())
    })
}

fn distinguished_point() -> Outcome {
    let mut curves: Vec<(String, _)> = fixture_names().into_iter().map(|n| (n.clone(), fixture(&n).curve)).collect();
    let mut g = rng(2);
    for i in 0..100 {
        let c = if i % 2 == 0 { random_smooth_curve(&mut g, 8) } else { random_monodromy_curve(&mut g) };
        curves.push((format!("random {i}"), c));
    }
    for (name, c) in &curves {
        let u = build_pu(c).map_err(|e| format!("{name}: {e}"))?;
        if !u.pu.contains(&u.basepoint) {
            return Err(format!("{name}: basepoint outside P_u"));
        }
        let f = fiber_at(c, &u.structure, &u.basepoint).map_err(|e| format!("{name}: {e}"))?;
        if &f != c {
            return Err(format!("{name}: fiber differs from the curve"));
        }
    }
    Ok(format!("{} curves", curves.len()))
}

fn classification_round_trip() -> Outcome {
    let us: Vec<_> = fixture_names().iter().map(|n| (n.clone(), build_pu(&fixture(n).curve).unwrap())).collect();
    let mut g = rng(3);
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        if attempts > 1000 {
            return Err(format!("only {done} maps sampled"));
        }
        let (name, u) = &us[g.gen_range(0..us.len())];
        let Some(sample) = random_pullback(&mut g, u) else { continue };
        let s = pullback_extension(&u.structure, &sample.map, &sample.base, &sample.basepoint)
            .map_err(|e| format!("{name}: {e}"))?;
        let cm = classify(u, &s).map_err(|e| format!("{name}: {e}"))?;
        if cm.map != sample.map || !cm.certificate.passed() {
            return Err(format!("{name}: recovered {:?} from {:?}", cm.map, sample.map));
        }
        done += 1;
    }
    Ok(format!("{done} maps over {} fixtures", us.len()))
}

fn worked_example() -> Outcome {
    let hand = parse_polyhedron(&fixture_text("golden/ray_target_pu.json")).map_err(|e| e.to_string())?;
    let u = build_pu(&fixture("ray_target.json").curve).map_err(|e| e.to_string())?;
    if !oracle::same_set(&h_of(&u.pu), &h_of(&hand)) {
        return Err(format!("P_u = {:?}", u.pu));
    }
    if u.pu.canonical() != hand.canonical() {
        return Err("canonical forms differ".into());
    }
    Ok("P_u matches the hand-derived H-representation".into())
}

fn open_universality() -> Outcome {
    timed(Some(Duration::from_secs(30)), || {
        let mut curves: Vec<(String, _)> = fixture_names().into_iter().map(|n| (n.clone(), fixture(&n).curve)).collect();
        let mut g = rng(5);
        for i in 0..50 {
            curves.push((format!("random {i}"), random_smooth_curve(&mut g, 5)));
        }
        let mut checked = 0;
        for (name, c) in &curves {
            let u = build_pu(c).map_err(|e| format!("{name}: {e}"))?;
            for s in forest_subsets(c, 256) {
                let (_, r) = check_open_universality(&u, &s, &BTreeMap::new()).map_err(|e| format!("{name} {s:?}: {e}"))?;
                if !r.passed() {
                    return Err(format!("{name} {s:?}: {r}"));
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} smoothing sets on {} curves", curves.len()))
    })
}

fn pushout_sum_rule() -> Outcome {
    let names = ["split2.json", "split3.json", "contracted_subtree.json", "leg_chain.json"];
    for name in names {
        let d = fixture(name).degree_one.ok_or(format!("{name}: no degree-one map"))?;
        let vr = validate_degree_one(&d);
        if !vr.passed() {
            return Err(format!("{name}: {vr}"));
        }
        let u = build_pu(&d.source).map_err(|e| format!("{name}: {e}"))?;
        let res = pushout_extension(&u.structure, &d).map_err(|e| format!("{name}: {e}"))?;
        for (e, chain) in d.edge_chains.iter().enumerate() {
            let n = u.pu.ambient_dim();
            let sum = chain.iter().fold(AffineMap::constant(n, vec![Q::from_integer(0.into())]), |acc, &i| {
                acc.add(&u.rho[i]).unwrap()
            });
            if res.structure.edges[e].rho != sum {
                return Err(format!("{name}: edge {e} length is not the sum"));
            }
        }
        let r = pushout_report(&u.structure, &d, &res);
        if !r.passed() || !validate_extension(&d.target, &res.structure).passed() {
            return Err(format!("{name}: {r}"));
        }
    }
    Ok(format!("{} fixtures", names.len()))
}

fn kernel_oracle() -> Outcome {
    let mut g = rng(7);
    let mut nonempty = 0;
    for i in 0..500 {
        let p = random_polyhedron(&mut g, 5, 10);
        nonempty += usize::from(!oracle::is_empty(&h_of(&p)));
        let n = p.ambient_dim();
        let hp = h_of(&p);
        let m = g.gen_range(1..=3);
        let a = random_map(&mut g, n, m);
        let im = image(&p, &a).map_err(|e| e.to_string())?;
        if !oracle::image_matches(&hp, &a, &h_of(&im)) {
            return Err(format!("image {i}: {p:?} under {a:?}"));
        }
        let k = g.gen_range(1..=3);
        let b = random_map(&mut g, k, n);
        let pre = preimage(&p, &b).map_err(|e| e.to_string())?;
        if !oracle::same_set(&h_of(&pre), &oracle::preimage(&hp, &b)) {
            return Err(format!("preimage {i}: {p:?} under {b:?}"));
        }
        let a2 = random_map(&mut g, n, m);
        let eq = equalizer(&p, &a, &a2).map_err(|e| e.to_string())?;
        let mut he = hp.clone();
        let diff = a.sub(&a2).unwrap();
        for (row, t) in diff.linear_rat().into_iter().zip(diff.translate()) {
            he.eq.push((row, -t));
        }
        if !oracle::same_set(&h_of(&eq), &he) {
            return Err(format!("equalizer {i}: {p:?} with {a:?}, {a2:?}"));
        }
    }
    Ok(format!("500 polyhedra, {nonempty} nonempty"))
}

fn class_independence() -> Outcome {
    let mut g = rng(8);
    for i in 0..50 {
        class_independence_case(&mut g).map_err(|e| format!("instance {i}: {e}"))?;
    }
    Ok("50 instances".into())
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_tropext");
    let dir = fixture_dir();
    let mut runs = 0;
    for c in Command::ALL {
        let inputs: Vec<Option<String>> = if c == Command::Selftest { vec![None] } else { fixture_names().into_iter().map(Some).collect() };
        for input in inputs {
            let mut outputs = Vec::new();
            for _ in 0..3 {
                let mut p = Process::new(exe);
                p.args(["--command", c.name()]);
                if let Some(name) = &input {
                    p.arg("--input").arg(dir.join(name));
                }
                let out = p.output().map_err(|e| e.to_string())?;
                outputs.push((out.status.code(), out.stdout));
                runs += 1;
            }
            if outputs.windows(2).any(|w| w[0] != w[1]) {
                return Err(format!("{c} {input:?} differs between runs"));
            }
        }
    }
    Ok(format!("{runs} runs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("smooth-target law", smooth_target_law),
        ("distinguished point", distinguished_point),
        ("classification round trip", classification_round_trip),
        ("worked ray-target example", worked_example),
        ("open universality", open_universality),
        ("pushout sum rule and naturality", pushout_sum_rule),
        ("kernel oracle equivalence", kernel_oracle),
        ("class independence", class_independence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (status, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {}: {status} {name} ({detail})", i + 1);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
