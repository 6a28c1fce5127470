//! Command dispatch shared by the binary and the tests.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::curve::validate_curve_type;
use crate::error::Error;
use crate::extension::{validate_extension, ExtendedStructure};
use crate::extension_ops::{check_open_universality, classify, pullback_extension};
use crate::io::{
    curve_json, extension_json, map_json, parse_problem, point_json, poly_json, report_json, strata_json,
    target_object_json, to_text, Problem, FORMAT_VERSION,
};
use crate::pushout::{pushout_extension, pushout_report, validate_degree_one};
use crate::report::Report;
use crate::universal::{build_pu, embedding_report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Universal,
    Classify,
    Pullback,
    Pushout,
    Facecheck,
    Selftest,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Validate,
        Command::Universal,
        Command::Classify,
        Command::Pullback,
        Command::Pushout,
        Command::Facecheck,
        Command::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Universal => "universal",
            Command::Classify => "classify",
            Command::Pullback => "pullback",
            Command::Pushout => "pushout",
            Command::Facecheck => "facecheck",
            Command::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

enum Failure {
    /// Unreadable input.
    Input(String),
    /// A section the command needs is absent.
    Missing(String),
    Op(Error),
    Check { invariant: String, subject: String, witness: String, result: Value },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Input(m),
            e => Failure::Op(e),
        }
    }
}

fn check_failure(r: &Report, result: Value) -> Failure {
    let first = r.failures().next().expect("a failing report has a failure");
    Failure::Check {
        invariant: first.name.clone(),
        subject: first.subject.clone(),
        witness: first.detail.clone(),
        result,
    }
}

fn envelope(command: Command, digest: &str) -> Value {
    json!({
        "version": FORMAT_VERSION,
        "command": command.name(),
        "input_digest": digest,
        "timing": Value::Null,
    })
}

pub fn digest(bytes: &[u8]) -> String {
    let h = Sha256::digest(bytes);
    h.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs one command on the bytes of a problem file.
pub fn run(command: Command, input: &[u8], smooth_edges: Option<&[String]>) -> Outcome {
    let dg = digest(input);
    let mut out = envelope(command, &dg);
    let result = std::str::from_utf8(input)
        .map_err(|e| Failure::Input(e.to_string()))
        .and_then(|text| parse_problem(text).map_err(Failure::from))
        .and_then(|p| dispatch(command, p, smooth_edges));
    let code = match result {
        Ok(v) => {
            out["status"] = json!("ok");
            out["result"] = v;
            EXIT_OK
        }
        Err(Failure::Input(m)) => {
            out["status"] = json!("input_error");
            out["error"] = json!({"code": "PARSE", "message": m});
            EXIT_INPUT
        }
        Err(Failure::Missing(m)) => {
            out["status"] = json!("input_error");
            out["error"] = json!({"code": "MISSING_SECTION", "message": m});
            EXIT_INPUT
        }
        Err(Failure::Op(e)) => {
            out["status"] = json!("error");
            out["error"] = json!({"code": e.code(), "message": e.to_string()});
            EXIT_FAILED
        }
        Err(Failure::Check { invariant, subject, witness, result }) => {
            out["status"] = json!("failed");
            out["error"] = json!({
                "code": "CHECK_FAILED",
                "message": format!("{invariant} fails on {subject}"),
                "invariant": invariant,
                "subject": subject,
                "witness": witness,
            });
            out["result"] = result;
            EXIT_FAILED
        }
    };
    Outcome { code, output: to_text(&out) }
}

fn require_valid_curve(p: &Problem) -> Result<(), Failure> {
    let r = validate_curve_type(&p.curve);
    if r.passed() {
        Ok(())
    } else {
        Err(check_failure(&r, json!({"report": report_json(&r)})))
    }
}

fn dispatch(command: Command, p: Problem, smooth_override: Option<&[String]>) -> Result<Value, Failure> {
    match command {
        Command::Validate => cmd_validate(&p),
        Command::Universal => cmd_universal(&p),
        Command::Classify => cmd_classify(&p),
        Command::Pullback => cmd_pullback(&p),
        Command::Pushout => cmd_pushout(&p),
        Command::Facecheck => cmd_facecheck(&p, smooth_override),
        Command::Selftest => Err(Failure::Missing("selftest takes no problem file".into())),
    }
}

fn cmd_validate(p: &Problem) -> Result<Value, Failure> {
    let mut r = validate_curve_type(&p.curve);
    if r.passed() {
        if let Some(s) = &p.extension {
            r.extend(validate_extension(&p.curve, s));
        }
    }
    if let Some(d) = &p.degree_one {
        r.extend(validate_curve_type(&d.target));
        r.extend(validate_degree_one(d));
    }
    let v = json!({"report": report_json(&r)});
    if r.passed() {
        Ok(v)
    } else {
        Err(check_failure(&r, v))
    }
}

fn cmd_universal(p: &Problem) -> Result<Value, Failure> {
    require_valid_curve(p)?;
    let u = build_pu(&p.curve)?;
    let c = &p.curve;
    let r = embedding_report(&u);
    let mut rho = serde_json::Map::new();
    for (e, m) in u.rho.iter().enumerate() {
        rho.insert(c.edges[e].id.clone(), map_json(m));
    }
    let mut positions = serde_json::Map::new();
    for (v, m) in u.positions.iter().enumerate() {
        positions.insert(c.vertices[v].id.clone(), map_json(m));
    }
    let v = json!({
        "pu": poly_json(&u.pu),
        "basepoint": point_json(&u.basepoint),
        "rho": rho,
        "positions": positions,
        "cutting_equations": u.cutting_equations().iter().map(|c| c.describe("=")).collect::<Vec<_>>(),
        "cutting_inequalities": u.cutting_inequalities().iter().map(|c| c.describe(">=")).collect::<Vec<_>>(),
        "report": report_json(&r),
    });
    if r.passed() {
        Ok(v)
    } else {
        Err(check_failure(&r, v))
    }
}

/// The extension named in the file, or the one generated by its pullback
/// request from the universal extension.
fn given_or_pulled_back(p: &Problem) -> Result<ExtendedStructure, Failure> {
    if let Some(s) = &p.extension {
        return Ok(s.clone());
    }
    let pb = p
        .params
        .pullback
        .as_ref()
        .ok_or_else(|| Failure::Missing("an extension or a pullback request is required".into()))?;
    let u = build_pu(&p.curve)?;
    Ok(pullback_extension(&u.structure, &pb.map, &pb.base, &pb.basepoint)?)
}

fn cmd_classify(p: &Problem) -> Result<Value, Failure> {
    require_valid_curve(p)?;
    let s = given_or_pulled_back(p)?;
    let u = build_pu(&p.curve)?;
    let cm = classify(&u, &s)?;
    let v = json!({
        "map": map_json(&cm.map),
        "pu": poly_json(&u.pu),
        "certificate": report_json(&cm.certificate),
    });
    Ok(v)
}

fn cmd_pullback(p: &Problem) -> Result<Value, Failure> {
    require_valid_curve(p)?;
    let pb = p
        .params
        .pullback
        .as_ref()
        .ok_or_else(|| Failure::Missing("params.pullback is required".into()))?;
    let source = match &p.extension {
        Some(s) => s.clone(),
        None => build_pu(&p.curve)?.structure,
    };
    let s = pullback_extension(&source, &pb.map, &pb.base, &pb.basepoint)?;
    let r = validate_extension(&p.curve, &s);
    let v = json!({"extension": extension_json(&p.curve, &s), "report": report_json(&r)});
    if r.passed() {
        Ok(v)
    } else {
        Err(check_failure(&r, v))
    }
}

fn cmd_pushout(p: &Problem) -> Result<Value, Failure> {
    require_valid_curve(p)?;
    let d = p.degree_one.as_ref().ok_or_else(|| Failure::Missing("a degree_one section is required".into()))?;
    let mut r = validate_curve_type(&d.target);
    r.extend(validate_degree_one(d));
    if !r.passed() {
        return Err(check_failure(&r, json!({"report": report_json(&r)})));
    }
    let p0 = match &p.extension {
        Some(s) => s.clone(),
        None => build_pu(&p.curve)?.structure,
    };
    let res = pushout_extension(&p0, d)?;
    let r = pushout_report(&p0, d, &res);
    let (s, t) = (&d.source, &d.target);
    let eta = |maps: &[crate::kernel::AffineMap], ids: Vec<&String>, imgs: &[crate::pushout::TargetObject]| {
        let mut m = serde_json::Map::new();
        for ((mp, id), o) in maps.iter().zip(ids).zip(imgs) {
            m.insert(id.clone(), json!({"image": target_object_json(t, *o), "map": map_json(mp)}));
        }
        Value::Object(m)
    };
    let v = json!({
        "extension": extension_json(t, &res.structure),
        "eta": {
            "vertices": eta(&res.eta_vertices, s.vertices.iter().map(|x| &x.id).collect(), &res.vertex_images),
            "edges": eta(&res.eta_edges, s.edges.iter().map(|x| &x.id).collect(), &res.edge_images),
            "legs": eta(&res.eta_legs, s.legs.iter().map(|x| &x.id).collect(), &res.leg_images),
        },
        "report": report_json(&r),
    });
    if r.passed() {
        Ok(v)
    } else {
        Err(check_failure(&r, v))
    }
}

fn cmd_facecheck(p: &Problem, smooth_override: Option<&[String]>) -> Result<Value, Failure> {
    require_valid_curve(p)?;
    let c = &p.curve;
    let smooth: Vec<usize> = match smooth_override {
        // an empty list on the command line arrives as one empty id
        Some(ids) => ids
            .iter()
            .filter(|id| !id.is_empty())
            .map(|id| c.edge_index(id).ok_or_else(|| Failure::Op(Error::UnknownId(format!("edge {id:?}")))))
            .collect::<Result<_, _>>()?,
        None => p.params.smooth_edges.clone().unwrap_or_default(),
    };
    let u = build_pu(c)?;
    let (fr, r) = check_open_universality(&u, &smooth, &p.params.extra_monodromy)?;
    let cc = &fr.contracted_curve;
    let v = json!({
        "smoothed_edges": fr.smoothed_edges.iter().map(|&e| &c.edges[e].id).collect::<Vec<_>>(),
        "face": poly_json(&fr.face),
        "witness_point": point_json(&fr.witness_point),
        "contracted_curve": {"strata": strata_json(cc), "curve": curve_json(cc)},
        "embedding": map_json(&fr.embedding),
        "report": report_json(&r),
    });
    if r.passed() {
        Ok(v)
    } else {
        Err(check_failure(&r, v))
    }
}
