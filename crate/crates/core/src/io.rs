//! JSON problem and solution files.
//!
//! Rationals are written as `"n/d"` strings, integers as JSON numbers when they
//! fit in an `i64` and as decimal strings otherwise. Objects are emitted with
//! sorted keys so equal values always serialize to equal bytes.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::curve::{CurveType, Edge, Flag, Leg, TargetStratum, Vertex};
use crate::error::{Error, Result};
use crate::extension::{EdgeData, ExtendedStructure, LegData, VertexData};
use crate::kernel::{format_rat, parse_rat, AffineMap, Constraint, Int, Polyhedron, Rat, Vrep};
use crate::pushout::{DegreeOneMap, LegChain, TargetObject};
use crate::report::Report;

pub const FORMAT_VERSION: &str = "tropext/1";

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawInt {
    Num(i64),
    Str(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawRat {
    Num(i64),
    Str(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    normal: Vec<RawInt>,
    offset: RawRat,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    dim: usize,
    #[serde(default)]
    inequalities: Vec<RawConstraint>,
    #[serde(default)]
    equalities: Vec<RawConstraint>,
    /// Ignored on input; solution files carry it for reading convenience.
    #[serde(default)]
    #[allow(dead_code)]
    vrep: Option<Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    source_dim: usize,
    #[serde(default)]
    linear: Vec<Vec<RawInt>>,
    translate: Vec<RawRat>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: String,
    stratum: String,
    position: Vec<RawRat>,
    #[serde(default)]
    monodromy: Vec<RawMap>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlag {
    vertex: String,
    germ: RawMap,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    id: String,
    length: RawRat,
    stratum: String,
    trajectory: RawMap,
    flags: [RawFlag; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLeg {
    id: String,
    vertex: String,
    stratum: String,
    trajectory: RawMap,
    germ: RawMap,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<RawEdge>,
    #[serde(default)]
    legs: Vec<RawLeg>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertexData {
    id: String,
    poly: RawPoly,
    iso_to_base: RawMap,
    to_target: RawMap,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdgeData {
    id: String,
    rho: RawMap,
    poly: RawPoly,
    flag_maps: [RawMap; 2],
    to_target: RawMap,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLegData {
    id: String,
    poly: RawPoly,
    structure: RawMap,
    to_target: RawMap,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    base: RawPoly,
    basepoint: Vec<RawRat>,
    vertices: Vec<RawVertexData>,
    #[serde(default)]
    edges: Vec<RawEdgeData>,
    #[serde(default)]
    legs: Vec<RawLegData>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum RawTarget {
    Vertex(String),
    Edge(String),
    Leg(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLegChain {
    #[serde(default)]
    edges: Vec<String>,
    leg: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDegreeOne {
    target: RawCurve,
    vertex_assignment: BTreeMap<String, RawTarget>,
    #[serde(default)]
    edge_chains: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    leg_chains: BTreeMap<String, RawLegChain>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPullback {
    base: RawPoly,
    basepoint: Vec<RawRat>,
    map: RawMap,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(default)]
    smooth_edges: Option<Vec<String>>,
    #[serde(default)]
    pullback: Option<RawPullback>,
    #[serde(default)]
    extra_monodromy: BTreeMap<String, Vec<RawMap>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    version: String,
    strata: BTreeMap<String, RawPoly>,
    curve: RawCurve,
    #[serde(default)]
    extension: Option<RawExtension>,
    #[serde(default)]
    degree_one: Option<RawDegreeOne>,
    #[serde(default)]
    params: Option<RawParams>,
}

/// Base, basepoint and map for a pullback request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackRequest {
    pub base: Polyhedron,
    pub basepoint: Vec<Rat>,
    pub map: AffineMap,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    /// Edge indices of the curve.
    pub smooth_edges: Option<Vec<usize>>,
    pub pullback: Option<PullbackRequest>,
    /// Keyed by vertex id.
    pub extra_monodromy: BTreeMap<String, Vec<AffineMap>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub curve: CurveType,
    pub extension: Option<ExtendedStructure>,
    pub degree_one: Option<DegreeOneMap>,
    pub params: Params,
}

fn int_of(r: &RawInt) -> Result<Int> {
    match r {
        RawInt::Num(n) => Ok(Int::from(*n)),
        RawInt::Str(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
    }
}

fn rat_of(r: &RawRat) -> Result<Rat> {
    match r {
        RawRat::Num(n) => Ok(Rat::from_integer(Int::from(*n))),
        RawRat::Str(s) => parse_rat(s),
    }
}

fn rats_of(v: &[RawRat]) -> Result<Vec<Rat>> {
    v.iter().map(rat_of).collect()
}

fn constraint_of(c: &RawConstraint, dim: usize) -> Result<Constraint> {
    if c.normal.len() != dim {
        return Err(Error::Parse(format!("constraint normal has length {}, expected {dim}", c.normal.len())));
    }
    Ok(Constraint::new(c.normal.iter().map(int_of).collect::<Result<_>>()?, rat_of(&c.offset)?))
}

fn poly_of(p: &RawPoly) -> Result<Polyhedron> {
    let ineqs = p.inequalities.iter().map(|c| constraint_of(c, p.dim)).collect::<Result<_>>()?;
    let eqs = p.equalities.iter().map(|c| constraint_of(c, p.dim)).collect::<Result<_>>()?;
    Polyhedron::new(p.dim, ineqs, eqs).map_err(|e| Error::Parse(e.to_string()))
}

fn map_of(m: &RawMap) -> Result<AffineMap> {
    let linear = m
        .linear
        .iter()
        .map(|row| row.iter().map(int_of).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let linear = if linear.is_empty() { vec![Vec::new(); m.translate.len()] } else { linear };
    if linear.iter().any(|r| r.len() != m.source_dim) && m.source_dim > 0 {
        return Err(Error::Parse(format!("map rows must have length {}", m.source_dim)));
    }
    let linear = if m.source_dim == 0 { vec![Vec::new(); m.translate.len()] } else { linear };
    AffineMap::new(m.source_dim, linear, rats_of(&m.translate)?).map_err(|e| Error::Parse(e.to_string()))
}

fn lookup(ids: &[String], id: &str, what: &str) -> Result<usize> {
    ids.iter().position(|x| x == id).ok_or_else(|| Error::UnknownId(format!("{what} {id:?}")))
}

fn curve_of(strata: &[TargetStratum], raw: &RawCurve) -> Result<CurveType> {
    let sids: Vec<String> = strata.iter().map(|s| s.id.clone()).collect();
    let vids: Vec<String> = raw.vertices.iter().map(|v| v.id.clone()).collect();
    for ids in [
        vids.clone(),
        raw.edges.iter().map(|e| e.id.clone()).collect(),
        raw.legs.iter().map(|y| y.id.clone()).collect(),
    ] {
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != ids.len() {
            return Err(Error::Parse("duplicate identifier in curve".into()));
        }
    }
    let vertices = raw
        .vertices
        .iter()
        .map(|v| {
            Ok(Vertex {
                id: v.id.clone(),
                stratum: lookup(&sids, &v.stratum, "stratum")?,
                position: rats_of(&v.position)?,
                monodromy: v.monodromy.iter().map(map_of).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    let edges = raw
        .edges
        .iter()
        .map(|e| {
            let flag = |f: &RawFlag| -> Result<Flag> {
                Ok(Flag { vertex: lookup(&vids, &f.vertex, "vertex")?, germ: map_of(&f.germ)? })
            };
            Ok(Edge {
                id: e.id.clone(),
                length: rat_of(&e.length)?,
                stratum: lookup(&sids, &e.stratum, "stratum")?,
                trajectory: map_of(&e.trajectory)?,
                flags: [flag(&e.flags[0])?, flag(&e.flags[1])?],
            })
        })
        .collect::<Result<_>>()?;
    let legs = raw
        .legs
        .iter()
        .map(|y| {
            Ok(Leg {
                id: y.id.clone(),
                vertex: lookup(&vids, &y.vertex, "vertex")?,
                stratum: lookup(&sids, &y.stratum, "stratum")?,
                trajectory: map_of(&y.trajectory)?,
                germ: map_of(&y.germ)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CurveType { strata: strata.to_vec(), vertices, edges, legs })
}

fn ordered<'a, T>(items: &'a [T], id: impl Fn(&T) -> &str, want: Vec<&str>, what: &str) -> Result<Vec<&'a T>> {
    if items.len() != want.len() {
        return Err(Error::Parse(format!("extension lists {} {what} data, curve has {}", items.len(), want.len())));
    }
    want.into_iter()
        .map(|w| items.iter().find(|x| id(x) == w).ok_or_else(|| Error::UnknownId(format!("{what} {w:?} in extension"))))
        .collect()
}

fn extension_of(c: &CurveType, raw: &RawExtension) -> Result<ExtendedStructure> {
    let vertices = ordered(&raw.vertices, |x| &x.id, c.vertices.iter().map(|v| v.id.as_str()).collect(), "vertex")?
        .into_iter()
        .map(|v| Ok(VertexData { poly: poly_of(&v.poly)?, iso_to_base: map_of(&v.iso_to_base)?, to_target: map_of(&v.to_target)? }))
        .collect::<Result<_>>()?;
    let edges = ordered(&raw.edges, |x| &x.id, c.edges.iter().map(|e| e.id.as_str()).collect(), "edge")?
        .into_iter()
        .map(|e| {
            Ok(EdgeData {
                rho: map_of(&e.rho)?,
                poly: poly_of(&e.poly)?,
                flag_maps: [map_of(&e.flag_maps[0])?, map_of(&e.flag_maps[1])?],
                to_target: map_of(&e.to_target)?,
            })
        })
        .collect::<Result<_>>()?;
    let legs = ordered(&raw.legs, |x| &x.id, c.legs.iter().map(|y| y.id.as_str()).collect(), "leg")?
        .into_iter()
        .map(|y| Ok(LegData { poly: poly_of(&y.poly)?, structure: map_of(&y.structure)?, to_target: map_of(&y.to_target)? }))
        .collect::<Result<_>>()?;
    Ok(ExtendedStructure { base: poly_of(&raw.base)?, basepoint: rats_of(&raw.basepoint)?, vertices, edges, legs })
}

fn degree_one_of(source: &CurveType, raw: &RawDegreeOne) -> Result<DegreeOneMap> {
    let target = curve_of(&source.strata, &raw.target)?;
    let tv: Vec<String> = target.vertices.iter().map(|v| v.id.clone()).collect();
    let te: Vec<String> = target.edges.iter().map(|e| e.id.clone()).collect();
    let ty: Vec<String> = target.legs.iter().map(|y| y.id.clone()).collect();
    let se: Vec<String> = source.edges.iter().map(|e| e.id.clone()).collect();
    let sy: Vec<String> = source.legs.iter().map(|y| y.id.clone()).collect();
    let vertex_assignment = source
        .vertices
        .iter()
        .map(|v| {
            let t = raw
                .vertex_assignment
                .get(&v.id)
                .ok_or_else(|| Error::Parse(format!("no assignment for source vertex {:?}", v.id)))?;
            Ok(match t {
                RawTarget::Vertex(x) => TargetObject::Vertex(lookup(&tv, x, "target vertex")?),
                RawTarget::Edge(x) => TargetObject::Edge(lookup(&te, x, "target edge")?),
                RawTarget::Leg(x) => TargetObject::Leg(lookup(&ty, x, "target leg")?),
            })
        })
        .collect::<Result<_>>()?;
    if raw.vertex_assignment.len() != source.vertices.len() {
        return Err(Error::Parse("vertex assignment names unknown source vertices".into()));
    }
    let edge_chains = te
        .iter()
        .map(|e| {
            raw.edge_chains
                .get(e)
                .ok_or_else(|| Error::Parse(format!("no chain for target edge {e:?}")))?
                .iter()
                .map(|x| lookup(&se, x, "source edge"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let leg_chains = ty
        .iter()
        .map(|y| {
            let lc = raw.leg_chains.get(y).ok_or_else(|| Error::Parse(format!("no chain for target leg {y:?}")))?;
            Ok(LegChain {
                edges: lc.edges.iter().map(|x| lookup(&se, x, "source edge")).collect::<Result<_>>()?,
                leg: lookup(&sy, &lc.leg, "source leg")?,
            })
        })
        .collect::<Result<_>>()?;
    if raw.edge_chains.len() != te.len() || raw.leg_chains.len() != ty.len() {
        return Err(Error::Parse("chains name unknown target objects".into()));
    }
    Ok(DegreeOneMap { source: source.clone(), target, vertex_assignment, edge_chains, leg_chains })
}

/// Parses a polyhedron written as `{dim, inequalities, equalities}`.
pub fn parse_polyhedron(text: &str) -> Result<Polyhedron> {
    let raw: RawPoly = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    poly_of(&raw)
}

/// Parses a problem file. Cross-reference and syntax failures are `Parse` or
/// `UnknownId` errors; semantic validity is left to the validators.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported version {:?}", raw.version)));
    }
    let strata: Vec<TargetStratum> = raw
        .strata
        .iter()
        .map(|(id, p)| Ok(TargetStratum { id: id.clone(), polytope: poly_of(p)? }))
        .collect::<Result<_>>()?;
    let curve = curve_of(&strata, &raw.curve)?;
    let extension = raw.extension.as_ref().map(|e| extension_of(&curve, e)).transpose()?;
    let degree_one = raw.degree_one.as_ref().map(|d| degree_one_of(&curve, d)).transpose()?;
    let rp = raw.params.unwrap_or_default();
    let eids: Vec<String> = curve.edges.iter().map(|e| e.id.clone()).collect();
    let smooth_edges = rp
        .smooth_edges
        .map(|v| v.iter().map(|x| lookup(&eids, x, "edge")).collect::<Result<Vec<_>>>())
        .transpose()?;
    let pullback = rp
        .pullback
        .map(|p| {
            Ok::<_, Error>(PullbackRequest { base: poly_of(&p.base)?, basepoint: rats_of(&p.basepoint)?, map: map_of(&p.map)? })
        })
        .transpose()?;
    let mut extra_monodromy = BTreeMap::new();
    for (k, v) in &rp.extra_monodromy {
        if curve.vertex_index(k).is_none() {
            return Err(Error::UnknownId(format!("vertex {k:?}")));
        }
        extra_monodromy.insert(k.clone(), v.iter().map(map_of).collect::<Result<_>>()?);
    }
    Ok(Problem { curve, extension, degree_one, params: Params { smooth_edges, pullback, extra_monodromy } })
}

pub fn int_json(n: &Int) -> Value {
    match i64::try_from(n) {
        Ok(x) => json!(x),
        Err(_) => json!(n.to_string()),
    }
}

pub fn rat_json(r: &Rat) -> Value {
    json!(format_rat(r))
}

pub fn point_json(x: &[Rat]) -> Value {
    Value::Array(x.iter().map(rat_json).collect())
}

fn int_vec_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn constraint_json(c: &Constraint) -> Value {
    json!({"normal": int_vec_json(&c.normal), "offset": rat_json(&c.offset)})
}

/// The H-representation as stored.
pub fn hrep_json(p: &Polyhedron) -> Value {
    json!({
        "dim": p.ambient_dim(),
        "inequalities": p.inequalities().iter().map(constraint_json).collect::<Vec<_>>(),
        "equalities": p.equalities().iter().map(constraint_json).collect::<Vec<_>>(),
    })
}

pub fn vrep_json(v: &Vrep) -> Value {
    json!({
        "vertices": v.vertices.iter().map(|x| point_json(x)).collect::<Vec<_>>(),
        "rays": v.rays.iter().map(|x| int_vec_json(x)).collect::<Vec<_>>(),
        "lines": v.lines.iter().map(|x| int_vec_json(x)).collect::<Vec<_>>(),
    })
}

/// Canonical H-representation together with the V-representation.
pub fn poly_json(p: &Polyhedron) -> Value {
    let c = p.canonical();
    let mut v = hrep_json(&c);
    v["vrep"] = vrep_json(c.vrep());
    v["dimension"] = json!(c.dimension());
    v
}

pub fn map_json(m: &AffineMap) -> Value {
    json!({
        "source_dim": m.source_dim(),
        "linear": m.linear().iter().map(|r| int_vec_json(r)).collect::<Vec<_>>(),
        "translate": point_json(m.translate()),
    })
}

pub fn report_json(r: &Report) -> Value {
    json!({
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "subject": c.subject,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    })
}

pub fn curve_json(c: &CurveType) -> Value {
    let flag = |f: &Flag| json!({"vertex": c.vertices[f.vertex].id, "germ": map_json(&f.germ)});
    json!({
        "vertices": c.vertices.iter().map(|v| json!({
            "id": v.id,
            "stratum": c.strata[v.stratum].id,
            "position": point_json(&v.position),
            "monodromy": v.monodromy.iter().map(map_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "edges": c.edges.iter().map(|e| json!({
            "id": e.id,
            "length": rat_json(&e.length),
            "stratum": c.strata[e.stratum].id,
            "trajectory": map_json(&e.trajectory),
            "flags": [flag(&e.flags[0]), flag(&e.flags[1])],
        })).collect::<Vec<_>>(),
        "legs": c.legs.iter().map(|y| json!({
            "id": y.id,
            "vertex": c.vertices[y.vertex].id,
            "stratum": c.strata[y.stratum].id,
            "trajectory": map_json(&y.trajectory),
            "germ": map_json(&y.germ),
        })).collect::<Vec<_>>(),
    })
}

pub fn strata_json(c: &CurveType) -> Value {
    let mut m = serde_json::Map::new();
    for s in &c.strata {
        m.insert(s.id.clone(), hrep_json(&s.polytope));
    }
    Value::Object(m)
}

/// Polyhedra as stored, so that a parsed file writes back unchanged.
pub fn extension_json(c: &CurveType, s: &ExtendedStructure) -> Value {
    json!({
        "base": hrep_json(&s.base),
        "basepoint": point_json(&s.basepoint),
        "vertices": s.vertices.iter().zip(&c.vertices).map(|(d, v)| json!({
            "id": v.id,
            "poly": hrep_json(&d.poly),
            "iso_to_base": map_json(&d.iso_to_base),
            "to_target": map_json(&d.to_target),
        })).collect::<Vec<_>>(),
        "edges": s.edges.iter().zip(&c.edges).map(|(d, e)| json!({
            "id": e.id,
            "rho": map_json(&d.rho),
            "poly": hrep_json(&d.poly),
            "flag_maps": [map_json(&d.flag_maps[0]), map_json(&d.flag_maps[1])],
            "to_target": map_json(&d.to_target),
        })).collect::<Vec<_>>(),
        "legs": s.legs.iter().zip(&c.legs).map(|(d, y)| json!({
            "id": y.id,
            "poly": hrep_json(&d.poly),
            "structure": map_json(&d.structure),
            "to_target": map_json(&d.to_target),
        })).collect::<Vec<_>>(),
    })
}

pub fn target_object_json(c: &CurveType, t: TargetObject) -> Value {
    match t {
        TargetObject::Vertex(x) => json!({"vertex": c.vertices[x].id}),
        TargetObject::Edge(x) => json!({"edge": c.edges[x].id}),
        TargetObject::Leg(x) => json!({"leg": c.legs[x].id}),
    }
}

pub fn degree_one_json(d: &DegreeOneMap) -> Value {
    let (s, t) = (&d.source, &d.target);
    let mut va = serde_json::Map::new();
    for (v, o) in d.vertex_assignment.iter().enumerate() {
        va.insert(s.vertices[v].id.clone(), target_object_json(t, *o));
    }
    let mut ec = serde_json::Map::new();
    for (e, ch) in d.edge_chains.iter().enumerate() {
        ec.insert(t.edges[e].id.clone(), json!(ch.iter().map(|&x| &s.edges[x].id).collect::<Vec<_>>()));
    }
    let mut lc = serde_json::Map::new();
    for (y, ch) in d.leg_chains.iter().enumerate() {
        lc.insert(
            t.legs[y].id.clone(),
            json!({"edges": ch.edges.iter().map(|&x| &s.edges[x].id).collect::<Vec<_>>(), "leg": s.legs[ch.leg].id}),
        );
    }
    json!({"target": curve_json(t), "vertex_assignment": va, "edge_chains": ec, "leg_chains": lc})
}

/// Writes a problem back out. `parse_problem(write_problem(p)) == p`.
pub fn problem_json(p: &Problem) -> Value {
    let c = &p.curve;
    let mut out = json!({
        "version": FORMAT_VERSION,
        "strata": strata_json(c),
        "curve": curve_json(c),
    });
    if let Some(s) = &p.extension {
        out["extension"] = extension_json(c, s);
    }
    if let Some(d) = &p.degree_one {
        out["degree_one"] = degree_one_json(d);
    }
    let pr = &p.params;
    if pr != &Params::default() {
        let mut params = serde_json::Map::new();
        if let Some(s) = &pr.smooth_edges {
            params.insert("smooth_edges".into(), json!(s.iter().map(|&e| &c.edges[e].id).collect::<Vec<_>>()));
        }
        if let Some(pb) = &pr.pullback {
            params.insert(
                "pullback".into(),
                json!({"base": hrep_json(&pb.base), "basepoint": point_json(&pb.basepoint), "map": map_json(&pb.map)}),
            );
        }
        if !pr.extra_monodromy.is_empty() {
            let m: serde_json::Map<String, Value> = pr
                .extra_monodromy
                .iter()
                .map(|(k, v)| (k.clone(), json!(v.iter().map(map_json).collect::<Vec<_>>())))
                .collect();
            params.insert("extra_monodromy".into(), Value::Object(m));
        }
        out["params"] = Value::Object(params);
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}
