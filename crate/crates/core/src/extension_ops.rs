//! Pullback along affine maps, classification against the universal
//! extension, and restriction to faces where edges are smoothed.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::curve::{validate_curve_type, CurveType, TargetStratum};
use crate::error::{dims, Error, Result};
use crate::extension::{edge_fiber_embed, leg_fiber_embed, ExtendedStructure};
use crate::kernel::{format_point, image, is_iso_onto_face, AffineMap, Constraint, Polyhedron, Rat};
use crate::report::Report;
use crate::universal::{build_pu, UniversalExtension};

/// The extension `m*s` over `new_base`, in standard form (vertex polytopes
/// equal to the base).
pub fn pullback_extension(
    s: &ExtendedStructure,
    m: &AffineMap,
    new_base: &Polyhedron,
    new_basepoint: &[Rat],
) -> Result<ExtendedStructure> {
    let d = s.base_dim();
    if m.target_dim() != d {
        return Err(dims("pullback map target", d, m.target_dim()));
    }
    if m.source_dim() != new_base.ambient_dim() {
        return Err(dims("pullback map source", new_base.ambient_dim(), m.source_dim()));
    }
    if new_basepoint.len() != new_base.ambient_dim() {
        return Err(dims("new basepoint", new_base.ambient_dim(), new_basepoint.len()));
    }
    let im = image(new_base, m)?;
    if !s.base.contains_poly(&im) {
        return Err(Error::NotContained(format!("image {im:?} leaves the base")));
    }
    let hit = m.apply(new_basepoint);
    if hit != s.basepoint {
        return Err(Error::BasepointMismatch(format!(
            "m(new basepoint) = {} but the basepoint is {}",
            format_point(&hit),
            format_point(&s.basepoint)
        )));
    }
    let vertex_targets = (0..s.vertices.len())
        .map(|v| s.vertex_value_on_base(v)?.compose(m))
        .collect::<Result<Vec<_>>>()?;
    let rhos = s.edges.iter().map(|e| e.rho.compose(m)).collect::<Result<Vec<_>>>()?;
    let m2 = AffineMap::product(&[m, &AffineMap::identity(2)]);
    let m1 = AffineMap::product(&[m, &AffineMap::identity(1)]);
    let edge_targets = s.edges.iter().map(|e| e.to_target.compose(&m2)).collect::<Result<Vec<_>>>()?;
    let leg_targets = s.legs.iter().map(|y| y.to_target.compose(&m1)).collect::<Result<Vec<_>>>()?;
    ExtendedStructure::standard(
        new_base.clone(),
        new_basepoint.to_vec(),
        vertex_targets,
        rhos,
        edge_targets,
        leg_targets,
    )
}

/// The map into `P_u` classifying an extension, with the object-by-object
/// comparison against the pullback of the universal structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyingMap {
    pub map: AffineMap,
    pub certificate: Report,
}

fn same_map(r: &mut Report, name: &str, subject: String, a: Result<AffineMap>, b: Result<AffineMap>, on: &Polyhedron) {
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let ok = a.agrees_on(&b, on);
            r.record(name, subject, ok, format!("{a:?} differs from {b:?}"));
        }
        (Err(e), _) | (_, Err(e)) => r.record(name, subject, false, e.to_string()),
    }
}

/// Compares an extension with the pullback of `u`'s structure along `m`.
pub fn pullback_certificate(u: &UniversalExtension, s: &ExtendedStructure, m: &AffineMap) -> Report {
    let c = &u.curve;
    let mut r = Report::new();
    let pulled = match pullback_extension(&u.structure, m, &s.base, &s.basepoint) {
        Ok(p) => p,
        Err(e) => {
            r.record("pullback_exists", "map", false, e.to_string());
            return r;
        }
    };
    for (v, vd) in s.vertices.iter().enumerate() {
        let subject = format!("vertex {}", c.vertices[v].id);
        same_map(
            &mut r,
            "vertex_value",
            subject,
            Ok(vd.to_target.clone()),
            pulled.vertices[v].to_target.compose(&vd.iso_to_base),
            &vd.poly,
        );
    }
    for (e, ed) in s.edges.iter().enumerate() {
        let subject = format!("edge {}", c.edges[e].id);
        let pe = &pulled.edges[e];
        same_map(&mut r, "edge_length", subject.clone(), Ok(ed.rho.clone()), Ok(pe.rho.clone()), &s.base);
        r.record("node_polytope", subject.clone(), ed.poly.same_set(&pe.poly), "node polytopes differ");
        same_map(&mut r, "node_value", subject.clone(), Ok(ed.to_target.clone()), Ok(pe.to_target.clone()), &ed.poly);
        for k in 0..2 {
            let v = c.edges[e].flags[k].vertex;
            let vd = &s.vertices[v];
            same_map(
                &mut r,
                "flag_structure_map",
                format!("{subject} flag {k}"),
                Ok(ed.flag_maps[k].clone()),
                pe.flag_maps[k].compose(&vd.iso_to_base),
                &vd.poly,
            );
        }
    }
    for (y, ld) in s.legs.iter().enumerate() {
        let subject = format!("leg {}", c.legs[y].id);
        let pl = &pulled.legs[y];
        let vd = &s.vertices[c.legs[y].vertex];
        r.record("leg_polytope", subject.clone(), ld.poly.same_set(&pl.poly), "leg polytopes differ");
        same_map(&mut r, "leg_value", subject.clone(), Ok(ld.to_target.clone()), Ok(pl.to_target.clone()), &ld.poly);
        same_map(
            &mut r,
            "leg_structure_map",
            subject,
            Ok(ld.structure.clone()),
            pl.structure.compose(&vd.iso_to_base),
            &vd.poly,
        );
    }
    r
}

/// The unique map `P'(*) → P_u` under which `s` is the pullback of the
/// universal structure. Its vertex blocks are the values of `s` at the
/// vertices and its edge coordinates are the edge lengths of `s`.
pub fn classify(u: &UniversalExtension, s: &ExtendedStructure) -> Result<ClassifyingMap> {
    let c = &u.curve;
    if s.vertices.len() != c.vertices.len() || s.edges.len() != c.edges.len() || s.legs.len() != c.legs.len() {
        return Err(Error::NotAnExtension("object counts differ from the curve".into()));
    }
    let d = s.base_dim();
    let mut rows = Vec::new();
    for v in 0..c.vertices.len() {
        rows.push(s.vertex_value_on_base(v)?);
    }
    for ed in &s.edges {
        rows.push(ed.rho.clone());
    }
    let refs: Vec<&AffineMap> = rows.iter().collect();
    let map = AffineMap::stack(d, &refs)
        .map_err(|e| Error::NotAnExtension(format!("maps do not fit together: {e}")))?;
    let hit = map.apply(&s.basepoint);
    if hit != u.basepoint {
        return Err(Error::NotAnExtension(format!(
            "basepoint goes to {} instead of {}",
            format_point(&hit),
            format_point(&u.basepoint)
        )));
    }
    let im = image(&s.base, &map)?;
    if !u.pu.contains_poly(&im) {
        return Err(Error::NotAnExtension(format!("image {im:?} leaves P_u")));
    }
    let certificate = pullback_certificate(u, s, &map);
    if let Some(f) = certificate.failures().next() {
        return Err(Error::NotAnExtension(format!("{} [{}]: {}", f.name, f.subject, f.detail)));
    }
    Ok(ClassifyingMap { map, certificate })
}

/// The face of `P_u` where the edges of `S` have length zero, with the
/// curve obtained by contracting `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceRestriction {
    pub smoothed_edges: Vec<usize>,
    pub face: Polyhedron,
    pub contracted_curve: CurveType,
    pub witness_point: Vec<Rat>,
    /// Old vertex index → vertex of the contracted curve.
    pub vertex_map: Vec<usize>,
    /// Old edge index → edge of the contracted curve, `None` when smoothed.
    pub edge_map: Vec<Option<usize>>,
    /// The map from the contracted curve's `Q` into the original `Q`.
    pub embedding: AffineMap,
}

/// Connected components of the graph `(vertices, S)`.
struct Components {
    of: Vec<usize>,
    members: Vec<Vec<usize>>,
    cycle_edges: Vec<Vec<usize>>,
}

fn components(c: &CurveType, s: &[usize]) -> Components {
    let n = c.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut closing = Vec::new();
    for &e in s {
        let (a, b) = (c.edges[e].flags[0].vertex, c.edges[e].flags[1].vertex);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            closing.push(e);
        } else {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    }
    let mut of = vec![0; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut root_index: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        let k = *root_index.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        of[v] = k;
        members[k].push(v);
    }
    let mut cycle_edges = vec![Vec::new(); members.len()];
    for e in closing {
        cycle_edges[of[c.edges[e].flags[0].vertex]].push(e);
    }
    Components { of, members, cycle_edges }
}

fn germ_inverse(c: &CurveType, germ: &AffineMap, v: usize, stratum: &Polyhedron) -> Result<AffineMap> {
    is_iso_onto_face(germ, c.vertex_polytope(v), stratum)
        .map(|cert| cert.inverse_on_face)
        .ok_or_else(|| Error::InvalidCurve(format!("germ at vertex {} is not an isomorphism onto a face", c.vertices[v].id)))
}

/// For every vertex `i`, the transport from its component representative
/// into `i`'s stratum and back, composed along a spanning tree of `S`.
fn transports(c: &CurveType, comps: &Components, s: &[usize]) -> Result<Vec<(AffineMap, AffineMap)>> {
    let n = c.vertices.len();
    let mut out: Vec<Option<(AffineMap, AffineMap)>> = vec![None; n];
    for members in &comps.members {
        let r = members[0];
        let d = c.vertex_dim(r);
        out[r] = Some((AffineMap::identity(d), AffineMap::identity(d)));
        let mut queue = VecDeque::from([r]);
        while let Some(p) = queue.pop_front() {
            for &e in s {
                let edge = &c.edges[e];
                for k in 0..2 {
                    let (from, to) = (edge.flags[k].vertex, edge.flags[1 - k].vertex);
                    if from != p || out[to].is_some() {
                        continue;
                    }
                    let stratum = c.edge_polytope(e);
                    let (to_p, from_p) = out[p].clone().expect("visited");
                    let inv_to = germ_inverse(c, &edge.flags[1 - k].germ, to, stratum)?;
                    let inv_from = germ_inverse(c, &edge.flags[k].germ, from, stratum)?;
                    // r → p → edge stratum → to
                    let fwd = inv_to.compose(&edge.flags[k].germ)?.compose(&to_p)?;
                    let back = from_p.compose(&inv_from)?.compose(&edge.flags[1 - k].germ)?;
                    out[to] = Some((fwd, back));
                    queue.push_back(to);
                }
            }
        }
    }
    Ok(out.into_iter().map(|t| t.expect("every vertex reached")).collect())
}

/// Contracts the edges `smooth` at a relative-interior point of the face
/// `P_u ∩ {ρ_e = 0 : e ∈ smooth}`. Components with a cycle need extra
/// monodromy generators, keyed by the id of their lowest-index vertex.
pub fn face_restrict(
    u: &UniversalExtension,
    smooth: &[usize],
    extra_monodromy: &BTreeMap<String, Vec<AffineMap>>,
) -> Result<FaceRestriction> {
    let c = &u.curve;
    let mut s: Vec<usize> = smooth.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&bad) = s.iter().find(|&&e| e >= c.edges.len()) {
        return Err(Error::UnknownId(format!("edge index {bad}")));
    }
    let comps = components(c, &s);
    for (k, cyc) in comps.cycle_edges.iter().enumerate() {
        let rep = &c.vertices[comps.members[k][0]].id;
        if !cyc.is_empty() && !extra_monodromy.contains_key(rep) {
            return Err(Error::NewCycle(cyc.iter().map(|&e| c.edges[e].id.clone()).collect()));
        }
    }

    let q = &u.scaffold;
    let eqs: Vec<Constraint> = s
        .iter()
        .map(|&e| {
            let mut normal = vec![num_bigint::BigInt::zero(); q.dim()];
            normal[q.edge_coords[e]] = 1.into();
            Constraint::new(normal, Rat::zero())
        })
        .collect();
    let face = u.pu.with_constraints(vec![], eqs).canonical();
    let w = face.relative_interior_point().ok_or(Error::EmptyFace)?;
    let dead: Vec<String> = (0..c.edges.len())
        .filter(|e| !s.contains(e) && !w[q.edge_coords[*e]].is_positive())
        .map(|e| c.edges[e].id.clone())
        .collect();
    if !dead.is_empty() {
        return Err(Error::NoInteriorWitness(dead));
    }

    let tr = transports(c, &comps, &s)?;
    let position = |v: usize| -> Vec<Rat> { q.vertex_blocks[v].clone().map(|j| w[j].clone()).collect() };

    let mut out = CurveType { strata: c.strata.clone(), ..Default::default() };
    for (k, members) in comps.members.iter().enumerate() {
        let r = members[0];
        let old = &c.vertices[r];
        let pos = position(r);
        let (id, stratum) = if members.len() == 1 {
            (old.id.clone(), old.stratum)
        } else {
            let ids: Vec<&str> = members.iter().map(|&v| c.vertices[v].id.as_str()).collect();
            let sp = c.vertex_polytope(r).canonical();
            let tight = sp.tight_inequalities_at(&pos);
            let f = sp.face(&tight).canonical();
            let sid = format!("{}|{}", c.strata[old.stratum].id, ids.join("+"));
            out.strata.push(TargetStratum { id: sid, polytope: f });
            (ids.join("+"), out.strata.len() - 1)
        };
        let mut monodromy = Vec::new();
        for &v in members {
            let (fwd, back) = &tr[v];
            for g in &c.vertices[v].monodromy {
                monodromy.push(back.compose(g)?.compose(fwd)?);
            }
        }
        if !comps.cycle_edges[k].is_empty() || members.len() > 1 {
            if let Some(extra) = extra_monodromy.get(&old.id) {
                monodromy.extend(extra.iter().cloned());
            }
        }
        out.vertices.push(crate::curve::Vertex { id, stratum, position: pos, monodromy });
    }

    let mut edge_map = vec![None; c.edges.len()];
    for (e, edge) in c.edges.iter().enumerate() {
        if s.contains(&e) {
            continue;
        }
        let len = w[q.edge_coords[e]].clone();
        let mut flags = edge.flags.clone();
        for f in flags.iter_mut() {
            f.germ = f.germ.compose(&tr[f.vertex].0)?;
            f.vertex = comps.of[f.vertex];
        }
        let trajectory = u.structure.edges[e].to_target.compose(&edge_fiber_embed(&w, &len))?;
        edge_map[e] = Some(out.edges.len());
        out.edges.push(crate::curve::Edge { id: edge.id.clone(), length: len, stratum: edge.stratum, trajectory, flags });
    }
    for (y, leg) in c.legs.iter().enumerate() {
        let trajectory = u.structure.legs[y].to_target.compose(&leg_fiber_embed(&w))?;
        out.legs.push(crate::curve::Leg {
            id: leg.id.clone(),
            vertex: comps.of[leg.vertex],
            stratum: leg.stratum,
            trajectory,
            germ: leg.germ.compose(&tr[leg.vertex].0)?,
        });
    }

    // Q' → Q: transported vertex blocks, kept edge lengths, zero on S
    let new_q = crate::universal::build_q(&out);
    let nq = new_q.dim();
    let mut parts: Vec<AffineMap> = Vec::new();
    for v in 0..c.vertices.len() {
        parts.push(tr[v].0.compose(&new_q.vertex_projection(comps.of[v]))?);
    }
    for e in 0..c.edges.len() {
        parts.push(match edge_map[e] {
            Some(ne) => new_q.edge_projection(ne),
            None => AffineMap::constant(nq, vec![Rat::zero()]),
        });
    }
    let refs: Vec<&AffineMap> = parts.iter().collect();
    let embedding = AffineMap::stack(nq, &refs)?;

    Ok(FaceRestriction {
        smoothed_edges: s,
        face,
        contracted_curve: out,
        witness_point: w,
        vertex_map: comps.of,
        edge_map,
        embedding,
    })
}

/// Builds the universal extension of the contracted curve and checks that
/// the embedding of its `Q` carries its `P_u` isomorphically onto the face.
pub fn check_open_universality(
    u: &UniversalExtension,
    smooth: &[usize],
    extra_monodromy: &BTreeMap<String, Vec<AffineMap>>,
) -> Result<(FaceRestriction, Report)> {
    let fr = face_restrict(u, smooth, extra_monodromy)?;
    let mut r = Report::new();
    let vr = validate_curve_type(&fr.contracted_curve);
    let valid = vr.passed();
    r.record(
        "contracted_curve_valid",
        "contracted curve",
        valid,
        vr.failures().map(|f| format!("{} [{}]", f.name, f.subject)).collect::<Vec<_>>().join("; "),
    );
    if !valid {
        return Ok((fr, r));
    }
    let u2 = match build_pu(&fr.contracted_curve) {
        Ok(u2) => u2,
        Err(e) => {
            r.record("contracted_universal", "contracted curve", false, e.to_string());
            return Ok((fr, r));
        }
    };
    let hit = fr.embedding.apply(&u2.basepoint);
    r.record(
        "witness_matches",
        "embedding",
        hit == fr.witness_point,
        format!("embedding sends the contracted basepoint to {}", format_point(&hit)),
    );
    let cert = is_iso_onto_face(&fr.embedding, &u2.pu, &fr.face);
    let iso = cert.as_ref().is_some_and(|c| c.face.same_set(&fr.face));
    let detail = if !iso {
        "the contracted P_u is not isomorphic to the face".to_string()
    } else if fr.smoothed_edges.is_empty() && fr.embedding.is_identity() {
        "identity".to_string()
    } else {
        format!("isomorphism onto a {}-dimensional face", fr.face.dimension())
    };
    r.note("isomorphic_to_face", "embedding", iso, detail);
    Ok((fr, r))
}
