//! Pushing an extended structure on a refined curve down to the coarse curve
//! along a degree-one map that subdivides edges and contracts subtrees.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::curve::{edge_domain, leg_domain, CurveType};
use crate::error::{Error, Result};
use crate::extension::{
    edge_fiber_embed, leg_fiber_embed, validate_extension, ExtendedStructure,
};
use crate::kernel::{
    affine_interpolate, format_point, image, AffineMap, InterpolationConstraint, Polyhedron, Rat,
};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetObject {
    Vertex(usize),
    Edge(usize),
    Leg(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegChain {
    pub edges: Vec<usize>,
    pub leg: usize,
}

/// A degree-one map from a refined curve `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeOneMap {
    pub source: CurveType,
    pub target: CurveType,
    pub vertex_assignment: Vec<TargetObject>,
    /// Per target edge, the source edges covering it from flag 0 to flag 1.
    pub edge_chains: Vec<Vec<usize>>,
    /// Per target leg, the source edges from the vertex outwards, then the leg.
    pub leg_chains: Vec<LegChain>,
}

/// Where a source object goes and at which position along a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceImage {
    pub object: TargetObject,
    /// Indices (into the chain) of the chain edges that precede this object.
    pub before: Vec<usize>,
    /// For chain edges and chain legs, the chain position.
    pub chain_index: Option<usize>,
}

impl DegreeOneMap {
    /// The identity of a curve.
    pub fn identity(c: &CurveType) -> Self {
        DegreeOneMap {
            source: c.clone(),
            target: c.clone(),
            vertex_assignment: (0..c.vertices.len()).map(TargetObject::Vertex).collect(),
            edge_chains: (0..c.edges.len()).map(|e| vec![e]).collect(),
            leg_chains: (0..c.legs.len()).map(|y| LegChain { edges: vec![], leg: y }).collect(),
        }
    }

    fn chain_of(&self, obj: TargetObject) -> &[usize] {
        match obj {
            TargetObject::Edge(e) => &self.edge_chains[e],
            TargetObject::Leg(y) => &self.leg_chains[y].edges,
            TargetObject::Vertex(_) => &[],
        }
    }

    /// Images of source edges: chain edges keep their chain position,
    /// others are contracted onto the image of their endpoints.
    pub fn edge_images(&self) -> Result<Vec<SourceImage>> {
        let src = &self.source;
        let mut out: Vec<Option<SourceImage>> = vec![None; src.edges.len()];
        let objs = self
            .edge_chains
            .iter()
            .enumerate()
            .map(|(e, ch)| (TargetObject::Edge(e), ch))
            .chain(self.leg_chains.iter().enumerate().map(|(y, lc)| (TargetObject::Leg(y), &lc.edges)));
        for (obj, chain) in objs {
            for (i, &se) in chain.iter().enumerate() {
                if se >= src.edges.len() {
                    return Err(Error::InvalidDegreeOne(format!("chain edge index {se} out of range")));
                }
                if out[se].is_some() {
                    return Err(Error::InvalidDegreeOne(format!("source edge {} lies on two chains", src.edges[se].id)));
                }
                out[se] = Some(SourceImage { object: obj, before: (0..i).collect(), chain_index: Some(i) });
            }
        }
        let offsets = self.vertex_images()?;
        for (se, slot) in out.iter_mut().enumerate() {
            if slot.is_none() {
                let v = src.edges[se].flags[0].vertex;
                *slot = Some(SourceImage { chain_index: None, ..offsets[v].clone() });
            }
        }
        Ok(out.into_iter().map(|s| s.expect("filled")).collect())
    }

    /// Images of source vertices together with the chain edges before them,
    /// propagated from chain vertices across contracted edges.
    pub fn vertex_images(&self) -> Result<Vec<SourceImage>> {
        let src = &self.source;
        let n = src.vertices.len();
        if self.vertex_assignment.len() != n {
            return Err(Error::InvalidDegreeOne("vertex assignment has the wrong length".into()));
        }
        let mut before: Vec<Option<Vec<usize>>> = vec![None; n];
        for (v, obj) in self.vertex_assignment.iter().enumerate() {
            if let TargetObject::Vertex(_) = obj {
                before[v] = Some(Vec::new());
            }
        }
        let mut in_chain = vec![false; src.edges.len()];
        let objs: Vec<TargetObject> = (0..self.edge_chains.len())
            .map(TargetObject::Edge)
            .chain((0..self.leg_chains.len()).map(TargetObject::Leg))
            .collect();
        for &obj in &objs {
            let chain = self.chain_of(obj);
            for (i, &se) in chain.iter().enumerate() {
                if se >= src.edges.len() {
                    return Err(Error::InvalidDegreeOne(format!("chain edge index {se} out of range")));
                }
                in_chain[se] = true;
                let w = src.edges[se].flags[1].vertex;
                if self.vertex_assignment[w] == obj && before[w].is_none() {
                    before[w] = Some((0..=i).collect());
                }
            }
        }
        // contracted edges carry offsets to hanging vertices
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| before[v].is_some()).collect();
        while let Some(v) = queue.pop_front() {
            for (se, e) in src.edges.iter().enumerate() {
                if in_chain[se] {
                    continue;
                }
                for k in 0..2 {
                    let (a, b) = (e.flags[k].vertex, e.flags[1 - k].vertex);
                    if a == v && before[b].is_none() && self.vertex_assignment[b] == self.vertex_assignment[v] {
                        before[b] = before[v].clone();
                        queue.push_back(b);
                    }
                }
            }
        }
        (0..n)
            .map(|v| {
                let b = before[v].clone().ok_or_else(|| {
                    Error::InvalidDegreeOne(format!("vertex {} is not attached to its image", src.vertices[v].id))
                })?;
                Ok(SourceImage { object: self.vertex_assignment[v], before: b, chain_index: None })
            })
            .collect()
    }

    /// Images of source legs: chain legs go to their target leg after the
    /// whole chain, other legs are contracted onto their vertex's image.
    pub fn leg_images(&self) -> Result<Vec<SourceImage>> {
        let vi = self.vertex_images()?;
        let mut out: Vec<Option<SourceImage>> = vec![None; self.source.legs.len()];
        for (y, lc) in self.leg_chains.iter().enumerate() {
            if lc.leg >= out.len() {
                return Err(Error::InvalidDegreeOne(format!("chain leg index {} out of range", lc.leg)));
            }
            out[lc.leg] = Some(SourceImage {
                object: TargetObject::Leg(y),
                before: (0..lc.edges.len()).collect(),
                chain_index: Some(lc.edges.len()),
            });
        }
        for (sy, slot) in out.iter_mut().enumerate() {
            if slot.is_none() {
                let v = self.source.legs[sy].vertex;
                *slot = Some(SourceImage { chain_index: None, ..vi[v].clone() });
            }
        }
        Ok(out.into_iter().map(|s| s.expect("filled")).collect())
    }
}

fn object_polytope(c: &CurveType, obj: TargetObject) -> &Polyhedron {
    match obj {
        TargetObject::Vertex(v) => c.vertex_polytope(v),
        TargetObject::Edge(e) => c.edge_polytope(e),
        TargetObject::Leg(y) => c.leg_polytope(y),
    }
}

fn object_name(c: &CurveType, obj: TargetObject) -> String {
    match obj {
        TargetObject::Vertex(v) => format!("vertex {}", c.vertices[v].id),
        TargetObject::Edge(e) => format!("edge {}", c.edges[e].id),
        TargetObject::Leg(y) => format!("leg {}", c.legs[y].id),
    }
}

fn sum_lengths(src: &CurveType, chain: &[usize], idx: &[usize]) -> Rat {
    idx.iter().map(|&i| src.edges[chain[i]].length.clone()).sum()
}

/// The trajectory of the target object, shifted to start at `offset`.
fn shifted(traj: &AffineMap, offset: &Rat) -> AffineMap {
    let t0 = traj.apply(std::slice::from_ref(offset));
    AffineMap::new(1, traj.linear().to_vec(), t0).expect("shapes agree")
}

/// Structural checks of a degree-one map.
pub fn validate_degree_one(d: &DegreeOneMap) -> Report {
    let mut r = Report::new();
    let (src, tgt) = (&d.source, &d.target);
    let shape = d.vertex_assignment.len() == src.vertices.len()
        && d.edge_chains.len() == tgt.edges.len()
        && d.leg_chains.len() == tgt.legs.len()
        && d.vertex_assignment.iter().all(|o| match *o {
            TargetObject::Vertex(v) => v < tgt.vertices.len(),
            TargetObject::Edge(e) => e < tgt.edges.len(),
            TargetObject::Leg(y) => y < tgt.legs.len(),
        });
    r.record("shape", "degree-one map", shape, "assignment or chain tables do not match the curves");
    if !shape {
        return r;
    }
    let images = (|| Ok::<_, Error>((d.vertex_images()?, d.edge_images()?, d.leg_images()?)))();
    let (vi, ei, li) = match images {
        Ok(x) => x,
        Err(e) => {
            r.record("attached", "degree-one map", false, e.to_string());
            return r;
        }
    };

    // chains run flag 0 → flag 1, consecutively, through interior vertices
    for (e, chain) in d.edge_chains.iter().enumerate() {
        let obj = TargetObject::Edge(e);
        let subject = format!("edge {}", tgt.edges[e].id);
        let te = &tgt.edges[e];
        let mut ok = !chain.is_empty();
        let mut detail = String::from("empty chain");
        for (i, &se) in chain.iter().enumerate() {
            let sedge = &src.edges[se];
            let start = sedge.flags[0].vertex;
            let end = sedge.flags[1].vertex;
            let want_start = if i == 0 { TargetObject::Vertex(te.flags[0].vertex) } else { obj };
            let want_end = if i + 1 == chain.len() { TargetObject::Vertex(te.flags[1].vertex) } else { obj };
            let linked = i == 0 || src.edges[chain[i - 1]].flags[1].vertex == start;
            if d.vertex_assignment[start] != want_start || d.vertex_assignment[end] != want_end || !linked {
                ok = false;
                detail = format!("piece {} ({}) is out of order", i, sedge.id);
                break;
            }
        }
        r.record("chain_order", subject.clone(), ok, detail);
        if !ok {
            continue;
        }
        let total: Rat = chain.iter().map(|&se| src.edges[se].length.clone()).sum();
        r.record(
            "chain_length",
            subject.clone(),
            total == te.length,
            format!("pieces sum to {} but the edge has length {}", total, te.length),
        );
        for (i, &se) in chain.iter().enumerate() {
            let sedge = &src.edges[se];
            let offset = sum_lengths(src, chain, &(0..i).collect::<Vec<_>>());
            let piece = format!("{subject} piece {}", sedge.id);
            r.record(
                "chain_stratum",
                piece.clone(),
                src.edge_polytope(se).same_set(tgt.edge_polytope(e)),
                "piece stratum differs from the edge stratum",
            );
            r.record(
                "chain_trajectory",
                piece.clone(),
                sedge.trajectory == shifted(&te.trajectory, &offset),
                "piece trajectory does not continue the edge trajectory",
            );
            for k in 0..2 {
                let outer = (k == 0 && i == 0) || (k == 1 && i + 1 == chain.len());
                let want = if outer { te.flags[k].germ.clone() } else { AffineMap::identity(te.trajectory.target_dim()) };
                r.record(
                    "chain_germ",
                    format!("{piece} flag {k}"),
                    sedge.flags[k].germ == want,
                    if outer { "outer germ differs from the edge germ" } else { "interior germ is not the identity" },
                );
            }
        }
    }

    for (y, lc) in d.leg_chains.iter().enumerate() {
        let obj = TargetObject::Leg(y);
        let ty = &tgt.legs[y];
        let subject = format!("leg {}", ty.id);
        let sleg = &src.legs[lc.leg];
        let mut ok = true;
        let mut prev = None;
        for (i, &se) in lc.edges.iter().enumerate() {
            let sedge = &src.edges[se];
            let want_start = if i == 0 { TargetObject::Vertex(ty.vertex) } else { obj };
            let linked = prev.is_none_or(|p| p == sedge.flags[0].vertex);
            if d.vertex_assignment[sedge.flags[0].vertex] != want_start
                || d.vertex_assignment[sedge.flags[1].vertex] != obj
                || !linked
            {
                ok = false;
            }
            prev = Some(sedge.flags[1].vertex);
        }
        let leg_at = prev.is_none_or(|p| p == sleg.vertex)
            && (lc.edges.is_empty() == (d.vertex_assignment[sleg.vertex] == TargetObject::Vertex(ty.vertex)));
        r.record("chain_order", subject.clone(), ok && leg_at, "leg chain is out of order");
        if !(ok && leg_at) {
            continue;
        }
        let total: Rat = lc.edges.iter().map(|&se| src.edges[se].length.clone()).sum();
        for (i, &se) in lc.edges.iter().enumerate() {
            let sedge = &src.edges[se];
            let offset = sum_lengths(src, &lc.edges, &(0..i).collect::<Vec<_>>());
            let piece = format!("{subject} piece {}", sedge.id);
            r.record("chain_stratum", piece.clone(), src.edge_polytope(se).same_set(tgt.leg_polytope(y)), "piece stratum differs from the leg stratum");
            r.record(
                "chain_trajectory",
                piece.clone(),
                sedge.trajectory == shifted(&ty.trajectory, &offset),
                "piece trajectory does not continue the leg trajectory",
            );
            let want0 = if i == 0 { ty.germ.clone() } else { AffineMap::identity(ty.trajectory.target_dim()) };
            r.record("chain_germ", format!("{piece} flag 0"), sedge.flags[0].germ == want0, "germ mismatch");
            r.record(
                "chain_germ",
                format!("{piece} flag 1"),
                sedge.flags[1].germ == AffineMap::identity(ty.trajectory.target_dim()),
                "interior germ is not the identity",
            );
        }
        let leg_subject = format!("{subject} piece {}", sleg.id);
        r.record("chain_stratum", leg_subject.clone(), src.leg_polytope(lc.leg).same_set(tgt.leg_polytope(y)), "leg stratum differs");
        r.record(
            "chain_trajectory",
            leg_subject.clone(),
            sleg.trajectory == shifted(&ty.trajectory, &total),
            "leg trajectory does not continue the target leg",
        );
        let want = if lc.edges.is_empty() { ty.germ.clone() } else { AffineMap::identity(ty.trajectory.target_dim()) };
        r.record("chain_germ", leg_subject, sleg.germ == want, "germ mismatch");
    }

    // every source vertex sits where its image is
    for (v, sv) in src.vertices.iter().enumerate() {
        let obj = vi[v].object;
        let subject = format!("source vertex {}", sv.id);
        r.record(
            "stratum_matches",
            subject.clone(),
            src.vertex_polytope(v).same_set(object_polytope(tgt, obj)),
            format!("stratum differs from that of {}", object_name(tgt, obj)),
        );
        let want = match obj {
            TargetObject::Vertex(x) => tgt.vertices[x].position.clone(),
            TargetObject::Edge(e) => {
                let off = sum_lengths(src, &d.edge_chains[e], &vi[v].before);
                tgt.edges[e].trajectory.apply(&[off])
            }
            TargetObject::Leg(y) => {
                let off = sum_lengths(src, &d.leg_chains[y].edges, &vi[v].before);
                tgt.legs[y].trajectory.apply(&[off])
            }
        };
        r.record(
            "position_matches",
            subject,
            sv.position == want,
            format!("{} instead of {}", format_point(&sv.position), format_point(&want)),
        );
    }
    for (obj_v, _) in tgt.vertices.iter().enumerate() {
        let has = d.vertex_assignment.contains(&TargetObject::Vertex(obj_v));
        r.record("vertex_covered", format!("vertex {}", tgt.vertices[obj_v].id), has, "no source vertex maps here");
    }

    // contracted edges and legs are constant with identity germs
    for (se, sedge) in src.edges.iter().enumerate() {
        if ei[se].chain_index.is_some() {
            continue;
        }
        let subject = format!("contracted edge {}", sedge.id);
        let ends = d.vertex_assignment[sedge.flags[0].vertex] == d.vertex_assignment[sedge.flags[1].vertex];
        let offsets = vi[sedge.flags[0].vertex].before == vi[sedge.flags[1].vertex].before;
        r.record("contracted_ends", subject.clone(), ends && offsets, "endpoints map to different points");
        r.record("contracted_constant", subject.clone(), sedge.trajectory.is_constant(), "trajectory is not constant");
        let same = src.edge_polytope(se).same_set(object_polytope(tgt, ei[se].object));
        r.record("stratum_matches", subject.clone(), same, "stratum differs from the image");
        let id = AffineMap::identity(sedge.trajectory.target_dim());
        r.record(
            "contracted_germs",
            subject,
            sedge.flags.iter().all(|f| f.germ == id),
            "germs of a contracted edge must be identities",
        );
    }
    for (sy, sleg) in src.legs.iter().enumerate() {
        if li[sy].chain_index.is_some() {
            continue;
        }
        let subject = format!("contracted leg {}", sleg.id);
        r.record("contracted_constant", subject.clone(), sleg.trajectory.is_constant(), "trajectory is not constant");
        let same = src.leg_polytope(sy).same_set(object_polytope(tgt, li[sy].object));
        r.record("stratum_matches", subject.clone(), same, "stratum differs from the image");
        r.record(
            "contracted_germs",
            subject,
            sleg.germ == AffineMap::identity(sleg.trajectory.target_dim()),
            "germ of a contracted leg must be the identity",
        );
    }
    r
}

/// The pushed-out structure and the maps `η` from each source object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutResult {
    pub structure: ExtendedStructure,
    pub eta_vertices: Vec<AffineMap>,
    pub eta_edges: Vec<AffineMap>,
    pub eta_legs: Vec<AffineMap>,
    pub vertex_images: Vec<TargetObject>,
    pub edge_images: Vec<TargetObject>,
    pub leg_images: Vec<TargetObject>,
}

/// `Σ ρ` over the listed chain positions.
fn rho_sum(p0: &ExtendedStructure, chain: &[usize], idx: &[usize]) -> AffineMap {
    let d = p0.base_dim();
    idx.iter().fold(AffineMap::constant(d, vec![Rat::zero()]), |acc, &i| {
        acc.add(&p0.edges[chain[i]].rho).expect("shapes agree")
    })
}

/// `p ↦ (p, α(p), total(p) - α(p))` or `p ↦ (p, α(p))`.
fn point_on(d: usize, obj: TargetObject, alpha: &AffineMap, total: &AffineMap) -> AffineMap {
    let id = AffineMap::identity(d);
    match obj {
        TargetObject::Vertex(_) => id,
        TargetObject::Edge(_) => {
            let rest = total.sub(alpha).expect("shapes agree");
            AffineMap::stack(d, &[&id, alpha, &rest]).expect("shapes agree")
        }
        TargetObject::Leg(_) => AffineMap::stack(d, &[&id, alpha]).expect("shapes agree"),
    }
}

pub fn pushout_extension(p0: &ExtendedStructure, d: &DegreeOneMap) -> Result<PushoutResult> {
    let tgt = &d.target;
    let vi = d.vertex_images()?;
    let ei = d.edge_images()?;
    let li = d.leg_images()?;
    let dim = p0.base_dim();
    let all: Vec<usize> = Vec::new();
    let totals: Vec<AffineMap> = d
        .edge_chains
        .iter()
        .map(|ch| rho_sum(p0, ch, &(0..ch.len()).collect::<Vec<_>>()))
        .collect();
    let chain = |obj: TargetObject| -> &[usize] {
        match obj {
            TargetObject::Edge(e) => &d.edge_chains[e],
            TargetObject::Leg(y) => &d.leg_chains[y].edges,
            TargetObject::Vertex(_) => &all,
        }
    };
    let total_of = |obj: TargetObject| -> AffineMap {
        match obj {
            TargetObject::Edge(e) => totals[e].clone(),
            _ => AffineMap::constant(dim, vec![Rat::zero()]),
        }
    };

    // η on vertices: the point at offset α over the base
    let mut eta_vertices = Vec::new();
    for (v, img) in vi.iter().enumerate() {
        let alpha = rho_sum(p0, chain(img.object), &img.before);
        let on_base = point_on(dim, img.object, &alpha, &total_of(img.object));
        eta_vertices.push(on_base.compose(&p0.vertices[v].iso_to_base)?);
    }
    // η on edges: chain pieces shift by the lengths around them,
    // contracted edges project to their point
    let mut eta_edges = Vec::new();
    for img in &ei {
        let ch = chain(img.object);
        let alpha = rho_sum(p0, ch, &img.before);
        let proj = AffineMap::select(dim + 2, &(0..dim).collect::<Vec<_>>());
        let eta = match img.chain_index {
            None => point_on(dim, img.object, &alpha, &total_of(img.object)).compose(&proj)?,
            Some(i) => {
                let a_coord = AffineMap::select(dim + 2, &[dim]);
                let b_coord = AffineMap::select(dim + 2, &[dim + 1]);
                let shift_a = alpha.compose(&proj)?.add(&a_coord)?;
                match img.object {
                    TargetObject::Edge(_) => {
                        let after: Vec<usize> = (i + 1..ch.len()).collect();
                        let beta = rho_sum(p0, ch, &after);
                        let shift_b = beta.compose(&proj)?.add(&b_coord)?;
                        AffineMap::stack(dim + 2, &[&proj, &shift_a, &shift_b])?
                    }
                    _ => AffineMap::stack(dim + 2, &[&proj, &shift_a])?,
                }
            }
        };
        eta_edges.push(eta);
    }
    let mut eta_legs = Vec::new();
    for img in &li {
        let ch = chain(img.object);
        let alpha = rho_sum(p0, ch, &img.before);
        let proj = AffineMap::select(dim + 1, &(0..dim).collect::<Vec<_>>());
        let eta = match img.chain_index {
            None => point_on(dim, img.object, &alpha, &total_of(img.object)).compose(&proj)?,
            Some(_) => {
                let s_coord = AffineMap::select(dim + 1, &[dim]);
                let shifted = alpha.compose(&proj)?.add(&s_coord)?;
                AffineMap::stack(dim + 1, &[&proj, &shifted])?
            }
        };
        eta_legs.push(eta);
    }

    // the value on each target object is forced by the source objects over it
    let gather = |obj: TargetObject| -> Vec<InterpolationConstraint> {
        let mut cs = Vec::new();
        for (v, img) in vi.iter().enumerate() {
            if img.object == obj {
                cs.push(InterpolationConstraint {
                    embed: eta_vertices[v].clone(),
                    sub: p0.vertices[v].poly.clone(),
                    value: p0.vertices[v].to_target.clone(),
                });
            }
        }
        for (se, img) in ei.iter().enumerate() {
            if img.object == obj {
                cs.push(InterpolationConstraint {
                    embed: eta_edges[se].clone(),
                    sub: p0.edges[se].poly.clone(),
                    value: p0.edges[se].to_target.clone(),
                });
            }
        }
        for (sy, img) in li.iter().enumerate() {
            if img.object == obj {
                cs.push(InterpolationConstraint {
                    embed: eta_legs[sy].clone(),
                    sub: p0.legs[sy].poly.clone(),
                    value: p0.legs[sy].to_target.clone(),
                });
            }
        }
        cs
    };
    let chain_err = |obj: TargetObject, e: Error| Error::InconsistentChain(format!("{}: {e}", object_name(tgt, obj)));

    let base = p0.base.canonical();
    let bp = &p0.basepoint;
    let mut vertex_targets = Vec::new();
    for x in 0..tgt.vertices.len() {
        let obj = TargetObject::Vertex(x);
        vertex_targets.push(affine_interpolate(&gather(obj), &base).map_err(|e| chain_err(obj, e))?);
    }
    let mut edge_targets = Vec::new();
    for (e, te) in tgt.edges.iter().enumerate() {
        let obj = TargetObject::Edge(e);
        let ambient = crate::extension::node_polyhedron(&base, &totals[e])?;
        let mut cs = gather(obj);
        cs.push(InterpolationConstraint {
            embed: edge_fiber_embed(bp, &te.length),
            sub: edge_domain(&te.length),
            value: te.trajectory.clone(),
        });
        edge_targets.push(affine_interpolate(&cs, &ambient).map_err(|e| chain_err(obj, e))?);
    }
    let mut leg_targets = Vec::new();
    let leg_poly = crate::extension::leg_polyhedron(&base);
    for (y, ty) in tgt.legs.iter().enumerate() {
        let obj = TargetObject::Leg(y);
        let mut cs = gather(obj);
        cs.push(InterpolationConstraint { embed: leg_fiber_embed(bp), sub: leg_domain(), value: ty.trajectory.clone() });
        leg_targets.push(affine_interpolate(&cs, &leg_poly).map_err(|e| chain_err(obj, e))?);
    }
    let structure = ExtendedStructure::standard(base, bp.clone(), vertex_targets, totals, edge_targets, leg_targets)?;
    Ok(PushoutResult {
        structure,
        eta_vertices,
        eta_edges,
        eta_legs,
        vertex_images: vi.iter().map(|i| i.object).collect(),
        edge_images: ei.iter().map(|i| i.object).collect(),
        leg_images: li.iter().map(|i| i.object).collect(),
    })
}

impl PushoutResult {
    pub fn object_poly(&self, obj: TargetObject) -> &Polyhedron {
        match obj {
            TargetObject::Vertex(x) => &self.structure.vertices[x].poly,
            TargetObject::Edge(e) => &self.structure.edges[e].poly,
            TargetObject::Leg(y) => &self.structure.legs[y].poly,
        }
    }

    pub fn object_value(&self, obj: TargetObject) -> &AffineMap {
        match obj {
            TargetObject::Vertex(x) => &self.structure.vertices[x].to_target,
            TargetObject::Edge(e) => &self.structure.edges[e].to_target,
            TargetObject::Leg(y) => &self.structure.legs[y].to_target,
        }
    }
}

fn agree(r: &mut Report, name: &str, subject: String, a: Result<AffineMap>, b: Result<AffineMap>, on: &Polyhedron) {
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let ok = a.agrees_on(&b, on);
            r.record(name, subject, ok, format!("{a:?} differs from {b:?}"));
        }
        (Err(e), _) | (_, Err(e)) => r.record(name, subject, false, e.to_string()),
    }
}

/// Sum rule for edge lengths, commuting squares for `η`, compatibility with
/// the maps to the target, and validity of the pushed-out structure.
pub fn pushout_report(p0: &ExtendedStructure, d: &DegreeOneMap, res: &PushoutResult) -> Report {
    let (src, tgt) = (&d.source, &d.target);
    let mut r = Report::new();
    for (e, ch) in d.edge_chains.iter().enumerate() {
        let sum = rho_sum(p0, ch, &(0..ch.len()).collect::<Vec<_>>());
        let got = &res.structure.edges[e].rho;
        r.record(
            "sum_rule",
            format!("edge {}", tgt.edges[e].id),
            *got == sum,
            format!("{got:?} is not the sum {sum:?}"),
        );
    }
    let s = &res.structure;
    let flag_bar = |obj: TargetObject, tv: usize, k: usize| -> Option<AffineMap> {
        match obj {
            TargetObject::Edge(e) if tgt.edges[e].flags[k].vertex == tv => Some(s.edges[e].flag_maps[k].clone()),
            TargetObject::Leg(y) if tgt.legs[y].vertex == tv => Some(s.legs[y].structure.clone()),
            _ => None,
        }
    };
    for (se, sedge) in src.edges.iter().enumerate() {
        for k in 0..2 {
            let v = sedge.flags[k].vertex;
            let subject = format!("source edge {} flag {k}", sedge.id);
            let lhs = res.eta_edges[se].compose(&p0.edges[se].flag_maps[k]);
            let (vo, eo) = (res.vertex_images[v], res.edge_images[se]);
            let rhs = if vo == eo {
                Ok(res.eta_vertices[v].clone())
            } else if let TargetObject::Vertex(tv) = vo {
                match flag_bar(eo, tv, k) {
                    Some(m) => m.compose(&res.eta_vertices[v]),
                    None => Err(Error::Internal("no structure map between the images".into())),
                }
            } else {
                Err(Error::Internal("flag image is not a structure map".into()))
            };
            agree(&mut r, "eta_square", subject, lhs, rhs, &p0.vertices[v].poly);
        }
    }
    for (sy, sleg) in src.legs.iter().enumerate() {
        let v = sleg.vertex;
        let subject = format!("source leg {}", sleg.id);
        let lhs = res.eta_legs[sy].compose(&p0.legs[sy].structure);
        let (vo, lo) = (res.vertex_images[v], res.leg_images[sy]);
        let rhs = if vo == lo {
            Ok(res.eta_vertices[v].clone())
        } else if let (TargetObject::Vertex(_), TargetObject::Leg(y)) = (vo, lo) {
            s.legs[y].structure.compose(&res.eta_vertices[v])
        } else {
            Err(Error::Internal("leg image is not a structure map".into()))
        };
        agree(&mut r, "eta_square", subject, lhs, rhs, &p0.vertices[v].poly);
    }

    let mut check_value = |name: String, obj: TargetObject, eta: &AffineMap, poly: &Polyhedron, value: &AffineMap| {
        let inside = image(poly, eta).map(|im| res.object_poly(obj).contains_poly(&im)).unwrap_or(false);
        r.record("eta_lands", name.clone(), inside, format!("image leaves the polytope of {}", object_name(tgt, obj)));
        agree(&mut r, "eta_natural", name, res.object_value(obj).compose(eta), Ok(value.clone()), poly);
    };
    for (v, sv) in src.vertices.iter().enumerate() {
        check_value(
            format!("source vertex {}", sv.id),
            res.vertex_images[v],
            &res.eta_vertices[v],
            &p0.vertices[v].poly,
            &p0.vertices[v].to_target,
        );
    }
    for (se, sedge) in src.edges.iter().enumerate() {
        check_value(
            format!("source edge {}", sedge.id),
            res.edge_images[se],
            &res.eta_edges[se],
            &p0.edges[se].poly,
            &p0.edges[se].to_target,
        );
    }
    for (sy, sleg) in src.legs.iter().enumerate() {
        check_value(
            format!("source leg {}", sleg.id),
            res.leg_images[sy],
            &res.eta_legs[sy],
            &p0.legs[sy].poly,
            &p0.legs[sy].to_target,
        );
    }
    r.extend(validate_extension(tgt, &res.structure));
    r
}

/// A square to be completed through the pushout: maps from each source
/// object over `object` into a common polytope, and candidate completions.
#[derive(Debug, Clone)]
pub struct PushoutSquare {
    pub object: TargetObject,
    /// `(source object, required value)` pairs. The source object is given by
    /// its η and its polytope.
    pub legs: Vec<(AffineMap, Polyhedron, AffineMap)>,
    pub candidates: Vec<AffineMap>,
}

impl PushoutResult {
    /// The square asking for a map out of `object` that restricts to the
    /// values of `p0` on every source object over it.
    pub fn square(&self, p0: &ExtendedStructure, object: TargetObject, candidates: Vec<AffineMap>) -> PushoutSquare {
        let mut legs = Vec::new();
        for (v, o) in self.vertex_images.iter().enumerate() {
            if *o == object {
                legs.push((self.eta_vertices[v].clone(), p0.vertices[v].poly.clone(), p0.vertices[v].to_target.clone()));
            }
        }
        for (e, o) in self.edge_images.iter().enumerate() {
            if *o == object {
                legs.push((self.eta_edges[e].clone(), p0.edges[e].poly.clone(), p0.edges[e].to_target.clone()));
            }
        }
        for (y, o) in self.leg_images.iter().enumerate() {
            if *o == object {
                legs.push((self.eta_legs[y].clone(), p0.legs[y].poly.clone(), p0.legs[y].to_target.clone()));
            }
        }
        PushoutSquare { object, legs, candidates }
    }
}

/// For each square, confirms that exactly one candidate completes it.
pub fn verify_pushout_uniqueness(r: &PushoutResult, squares: &[PushoutSquare]) -> Report {
    let mut out = Report::new();
    for (i, sq) in squares.iter().enumerate() {
        let subject = format!("square {i}");
        if sq.candidates.is_empty() {
            out.record("unique_completion", subject, false, "no candidate");
            continue;
        }
        let poly = r.object_poly(sq.object);
        let completes: Vec<usize> = sq
            .candidates
            .iter()
            .enumerate()
            .filter(|(_, h)| {
                h.source_dim() == poly.ambient_dim()
                    && sq.legs.iter().all(|(eta, sub, value)| {
                        h.compose(eta).map(|m| m.agrees_on(value, sub)).unwrap_or(false)
                    })
            })
            .map(|(k, _)| k)
            .collect();
        let detail = match completes.len() {
            0 => "no candidate completes the square".to_string(),
            1 => format!("candidate {}", completes[0]),
            n => format!("{n} candidates complete the square"),
        };
        out.note("unique_completion", subject, completes.len() == 1, detail);
    }
    out
}

/// The refinement of `c` that splits edge `e` at parameter `t ∈ (0, ℓ_e)`,
/// with its degree-one map back to `c`. The first piece keeps the index of
/// `e`, the second is appended.
pub fn subdivide_edge(c: &CurveType, e: usize, t: &Rat) -> Result<DegreeOneMap> {
    let edge = &c.edges[e];
    if *t <= Rat::zero() || *t >= edge.length {
        return Err(Error::InvalidDegreeOne(format!("split point {t} is not inside edge {}", edge.id)));
    }
    let mut src = c.clone();
    let mid = src.vertices.len();
    let n = edge.trajectory.target_dim();
    src.vertices.push(crate::curve::Vertex {
        id: format!("{}_mid", edge.id),
        stratum: edge.stratum,
        position: edge.trajectory.apply(std::slice::from_ref(t)),
        monodromy: vec![],
    });
    let id = AffineMap::identity(n);
    let first = crate::curve::Edge {
        id: format!("{}_a", edge.id),
        length: t.clone(),
        stratum: edge.stratum,
        trajectory: edge.trajectory.clone(),
        flags: [edge.flags[0].clone(), crate::curve::Flag { vertex: mid, germ: id.clone() }],
    };
    let second = crate::curve::Edge {
        id: format!("{}_b", edge.id),
        length: &edge.length - t,
        stratum: edge.stratum,
        trajectory: shifted(&edge.trajectory, t),
        flags: [crate::curve::Flag { vertex: mid, germ: id }, edge.flags[1].clone()],
    };
    src.edges[e] = first;
    src.edges.push(second);
    let tail = src.edges.len() - 1;
    let mut d = DegreeOneMap::identity(c);
    d.source = src;
    d.vertex_assignment.push(TargetObject::Edge(e));
    d.edge_chains[e] = vec![e, tail];
    Ok(d)
}
