//! Extended tropical structures: a base polytope `P` with per-object
//! polytopes over it, structure maps, and a natural transformation to the
//! target strata.
//!
//! Coordinates are fixed: a node polytope lives in `(p, a, b)` with
//! `a + b = ρ(p)`, and a leg polytope in `(p, s)` with `s ≥ 0`.

use num_traits::{One, Signed, Zero};

use crate::curve::{edge_domain, leg_domain, CurveType};
use crate::error::{dims, Error, Result};
use crate::kernel::{
    fiber_product, format_point, format_rat, image, is_iso_onto_face, AffineMap, Polyhedron, Rat,
};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    pub poly: Polyhedron,
    pub iso_to_base: AffineMap,
    pub to_target: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub rho: AffineMap,
    pub poly: Polyhedron,
    /// Structure maps from the polytopes of the flag-0 and flag-1 vertices.
    pub flag_maps: [AffineMap; 2],
    pub to_target: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegData {
    pub poly: Polyhedron,
    pub structure: AffineMap,
    pub to_target: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedStructure {
    pub base: Polyhedron,
    pub basepoint: Vec<Rat>,
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
    pub legs: Vec<LegData>,
}

/// `(a, b) ↦ a + b`.
pub fn sum_map() -> AffineMap {
    AffineMap::from_i64(2, &[&[1, 1]], &[Rat::zero()])
}

/// `{(p, a, b) : p ∈ base, a, b ≥ 0, a + b = ρ(p)}`.
pub fn node_polyhedron(base: &Polyhedron, rho: &AffineMap) -> Result<Polyhedron> {
    Ok(fiber_product(base, rho, &Polyhedron::orthant(2), &sum_map())?.0)
}

pub fn leg_polyhedron(base: &Polyhedron) -> Polyhedron {
    Polyhedron::product(&[base, &Polyhedron::orthant(1)]).canonical()
}

/// Flag 0 lands on `{a = 0}`, flag 1 on `{b = 0}`.
pub fn flag_map(base_dim: usize, rho: &AffineMap, k: usize) -> AffineMap {
    let id = AffineMap::identity(base_dim);
    let zero = AffineMap::constant(base_dim, vec![Rat::zero()]);
    let parts: [&AffineMap; 3] = if k == 0 { [&id, &zero, rho] } else { [&id, rho, &zero] };
    AffineMap::stack(base_dim, &parts).expect("shapes agree")
}

pub fn leg_structure_map(base_dim: usize) -> AffineMap {
    let id = AffineMap::identity(base_dim);
    let zero = AffineMap::constant(base_dim, vec![Rat::zero()]);
    AffineMap::stack(base_dim, &[&id, &zero]).expect("shapes agree")
}

/// `t ↦ (q, t, ℓ - t)`: the fiber of a node polytope over `q`.
pub fn edge_fiber_embed(q: &[Rat], length: &Rat) -> AffineMap {
    let n = q.len();
    let mut linear = vec![vec![num_bigint::BigInt::zero(); 1]; n];
    linear.push(vec![num_bigint::BigInt::one()]);
    linear.push(vec![-num_bigint::BigInt::one()]);
    let mut translate = q.to_vec();
    translate.push(Rat::zero());
    translate.push(length.clone());
    AffineMap::new(1, linear, translate).expect("shapes agree")
}

/// `s ↦ (q, s)`.
pub fn leg_fiber_embed(q: &[Rat]) -> AffineMap {
    let n = q.len();
    let mut linear = vec![vec![num_bigint::BigInt::zero(); 1]; n];
    linear.push(vec![num_bigint::BigInt::one()]);
    let mut translate = q.to_vec();
    translate.push(Rat::zero());
    AffineMap::new(1, linear, translate).expect("shapes agree")
}

/// `(p, extra…) ↦ p` for node or leg polytopes.
pub fn base_projection(base_dim: usize, extra: usize) -> AffineMap {
    AffineMap::select(base_dim + extra, &(0..base_dim).collect::<Vec<_>>())
}

impl ExtendedStructure {
    pub fn base_dim(&self) -> usize {
        self.base.ambient_dim()
    }

    /// Builds the structure whose vertex polytopes are the base itself, from
    /// the maps to the target and the edge lengths.
    pub fn standard(
        base: Polyhedron,
        basepoint: Vec<Rat>,
        vertex_targets: Vec<AffineMap>,
        rhos: Vec<AffineMap>,
        edge_targets: Vec<AffineMap>,
        leg_targets: Vec<AffineMap>,
    ) -> Result<Self> {
        let d = base.ambient_dim();
        if basepoint.len() != d {
            return Err(dims("basepoint", d, basepoint.len()));
        }
        if rhos.len() != edge_targets.len() {
            return Err(dims("edge data", rhos.len(), edge_targets.len()));
        }
        let base = base.canonical();
        let vertices = vertex_targets
            .into_iter()
            .map(|to_target| VertexData { poly: base.clone(), iso_to_base: AffineMap::identity(d), to_target })
            .collect();
        let mut edges = Vec::new();
        for (rho, to_target) in rhos.into_iter().zip(edge_targets) {
            let poly = node_polyhedron(&base, &rho)?;
            let flag_maps = [flag_map(d, &rho, 0), flag_map(d, &rho, 1)];
            edges.push(EdgeData { rho, poly, flag_maps, to_target });
        }
        let leg_poly = leg_polyhedron(&base);
        let legs = leg_targets
            .into_iter()
            .map(|to_target| LegData { poly: leg_poly.clone(), structure: leg_structure_map(d), to_target })
            .collect();
        Ok(ExtendedStructure { base, basepoint, vertices, edges, legs })
    }

    /// Inverse of each vertex isomorphism to the base.
    pub fn vertex_inverse(&self, v: usize) -> Result<AffineMap> {
        let vd = &self.vertices[v];
        if vd.iso_to_base.is_identity() {
            return Ok(vd.iso_to_base.clone());
        }
        is_iso_onto_face(&vd.iso_to_base, &vd.poly, &self.base)
            .map(|c| c.inverse_on_face)
            .ok_or_else(|| Error::NotAnExtension(format!("vertex {v} polytope is not isomorphic to the base")))
    }

    /// Map from the base to the vertex stratum: `to_target ∘ iso⁻¹`.
    pub fn vertex_value_on_base(&self, v: usize) -> Result<AffineMap> {
        self.vertices[v].to_target.compose(&self.vertex_inverse(v)?)
    }
}

/// The tropical structure of the curve itself, over a one-point base.
pub fn trivial_extension(c: &CurveType) -> Result<ExtendedStructure> {
    let base = Polyhedron::universe(0);
    let vertex_targets = c.vertices.iter().map(|v| AffineMap::constant(0, v.position.clone())).collect();
    let rhos = c.edges.iter().map(|e| AffineMap::constant(0, vec![e.length.clone()])).collect();
    // (a, b) ↦ trajectory(a)
    let edge_targets = c
        .edges
        .iter()
        .map(|e| e.trajectory.compose(&AffineMap::select(2, &[0])))
        .collect::<Result<Vec<_>>>()?;
    let leg_targets = c.legs.iter().map(|y| y.trajectory.clone()).collect();
    ExtendedStructure::standard(base, vec![], vertex_targets, rhos, edge_targets, leg_targets)
}

fn agree(r: &mut Report, name: &str, subject: String, lhs: Result<AffineMap>, rhs: Result<AffineMap>, on: &Polyhedron) {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => {
            let ok = a.agrees_on(&b, on);
            r.record(name, subject, ok, format!("{a:?} differs from {b:?}"));
        }
        (Err(e), _) | (_, Err(e)) => r.record(name, subject, false, e.to_string()),
    }
}

fn contained(r: &mut Report, name: &str, subject: String, poly: &Polyhedron, map: &AffineMap, target: &Polyhedron) {
    match image(poly, map) {
        Ok(im) => {
            let ok = target.contains_poly(&im);
            r.record(name, subject, ok, format!("image {im:?} is not contained in {target:?}"));
        }
        Err(e) => r.record(name, subject, false, e.to_string()),
    }
}

fn shapes(c: &CurveType, s: &ExtendedStructure, r: &mut Report) -> bool {
    let d = s.base_dim();
    let counts = s.vertices.len() == c.vertices.len()
        && s.edges.len() == c.edges.len()
        && s.legs.len() == c.legs.len();
    r.record("object_counts", "structure", counts, "object counts differ from the curve");
    if !counts {
        return false;
    }
    let mut ok = s.basepoint.len() == d;
    r.record("dimensions", "basepoint", ok, "basepoint has the wrong length");
    for (i, vd) in s.vertices.iter().enumerate() {
        let n = vd.poly.ambient_dim();
        let good = vd.iso_to_base.source_dim() == n
            && vd.iso_to_base.target_dim() == d
            && vd.to_target.source_dim() == n
            && vd.to_target.target_dim() == c.vertex_dim(i);
        r.record("dimensions", format!("vertex {}", c.vertices[i].id), good, "map shapes do not match");
        ok &= good;
    }
    for (i, ed) in s.edges.iter().enumerate() {
        let good = ed.rho.source_dim() == d
            && ed.rho.target_dim() == 1
            && ed.poly.ambient_dim() == d + 2
            && ed.to_target.source_dim() == d + 2
            && ed.to_target.target_dim() == c.edge_polytope(i).ambient_dim()
            && (0..2).all(|k| {
                let v = c.edges[i].flags[k].vertex;
                ed.flag_maps[k].source_dim() == s.vertices[v].poly.ambient_dim()
                    && ed.flag_maps[k].target_dim() == d + 2
            });
        r.record("dimensions", format!("edge {}", c.edges[i].id), good, "map shapes do not match");
        ok &= good;
    }
    for (i, ld) in s.legs.iter().enumerate() {
        let v = c.legs[i].vertex;
        let good = ld.poly.ambient_dim() == d + 1
            && ld.structure.source_dim() == s.vertices[v].poly.ambient_dim()
            && ld.structure.target_dim() == d + 1
            && ld.to_target.source_dim() == d + 1
            && ld.to_target.target_dim() == c.leg_polytope(i).ambient_dim();
        r.record("dimensions", format!("leg {}", c.legs[i].id), good, "map shapes do not match");
        ok &= good;
    }
    ok
}

/// Checks the face, pullback and product conditions, naturality, and that
/// the fiber over the basepoint is the curve itself.
pub fn validate_extension(c: &CurveType, s: &ExtendedStructure) -> Report {
    let mut r = Report::new();
    if !shapes(c, s, &mut r) {
        return r;
    }
    let d = s.base_dim();
    let bp = &s.basepoint;
    r.record("basepoint_in_base", "structure", s.base.contains(bp), format!("{} is not in the base", format_point(bp)));

    let mut vertex_points: Vec<Option<Vec<Rat>>> = Vec::new();
    for (i, vd) in s.vertices.iter().enumerate() {
        let subject = format!("vertex {}", c.vertices[i].id);
        let cert = is_iso_onto_face(&vd.iso_to_base, &vd.poly, &s.base);
        let onto = cert.as_ref().is_some_and(|c| c.tight_inequalities.is_empty() && c.face.same_set(&s.base));
        r.record("vertex_iso_to_base", subject.clone(), onto, "the vertex polytope is not isomorphic to the base");
        contained(&mut r, "natural_in_stratum", subject.clone(), &vd.poly, &vd.to_target, c.vertex_polytope(i));
        let point = cert.map(|c| c.inverse_on_face.apply(bp));
        if let Some(x) = &point {
            let got = vd.to_target.apply(x);
            r.record(
                "fiber_position",
                subject,
                got == c.vertices[i].position,
                format!("fiber gives {} but the curve has {}", format_point(&got), format_point(&c.vertices[i].position)),
            );
        }
        vertex_points.push(point);
    }

    for (i, ed) in s.edges.iter().enumerate() {
        let e = &c.edges[i];
        let subject = format!("edge {}", e.id);
        contained(&mut r, "rho_nonnegative", subject.clone(), &s.base, &ed.rho, &Polyhedron::orthant(1));
        match node_polyhedron(&s.base, &ed.rho) {
            Ok(expected) => r.record(
                "node_is_pullback",
                subject.clone(),
                ed.poly.same_set(&expected),
                "node polytope is not the fiber product over a + b",
            ),
            Err(err) => r.record("node_is_pullback", subject.clone(), false, err.to_string()),
        }
        for k in 0..2 {
            let v = e.flags[k].vertex;
            let fs = format!("edge {} flag {k}", e.id);
            let vd = &s.vertices[v];
            let cert = is_iso_onto_face(&ed.flag_maps[k], &vd.poly, &ed.poly);
            r.record("structure_map_face", fs.clone(), cert.is_some(), "structure map is not an isomorphism onto a face");
            agree(
                &mut r,
                "structure_over_base",
                fs.clone(),
                base_projection(d, 2).compose(&ed.flag_maps[k]),
                Ok(vd.iso_to_base.clone()),
                &vd.poly,
            );
            // flag 0 lands on a = 0, flag 1 on b = 0
            agree(
                &mut r,
                "flag_orientation",
                fs.clone(),
                Ok(AffineMap::select(d + 2, &[d + k]).compose(&ed.flag_maps[k]).expect("shapes checked")),
                Ok(AffineMap::constant(vd.poly.ambient_dim(), vec![Rat::zero()])),
                &vd.poly,
            );
            agree(
                &mut r,
                "naturality",
                fs,
                ed.to_target.compose(&ed.flag_maps[k]),
                e.flags[k].germ.compose(&vd.to_target),
                &vd.poly,
            );
        }
        contained(&mut r, "natural_in_stratum", subject.clone(), &ed.poly, &ed.to_target, c.edge_polytope(i));
        let len = ed.rho.apply(bp)[0].clone();
        r.record(
            "fiber_length",
            subject.clone(),
            len == e.length,
            format!("rho(basepoint) = {} but the curve has {}", format_rat(&len), format_rat(&e.length)),
        );
        if len.is_positive() {
            agree(
                &mut r,
                "fiber_trajectory",
                subject,
                ed.to_target.compose(&edge_fiber_embed(bp, &len)),
                Ok(e.trajectory.clone()),
                &edge_domain(&len),
            );
        }
    }

    for (i, ld) in s.legs.iter().enumerate() {
        let y = &c.legs[i];
        let subject = format!("leg {}", y.id);
        let vd = &s.vertices[y.vertex];
        r.record(
            "leg_is_product",
            subject.clone(),
            ld.poly.same_set(&leg_polyhedron(&s.base)),
            "leg polytope is not base × [0,∞)",
        );
        let cert = is_iso_onto_face(&ld.structure, &vd.poly, &ld.poly);
        r.record("structure_map_face", subject.clone(), cert.is_some(), "structure map is not an isomorphism onto a face");
        agree(
            &mut r,
            "structure_over_base",
            subject.clone(),
            base_projection(d, 1).compose(&ld.structure),
            Ok(vd.iso_to_base.clone()),
            &vd.poly,
        );
        agree(
            &mut r,
            "leg_orientation",
            subject.clone(),
            Ok(AffineMap::select(d + 1, &[d]).compose(&ld.structure).expect("shapes checked")),
            Ok(AffineMap::constant(vd.poly.ambient_dim(), vec![Rat::zero()])),
            &vd.poly,
        );
        agree(
            &mut r,
            "naturality",
            subject.clone(),
            ld.to_target.compose(&ld.structure),
            y.germ.compose(&vd.to_target),
            &vd.poly,
        );
        contained(&mut r, "natural_in_stratum", subject.clone(), &ld.poly, &ld.to_target, c.leg_polytope(i));
        agree(
            &mut r,
            "fiber_trajectory",
            subject,
            ld.to_target.compose(&leg_fiber_embed(bp)),
            Ok(y.trajectory.clone()),
            &leg_domain(),
        );
    }
    r
}

/// The curve type classified by the point `q` of the base.
pub fn fiber_at(c: &CurveType, s: &ExtendedStructure, q: &[Rat]) -> Result<CurveType> {
    if q.len() != s.base_dim() {
        return Err(dims("fiber point", s.base_dim(), q.len()));
    }
    if !s.base.contains(q) {
        return Err(Error::NotContained(format!("{} is not in the base", format_point(q))));
    }
    let lengths: Vec<Rat> = s.edges.iter().map(|ed| ed.rho.apply(q)[0].clone()).collect();
    let zero: Vec<String> = lengths
        .iter()
        .zip(&c.edges)
        .filter(|(l, _)| !l.is_positive())
        .map(|(_, e)| e.id.clone())
        .collect();
    if !zero.is_empty() {
        return Err(Error::ZeroLengthEdge(zero));
    }
    let mut out = c.clone();
    for (i, v) in out.vertices.iter_mut().enumerate() {
        v.position = s.vertex_value_on_base(i)?.apply(q);
    }
    for (i, e) in out.edges.iter_mut().enumerate() {
        e.length = lengths[i].clone();
        e.trajectory = s.edges[i].to_target.compose(&edge_fiber_embed(q, &lengths[i]))?;
    }
    for (i, y) in out.legs.iter_mut().enumerate() {
        y.trajectory = s.legs[i].to_target.compose(&leg_fiber_embed(q))?;
    }
    Ok(out)
}
