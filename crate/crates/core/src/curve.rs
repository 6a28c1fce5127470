//! Combinatorial tropical type of a curve in an exploded manifold.

use crate::kernel::{
    image, is_iso_onto_face, AffineMap, Polyhedron, Rat,
};
use crate::kernel::format_point;
use crate::report::Report;
use num_traits::{Signed, Zero};

/// A target stratum, carrying the polytope attached to its points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetStratum {
    pub id: String,
    pub polytope: Polyhedron,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    /// Index into `CurveType::strata`.
    pub stratum: usize,
    pub position: Vec<Rat>,
    /// Generators of the monodromy acting on the stratum polytope.
    pub monodromy: Vec<AffineMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    pub vertex: usize,
    /// Transport from the vertex stratum polytope into the edge stratum polytope.
    pub germ: AffineMap,
}

/// An internal edge. Flag 0 sits at parameter 0 of `[0, length]`, flag 1 at
/// parameter `length`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub length: Rat,
    pub stratum: usize,
    pub trajectory: AffineMap,
    pub flags: [Flag; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub id: String,
    pub vertex: usize,
    pub stratum: usize,
    pub trajectory: AffineMap,
    pub germ: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurveType {
    pub strata: Vec<TargetStratum>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
}

impl CurveType {
    pub fn vertex_polytope(&self, v: usize) -> &Polyhedron {
        &self.strata[self.vertices[v].stratum].polytope
    }

    pub fn edge_polytope(&self, e: usize) -> &Polyhedron {
        &self.strata[self.edges[e].stratum].polytope
    }

    pub fn leg_polytope(&self, y: usize) -> &Polyhedron {
        &self.strata[self.legs[y].stratum].polytope
    }

    pub fn vertex_dim(&self, v: usize) -> usize {
        self.vertex_polytope(v).ambient_dim()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn leg_index(&self, id: &str) -> Option<usize> {
        self.legs.iter().position(|y| y.id == id)
    }

    /// Adds a stratum unless one with the same id exists; returns its index.
    pub fn add_stratum(&mut self, id: &str, polytope: Polyhedron) -> usize {
        if let Some(i) = self.strata.iter().position(|s| s.id == id) {
            return i;
        }
        self.strata.push(TargetStratum { id: id.to_string(), polytope });
        self.strata.len() - 1
    }

    /// Whether the dual graph is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                let (a, b) = (e.flags[0].vertex, e.flags[1].vertex);
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && y < n && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `[0, ∞)` or `[0, ℓ]` as the domain of a trajectory.
pub fn edge_domain(length: &Rat) -> Polyhedron {
    Polyhedron::interval(Rat::zero(), length.clone())
}

pub fn leg_domain() -> Polyhedron {
    Polyhedron::orthant(1)
}

fn references_ok(c: &CurveType, r: &mut Report) -> bool {
    let ns = c.strata.len();
    let nv = c.vertices.len();
    let mut ok = true;
    for v in &c.vertices {
        let good = v.stratum < ns;
        r.record("references", format!("vertex {}", v.id), good, "unknown stratum index");
        ok &= good;
    }
    for e in &c.edges {
        let good = e.stratum < ns && e.flags.iter().all(|f| f.vertex < nv);
        r.record("references", format!("edge {}", e.id), good, "unknown stratum or vertex index");
        ok &= good;
    }
    for y in &c.legs {
        let good = y.stratum < ns && y.vertex < nv;
        r.record("references", format!("leg {}", y.id), good, "unknown stratum or vertex index");
        ok &= good;
    }
    ok
}

fn map_shape(r: &mut Report, subject: String, m: &AffineMap, src: usize, dst: usize) -> bool {
    let ok = m.source_dim() == src && m.target_dim() == dst;
    r.record(
        "dimensions",
        subject,
        ok,
        format!("expected {src}→{dst}, got {}→{}", m.source_dim(), m.target_dim()),
    );
    ok
}

fn shapes_ok(c: &CurveType, r: &mut Report) -> bool {
    let mut ok = true;
    for (i, v) in c.vertices.iter().enumerate() {
        let d = c.vertex_dim(i);
        let good = v.position.len() == d;
        r.record("dimensions", format!("vertex {} position", v.id), good, format!("expected {d} coordinates"));
        ok &= good;
        for (k, g) in v.monodromy.iter().enumerate() {
            ok &= map_shape(r, format!("vertex {} monodromy {k}", v.id), g, d, d);
        }
    }
    for (i, e) in c.edges.iter().enumerate() {
        let d = c.edge_polytope(i).ambient_dim();
        ok &= map_shape(r, format!("edge {} trajectory", e.id), &e.trajectory, 1, d);
        for (k, f) in e.flags.iter().enumerate() {
            ok &= map_shape(r, format!("edge {} flag {k}", e.id), &f.germ, c.vertex_dim(f.vertex), d);
        }
    }
    for (i, y) in c.legs.iter().enumerate() {
        let d = c.leg_polytope(i).ambient_dim();
        ok &= map_shape(r, format!("leg {} trajectory", y.id), &y.trajectory, 1, d);
        ok &= map_shape(r, format!("leg {} germ", y.id), &y.germ, c.vertex_dim(y.vertex), d);
    }
    ok
}

/// Checks every invariant of a curve type; failures carry a witness.
pub fn validate_curve_type(c: &CurveType) -> Report {
    let mut r = Report::new();
    r.record("has_vertex", "curve", !c.vertices.is_empty(), "a curve type needs at least one vertex");
    if c.vertices.is_empty() || !references_ok(c, &mut r) || !shapes_ok(c, &mut r) {
        return r;
    }
    r.record("connected", "dual graph", c.is_connected(), "the dual graph is disconnected");

    for s in &c.strata {
        r.record("stratum_nonempty", format!("stratum {}", s.id), !s.polytope.is_empty(), "polytope is empty");
    }

    for (i, v) in c.vertices.iter().enumerate() {
        let p = c.vertex_polytope(i);
        r.record(
            "position_in_stratum",
            format!("vertex {}", v.id),
            p.contains(&v.position),
            format!("{} is not in the stratum polytope", format_point(&v.position)),
        );
        for (k, g) in v.monodromy.iter().enumerate() {
            let subject = format!("vertex {} monodromy {k}", v.id);
            let inside = image(p, g).map(|im| p.contains_poly(&im)).unwrap_or(false);
            r.record("monodromy_preserves_stratum", subject.clone(), inside, "image leaves the stratum polytope");
            let moved = g.apply(&v.position);
            r.record(
                "monodromy_fixes_position",
                subject,
                moved == v.position,
                format!("{} ↦ {}", format_point(&v.position), format_point(&moved)),
            );
        }
    }

    for (i, e) in c.edges.iter().enumerate() {
        let subject = format!("edge {}", e.id);
        let ep = c.edge_polytope(i);
        let positive = e.length.is_positive();
        r.record("edge_length_positive", subject.clone(), positive, format!("length {}", e.length));
        if positive {
            let inside = image(&edge_domain(&e.length), &e.trajectory)
                .map(|im| ep.contains_poly(&im))
                .unwrap_or(false);
            r.record("trajectory_in_stratum", subject.clone(), inside, "trajectory leaves the edge stratum polytope");
        }
        for (k, f) in e.flags.iter().enumerate() {
            let fs = format!("edge {} flag {k}", e.id);
            let vp = c.vertex_polytope(f.vertex);
            let cert = is_iso_onto_face(&f.germ, vp, ep);
            r.record(
                "germ_iso_onto_face",
                fs.clone(),
                cert.is_some(),
                "germ is not an integral isomorphism onto a face of the edge stratum",
            );
            let at = if k == 0 { Rat::zero() } else { e.length.clone() };
            let lhs = f.germ.apply(&c.vertices[f.vertex].position);
            let rhs = e.trajectory.apply(&[at]);
            r.record(
                "endpoint_compatible",
                fs,
                lhs == rhs,
                format!("germ(position) = {} but trajectory endpoint = {}", format_point(&lhs), format_point(&rhs)),
            );
        }
    }

    for (i, y) in c.legs.iter().enumerate() {
        let subject = format!("leg {}", y.id);
        let lp = c.leg_polytope(i);
        let inside = image(&leg_domain(), &y.trajectory).map(|im| lp.contains_poly(&im)).unwrap_or(false);
        r.record("trajectory_in_stratum", subject.clone(), inside, "trajectory leaves the leg stratum polytope");
        let cert = is_iso_onto_face(&y.germ, c.vertex_polytope(y.vertex), lp);
        r.record(
            "germ_iso_onto_face",
            subject.clone(),
            cert.is_some(),
            "germ is not an integral isomorphism onto a face of the leg stratum",
        );
        let lhs = y.germ.apply(&c.vertices[y.vertex].position);
        let rhs = y.trajectory.apply(&[Rat::zero()]);
        r.record(
            "endpoint_compatible",
            subject,
            lhs == rhs,
            format!("germ(position) = {} but trajectory(0) = {}", format_point(&lhs), format_point(&rhs)),
        );
    }
    r
}

