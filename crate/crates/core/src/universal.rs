//! The universal extension `P_u` of a curve's tropical structure.

use std::ops::Range;

use num_traits::Zero;

use crate::curve::{edge_domain, leg_domain, CurveType};
use crate::error::{Error, Result};
use crate::extension::{
    leg_fiber_embed, leg_polyhedron, ExtendedStructure,
};
use crate::kernel::{
    affine_interpolate, equalizer, fixed_locus, image, linalg, rational::to_rats, AffineMap,
    Constraint, InterpolationConstraint, Polyhedron, Rat,
};
use crate::report::Report;

/// The product of the vertex strata and one `[0,∞)` per edge, with its
/// coordinate labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaffoldQ {
    pub poly: Polyhedron,
    pub vertex_blocks: Vec<Range<usize>>,
    pub edge_coords: Vec<usize>,
    pub basepoint: Vec<Rat>,
}

impl ScaffoldQ {
    pub fn dim(&self) -> usize {
        self.poly.ambient_dim()
    }

    /// `q ↦ q_v`.
    pub fn vertex_projection(&self, v: usize) -> AffineMap {
        AffineMap::select(self.dim(), &self.vertex_blocks[v].clone().collect::<Vec<_>>())
    }

    /// `q ↦ q_e`.
    pub fn edge_projection(&self, e: usize) -> AffineMap {
        AffineMap::select(self.dim(), &[self.edge_coords[e]])
    }

    /// Coordinates of `Q` other than the one of edge `e`, in order.
    fn without(&self, e: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&j| j != self.edge_coords[e]).collect()
    }
}

pub fn build_q(c: &CurveType) -> ScaffoldQ {
    let mut factors: Vec<&Polyhedron> = Vec::new();
    let mut vertex_blocks = Vec::new();
    let mut basepoint = Vec::new();
    let mut off = 0;
    for (i, v) in c.vertices.iter().enumerate() {
        let p = c.vertex_polytope(i);
        factors.push(p);
        vertex_blocks.push(off..off + p.ambient_dim());
        off += p.ambient_dim();
        basepoint.extend(v.position.iter().cloned());
    }
    let ray = Polyhedron::orthant(1);
    let mut edge_coords = Vec::new();
    for e in &c.edges {
        factors.push(&ray);
        edge_coords.push(off);
        off += 1;
        basepoint.push(e.length.clone());
    }
    ScaffoldQ { poly: Polyhedron::product(&factors).canonical(), vertex_blocks, edge_coords, basepoint }
}

/// The part of `Q` fixed by every monodromy generator.
pub fn build_q1(c: &CurveType, q: &ScaffoldQ) -> Result<Polyhedron> {
    let mut fixed = Vec::new();
    for (i, v) in c.vertices.iter().enumerate() {
        fixed.push(fixed_locus(c.vertex_polytope(i), &v.monodromy)?);
    }
    let ray = Polyhedron::orthant(1);
    let mut factors: Vec<&Polyhedron> = fixed.iter().collect();
    factors.extend(std::iter::repeat_n(&ray, c.edges.len()));
    let q1 = Polyhedron::product(&factors).canonical();
    debug_assert_eq!(q1.ambient_dim(), q.dim());
    Ok(q1)
}

/// `Q(e) = [0,∞)² × (Q without the factor of e)`, coordinates `(a, b, q_{-e})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeScaffold {
    pub poly: Polyhedron,
    /// The two inclusions `Q → Q(e)`: index 0 puts `q_e` on `b` with `a = 0`,
    /// index 1 puts `q_e` on `a` with `b = 0`.
    pub inclusions: [AffineMap; 2],
    /// `t ↦ (t, ℓ - t, q_f without e)`.
    pub fiber_embed: AffineMap,
}

pub fn node_scaffold(c: &CurveType, q: &ScaffoldQ, e: usize) -> NodeScaffold {
    let rest = q.without(e);
    let n = q.dim();
    let qe = q.edge_coords[e];
    let mut factors: Vec<Polyhedron> = vec![Polyhedron::orthant(2)];
    for i in 0..c.vertices.len() {
        factors.push(c.vertex_polytope(i).clone());
    }
    for j in 0..c.edges.len() {
        if j != e {
            factors.push(Polyhedron::orthant(1));
        }
    }
    let refs: Vec<&Polyhedron> = factors.iter().collect();
    let poly = Polyhedron::product(&refs).canonical();

    let zero = AffineMap::constant(n, vec![Rat::zero()]);
    let pe = AffineMap::select(n, &[qe]);
    let pr = AffineMap::select(n, &rest);
    let iota0 = AffineMap::stack(n, &[&zero, &pe, &pr]).expect("shapes agree");
    let iota1 = AffineMap::stack(n, &[&pe, &zero, &pr]).expect("shapes agree");

    let len = c.edges[e].length.clone();
    let mut fiber_point: Vec<Rat> = vec![Rat::zero(), len];
    fiber_point.extend(rest.iter().map(|&j| q.basepoint[j].clone()));
    let mut linear = vec![vec![num_bigint::BigInt::zero()]; fiber_point.len()];
    linear[0][0] = 1.into();
    linear[1][0] = (-1).into();
    let fiber_embed = AffineMap::new(1, linear, fiber_point).expect("shapes agree");
    NodeScaffold { poly, inclusions: [iota0, iota1], fiber_embed }
}

/// The node interpolant for flag `k` of edge `e`: the affine map on `Q(e)`
/// that restricts to the transported vertex projection on the flag's face
/// and to the trajectory on the fiber over `q_f`.
pub fn build_interpolant(c: &CurveType, q: &ScaffoldQ, e: usize, k: usize) -> Result<AffineMap> {
    let ns = node_scaffold(c, q, e);
    interpolant_on(c, q, &ns, e, k)
}

fn interpolant_on(c: &CurveType, q: &ScaffoldQ, ns: &NodeScaffold, e: usize, k: usize) -> Result<AffineMap> {
    let edge = &c.edges[e];
    let flag = &edge.flags[k];
    let constraints = [
        InterpolationConstraint {
            embed: ns.inclusions[k].clone(),
            sub: q.poly.clone(),
            value: flag.germ.compose(&q.vertex_projection(flag.vertex))?,
        },
        InterpolationConstraint {
            embed: ns.fiber_embed.clone(),
            sub: edge_domain(&edge.length),
            value: edge.trajectory.clone(),
        },
    ];
    affine_interpolate(&constraints, &ns.poly)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalExtension {
    pub curve: CurveType,
    pub scaffold: ScaffoldQ,
    pub q1: Polyhedron,
    pub pu: Polyhedron,
    pub rho: Vec<AffineMap>,
    pub positions: Vec<AffineMap>,
    /// Per edge, the interpolants of flag 0 and flag 1 on `Q(e)`.
    pub interpolants: Vec<[AffineMap; 2]>,
    pub structure: ExtendedStructure,
    pub basepoint: Vec<Rat>,
}

/// `(p, a, b) ↦ (a, b, p_{-e})`, from node polytope coordinates to `Q(e)`.
fn node_to_scaffold(q: &ScaffoldQ, e: usize) -> AffineMap {
    let n = q.dim();
    let mut idx = vec![n, n + 1];
    idx.extend(q.without(e));
    AffineMap::select(n + 2, &idx)
}

pub fn build_pu(c: &CurveType) -> Result<UniversalExtension> {
    let q = build_q(c);
    let q1 = build_q1(c, &q)?;
    let mut pu = q1.clone();
    let mut interpolants = Vec::new();
    for (e, edge) in c.edges.iter().enumerate() {
        let ns = node_scaffold(c, &q, e);
        let a = [interpolant_on(c, &q, &ns, e, 0)?, interpolant_on(c, &q, &ns, e, 1)?];
        for k in 0..2 {
            // A_γk on the opposite face equals the opposite vertex data
            let other = &edge.flags[1 - k];
            let lhs = a[k].compose(&ns.inclusions[1 - k])?;
            let rhs = other.germ.compose(&q.vertex_projection(other.vertex))?;
            pu = equalizer(&pu, &lhs, &rhs)?;
        }
        interpolants.push(a);
    }
    if !pu.contains(&q.basepoint) {
        return Err(Error::Internal("the curve's own point is not in P_u".into()));
    }
    let rho: Vec<AffineMap> = (0..c.edges.len()).map(|e| q.edge_projection(e)).collect();
    let positions: Vec<AffineMap> = (0..c.vertices.len()).map(|v| q.vertex_projection(v)).collect();

    let edge_targets = (0..c.edges.len())
        .map(|e| interpolants[e][0].compose(&node_to_scaffold(&q, e)))
        .collect::<Result<Vec<_>>>()?;
    let leg_poly = leg_polyhedron(&pu);
    let mut leg_targets = Vec::new();
    for y in &c.legs {
        let n = q.dim();
        let at_zero = AffineMap::stack(
            n,
            &[&AffineMap::identity(n), &AffineMap::constant(n, vec![Rat::zero()])],
        )?;
        let constraints = [
            InterpolationConstraint {
                embed: at_zero,
                sub: pu.clone(),
                value: y.germ.compose(&q.vertex_projection(y.vertex))?,
            },
            InterpolationConstraint {
                embed: leg_fiber_embed(&q.basepoint),
                sub: leg_domain(),
                value: y.trajectory.clone(),
            },
        ];
        leg_targets.push(affine_interpolate(&constraints, &leg_poly)?);
    }
    let structure = ExtendedStructure::standard(
        pu.clone(),
        q.basepoint.clone(),
        positions.clone(),
        rho.clone(),
        edge_targets,
        leg_targets,
    )?;

    for (e, ed) in structure.edges.iter().enumerate() {
        let im = image(&ed.poly, &ed.to_target)?;
        if !c.edge_polytope(e).contains_poly(&im) {
            return Err(Error::ImageEscape(format!("node value of edge {} leaves its stratum", c.edges[e].id)));
        }
    }
    for (i, ld) in structure.legs.iter().enumerate() {
        let im = image(&ld.poly, &ld.to_target)?;
        if !c.leg_polytope(i).contains_poly(&im) {
            return Err(Error::ImageEscape(format!("leg value of {} leaves its stratum", c.legs[i].id)));
        }
    }

    let basepoint = q.basepoint.clone();
    Ok(UniversalExtension { curve: c.clone(), scaffold: q, q1, pu, rho, positions, interpolants, structure, basepoint })
}

impl UniversalExtension {
    /// The joint map `(ρ_e…, A_x…)` on `P_u`.
    pub fn joint_map(&self) -> AffineMap {
        let mut parts: Vec<&AffineMap> = self.rho.iter().collect();
        parts.extend(self.positions.iter());
        AffineMap::stack(self.scaffold.dim(), &parts).expect("common source")
    }

    /// Equalities of `P_u` that do not already hold on all of `Q`.
    pub fn cutting_equations(&self) -> Vec<Constraint> {
        let q = &self.scaffold.poly;
        self.pu
            .canonical()
            .equalities()
            .iter()
            .filter(|eq| {
                let holds = q.with_constraints(vec![], vec![(*eq).clone()]);
                !holds.same_set(q)
            })
            .cloned()
            .collect()
    }

    /// Inequalities of `P_u` not already implied on `Q ∩ aff(P_u)`.
    pub fn cutting_inequalities(&self) -> Vec<Constraint> {
        let pc = self.pu.canonical();
        let slice = self.scaffold.poly.with_constraints(vec![], pc.equalities().to_vec());
        pc.inequalities()
            .iter()
            .filter(|c| !slice.with_constraints(vec![(*c).clone()], vec![]).same_set(&slice))
            .cloned()
            .collect()
    }
}

/// Injectivity of the joint edge-length and position map on `P_u`, and the
/// equations cutting `P_u` out of `Q`.
pub fn embedding_report(u: &UniversalExtension) -> Report {
    let mut r = Report::new();
    let joint = u.joint_map();
    match u.pu.affine_hull() {
        Some(h) => {
            let cols: Vec<Vec<Rat>> = h.directions.iter().map(|d| to_rats(&joint.apply_linear_int(d))).collect();
            let rk = linalg::rank(&cols, joint.target_dim());
            r.record(
                "joint_map_injective",
                "P_u",
                rk == h.directions.len(),
                format!("rank {rk} on a {}-dimensional hull", h.directions.len()),
            );
        }
        None => r.record("joint_map_injective", "P_u", false, "P_u is empty"),
    }
    let eqs = u.cutting_equations();
    let text: Vec<String> = eqs.iter().map(|c| c.describe("=")).collect();
    r.note(
        "cutting_equations",
        "P_u",
        true,
        if text.is_empty() { "none".to_string() } else { text.join("; ") },
    );
    r
}
