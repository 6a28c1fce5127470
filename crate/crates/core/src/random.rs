//! Seeded generators for the randomized suites.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{CurveType, Edge, Flag, Leg, Vertex};
use crate::kernel::{preimage, AffineMap, Int, Polyhedron, Rat};
use crate::universal::UniversalExtension;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `1 ≤ p ≤ 9`, `1 ≤ q ≤ 4`.
pub fn random_length(rng: &mut TestRng) -> Rat {
    Rat::new(Int::from(rng.gen_range(1..=9)), Int::from(rng.gen_range(1..=4)))
}

fn point_edge(id: String, length: Rat, a: usize, b: usize) -> Edge {
    Edge {
        id,
        length,
        stratum: 0,
        trajectory: AffineMap::constant(1, vec![]),
        flags: [Flag { vertex: a, germ: AffineMap::identity(0) }, Flag { vertex: b, germ: AffineMap::identity(0) }],
    }
}

/// A connected curve over a smooth target: every stratum is a point. The
/// graph is a random spanning tree plus extra edges (loops and multi-edges
/// allowed), with at most `max_edges` edges.
pub fn random_smooth_curve(rng: &mut TestRng, max_edges: usize) -> CurveType {
    let mut c = CurveType::default();
    c.add_stratum("pt", Polyhedron::universe(0));
    let n = rng.gen_range(1..=max_edges.clamp(1, 5));
    for i in 0..n {
        c.vertices.push(Vertex { id: format!("v{i}"), stratum: 0, position: vec![], monodromy: vec![] });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        pairs.push((parent, order[i]));
    }
    let total = rng.gen_range(pairs.len().max(if n == 1 { 0 } else { 1 })..=max_edges.max(pairs.len()));
    while pairs.len() < total {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        c.edges.push(point_edge(format!("e{i}"), random_length(rng), a, b));
    }
    for i in 0..rng.gen_range(0..=2) {
        c.legs.push(Leg {
            id: format!("y{i}"),
            vertex: rng.gen_range(0..n),
            stratum: 0,
            trajectory: AffineMap::constant(1, vec![]),
            germ: AffineMap::identity(0),
        });
    }
    c
}

/// The swap of two coordinates or the cyclic shift of three.
pub fn coordinate_rotation(n: usize) -> AffineMap {
    let linear = (0..n)
        .map(|i| (0..n).map(|j| Int::from(((j + 1) % n == i) as i64)).collect())
        .collect();
    AffineMap::new(n, linear, vec![Rat::zero(); n]).expect("square matrix")
}

fn diagonal(n: usize, a: &Rat) -> Vec<Rat> {
    vec![a.clone(); n]
}

fn diagonal_ray(n: usize, start: &Rat, slope: i64) -> AffineMap {
    let linear = vec![vec![Int::from(slope)]; n];
    AffineMap::new(1, linear, diagonal(n, start)).expect("column")
}

/// A curve whose strata are `[0,∞)^n` for `n ∈ {2, 3}` and whose vertices
/// carry the coordinate rotation as monodromy. Positions and trajectories
/// stay on the diagonal, so they are fixed by the monodromy.
pub fn random_monodromy_curve(rng: &mut TestRng) -> CurveType {
    let n = rng.gen_range(2..=3);
    let mut c = CurveType::default();
    c.add_stratum("orthant", Polyhedron::orthant(n));
    let g = coordinate_rotation(n);
    let k = rng.gen_range(1..=3);
    let mut heights = vec![Rat::from_integer(Int::from(rng.gen_range(0..=3)))];
    let mut edges = Vec::new();
    for i in 1..k {
        // pick slope and length so the next height stays nonnegative
        loop {
            let s: i64 = rng.gen_range(-1..=2);
            let l = random_length(rng);
            let h = &heights[i - 1] + Rat::from_integer(Int::from(s)) * &l;
            if h >= Rat::zero() {
                edges.push((i - 1, i, s, l));
                heights.push(h);
                break;
            }
        }
    }
    for (i, h) in heights.iter().enumerate() {
        c.vertices.push(Vertex { id: format!("v{i}"), stratum: 0, position: diagonal(n, h), monodromy: vec![g.clone()] });
    }
    if rng.gen_bool(0.5) {
        let v = rng.gen_range(0..k);
        edges.push((v, v, 0, random_length(rng)));
    }
    for (i, (a, b, s, l)) in edges.into_iter().enumerate() {
        c.edges.push(Edge {
            id: format!("e{i}"),
            length: l,
            stratum: 0,
            trajectory: diagonal_ray(n, &heights[a], s),
            flags: [Flag { vertex: a, germ: AffineMap::identity(n) }, Flag { vertex: b, germ: AffineMap::identity(n) }],
        });
    }
    for i in 0..rng.gen_range(0..=2) {
        let v = rng.gen_range(0..k);
        c.legs.push(Leg {
            id: format!("y{i}"),
            vertex: v,
            stratum: 0,
            trajectory: diagonal_ray(n, &heights[v], rng.gen_range(0..=2)),
            germ: AffineMap::identity(n),
        });
    }
    c
}

/// Replaces each germ by its composition with a random word in the
/// monodromy generators of its vertex: another path class to the same node.
pub fn twist_germs(c: &CurveType, rng: &mut TestRng) -> CurveType {
    let mut out = c.clone();
    let word = |rng: &mut TestRng, v: usize| -> AffineMap {
        let gens = &c.vertices[v].monodromy;
        let mut w = AffineMap::identity(c.vertex_dim(v));
        if gens.is_empty() {
            return w;
        }
        for _ in 0..rng.gen_range(0..=3) {
            let g = gens.choose(rng).expect("nonempty");
            w = g.compose(&w).expect("endomorphism");
        }
        w
    };
    for e in &mut out.edges {
        for f in &mut e.flags {
            let w = word(rng, f.vertex);
            f.germ = f.germ.compose(&w).expect("germ source is the vertex stratum");
        }
    }
    for y in &mut out.legs {
        let w = word(rng, y.vertex);
        y.germ = y.germ.compose(&w).expect("germ source is the vertex stratum");
    }
    out
}

/// An affine map into `P_u` with its domain, as input to a pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSample {
    pub map: AffineMap,
    pub base: Polyhedron,
    pub basepoint: Vec<Rat>,
}

/// `m(y) = q_f + U K (y - b)` with `U` a lattice basis of the directions of
/// `P_u`, `K` a small random integer matrix and `P' = m⁻¹(P_u)`. Retries
/// until `P'` is full-dimensional, so `m` is determined by its values on it.
pub fn random_pullback(rng: &mut TestRng, u: &UniversalExtension) -> Option<PullbackSample> {
    let hull = u.pu.affine_hull()?;
    let n = u.pu.ambient_dim();
    let h = hull.directions.len();
    for _ in 0..50 {
        let k = rng.gen_range(1..=3);
        let kmat: Vec<Vec<i64>> = (0..h).map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        let linear: Vec<Vec<Int>> = (0..n)
            .map(|i| {
                (0..k)
                    .map(|j| (0..h).map(|t| &hull.directions[t][i] * Int::from(kmat[t][j])).sum())
                    .collect()
            })
            .collect();
        let b: Vec<Rat> = (0..k).map(|_| Rat::from_integer(Int::from(rng.gen_range(0..=2)))).collect();
        let lb: Vec<Rat> = linear
            .iter()
            .map(|row| row.iter().zip(&b).map(|(a, x)| Rat::from_integer(a.clone()) * x).sum())
            .collect();
        let translate: Vec<Rat> = u.basepoint.iter().zip(&lb).map(|(q, l)| q - l).collect();
        let map = AffineMap::new(k, linear, translate).expect("shapes agree");
        let base = preimage(&u.pu, &map).ok()?;
        if base.dimension() == k as i64 {
            return Some(PullbackSample { map, base, basepoint: b });
        }
    }
    None
}

/// Edge subsets without cycles (loops excluded), at most `limit` of them,
/// in increasing order of bitmask.
pub fn forest_subsets(c: &CurveType, limit: usize) -> Vec<Vec<usize>> {
    let m = c.edges.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m) {
        if out.len() >= limit {
            break;
        }
        let set: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let mut parent: Vec<usize> = (0..c.vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let acyclic = set.iter().all(|&e| {
            let (a, b) = (find(&mut parent, c.edges[e].flags[0].vertex), find(&mut parent, c.edges[e].flags[1].vertex));
            parent[a] = b;
            a != b
        });
        if acyclic {
            out.push(set);
        }
    }
    out
}
