//! Brute-force vertex and ray enumeration over the rationals, written
//! independently of the library's double description and elimination code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use tropext::kernel::{AffineMap, Polyhedron};

pub type Q = BigRational;

/// `a·x ≥ b` rows and `a·x = b` rows.
#[derive(Debug, Clone)]
pub struct H {
    pub dim: usize,
    pub ineq: Vec<(Vec<Q>, Q)>,
    pub eq: Vec<(Vec<Q>, Q)>,
}

#[derive(Debug, Clone, Default)]
pub struct Gens {
    pub vertices: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
    pub lines: Vec<Vec<Q>>,
}

fn q(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

pub fn h_of(p: &Polyhedron) -> H {
    let conv = |cs: &[tropext::kernel::Constraint]| {
        cs.iter().map(|c| (c.normal.iter().map(q).collect(), c.offset.clone())).collect()
    };
    H { dim: p.ambient_dim(), ineq: conv(p.inequalities()), eq: conv(p.equalities()) }
}

fn dot(a: &[Q], x: &[Q]) -> Q {
    a.iter().zip(x).fold(Q::zero(), |acc, (u, v)| acc + u * v)
}

/// Basis of `{z : rows·z = 0}` by Gauss–Jordan elimination.
pub fn nullspace(rows: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut z = vec![Q::zero(); n];
        z[free] = Q::one();
        for (i, &pc) in pivots.iter().enumerate() {
            z[pc] = -m[i][free].clone();
        }
        out.push(z);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn normalize(mut z: Vec<Q>) -> Vec<Q> {
    if let Some(f) = z.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        for x in z.iter_mut() {
            *x = &*x / &f;
        }
    }
    z
}

/// Generators of the polyhedron: vertices, extreme rays of the recession
/// cone modulo lines, and a basis of the lineality space.
pub fn generators(h: &H) -> Gens {
    let d = h.dim + 1;
    let hom = |(a, b): &(Vec<Q>, Q)| {
        let mut r = a.clone();
        r.push(-b.clone());
        r
    };
    let mut t_row = vec![Q::zero(); d];
    t_row[h.dim] = Q::one();
    let mut ineq: Vec<Vec<Q>> = h.ineq.iter().map(hom).collect();
    ineq.push(t_row);
    let eq: Vec<Vec<Q>> = h.eq.iter().map(hom).collect();
    let all: Vec<Vec<Q>> = ineq.iter().chain(&eq).cloned().collect();
    let lines = nullspace(&all, d);
    let mut fixed = eq.clone();
    fixed.extend(lines.iter().cloned());
    let base_rank = d - nullspace(&fixed, d).len();
    let mut rays: Vec<Vec<Q>> = Vec::new();
    if base_rank < d {
        let k = d - 1 - base_rank;
        for subset in combinations(ineq.len(), k) {
            let mut rows = fixed.clone();
            rows.extend(subset.iter().map(|&i| ineq[i].clone()));
            let ns = nullspace(&rows, d);
            if ns.len() != 1 {
                continue;
            }
            for sign in [Q::one(), -Q::one()] {
                let z: Vec<Q> = ns[0].iter().map(|x| x * &sign).collect();
                if ineq.iter().all(|r| !dot(r, &z).is_negative()) {
                    let z = normalize(z);
                    if !rays.contains(&z) {
                        rays.push(z);
                    }
                }
            }
        }
    }
    let mut g = Gens::default();
    for z in rays {
        let t = z[h.dim].clone();
        let x = z[..h.dim].to_vec();
        if t.is_positive() {
            g.vertices.push(x.iter().map(|v| v / &t).collect());
        } else {
            g.rays.push(x);
        }
    }
    if g.vertices.is_empty() {
        // only the recession cone survives at t = 0; the set itself is empty
        return Gens::default();
    }
    g.lines = lines.into_iter().map(|z| z[..h.dim].to_vec()).collect();
    g
}

pub fn is_empty(h: &H) -> bool {
    generators(h).vertices.is_empty()
}

pub fn point_in(h: &H, x: &[Q]) -> bool {
    h.ineq.iter().all(|(a, b)| dot(a, x) >= *b) && h.eq.iter().all(|(a, b)| dot(a, x) == *b)
}

pub fn ray_in(h: &H, r: &[Q]) -> bool {
    h.ineq.iter().all(|(a, _)| !dot(a, r).is_negative()) && h.eq.iter().all(|(a, _)| dot(a, r).is_zero())
}

/// Whether every generator of `g` lies in the polyhedron `h`.
pub fn gens_in(g: &Gens, h: &H) -> bool {
    g.vertices.iter().all(|v| point_in(h, v))
        && g.rays.iter().all(|r| ray_in(h, r))
        && g.lines.iter().all(|l| ray_in(h, l) && ray_in(h, &l.iter().map(|x| -x).collect::<Vec<_>>()))
}

/// `h1 ⊆ h2`, decided through the generators of `h1`.
pub fn subset(h1: &H, h2: &H) -> bool {
    gens_in(&generators(h1), h2)
}

pub fn same_set(h1: &H, h2: &H) -> bool {
    subset(h1, h2) && subset(h2, h1)
}

fn lin(a: &AffineMap) -> Vec<Vec<Q>> {
    a.linear().iter().map(|r| r.iter().map(q).collect()).collect()
}

pub fn apply(a: &AffineMap, x: &[Q]) -> Vec<Q> {
    lin(a).iter().zip(a.translate()).map(|(r, t)| dot(r, x) + t).collect()
}

pub fn apply_linear(a: &AffineMap, x: &[Q]) -> Vec<Q> {
    lin(a).iter().map(|r| dot(r, x)).collect()
}

/// `{x : a(x) ∈ h}` by substitution.
pub fn preimage(h: &H, a: &AffineMap) -> H {
    let l = lin(a);
    let n = a.source_dim();
    let pull = |(c, b): &(Vec<Q>, Q)| {
        let normal: Vec<Q> = (0..n).map(|j| (0..l.len()).fold(Q::zero(), |acc, i| acc + &c[i] * &l[i][j])).collect();
        (normal, b - dot(c, a.translate()))
    };
    H { dim: n, ineq: h.ineq.iter().map(pull).collect(), eq: h.eq.iter().map(pull).collect() }
}

/// The recession cone `{r : a·r ≥ 0, e·r = 0}`.
pub fn recession(h: &H) -> H {
    let z = |(a, _): &(Vec<Q>, Q)| (a.clone(), Q::zero());
    H { dim: h.dim, ineq: h.ineq.iter().map(z).collect(), eq: h.eq.iter().map(z).collect() }
}

fn with_fiber(h: &H, rows: &[Vec<Q>], value: &[Q]) -> H {
    let mut out = h.clone();
    out.eq.extend(rows.iter().cloned().zip(value.iter().cloned()));
    out
}

/// Whether `image` is exactly `a(h)`: the images of the generators of `h`
/// lie in `image`, and every generator of `image` has a preimage.
pub fn image_matches(h: &H, a: &AffineMap, image: &H) -> bool {
    let g = generators(h);
    let forward = g.vertices.iter().all(|v| point_in(image, &apply(a, v)))
        && g.rays.iter().all(|r| ray_in(image, &apply_linear(a, r)))
        && g.lines.iter().all(|l| {
            let m = apply_linear(a, l);
            ray_in(image, &m) && ray_in(image, &m.iter().map(|x| -x).collect::<Vec<_>>())
        });
    if !forward {
        return false;
    }
    let l = lin(a);
    let lift = |target: &[Q]| -> Vec<Q> { target.iter().zip(a.translate()).map(|(x, t)| x - t).collect() };
    let gi = generators(image);
    let rec = recession(h);
    gi.vertices.iter().all(|v| !is_empty(&with_fiber(h, &l, &lift(v))))
        && gi.rays.iter().all(|r| !is_empty(&with_fiber(&rec, &l, r)))
        && gi.lines.iter().all(|r| {
            !is_empty(&with_fiber(&rec, &l, r))
                && !is_empty(&with_fiber(&rec, &l, &r.iter().map(|x| -x).collect::<Vec<_>>()))
        })
}
