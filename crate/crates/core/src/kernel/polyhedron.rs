use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use super::dd::{cone_generators, homogenize, HRow};
use super::lattice::kernel_basis;
use super::linalg::{rank, rref};
use super::rational::{
    clear_denominators, dot_ir, format_rat, int, primitive, rat_from_int, to_rats, Int, Rat,
};
use crate::error::{dims, Result};

/// `⟨normal, x⟩ ≥ offset`, or `= offset` when stored as an equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub normal: Vec<Int>,
    pub offset: Rat,
}

impl Constraint {
    pub fn new(normal: Vec<Int>, offset: Rat) -> Self {
        Constraint { normal, offset }
    }

    pub fn from_i64(normal: &[i64], offset: Rat) -> Self {
        Constraint { normal: normal.iter().map(|&x| int(x)).collect(), offset }
    }

    pub fn value(&self, x: &[Rat]) -> Rat {
        dot_ir(&self.normal, x)
    }

    /// Human-readable form such as `x0 - x1 + 2 x3 = 1/2`.
    pub fn describe(&self, relation: &str) -> String {
        let mut out = String::new();
        for (j, a) in self.normal.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag} ") };
            if out.is_empty() {
                if a.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if a.is_negative() { " - " } else { " + " });
            }
            out.push_str(&format!("{coef}x{j}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        format!("{out} {relation} {}", format_rat(&self.offset))
    }

    /// Divides through by the gcd of the normal.
    fn normalized(self) -> Self {
        let g = super::rational::gcd_all(&self.normal);
        if g.is_zero() || g.is_one() {
            return self;
        }
        let gr = rat_from_int(&g);
        Constraint { normal: primitive(&self.normal), offset: self.offset / gr }
    }
}

/// Vertices, extreme rays and a basis of the lineality space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vrep {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Int>>,
    pub lines: Vec<Vec<Int>>,
}

/// A point of the affine hull and a lattice basis of its direction space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineHull {
    pub point: Vec<Rat>,
    pub directions: Vec<Vec<Int>>,
}

/// A rational polyhedron with integral normals, stored by constraints.
pub struct Polyhedron {
    dim: usize,
    inequalities: Vec<Constraint>,
    equalities: Vec<Constraint>,
    canonical: bool,
    vrep: OnceLock<Vrep>,
}

impl Clone for Polyhedron {
    fn clone(&self) -> Self {
        Polyhedron {
            dim: self.dim,
            inequalities: self.inequalities.clone(),
            equalities: self.equalities.clone(),
            canonical: self.canonical,
            vrep: self.vrep.clone(),
        }
    }
}

/// Structural equality of the stored constraints. Compare `canonical()`
/// forms, or use `same_set`, to test equality of point sets.
impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.inequalities == other.inequalities
            && self.equalities == other.equalities
    }
}

impl Eq for Polyhedron {}

impl Polyhedron {
    pub fn new(dim: usize, inequalities: Vec<Constraint>, equalities: Vec<Constraint>) -> Result<Self> {
        for c in inequalities.iter().chain(&equalities) {
            if c.normal.len() != dim {
                return Err(dims("constraint normal", dim, c.normal.len()));
            }
        }
        Ok(Self::raw(dim, inequalities, equalities))
    }

    pub(crate) fn raw(dim: usize, inequalities: Vec<Constraint>, equalities: Vec<Constraint>) -> Self {
        Polyhedron {
            dim,
            inequalities: inequalities.into_iter().map(Constraint::normalized).collect(),
            equalities: equalities.into_iter().map(Constraint::normalized).collect(),
            canonical: false,
            vrep: OnceLock::new(),
        }
    }

    pub fn universe(dim: usize) -> Self {
        Self::raw(dim, vec![], vec![])
    }

    pub fn empty(dim: usize) -> Self {
        Self::raw(dim, vec![], vec![Constraint::new(vec![Int::zero(); dim], Rat::one())])
    }

    pub fn point(x: &[Rat]) -> Self {
        let n = x.len();
        let eqs = (0..n).map(|i| Constraint::new(unit(n, i), x[i].clone())).collect();
        Self::raw(n, vec![], eqs)
    }

    /// `[0,∞)^n`.
    pub fn orthant(n: usize) -> Self {
        let ineqs = (0..n).map(|i| Constraint::new(unit(n, i), Rat::zero())).collect();
        Self::raw(n, ineqs, vec![])
    }

    /// `[lo, hi] ⊂ R`.
    pub fn interval(lo: Rat, hi: Rat) -> Self {
        Self::raw(
            1,
            vec![Constraint::new(vec![int(1)], lo), Constraint::new(vec![int(-1)], -hi)],
            vec![],
        )
    }

    pub fn product(factors: &[&Polyhedron]) -> Self {
        let dim: usize = factors.iter().map(|p| p.dim).sum();
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        let mut off = 0;
        for p in factors {
            let lift = |c: &Constraint| {
                let mut n = vec![Int::zero(); dim];
                n[off..off + p.dim].clone_from_slice(&c.normal);
                Constraint::new(n, c.offset.clone())
            };
            ineqs.extend(p.inequalities.iter().map(lift));
            eqs.extend(p.equalities.iter().map(lift));
            off += p.dim;
        }
        Self::raw(dim, ineqs, eqs)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Self> {
        if self.dim != other.dim {
            return Err(dims("intersection", self.dim, other.dim));
        }
        Ok(self.with_constraints(other.inequalities.clone(), other.equalities.clone()))
    }

    /// Adds constraints of the same ambient dimension.
    pub fn with_constraints(&self, ineqs: Vec<Constraint>, eqs: Vec<Constraint>) -> Self {
        let mut i = self.inequalities.clone();
        i.extend(ineqs);
        let mut e = self.equalities.clone();
        e.extend(eqs);
        Self::raw(self.dim, i, e)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.inequalities.iter().all(|c| c.value(x) >= c.offset)
            && self.equalities.iter().all(|c| c.value(x) == c.offset)
    }

    /// Canonical generators, computed once.
    pub fn vrep(&self) -> &Vrep {
        self.vrep.get_or_init(|| compute_vrep(self))
    }

    pub fn is_empty(&self) -> bool {
        self.vrep().vertices.is_empty()
    }

    /// Affine dimension; `-1` for the empty set.
    pub fn dimension(&self) -> i64 {
        let v = self.vrep();
        if v.vertices.is_empty() {
            return -1;
        }
        generator_rank(v, self.dim) as i64 - 1
    }

    pub fn affine_hull(&self) -> Option<AffineHull> {
        let c = self.canonical();
        let point = c.vrep().vertices.first()?.clone();
        let normals: Vec<Vec<Int>> = c.equalities.iter().map(|e| e.normal.clone()).collect();
        Some(AffineHull { point, directions: kernel_basis(&normals, self.dim) })
    }

    /// Whether `other ⊆ self`.
    pub fn contains_poly(&self, other: &Polyhedron) -> bool {
        if other.dim != self.dim {
            return false;
        }
        let v = other.vrep();
        if v.vertices.is_empty() {
            return true;
        }
        let hom = |n: &[Int], r: &[Int]| -> Int { n.iter().zip(r).map(|(a, b)| a * b).sum() };
        v.vertices.iter().all(|x| self.contains(x))
            && v.rays.iter().all(|r| {
                self.inequalities.iter().all(|c| !hom(&c.normal, r).is_negative())
                    && self.equalities.iter().all(|c| hom(&c.normal, r).is_zero())
            })
            && v.lines.iter().all(|l| {
                self.inequalities
                    .iter()
                    .chain(&self.equalities)
                    .all(|c| hom(&c.normal, l).is_zero())
            })
    }

    pub fn same_set(&self, other: &Polyhedron) -> bool {
        self.dim == other.dim && self.canonical() == other.canonical()
    }

    /// Unique representation of the point set: primitive facet normals
    /// reduced modulo the affine hull, an echelon basis of the hull, and
    /// lexicographic order.
    pub fn canonical(&self) -> Polyhedron {
        if self.canonical {
            return self.clone();
        }
        let n = self.dim;
        let v = self.vrep();
        if v.vertices.is_empty() {
            let mut e = Polyhedron::empty(n);
            e.canonical = true;
            let _ = e.vrep.set(Vrep::default());
            return e;
        }

        // homogenized generators: (v, 1), (r, 0), (l, 0)
        let mut gens: Vec<Vec<Rat>> = Vec::new();
        for x in &v.vertices {
            let mut g = x.clone();
            g.push(Rat::one());
            gens.push(g);
        }
        for r in v.rays.iter().chain(&v.lines) {
            let mut g = to_rats(r);
            g.push(Rat::zero());
            gens.push(g);
        }
        let hull_rows = rref(rref(gens.clone(), n + 1).nullspace(), n + 1);
        let equalities: Vec<Constraint> = hull_rows.rows.iter().map(|r| to_constraint(r, n)).collect();
        let dimension = n - equalities.len();

        let mut ineqs: Vec<Constraint> = Vec::new();
        for c in &self.inequalities {
            let mut row: Vec<Rat> = to_rats(&c.normal);
            row.push(-c.offset.clone());
            hull_rows.reduce(&mut row);
            if row[..n].iter().all(Zero::is_zero) {
                continue;
            }
            let cand = to_constraint(&row, n);
            let tight: Vec<Vec<Rat>> = gens
                .iter()
                .filter(|g| {
                    let val: Rat = dot_ir(&cand.normal, &g[..n]) - &cand.offset * &g[n];
                    val.is_zero()
                })
                .cloned()
                .collect();
            if rank(&tight, n + 1) == dimension {
                ineqs.push(cand);
            }
        }
        ineqs.sort();
        ineqs.dedup();

        let out = Polyhedron {
            dim: n,
            inequalities: ineqs,
            equalities,
            canonical: true,
            vrep: OnceLock::new(),
        };
        let _ = out.vrep.set(v.clone());
        out
    }

    /// Average of the vertices plus the sum of the extreme rays: a point in
    /// the relative interior, chosen deterministically.
    pub fn relative_interior_point(&self) -> Option<Vec<Rat>> {
        let v = self.vrep();
        let k = v.vertices.len();
        if k == 0 {
            return None;
        }
        let kr = Rat::from_integer(Int::from(k));
        let mut x = vec![Rat::zero(); self.dim];
        for p in &v.vertices {
            for (a, b) in x.iter_mut().zip(p) {
                *a += b;
            }
        }
        for a in x.iter_mut() {
            *a /= &kr;
        }
        for r in &v.rays {
            for (a, b) in x.iter_mut().zip(r) {
                *a += rat_from_int(b);
            }
        }
        Some(x)
    }

    /// Indices of the inequalities that hold with equality at `x`.
    pub fn tight_inequalities_at(&self, x: &[Rat]) -> Vec<usize> {
        (0..self.inequalities.len())
            .filter(|&i| self.inequalities[i].value(x) == self.inequalities[i].offset)
            .collect()
    }

    /// The face cut out by turning the listed inequalities into equalities.
    pub fn face(&self, tight: &[usize]) -> Polyhedron {
        let eqs = tight.iter().map(|&i| self.inequalities[i].clone()).collect();
        self.with_constraints(vec![], eqs)
    }

    /// Whether `x` lies in the relative interior.
    pub fn in_relative_interior(&self, x: &[Rat]) -> bool {
        let c = self.canonical();
        c.contains(x) && c.inequalities.iter().all(|ci| ci.value(x) > ci.offset)
    }
}

fn unit(n: usize, i: usize) -> Vec<Int> {
    (0..n).map(|j| Int::from((i == j) as i64)).collect()
}

/// A homogeneous rational row `(normal, -offset)` scaled by a positive factor
/// so the normal is primitive and integral.
fn to_constraint(row: &[Rat], n: usize) -> Constraint {
    let (ints, m) = clear_denominators(&row[..n]);
    let g = super::rational::gcd_all(&ints);
    let scale = rat_from_int(&m) / rat_from_int(&g);
    Constraint::new(primitive(&ints), -(&row[n] * scale))
}

fn generator_rank(v: &Vrep, n: usize) -> usize {
    let mut gens: Vec<Vec<Rat>> = Vec::new();
    for x in &v.vertices {
        let mut g = x.clone();
        g.push(Rat::one());
        gens.push(g);
    }
    for r in v.rays.iter().chain(&v.lines) {
        let mut g = to_rats(r);
        g.push(Rat::zero());
        gens.push(g);
    }
    rank(&gens, n + 1)
}

fn compute_vrep(p: &Polyhedron) -> Vrep {
    let n = p.dim;
    let mut rows: Vec<HRow> = p
        .equalities
        .iter()
        .map(|c| HRow { row: homogenize(&c.normal, &c.offset), equality: true })
        .collect();
    let mut t = vec![Int::zero(); n + 1];
    t[n] = Int::one();
    rows.push(HRow { row: t, equality: false });
    rows.extend(
        p.inequalities
            .iter()
            .map(|c| HRow { row: homogenize(&c.normal, &c.offset), equality: false }),
    );
    let cone = cone_generators(n + 1, &rows);

    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in cone.rays {
        if r[n].is_positive() {
            let t = rat_from_int(&r[n]);
            vertices.push(r[..n].iter().map(|x| rat_from_int(x) / &t).collect::<Vec<Rat>>());
        } else {
            rays.push(r[..n].to_vec());
        }
    }
    if vertices.is_empty() {
        return Vrep::default();
    }
    let lines_rat: Vec<Vec<Rat>> = cone.lines.iter().map(|l| to_rats(&l[..n])).collect();
    let lr = rref(lines_rat, n);
    let lines: Vec<Vec<Int>> = lr.rows.iter().map(|r| primitive(&clear_denominators(r).0)).collect();
    for x in vertices.iter_mut() {
        lr.reduce(x);
    }
    let mut rays: Vec<Vec<Int>> = rays
        .into_iter()
        .filter_map(|r| {
            let mut q = to_rats(&r);
            lr.reduce(&mut q);
            let (ints, _) = clear_denominators(&q);
            if ints.iter().all(Zero::is_zero) {
                None
            } else {
                Some(primitive(&ints))
            }
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    rays.sort();
    rays.dedup();
    Vrep { vertices, rays, lines }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polyhedron(R^{}", self.dim)?;
        let show = |c: &Constraint| {
            let n: Vec<String> = c.normal.iter().map(|x| x.to_string()).collect();
            format!("[{}]", n.join(" "))
        };
        for c in &self.equalities {
            write!(f, "; {} = {}", show(c), format_rat(&c.offset))?;
        }
        for c in &self.inequalities {
            write!(f, "; {} >= {}", show(c), format_rat(&c.offset))?;
        }
        write!(f, ")")
    }
}
