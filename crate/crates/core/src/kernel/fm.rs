//! Fourier–Motzkin projection of constraint systems.

use num_traits::{Signed, Zero};

use super::polyhedron::{Constraint, Polyhedron};
use super::rational::{gcd_all, primitive, rat_from_int, Int, Rat};

/// Beyond this many inequalities the intermediate system is pruned to its
/// facets before the next elimination.
const PRUNE_AT: usize = 16;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    normal: Vec<Int>,
    offset: Rat,
}

impl Row {
    fn normalize(mut self) -> Self {
        let g = gcd_all(&self.normal);
        if !g.is_zero() && g != Int::from(1) {
            self.offset /= rat_from_int(&g);
            self.normal = primitive(&self.normal);
        }
        self
    }
}

/// `pa * a + pb * b` for nonnegative `pa` (used with `pb` of either sign on
/// equalities, positive on inequalities).
fn combine(pa: &Int, a: &Row, pb: &Int, b: &Row) -> Row {
    Row {
        normal: a.normal.iter().zip(&b.normal).map(|(x, y)| pa * x + pb * y).collect(),
        offset: &a.offset * rat_from_int(pa) + &b.offset * rat_from_int(pb),
    }
    .normalize()
}

/// Projects `p` onto the coordinates listed in `keep` (in that order),
/// eliminating all others.
pub(crate) fn project(p: &Polyhedron, keep: &[usize]) -> Polyhedron {
    let n = p.ambient_dim();
    let mut ineqs: Vec<Row> = p
        .inequalities()
        .iter()
        .map(|c| Row { normal: c.normal.clone(), offset: c.offset.clone() })
        .collect();
    let mut eqs: Vec<Row> = p
        .equalities()
        .iter()
        .map(|c| Row { normal: c.normal.clone(), offset: c.offset.clone() })
        .collect();
    let mut remaining: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();

    substitute(&mut remaining, &mut ineqs, &mut eqs);
    if let Some(empty) = clean(&mut ineqs, &mut eqs, n) {
        return empty.restrict(keep);
    }

    while !remaining.is_empty() {
        let (k, _) = remaining
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let pos = ineqs.iter().filter(|r| r.normal[j].is_positive()).count();
                let neg = ineqs.iter().filter(|r| r.normal[j].is_negative()).count();
                (k, pos * neg + pos + neg)
            })
            .min_by_key(|&(k, cost)| (cost, k))
            .expect("nonempty");
        let j = remaining.remove(k);
        let (pos, rest): (Vec<Row>, Vec<Row>) =
            ineqs.into_iter().partition(|r| r.normal[j].is_positive());
        let (neg, zero): (Vec<Row>, Vec<Row>) =
            rest.into_iter().partition(|r| r.normal[j].is_negative());
        ineqs = zero;
        for a in &pos {
            for b in &neg {
                let pa = -b.normal[j].clone();
                let pb = a.normal[j].clone();
                ineqs.push(combine(&pa, a, &pb, b));
            }
        }
        if let Some(empty) = clean(&mut ineqs, &mut eqs, n) {
            return empty.restrict(keep);
        }
        if ineqs.len() > PRUNE_AT {
            let c = to_poly(n, &ineqs, &eqs).canonical();
            if c.is_empty() {
                return Polyhedron::empty(keep.len());
            }
            ineqs = c.inequalities().iter().map(|c| Row { normal: c.normal.clone(), offset: c.offset.clone() }).collect();
            eqs = c.equalities().iter().map(|c| Row { normal: c.normal.clone(), offset: c.offset.clone() }).collect();
            // pruning can expose implicit equalities in the remaining variables
            substitute(&mut remaining, &mut ineqs, &mut eqs);
            if let Some(empty) = clean(&mut ineqs, &mut eqs, n) {
                return empty.restrict(keep);
            }
        }
    }
    to_poly(n, &ineqs, &eqs).restrict(keep)
}

/// Eliminates every remaining variable that some equality can solve for.
fn substitute(remaining: &mut Vec<usize>, ineqs: &mut [Row], eqs: &mut Vec<Row>) {
    let mut k = 0;
    while k < remaining.len() {
        let j = remaining[k];
        let Some(ei) = eqs.iter().position(|e| !e.normal[j].is_zero()) else {
            k += 1;
            continue;
        };
        let e = eqs.remove(ei);
        let ej = e.normal[j].clone();
        let sign = if ej.is_positive() { Int::from(1) } else { Int::from(-1) };
        let abs = ej.abs();
        for r in eqs.iter_mut().chain(ineqs.iter_mut()) {
            if !r.normal[j].is_zero() {
                let f = -&sign * &r.normal[j];
                *r = combine(&abs, r, &f, &e);
            }
        }
        remaining.remove(k);
    }
}

/// Drops vacuous rows and duplicates; returns an empty polyhedron if a
/// contradictory constant row appears.
fn clean(ineqs: &mut Vec<Row>, eqs: &mut Vec<Row>, n: usize) -> Option<Polyhedron> {
    let mut bad = false;
    ineqs.retain(|r| {
        if r.normal.iter().all(Zero::is_zero) {
            bad |= r.offset.is_positive();
            false
        } else {
            true
        }
    });
    eqs.retain(|r| {
        if r.normal.iter().all(Zero::is_zero) {
            bad |= !r.offset.is_zero();
            false
        } else {
            true
        }
    });
    if bad {
        return Some(Polyhedron::empty(n));
    }
    ineqs.sort();
    ineqs.dedup();
    eqs.sort();
    eqs.dedup();
    None
}

fn to_poly(n: usize, ineqs: &[Row], eqs: &[Row]) -> Polyhedron {
    let conv = |r: &Row| Constraint::new(r.normal.clone(), r.offset.clone());
    Polyhedron::raw(n, ineqs.iter().map(conv).collect(), eqs.iter().map(conv).collect())
}

impl Polyhedron {
    /// Keeps only the listed coordinates of every constraint. Callers ensure
    /// the dropped coordinates have zero coefficients.
    fn restrict(&self, keep: &[usize]) -> Polyhedron {
        let pick = |c: &Constraint| {
            Constraint::new(keep.iter().map(|&j| c.normal[j].clone()).collect(), c.offset.clone())
        };
        if self.equalities().iter().any(|c| c.normal.iter().all(Zero::is_zero)) {
            return Polyhedron::empty(keep.len());
        }
        Polyhedron::raw(
            keep.len(),
            self.inequalities().iter().map(pick).collect(),
            self.equalities().iter().map(pick).collect(),
        )
    }
}
