//! Double description on the homogenized cone `{(x, t) : t ≥ 0, A x ≥ b t}`.
//!
//! All arithmetic is on primitive integer generators; zero sets are kept as
//! bitsets so adjacency is decided combinatorially.

use num_traits::{Signed, Zero};

use super::rational::{clear_denominators, dot, primitive, Int};

/// Homogeneous constraint `⟨row, z⟩ ≥ 0` (or `= 0`).
#[derive(Debug, Clone)]
pub(crate) struct HRow {
    pub row: Vec<Int>,
    pub equality: bool,
}

/// Generators of a polyhedral cone: `cone(rays) + span(lines)`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Cone {
    pub rays: Vec<Vec<Int>>,
    pub lines: Vec<Vec<Int>>,
}

#[derive(Clone)]
struct Ray {
    v: Vec<Int>,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn intersect(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn combine(pa: &Int, a: &[Int], pb: &Int, b: &[Int]) -> Vec<Int> {
    // pa * a + pb * b, made primitive
    let v: Vec<Int> = a.iter().zip(b).map(|(x, y)| pa * x + pb * y).collect();
    primitive(&v)
}

/// Generators of `{z ∈ R^n : rows}`.
pub(crate) fn cone_generators(n: usize, rows: &[HRow]) -> Cone {
    let words = rows.len().div_ceil(64).max(1);
    let mut lines: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (ci, h) in rows.iter().enumerate() {
        if h.row.iter().all(Zero::is_zero) {
            for r in rays.iter_mut() {
                bit_set(&mut r.zeros, ci);
            }
            continue;
        }
        if let Some(pi) = lines.iter().position(|l| !dot(&h.row, l).is_zero()) {
            let l = lines.remove(pi);
            let hl = dot(&h.row, &l);
            let sign = if hl.is_positive() { Int::from(1) } else { Int::from(-1) };
            let abs_hl = hl.abs();
            for other in lines.iter_mut() {
                let ho = dot(&h.row, other);
                if !ho.is_zero() {
                    *other = combine(&abs_hl, other, &(-&sign * &ho), &l);
                }
            }
            for r in rays.iter_mut() {
                let hr = dot(&h.row, &r.v);
                if !hr.is_zero() {
                    r.v = combine(&abs_hl, &r.v, &(-&sign * &hr), &l);
                }
                bit_set(&mut r.zeros, ci);
            }
            if !h.equality {
                let v = if hl.is_positive() { l } else { l.iter().map(|x| -x).collect() };
                // a former line is tight on everything processed before
                let mut zeros = vec![0; words];
                for k in 0..ci {
                    bit_set(&mut zeros, k);
                }
                rays.push(Ray { v, zeros });
            }
            continue;
        }

        let vals: Vec<Int> = rays.iter().map(|r| dot(&h.row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if vals[i].is_zero() {
                let mut r = r.clone();
                bit_set(&mut r.zeros, ci);
                next.push(r);
            } else if vals[i].is_positive() && !h.equality {
                next.push(r.clone());
            }
        }
        for &p in &pos {
            for &q in &neg {
                let z = intersect(&rays[p].zeros, &rays[q].zeros);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !is_subset(&z, &r.zeros));
                if !adjacent {
                    continue;
                }
                let v = combine(&vals[p], &rays[q].v, &(-&vals[q]), &rays[p].v);
                let mut zeros = z;
                bit_set(&mut zeros, ci);
                next.push(Ray { v, zeros });
            }
        }
        rays = next;
    }

    Cone { rays: rays.into_iter().map(|r| r.v).collect(), lines }
}

/// Homogenizes `⟨normal, x⟩ ≥ offset` to an integer row on `(x, t)`.
pub(crate) fn homogenize(normal: &[Int], offset: &num_rational::BigRational) -> Vec<Int> {
    let mut q: Vec<num_rational::BigRational> =
        normal.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect();
    q.push(-offset.clone());
    let (row, _) = clear_denominators(&q);
    primitive(&row)
}
