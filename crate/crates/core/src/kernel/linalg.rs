//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use super::rational::Rat;

/// Reduced row echelon form. `rows` holds only the nonzero rows, each with a
/// leading 1 in the column named by the matching entry of `pivots`.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

pub fn rref(mut m: Vec<Vec<Rat>>, ncols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    Rref { rows: m, pivots, ncols }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Subtracts the row span from `v` so that `v` vanishes on every pivot column.
    pub fn reduce(&self, v: &mut [Rat]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.ncols];
                v[f] = Rat::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

pub fn rank(m: &[Vec<Rat>], ncols: usize) -> usize {
    rref(m.to_vec(), ncols).rank()
}

pub fn nullspace(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    rref(m.to_vec(), ncols).nullspace()
}

/// Solves `a x = b` for one right-hand side; free variables are set to zero.
pub fn solve(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(aug, ncols + 1);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Solves `a x = b` column by column for a matrix right-hand side, `None`
/// when some column is inconsistent.
pub fn solve_many(a: &[Vec<Rat>], b: &[Vec<Rat>], ncols: usize) -> Option<Vec<Vec<Rat>>> {
    let nrhs = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rat::zero(); nrhs]; ncols];
    for j in 0..nrhs {
        let col: Vec<Rat> = b.iter().map(|r| r[j].clone()).collect();
        let x = solve(a, &col, ncols)?;
        for (i, xi) in x.into_iter().enumerate() {
            out[i][j] = xi;
        }
    }
    Some(out)
}

pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{rat, rats};

    #[test]
    fn rref_and_nullspace() {
        let m = vec![rats(&[1, 2, 3]), rats(&[2, 4, 6]), rats(&[1, 0, 1])];
        let r = rref(m.clone(), 3);
        assert_eq!(r.rank(), 2);
        let ns = r.nullspace();
        assert_eq!(ns.len(), 1);
        for row in &m {
            let s: Rat = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = vec![rats(&[2, 0]), rats(&[0, 3])];
        assert_eq!(solve(&a, &rats(&[1, 1]), 2), Some(vec![rat(1, 2), rat(1, 3)]));
        let b = vec![rats(&[1, 1]), rats(&[2, 2])];
        assert_eq!(solve(&b, &rats(&[1, 3]), 2), None);
    }
}
