//! Integer row reduction with unimodular transforms. Used wherever
//! integrality of an affine map has to be decided exactly: lattice bases of
//! affine hulls, integral inverses on faces, and integral extensions.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg;
use super::rational::{rat_from_int, Int, Rat};

/// Returns `(u, h)` with `u` unimodular (n×n) and `u * a = h` in row echelon
/// form, where `a` is n×ncols.
pub fn row_echelon_unimodular(a: &[Vec<Int>], ncols: usize) -> (Vec<Vec<Int>>, Vec<Vec<Int>>) {
    let n = a.len();
    let mut h = a.to_vec();
    let mut u: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == n {
            break;
        }
        loop {
            // smallest nonzero magnitude at or below row r
            let best = (r..n)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()).then(i.cmp(&j)));
            let Some(p) = best else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..n {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                sub_scaled(&mut h, i, r, &q);
                sub_scaled(&mut u, i, r, &q);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        r += 1;
    }
    (u, h)
}

fn sub_scaled(m: &mut [Vec<Int>], target: usize, source: usize, q: &Int) {
    let src = m[source].clone();
    for (x, y) in m[target].iter_mut().zip(&src) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Saturated lattice basis of `{x ∈ Z^n : a x = 0}`.
pub fn kernel_basis(a: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let at = linalg::transpose(a, n);
    let (u, h) = row_echelon_unimodular(&at, a.len());
    let rank = h.iter().filter(|row| row.iter().any(|x| !x.is_zero())).count();
    u[rank..].to_vec()
}

/// Given `k` vectors in `Z^m` (the columns of `b`, passed as a list of
/// vectors), returns an integer matrix `y` (k×m) with `y · b = I_k`, or
/// `None` if the vectors are dependent or do not span a saturated sublattice.
/// The rows of `y` vanish on a fixed unimodular complement, so the result is
/// deterministic.
pub fn integral_left_inverse(cols: &[Vec<Int>], m: usize) -> Option<Vec<Vec<Int>>> {
    let k = cols.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let b = linalg::transpose(cols, m); // m × k
    let (u, h) = row_echelon_unimodular(&b, k);
    // top k×k block must be upper triangular with unit diagonal magnitude
    for i in 0..k {
        if i >= m || !h[i][i].abs().is_one() {
            return None;
        }
    }
    let d: Vec<Vec<Rat>> = (0..k)
        .map(|i| (0..k).map(|j| rat_from_int(&h[i][j])).collect())
        .collect();
    let dinv = invert(&d)?;
    let mut y = vec![vec![Int::zero(); m]; k];
    for i in 0..k {
        for j in 0..m {
            let mut acc = Rat::zero();
            for (l, dl) in dinv[i].iter().enumerate() {
                if !dl.is_zero() {
                    acc += dl * rat_from_int(&u[l][j]);
                }
            }
            if !acc.denom().is_one() {
                return None;
            }
            y[i][j] = acc.to_integer();
        }
    }
    Some(y)
}

fn invert(d: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let k = d.len();
    let aug: Vec<Vec<Rat>> = d
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let red = linalg::rref(aug, 2 * k);
    if red.pivots.len() < k || red.pivots[k - 1] >= k {
        return None;
    }
    Some(red.rows.iter().map(|r| r[k..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{dot, ints};

    #[test]
    fn echelon_is_unimodular_transform() {
        let a = vec![ints(&[4, 6]), ints(&[6, 9]), ints(&[2, 1])];
        let (u, h) = row_echelon_unimodular(&a, 2);
        for i in 0..3 {
            for j in 0..2 {
                let col: Vec<Int> = a.iter().map(|r| r[j].clone()).collect();
                assert_eq!(dot(&u[i], &col), h[i][j]);
            }
        }
    }

    #[test]
    fn kernel_of_sum() {
        let k = kernel_basis(&[ints(&[1, 1, 1])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&ints(&[1, 1, 1]), v), Int::zero());
        }
    }

    #[test]
    fn left_inverse_detects_saturation() {
        // (1,1) spans a saturated line; (2,0) does not.
        let y = integral_left_inverse(&[ints(&[1, 1])], 2).unwrap();
        assert_eq!(dot(&y[0], &ints(&[1, 1])), Int::one());
        assert!(integral_left_inverse(&[ints(&[2, 0])], 2).is_none());
        assert!(integral_left_inverse(&[ints(&[1, 0]), ints(&[1, 0])], 2).is_none());
    }
}
