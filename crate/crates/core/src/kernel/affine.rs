use std::fmt;

use num_traits::{One, Zero};

use super::polyhedron::Polyhedron;
use super::rational::{dot_ir, int, rat_from_int, Int, Rat};
use crate::error::{dims, Error, Result};

/// `x ↦ linear · x + translate` with an integer linear part.
///
/// Every arrow in the diagrams of extended tropical structures is one of
/// these: parallel transports, structure maps, edge-length maps, interpolants.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    source_dim: usize,
    target_dim: usize,
    linear: Vec<Vec<Int>>,
    translate: Vec<Rat>,
}

impl AffineMap {
    pub fn new(source_dim: usize, linear: Vec<Vec<Int>>, translate: Vec<Rat>) -> Result<Self> {
        let target_dim = translate.len();
        if linear.len() != target_dim {
            return Err(dims("affine map rows", target_dim, linear.len()));
        }
        if let Some(row) = linear.iter().find(|r| r.len() != source_dim) {
            return Err(dims("affine map columns", source_dim, row.len()));
        }
        Ok(AffineMap { source_dim, target_dim, linear, translate })
    }

    /// Convenience for tests and fixtures; panics on ragged input.
    pub fn from_i64(source_dim: usize, linear: &[&[i64]], translate: &[Rat]) -> Self {
        let lin = linear.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Self::new(source_dim, lin, translate.to_vec()).expect("well-formed affine map")
    }

    pub fn identity(n: usize) -> Self {
        let linear = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        AffineMap { source_dim: n, target_dim: n, linear, translate: vec![Rat::zero(); n] }
    }

    pub fn constant(source_dim: usize, value: Vec<Rat>) -> Self {
        let linear = vec![vec![Int::zero(); source_dim]; value.len()];
        AffineMap { source_dim, target_dim: value.len(), linear, translate: value }
    }

    /// `x ↦ (x_{i_0}, x_{i_1}, …)`.
    pub fn select(source_dim: usize, indices: &[usize]) -> Self {
        let linear = indices
            .iter()
            .map(|&i| (0..source_dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        AffineMap {
            source_dim,
            target_dim: indices.len(),
            linear,
            translate: vec![Rat::zero(); indices.len()],
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn linear(&self) -> &[Vec<Int>] {
        &self.linear
    }

    pub fn translate(&self) -> &[Rat] {
        &self.translate
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        debug_assert_eq!(x.len(), self.source_dim);
        self.linear
            .iter()
            .zip(&self.translate)
            .map(|(row, t)| dot_ir(row, x) + t)
            .collect()
    }

    pub fn apply_linear(&self, v: &[Rat]) -> Vec<Rat> {
        self.linear.iter().map(|row| dot_ir(row, v)).collect()
    }

    pub fn apply_linear_int(&self, v: &[Int]) -> Vec<Int> {
        self.linear
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        if inner.target_dim != self.source_dim {
            return Err(dims("composition", self.source_dim, inner.target_dim));
        }
        let linear = self
            .linear
            .iter()
            .map(|row| {
                (0..inner.source_dim)
                    .map(|j| row.iter().zip(&inner.linear).map(|(a, r)| a * &r[j]).sum())
                    .collect()
            })
            .collect();
        let translate = self.apply(&inner.translate);
        Ok(AffineMap { source_dim: inner.source_dim, target_dim: self.target_dim, linear, translate })
    }

    /// Concatenates the outputs of maps with a common source.
    pub fn stack(source_dim: usize, maps: &[&AffineMap]) -> Result<AffineMap> {
        let mut linear = Vec::new();
        let mut translate = Vec::new();
        for m in maps {
            if m.source_dim != source_dim {
                return Err(dims("stacked map source", source_dim, m.source_dim));
            }
            linear.extend(m.linear.iter().cloned());
            translate.extend(m.translate.iter().cloned());
        }
        AffineMap::new(source_dim, linear, translate)
    }

    /// Block-diagonal product `(x_1, …, x_k) ↦ (m_1(x_1), …, m_k(x_k))`.
    pub fn product(maps: &[&AffineMap]) -> AffineMap {
        let source_dim: usize = maps.iter().map(|m| m.source_dim).sum();
        let mut linear = Vec::new();
        let mut translate = Vec::new();
        let mut offset = 0;
        for m in maps {
            for (row, t) in m.linear.iter().zip(&m.translate) {
                let mut full = vec![Int::zero(); source_dim];
                full[offset..offset + m.source_dim].clone_from_slice(row);
                linear.push(full);
                translate.push(t.clone());
            }
            offset += m.source_dim;
        }
        AffineMap { source_dim, target_dim: translate.len(), linear, translate }
    }

    pub fn add(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.source_dim != other.source_dim || self.target_dim != other.target_dim {
            return Err(Error::DimensionMismatch("sum of affine maps".into()));
        }
        let linear = self
            .linear
            .iter()
            .zip(&other.linear)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        let translate = self.translate.iter().zip(&other.translate).map(|(a, b)| a + b).collect();
        Ok(AffineMap { source_dim: self.source_dim, target_dim: self.target_dim, linear, translate })
    }

    pub fn neg(&self) -> AffineMap {
        AffineMap {
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            linear: self.linear.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            translate: self.translate.iter().map(|x| -x).collect(),
        }
    }

    pub fn sub(&self, other: &AffineMap) -> Result<AffineMap> {
        self.add(&other.neg())
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineMap::identity(self.source_dim)
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().flatten().all(Zero::is_zero)
    }

    /// Rows `range` of the output.
    pub fn rows(&self, range: std::ops::Range<usize>) -> AffineMap {
        AffineMap {
            source_dim: self.source_dim,
            target_dim: range.len(),
            linear: self.linear[range.clone()].to_vec(),
            translate: self.translate[range].to_vec(),
        }
    }

    /// Whether the two maps coincide on every point of `on` (exact check on a
    /// point of the affine hull and a basis of its directions).
    pub fn agrees_on(&self, other: &AffineMap, on: &Polyhedron) -> bool {
        if self.source_dim != other.source_dim
            || self.target_dim != other.target_dim
            || on.ambient_dim() != self.source_dim
        {
            return false;
        }
        let Some(hull) = on.affine_hull() else {
            return true;
        };
        if self.apply(&hull.point) != other.apply(&hull.point) {
            return false;
        }
        hull.directions.iter().all(|d| self.apply_linear_int(d) == other.apply_linear_int(d))
    }

    /// Maps a vector of integers through the linear part, as rationals.
    pub fn linear_rat(&self) -> Vec<Vec<Rat>> {
        self.linear.iter().map(|r| r.iter().map(rat_from_int).collect()).collect()
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Affine[{}→{}]", self.source_dim, self.target_dim)?;
        for (row, t) in self.linear.iter().zip(&self.translate) {
            let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, " [{} | {}]", r.join(" "), super::rational::format_rat(t))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{rat, rats};

    #[test]
    fn compose_and_apply() {
        let a = AffineMap::from_i64(2, &[&[1, 1]], &[rat(1, 2)]);
        let b = AffineMap::from_i64(1, &[&[2], &[-1]], &rats(&[0, 3]));
        let c = a.compose(&b).unwrap();
        let x = vec![rat(5, 1)];
        assert_eq!(c.apply(&x), a.apply(&b.apply(&x)));
        assert!(a.compose(&a).is_err());
    }

    #[test]
    fn product_and_stack() {
        let id = AffineMap::identity(1);
        let k = AffineMap::constant(0, rats(&[7]));
        let p = AffineMap::product(&[&id, &k]);
        assert_eq!(p.apply(&rats(&[3])), rats(&[3, 7]));
        let s = AffineMap::stack(1, &[&id, &id]).unwrap();
        assert_eq!(s.apply(&rats(&[2])), rats(&[2, 2]));
    }
}
