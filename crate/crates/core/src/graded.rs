//! Finitely supported graded spaces and degreewise linear maps between them.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("block at degree {degree} has shape {got:?}, expected {expected:?}")]
    BlockShape {
        degree: i64,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("flat entry ({row},{col}) connects degrees {from} -> {to}, map has degree {degree}")]
    OffDegree {
        row: usize,
        col: usize,
        from: i64,
        to: i64,
        degree: i64,
    },
}

/// Dimensions per degree; only nonzero dimensions are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    dims: BTreeMap<i64, usize>,
}

impl GradedSpace {
    pub fn new(dims: impl IntoIterator<Item = (i64, usize)>) -> GradedSpace {
        let mut out = BTreeMap::new();
        for (d, n) in dims {
            if n > 0 {
                *out.entry(d).or_insert(0) += n;
            }
        }
        GradedSpace { dims: out }
    }

    pub fn zero() -> GradedSpace {
        GradedSpace::default()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.dims.keys().next_back().copied()
    }

    /// Offset of the first basis vector of `degree` in the flat (degree-ascending) order.
    pub fn offset(&self, degree: i64) -> usize {
        self.dims.range(..degree).map(|(_, n)| n).sum()
    }

    /// Flat index → `(degree, local index)`.
    pub fn locate(&self, mut flat: usize) -> (i64, usize) {
        for (&d, &n) in &self.dims {
            if flat < n {
                return (d, flat);
            }
            flat -= n;
        }
        panic!("flat index out of range")
    }

    /// Degree of every flat basis vector.
    pub fn flat_degrees(&self) -> Vec<i64> {
        self.dims
            .iter()
            .flat_map(|(&d, &n)| std::iter::repeat(d).take(n))
            .collect()
    }

    /// `self[t]`: dimension at `n` becomes the old dimension at `n + t`.
    pub fn shifted(&self, t: i64) -> GradedSpace {
        GradedSpace {
            dims: self.dims.iter().map(|(&d, &n)| (d - t, n)).collect(),
        }
    }

    /// `(V^*)^n = (V^{-n})^*`.
    pub fn dual(&self) -> GradedSpace {
        GradedSpace {
            dims: self.dims.iter().map(|(&d, &n)| (-d, n)).collect(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&d, &n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// A homogeneous linear map of some degree: block `n` maps `source^n → target^{n+degree}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    field: Field,
    source: GradedSpace,
    target: GradedSpace,
    degree: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn zero(field: Field, source: &GradedSpace, target: &GradedSpace, degree: i64) -> GradedMap {
        GradedMap {
            field,
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks: BTreeMap::new(),
        }
    }

    /// Builds from blocks keyed by source degree; zero blocks are dropped.
    pub fn from_blocks(
        field: Field,
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i64,
        blocks: impl IntoIterator<Item = (i64, Matrix)>,
    ) -> Result<GradedMap, GradedError> {
        let mut map = GradedMap::zero(field, source, target, degree);
        for (n, b) in blocks {
            let expected = (target.dim(n + degree), source.dim(n));
            if (b.rows(), b.cols()) != expected {
                return Err(GradedError::BlockShape {
                    degree: n,
                    got: (b.rows(), b.cols()),
                    expected,
                });
            }
            if !b.is_zero() {
                map.blocks.insert(n, b);
            }
        }
        Ok(map)
    }

    pub fn identity(field: Field, space: &GradedSpace) -> GradedMap {
        GradedMap::scalar(field, space, &field.one())
    }

    pub fn scalar(field: Field, space: &GradedSpace, c: &Scalar) -> GradedMap {
        let blocks = space
            .dims()
            .iter()
            .map(|(&d, &n)| (d, Matrix::scalar_identity(field, n, c)));
        GradedMap::from_blocks(field, space, space, 0, blocks).expect("identity blocks")
    }

    /// Extracts blocks from a flat matrix in the degree-ascending bases.
    pub fn from_flat(
        source: &GradedSpace,
        target: &GradedSpace,
        degree: i64,
        flat: &Matrix,
    ) -> Result<GradedMap, GradedError> {
        let sdeg = source.flat_degrees();
        let tdeg = target.flat_degrees();
        let mut triplets: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
        for (i, j, v) in flat.triplets() {
            let (from, to) = (sdeg[j], tdeg[i]);
            if to != from + degree {
                return Err(GradedError::OffDegree {
                    row: i,
                    col: j,
                    from,
                    to,
                    degree,
                });
            }
            let li = i - target.offset(to);
            let lj = j - source.offset(from);
            triplets.entry(from).or_default().push((li, lj, v.clone()));
        }
        let field = flat.field();
        let blocks = triplets.into_iter().map(|(n, t)| {
            (
                n,
                Matrix::from_triplets(field, target.dim(n + degree), source.dim(n), t),
            )
        });
        GradedMap::from_blocks(field, source, target, degree, blocks)
    }

    pub fn to_flat(&self) -> Matrix {
        let mut t = Vec::new();
        for (&n, b) in &self.blocks {
            let r0 = self.target.offset(n + self.degree);
            let c0 = self.source.offset(n);
            t.extend(b.triplets().map(|(i, j, v)| (i + r0, j + c0, v.clone())));
        }
        Matrix::from_triplets(self.field, self.target.total(), self.source.total(), t)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Block at source degree `n` (a zero matrix if absent).
    pub fn block(&self, n: i64) -> Matrix {
        self.blocks.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.field, self.target.dim(n + self.degree), self.source.dim(n))
        })
    }

    pub fn block_ref(&self, n: i64) -> Option<&Matrix> {
        self.blocks.get(&n)
    }

    pub fn blocks(&self) -> &BTreeMap<i64, Matrix> {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(other.target, self.source, "compose: spaces do not match");
        let blocks: Vec<(i64, Matrix)> = other
            .blocks
            .iter()
            .filter_map(|(&n, b)| {
                self.blocks
                    .get(&(n + other.degree))
                    .map(|a| (n, a.mul(b)))
            })
            .collect();
        GradedMap::from_blocks(
            self.field,
            &other.source,
            &self.target,
            self.degree + other.degree,
            blocks,
        )
        .expect("composition shapes")
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.degree, other.degree);
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut keys: Vec<i64> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let blocks: Vec<(i64, Matrix)> = keys
            .into_iter()
            .map(|n| (n, self.block(n).add(&other.block(n))))
            .collect();
        GradedMap::from_blocks(self.field, &self.source, &self.target, self.degree, blocks)
            .expect("sum shapes")
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        let blocks: Vec<(i64, Matrix)> = self.blocks.iter().map(|(&n, b)| (n, b.scale(c))).collect();
        GradedMap::from_blocks(self.field, &self.source, &self.target, self.degree, blocks)
            .expect("scaled shapes")
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    /// Applies the map to a vector living in source degree `n`.
    pub fn apply(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        self.block(n).mul_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_roundtrip() {
        let q = Field::Rational;
        let s = GradedSpace::new([(0, 2), (1, 1)]);
        let t = GradedSpace::new([(1, 1), (2, 2)]);
        let m = GradedMap::from_blocks(
            q,
            &s,
            &t,
            1,
            [
                (0, Matrix::from_i64(q, &[&[1, 2]])),
                (1, Matrix::from_i64(q, &[&[3], &[0]])),
            ],
        )
        .unwrap();
        let flat = m.to_flat();
        assert_eq!(GradedMap::from_flat(&s, &t, 1, &flat).unwrap(), m);
        assert_eq!(s.locate(2), (1, 0));
        assert_eq!(s.shifted(1).dim(0), 1);
        assert_eq!(s.euler_characteristic(), 1);
    }

    #[test]
    fn off_degree_entries_rejected() {
        let q = Field::Rational;
        let s = GradedSpace::new([(0, 1)]);
        let flat = Matrix::identity(q, 1);
        assert!(GradedMap::from_flat(&s, &s, 1, &flat).is_err());
    }
}
