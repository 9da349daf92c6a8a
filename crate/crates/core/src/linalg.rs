//! Exact elimination: rank, kernels, particular solutions, complements.
//!
//! Everything is built on an incremental reduced row echelon form. Pivot
//! columns of an RREF are unique, so the leftmost-pivot rule holds no matter
//! in which order rows are fed in; the outputs below are therefore
//! deterministic functions of their inputs.

use thiserror::Error;

use crate::matrix::{axpy_row, row_entry, Matrix, SparseRow};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("field mismatch: matrix over {0}, vector over {1}")]
    FieldMismatch(Field, Field),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("input vectors are linearly dependent (vector {0})")]
    Dependent(usize),
    #[error("matrix is not invertible")]
    Singular,
}

/// Incremental reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    field: Field,
    cols: usize,
    rows: Vec<SparseRow>,
    pivot_row: Vec<Option<usize>>,
}

impl Rref {
    pub fn new(field: Field, cols: usize) -> Rref {
        Rref {
            field,
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn from_matrix(m: &Matrix) -> Rref {
        let mut r = Rref::new(m.field(), m.cols());
        for row in m.row_data() {
            r.insert(row.clone());
        }
        r
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `row` modulo the current row space (result has zeros in all pivot columns).
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        let hits: Vec<(usize, Scalar)> = row
            .iter()
            .filter_map(|(c, v)| self.pivot_row[*c].map(|_| (*c, v.clone())))
            .collect();
        let mut r = row;
        for (c, v) in hits {
            let p = &self.rows[self.pivot_row[c].unwrap()];
            r = axpy_row(&r, &(-&v), p);
        }
        r
    }

    /// Inserts a row; returns `true` if it enlarged the row space.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].0;
        let inv = r[0].1.inv();
        let r: SparseRow = r.iter().map(|(c, v)| (*c, v * &inv)).collect();
        crate::par::for_each_mut(&mut self.rows, |existing| {
            if let Some(v) = row_entry(existing, lead) {
                let c = -v;
                *existing = axpy_row(existing, &c, &r);
            }
        });
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn insert_dense(&mut self, v: &[Scalar]) -> bool {
        self.insert(dense_to_sparse(v))
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| self.pivot_row[*c].is_some()).collect()
    }

    /// The row with pivot in column `c`, if any.
    pub fn pivot_row(&self, c: usize) -> Option<&[(usize, Scalar)]> {
        self.pivot_row[c].map(|i| self.rows[i].as_slice())
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(dense_to_sparse(v)).is_empty()
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

pub fn dense_to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(field: Field, n: usize, row: &[(usize, Scalar)]) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    for (i, x) in row {
        v[*i] = x.clone();
    }
    v
}

pub fn rank(m: &Matrix) -> usize {
    Rref::from_matrix(m).rank()
}

/// Exact null-space basis; one vector per non-pivot column, in column order.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    let rref = Rref::from_matrix(m);
    kernel_from_rref(&rref)
}

fn kernel_from_rref(rref: &Rref) -> Vec<Vec<Scalar>> {
    let field = rref.field;
    let pivots = rref.pivots();
    let is_pivot = {
        let mut v = vec![false; rref.cols];
        for p in &pivots {
            v[*p] = true;
        }
        v
    };
    let free: Vec<usize> = (0..rref.cols).filter(|c| !is_pivot[*c]).collect();
    crate::par::map(&free, |&f| {
        let mut v = vec![field.zero(); rref.cols];
        v[f] = field.one();
        for &p in &pivots {
            if let Some(x) = row_entry(rref.pivot_row(p).unwrap(), f) {
                v[p] = -x;
            }
        }
        v
    })
}

/// Particular solution of `m x = rhs`, `Ok(None)` when inconsistent.
pub fn solve(m: &Matrix, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    if rhs.len() != m.rows() {
        return Err(LinalgError::LengthMismatch {
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    if let Some(bad) = rhs.iter().find(|x| x.field() != m.field()) {
        return Err(LinalgError::FieldMismatch(m.field(), bad.field()));
    }
    let n = m.cols();
    let mut rref = Rref::new(m.field(), n + 1);
    for (i, row) in m.row_data().iter().enumerate() {
        let mut r = row.clone();
        if !rhs[i].is_zero() {
            r.push((n, rhs[i].clone()));
        }
        rref.insert(r);
    }
    if rref.pivot_row[n].is_some() {
        return Ok(None);
    }
    let mut x = vec![m.field().zero(); n];
    for p in rref.pivots() {
        if let Some(v) = row_entry(rref.pivot_row(p).unwrap(), n) {
            x[p] = v.clone();
        }
    }
    Ok(Some(x))
}

/// Extends independent vectors `sub` to a basis of `field^ambient` with standard basis vectors.
pub fn complement_basis(
    field: Field,
    sub: &[Vec<Scalar>],
    ambient: usize,
) -> Result<Vec<Vec<Scalar>>, LinalgError> {
    let mut rref = Rref::new(field, ambient);
    for (i, v) in sub.iter().enumerate() {
        if v.len() != ambient {
            return Err(LinalgError::LengthMismatch {
                expected: ambient,
                got: v.len(),
            });
        }
        if !rref.insert_dense(v) {
            return Err(LinalgError::Dependent(i));
        }
    }
    Ok((0..ambient)
        .filter(|c| rref.pivot_row[*c].is_none())
        .map(|c| {
            let mut e = vec![field.zero(); ambient];
            e[c] = field.one();
            e
        })
        .collect())
}

/// Indices of the leftmost maximal independent set of columns.
pub fn pivot_columns(m: &Matrix) -> Vec<usize> {
    Rref::from_matrix(m).pivots()
}

/// Indices (in input order) of a greedy maximal independent subset.
pub fn independent_subset(field: Field, dim: usize, vectors: &[Vec<Scalar>]) -> Vec<usize> {
    let mut rref = Rref::new(field, dim);
    vectors
        .iter()
        .enumerate()
        .filter_map(|(i, v)| rref.insert_dense(v).then_some(i))
        .collect()
}

pub fn inverse(m: &Matrix) -> Result<Matrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Singular);
    }
    let n = m.rows();
    let field = m.field();
    let mut rref = Rref::new(field, 2 * n);
    for (i, row) in m.row_data().iter().enumerate() {
        let mut r = row.clone();
        r.push((n + i, field.one()));
        rref.insert(r);
    }
    if (0..n).any(|c| rref.pivot_row[c].is_none()) {
        return Err(LinalgError::Singular);
    }
    let rows: Vec<SparseRow> = (0..n)
        .map(|c| {
            rref.pivot_row(c)
                .unwrap()
                .iter()
                .filter(|(j, _)| *j >= n)
                .map(|(j, v)| (j - n, v.clone()))
                .collect()
        })
        .collect();
    Ok(Matrix::from_rows(field, n, rows))
}

pub fn is_invertible(m: &Matrix) -> bool {
    m.is_square() && rank(m) == m.rows()
}


/// Coordinates relative to an independent family `S` of vectors in `field^n`.
///
/// The family is completed by the standard vectors at its non-pivot
/// positions. `sub_coords` gives the `S`-part of a vector and
/// `quotient_coords` the part along the completion, i.e. coordinates in
/// `field^n / span(S)`.
#[derive(Clone, Debug)]
pub struct Splitting {
    field: Field,
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    nonpivots: Vec<usize>,
    /// Reduced rows (length `n` part), one per pivot, in pivot order.
    reduced: Vec<SparseRow>,
    /// `g[r][i]`: coefficient relating reduced row `r` to input vector `i`.
    g: Vec<SparseRow>,
}

impl Splitting {
    pub fn new(field: Field, n: usize, family: &[Vec<Scalar>]) -> Result<Splitting, LinalgError> {
        let k = family.len();
        let mut rref = Rref::new(field, n + k);
        for (i, v) in family.iter().enumerate() {
            if v.len() != n {
                return Err(LinalgError::LengthMismatch { expected: n, got: v.len() });
            }
            let mut row = dense_to_sparse(v);
            row.push((n + i, field.one()));
            rref.insert(row);
        }
        let pivots: Vec<usize> = rref.pivots().into_iter().filter(|&p| p < n).collect();
        if pivots.len() != k {
            return Err(LinalgError::Dependent(pivots.len()));
        }
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let nonpivots = (0..n).filter(|c| !is_pivot[*c]).collect();
        let mut reduced = Vec::with_capacity(k);
        let mut g = Vec::with_capacity(k);
        for &p in &pivots {
            let row = rref.pivot_row(p).unwrap();
            reduced.push(row.iter().filter(|e| e.0 < n).cloned().collect());
            g.push(row.iter().filter(|e| e.0 >= n).map(|(c, v)| (c - n, v.clone())).collect());
        }
        Ok(Splitting { field, n, k, pivots, nonpivots, reduced, g })
    }

    pub fn sub_dim(&self) -> usize {
        self.k
    }

    pub fn quotient_dim(&self) -> usize {
        self.n - self.k
    }

    /// Standard vectors completing the family, in increasing position.
    pub fn complement(&self) -> Vec<Vec<Scalar>> {
        self.nonpivots
            .iter()
            .map(|&c| {
                let mut e = vec![self.field.zero(); self.n];
                e[c] = self.field.one();
                e
            })
            .collect()
    }

    /// Coefficients `a` with `v = Σ a_i S_i + (completion part)`.
    pub fn sub_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut a = vec![self.field.zero(); self.k];
        for (r, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            for (i, gv) in &self.g[r] {
                a[*i] = &a[*i] + &(gv * &v[p]);
            }
        }
        a
    }

    pub fn quotient_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut b: Vec<Scalar> = self.nonpivots.iter().map(|&c| v[c].clone()).collect();
        let pos = self.nonpivot_positions();
        for (r, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            for (c, rv) in &self.reduced[r] {
                if let Some(j) = pos[*c] {
                    b[j] = &b[j] - &(rv * &v[p]);
                }
            }
        }
        b
    }

    fn nonpivot_positions(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.n];
        for (j, &c) in self.nonpivots.iter().enumerate() {
            pos[c] = Some(j);
        }
        pos
    }

    /// Matrix `k x n` of [`Self::sub_coords`].
    pub fn sub_matrix(&self) -> Matrix {
        let mut t = Vec::new();
        for (r, &p) in self.pivots.iter().enumerate() {
            for (i, gv) in &self.g[r] {
                t.push((*i, p, gv.clone()));
            }
        }
        Matrix::from_triplets(self.field, self.k, self.n, t)
    }

    /// Matrix `(n-k) x n` of [`Self::quotient_coords`].
    pub fn quotient_matrix(&self) -> Matrix {
        let pos = self.nonpivot_positions();
        let mut t: Vec<(usize, usize, Scalar)> = self
            .nonpivots
            .iter()
            .enumerate()
            .map(|(j, &c)| (j, c, self.field.one()))
            .collect();
        for (r, &p) in self.pivots.iter().enumerate() {
            for (c, rv) in &self.reduced[r] {
                if let Some(j) = pos[*c] {
                    t.push((j, p, -rv));
                }
            }
        }
        Matrix::from_triplets(self.field, self.n - self.k, self.n, t)
    }
}

/// Quotient of `k^n` by the span of arbitrary (possibly dependent) vectors.
///
/// Coordinates on the quotient are the values at the non-pivot positions of
/// the spanning set's RREF, so the standard vectors at those positions form
/// the complement.
#[derive(Clone, Debug)]
pub struct SpanQuotient {
    n: usize,
    rref: Rref,
    nonpivots: Vec<usize>,
}

impl SpanQuotient {
    pub fn new(field: Field, n: usize, span: impl IntoIterator<Item = SparseRow>) -> SpanQuotient {
        let mut rref = Rref::new(field, n);
        for row in span {
            rref.insert(row);
        }
        let pivots = rref.pivots();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let nonpivots = (0..n).filter(|c| !is_pivot[*c]).collect();
        SpanQuotient { n, rref, nonpivots }
    }

    pub fn span_dim(&self) -> usize {
        self.rref.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.nonpivots.len()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.rref.contains(v)
    }

    /// `(n - rank) x n` projection onto quotient coordinates.
    pub fn projection(&self) -> Matrix {
        let field = self.rref.field();
        let mut pos = vec![None; self.n];
        for (j, &c) in self.nonpivots.iter().enumerate() {
            pos[c] = Some(j);
        }
        let mut t: Vec<(usize, usize, Scalar)> = self
            .nonpivots
            .iter()
            .enumerate()
            .map(|(j, &c)| (j, c, field.one()))
            .collect();
        for p in self.rref.pivots() {
            for (c, rv) in self.rref.pivot_row(p).unwrap() {
                if let Some(j) = pos[*c] {
                    t.push((j, p, -rv));
                }
            }
        }
        Matrix::from_triplets(field, self.nonpivots.len(), self.n, t)
    }

    /// `n x (n - rank)` inclusion of the standard complement.
    pub fn section(&self) -> Matrix {
        let field = self.rref.field();
        let t = self
            .nonpivots
            .iter()
            .enumerate()
            .map(|(j, &c)| (c, j, field.one()));
        Matrix::from_triplets(field, self.n, self.nonpivots.len(), t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rational
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::identity(q(), 2)), 2);
        assert_eq!(rank(&Matrix::zeros(q(), 3, 4)), 0);
        assert_eq!(rank(&Matrix::from_i64(q(), &[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(q(), 3)).is_empty());
        let k = kernel_basis(&Matrix::zeros(q(), 2, 3));
        assert_eq!(k, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let k = kernel_basis(&Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]));
        assert_eq!(k.len(), 1);
        // proportional to (2, -1)
        assert_eq!(&k[0][0] * &q().from_i64(-1), &k[0][1] * &q().from_i64(2));
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(q(), 2);
        assert_eq!(solve(&id, &v(&[1, 0])).unwrap(), Some(v(&[1, 0])));
        let row = Matrix::from_i64(q(), &[&[1, 1]]);
        let x = solve(&row, &v(&[2])).unwrap().unwrap();
        assert_eq!(x, v(&[2, 0]));
        let col = Matrix::from_i64(q(), &[&[1], &[1]]);
        assert_eq!(solve(&col, &v(&[0, 1])).unwrap(), None);
    }

    #[test]
    fn solve_rejects_field_mismatch() {
        let id = Matrix::identity(q(), 1);
        let rhs = vec![Field::Prime(5).one()];
        assert!(matches!(solve(&id, &rhs), Err(LinalgError::FieldMismatch(..))));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement_basis(q(), &[v(&[1, 0])], 2).unwrap(), vec![v(&[0, 1])]);
        assert_eq!(
            complement_basis(q(), &[], 2).unwrap(),
            vec![v(&[1, 0]), v(&[0, 1])]
        );
        assert_eq!(complement_basis(q(), &[v(&[1, 1])], 2).unwrap(), vec![v(&[0, 1])]);
        assert_eq!(
            complement_basis(q(), &[v(&[1, 1]), v(&[2, 2])], 2),
            Err(LinalgError::Dependent(1))
        );
    }

    #[test]
    fn splitting_coordinates() {
        let fam = vec![v(&[1, 1, 0]), v(&[0, 1, 1])];
        let sp = Splitting::new(q(), 3, &fam).unwrap();
        let x = v(&[2, 5, 3]);
        assert_eq!(sp.sub_coords(&x), v(&[2, 3]));
        assert!(sp.quotient_coords(&x).iter().all(|c| c.is_zero()));
        let y = v(&[0, 0, 1]);
        let comp = sp.complement();
        assert_eq!(comp, vec![v(&[0, 0, 1])]);
        assert_eq!(sp.quotient_coords(&y), v(&[1]));
        assert_eq!(sp.quotient_matrix().mul_vec(&y), v(&[1]));
        assert_eq!(sp.sub_matrix().mul_vec(&x), v(&[2, 3]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(q(), &[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(q(), 2));
        assert_eq!(inverse(&Matrix::from_i64(q(), &[&[1, 2], &[2, 4]])), Err(LinalgError::Singular));
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), proptest::collection::vec(-2i64..3, r * c))
        })
    }

    fn build(field: Field, r: usize, c: usize, e: &[i64]) -> Matrix {
        let rows: Vec<Vec<Scalar>> = (0..r)
            .map(|i| (0..c).map(|j| field.from_i64(e[i * c + j])).collect())
            .collect();
        Matrix::from_triplets(
            field,
            r,
            c,
            rows.iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (i, j, x.clone())))
                .collect::<Vec<_>>(),
        )
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, e) in arb_matrix()) {
            for field in [Field::Rational, Field::Prime(7)] {
                let m = build(field, r, c, &e);
                let k = kernel_basis(&m);
                prop_assert_eq!(rank(&m) + k.len(), c);
                for vec in &k {
                    prop_assert!(m.mul_vec(vec).iter().all(|x| x.is_zero()));
                }
            }
        }

        #[test]
        fn solve_is_exact((r, c, e) in arb_matrix(), xs in proptest::collection::vec(-3i64..4, 6)) {
            let m = build(q(), r, c, &e);
            let x0: Vec<Scalar> = (0..c).map(|i| q().from_i64(xs[i])).collect();
            let rhs = m.mul_vec(&x0);
            let x = solve(&m, &rhs).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), rhs);
        }

        #[test]
        fn rank_invariant_under_row_permutation((r, c, e) in arb_matrix(), seed in 0u64..1000) {
            let m = build(q(), r, c, &e);
            let mut order: Vec<usize> = (0..r).collect();
            let mut s = seed;
            for i in (1..r).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(rank(&m.select_rows(&order)), rank(&m));
        }
    }
}
