//! Sparse matrices over an exact field.
//!
//! Storage is row-major with each row a list of `(column, value)` pairs
//! sorted by column. Zero values are never stored.

use std::fmt;

use crate::scalar::{Field, Scalar};

/// A sparse row: strictly increasing columns, no zero values.
pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<SparseRow>,
}

/// `a + c * b` on sparse rows.
pub fn axpy_row(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn row_entry<'a>(row: &'a [(usize, Scalar)], col: usize) -> Option<&'a Scalar> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        Matrix {
            rows: n,
            cols: n,
            field,
            data: (0..n).map(|i| vec![(i, field.one())]).collect(),
        }
    }

    pub fn scalar_identity(field: Field, n: usize, c: &Scalar) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(field, n, n);
        }
        Matrix {
            rows: n,
            cols: n,
            field,
            data: (0..n).map(|i| vec![(i, c.clone())]).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed, zeros dropped.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Matrix {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            debug_assert_eq!(v.field(), field);
            buckets[r].push((c, v));
        }
        let data = buckets
            .into_iter()
            .map(|mut b| {
                b.sort_by_key(|e| e.0);
                let mut row: SparseRow = Vec::with_capacity(b.len());
                for (c, v) in b {
                    match row.last_mut() {
                        Some(last) if last.0 == c => last.1 = &last.1 + &v,
                        _ => row.push((c, v)),
                    }
                }
                row.retain(|e| !e.1.is_zero());
                row
            })
            .collect();
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn from_rows(field: Field, cols: usize, data: Vec<SparseRow>) -> Matrix {
        debug_assert!(data
            .iter()
            .all(|r| r.windows(2).all(|w| w[0].0 < w[1].0) && r.iter().all(|e| e.0 < cols && !e.1.is_zero())));
        Matrix {
            rows: data.len(),
            cols,
            field,
            data,
        }
    }

    pub fn from_dense(field: Field, rows: &[Vec<Scalar>]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_columns_or_rows(field, rows.len(), cols, |i, j| rows[i][j].clone())
    }

    /// Matrix whose columns are the given dense vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        Matrix::from_columns_or_rows(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    fn from_columns_or_rows(
        field: Field,
        rows: usize,
        cols: usize,
        get: impl Fn(usize, usize) -> Scalar,
    ) -> Matrix {
        let data = (0..rows)
            .map(|i| {
                (0..cols)
                    .filter_map(|j| {
                        let v = get(i, j);
                        (!v.is_zero()).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        Matrix {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::from_dense(field, &dense);
        m.cols = cols;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn row(&self, i: usize) -> &[(usize, Scalar)] {
        &self.data[i]
    }

    pub fn row_data(&self) -> &[SparseRow] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<SparseRow> {
        self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        row_entry(&self.data[i], j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(self.field, self.rows, self.cols);
        }
        self.with_data(
            self.data
                .iter()
                .map(|r| r.iter().map(|(j, v)| (*j, v * c)).collect())
                .collect(),
        )
    }

    fn with_data(&self, data: Vec<SparseRow>) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let one = self.field.one();
        self.with_data(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| axpy_row(a, &one, b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let m1 = self.field.from_i64(-1);
        self.with_data(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| axpy_row(a, &m1, b))
                .collect(),
        )
    }

    /// `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let field = self.field;
        let data = crate::par::map(&self.data, |row| {
            let mut acc: std::collections::BTreeMap<usize, Scalar> = Default::default();
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let p = a * b;
                    acc.entry(*j)
                        .and_modify(|e| *e = &*e + &p)
                        .or_insert(p);
                }
            }
            acc.into_iter().filter(|e| !e.1.is_zero()).collect::<SparseRow>()
        });
        Matrix {
            rows: self.rows,
            cols: other.cols,
            field,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        self.data
            .iter()
            .map(|row| {
                let mut s = self.field.zero();
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        s = &s + &(a * &v[*j]);
                    }
                }
                s
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows)
            .map(|i| {
                let mut r = vec![self.field.zero(); self.cols];
                for (j, v) in &self.data[i] {
                    r[*j] = v.clone();
                }
                r
            })
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            pos[c] = k;
        }
        let triplets: Vec<_> = self
            .triplets()
            .filter(|(_, j, _)| pos[*j] != usize::MAX)
            .map(|(i, j, v)| (i, pos[j], v.clone()))
            .collect();
        Matrix::from_triplets(self.field, self.rows, cols.len(), triplets)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix {
            rows: rows.len(),
            cols: self.cols,
            field: self.field,
            data: rows.iter().map(|&r| self.data[r].clone()).collect(),
        }
    }

    /// Places `block` with its top-left corner at `(r0, c0)` inside a `rows x cols` zero matrix.
    pub fn embed(&self, rows: usize, cols: usize, r0: usize, c0: usize) -> Matrix {
        let triplets: Vec<_> = self
            .triplets()
            .map(|(i, j, v)| (i + r0, j + c0, v.clone()))
            .collect();
        Matrix::from_triplets(self.field, rows, cols, triplets)
    }

    /// Block matrix from a grid of optional blocks; row heights and column widths are given.
    pub fn from_blocks(
        field: Field,
        heights: &[usize],
        widths: &[usize],
        blocks: &[Vec<Option<&Matrix>>],
    ) -> Matrix {
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut triplets = Vec::new();
        let mut r0 = 0;
        for (bi, h) in heights.iter().enumerate() {
            let mut c0 = 0;
            for (bj, w) in widths.iter().enumerate() {
                if let Some(b) = blocks[bi][bj] {
                    assert_eq!((b.rows, b.cols), (*h, *w), "block ({bi},{bj}) has wrong shape");
                    triplets.extend(b.triplets().map(|(i, j, v)| (i + r0, j + c0, v.clone())));
                }
                c0 += w;
            }
            r0 += h;
        }
        Matrix::from_triplets(field, rows, cols, triplets)
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_blocks(
            self.field,
            &[self.rows],
            &[self.cols, other.cols],
            &[vec![Some(self), Some(other)]],
        )
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    /// Kronecker product `self ⊗ other` (row index `i * other.rows + k`).
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, j, a) in self.triplets() {
            for (k, l, b) in other.triplets() {
                triplets.push((i * other.rows + k, j * other.cols + l, a * b));
            }
        }
        Matrix::from_triplets(self.field, self.rows * other.rows, self.cols * other.cols, triplets)
    }
}

impl fmt::Display for Matrix {
    /// Row-major, one line per row, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let q = Field::Rational;
        let m = Matrix::from_triplets(
            q,
            2,
            2,
            vec![(0, 0, q.one()), (0, 0, q.from_i64(-1)), (1, 1, q.from_i64(3))],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), q.from_i64(3));
    }

    #[test]
    fn product_and_transpose() {
        let q = Field::Rational;
        let a = Matrix::from_i64(q, &[&[1, 2], &[0, 1]]);
        let b = Matrix::from_i64(q, &[&[1, 0], &[3, 1]]);
        assert_eq!(a.mul(&b), Matrix::from_i64(q, &[&[7, 2], &[3, 1]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.kron(&Matrix::identity(q, 1)), a);
    }
}
