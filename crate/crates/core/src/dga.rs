//! Finite-dimensional DG algebras given by structure constants on a homogeneous basis.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{Complex, Layout};
use crate::graded::{GradedMap, GradedSpace};
use crate::matrix::{axpy_row, Matrix, SparseRow};
use crate::scalar::{Field, Scalar};

/// Dense coordinates in the algebra basis.
pub type Element = Vec<Scalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("basis name `{0}` appears twice")]
    DuplicateName(String),
    #[error("unknown basis element `{0}`")]
    UnknownName(String),
    #[error("element has {got} coordinates, algebra has dimension {expected}")]
    Length { expected: usize, got: usize },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("basis name `{0}` is not a valid identifier")]
    BadName(String),
}

/// First failed axiom found by [`validate_algebra`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    ProductDegree { left: String, right: String, term: String },
    Associativity { a: String, b: String, c: String },
    UnitNotTwoSided { element: String },
    UnitNotHomogeneousOfDegreeZero,
    UnitNotClosed,
    DifferentialDegree { element: String, term: String },
    DifferentialSquare { element: String },
    Leibniz { left: String, right: String },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AlgebraViolation::*;
        match self {
            ProductDegree { left, right, term } => {
                write!(f, "product {left}*{right} has a term {term} of the wrong degree")
            }
            Associativity { a, b, c } => write!(f, "({a}*{b})*{c} != {a}*({b}*{c})"),
            UnitNotTwoSided { element } => write!(f, "unit is not two-sided on {element}"),
            UnitNotHomogeneousOfDegreeZero => write!(f, "unit is not of degree 0"),
            UnitNotClosed => write!(f, "d(1) != 0"),
            DifferentialDegree { element, term } => {
                write!(f, "d({element}) has a term {term} not of degree +1")
            }
            DifferentialSquare { element } => write!(f, "d(d({element})) != 0"),
            Leibniz { left, right } => write!(f, "Leibniz rule fails on the pair ({left}, {right})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraReport {
    pub violation: Option<AlgebraViolation>,
}

impl AlgebraReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    field: Field,
    names: Vec<String>,
    degrees: Vec<i64>,
    /// `products[i * dim + j]` = coordinates of `x_i x_j`.
    products: Vec<SparseRow>,
    unit: SparseRow,
    diff: Vec<SparseRow>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'' || c == '.')
}

fn to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

impl DGAlgebra {
    /// An algebra with the given basis and unit, all products and differentials zero.
    pub fn new(field: Field, basis: Vec<(String, i64)>, unit: &[Scalar]) -> Result<DGAlgebra, AlgebraError> {
        let mut seen = std::collections::BTreeSet::new();
        for (n, _) in &basis {
            if !valid_name(n) {
                return Err(AlgebraError::BadName(n.clone()));
            }
            if !seen.insert(n.clone()) {
                return Err(AlgebraError::DuplicateName(n.clone()));
            }
        }
        let dim = basis.len();
        if unit.len() != dim {
            return Err(AlgebraError::Length { expected: dim, got: unit.len() });
        }
        if let Some(x) = unit.iter().find(|x| x.field() != field) {
            return Err(AlgebraError::FieldMismatch(field, x.field()));
        }
        let (names, degrees) = basis.into_iter().unzip();
        Ok(DGAlgebra {
            field,
            names,
            degrees,
            products: vec![Vec::new(); dim * dim],
            unit: to_sparse(unit),
            diff: vec![Vec::new(); dim],
        })
    }

    fn check(&self, v: &[Scalar]) -> Result<(), AlgebraError> {
        if v.len() != self.dim() {
            return Err(AlgebraError::Length { expected: self.dim(), got: v.len() });
        }
        if let Some(x) = v.iter().find(|x| x.field() != self.field) {
            return Err(AlgebraError::FieldMismatch(self.field, x.field()));
        }
        Ok(())
    }

    pub fn set_product(&mut self, i: usize, j: usize, value: &[Scalar]) -> Result<(), AlgebraError> {
        self.check(value)?;
        let dim = self.dim();
        self.products[i * dim + j] = to_sparse(value);
        Ok(())
    }

    pub fn set_diff(&mut self, i: usize, value: &[Scalar]) -> Result<(), AlgebraError> {
        self.check(value)?;
        self.diff[i] = to_sparse(value);
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn zero(&self) -> Element {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn unit(&self) -> Element {
        self.densify(&self.unit)
    }

    pub fn unit_sparse(&self) -> &[(usize, Scalar)] {
        &self.unit
    }

    fn densify(&self, row: &[(usize, Scalar)]) -> Element {
        let mut v = self.zero();
        for (i, x) in row {
            v[*i] = x.clone();
        }
        v
    }

    /// `x_i x_j` as sparse coordinates.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i * self.dim() + j]
    }

    pub fn diff_of(&self, i: usize) -> &[(usize, Scalar)] {
        &self.diff[i]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Element {
        let mut acc: SparseRow = Vec::new();
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                acc = axpy_row(&acc, &(a * b), self.product(i, j));
            }
        }
        self.densify(&acc)
    }

    pub fn d(&self, x: &[Scalar]) -> Element {
        let mut acc: SparseRow = Vec::new();
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            acc = axpy_row(&acc, a, &self.diff[i]);
        }
        self.densify(&acc)
    }

    /// Degree of a nonzero homogeneous element; `None` for zero or mixed elements.
    pub fn degree_of(&self, x: &[Scalar]) -> Option<i64> {
        let mut degs = x
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, _)| self.degrees[i]);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True if every nonzero coordinate sits in `degree`.
    pub fn is_of_degree(&self, x: &[Scalar], degree: i64) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, a)| a.is_zero() || self.degrees[i] == degree)
    }

    /// Basis indices of the given degree, in basis order.
    pub fn basis_of_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == degree).collect()
    }

    pub fn layout(&self) -> Layout {
        Layout::from_degrees(&self.degrees)
    }

    pub fn space(&self) -> GradedSpace {
        self.layout().space().clone()
    }

    /// The underlying cochain complex `(A, d)`, basis in degree-ascending order.
    pub fn as_complex(&self) -> Complex {
        let layout = self.layout();
        let d = self.linear_map(&layout, 1, |i| self.diff[i].clone());
        Complex::from_differential(d).expect("differential of degree 1")
    }

    /// Graded endomorphism of `A` sending basis element `i` to `image(i)`.
    fn linear_map(&self, layout: &Layout, degree: i64, image: impl Fn(usize) -> SparseRow) -> GradedMap {
        let mut triplets = Vec::new();
        for i in 0..self.dim() {
            for (k, v) in image(i) {
                triplets.push((k, i, v));
            }
        }
        Layout::map_from_triplets(self.field, layout, layout, degree, triplets).expect("homogeneous map")
    }

    /// Left multiplication by a homogeneous element of the given degree.
    pub fn left_mul(&self, x: &[Scalar], degree: i64) -> GradedMap {
        let sx = to_sparse(x);
        self.linear_map(&self.layout(), degree, |j| {
            sx.iter()
                .fold(Vec::new(), |acc, (i, a)| axpy_row(&acc, a, self.product(*i, j)))
        })
    }

    /// Right multiplication by a homogeneous element of the given degree.
    pub fn right_mul(&self, y: &[Scalar], degree: i64) -> GradedMap {
        let sy = to_sparse(y);
        self.linear_map(&self.layout(), degree, |i| {
            sy.iter()
                .fold(Vec::new(), |acc, (j, b)| axpy_row(&acc, b, self.product(i, *j)))
        })
    }

    /// `x_i x_j` in dense form.
    pub fn product_dense(&self, i: usize, j: usize) -> Element {
        self.densify(self.product(i, j))
    }

    /// Flat matrix of the differential in basis order (not degree order).
    pub fn diff_matrix(&self) -> Matrix {
        let t = (0..self.dim()).flat_map(|i| self.diff[i].iter().map(move |(k, v)| (*k, i, v.clone())));
        Matrix::from_triplets(self.field, self.dim(), self.dim(), t)
    }

    /// Multiplication table as `(i, j, x_i x_j)` for nonzero products, basis order.
    pub fn nonzero_products(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Scalar)])> + '_ {
        let dim = self.dim();
        self.products
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(move |(k, r)| (k / dim, k % dim, r.as_slice()))
    }

    /// Linear combination `Σ c_k x_k` from `(name, coefficient)` pairs.
    pub fn element(&self, terms: &[(&str, Scalar)]) -> Result<Element, AlgebraError> {
        let mut v = self.zero();
        for (n, c) in terms {
            let i = self.index_of(n).ok_or_else(|| AlgebraError::UnknownName(n.to_string()))?;
            v[i] = &v[i] + c;
        }
        Ok(v)
    }

    /// Human-readable form of an element, e.g. `2*a + -1/3*b`, or `0`.
    pub fn format_element(&self, x: &[Scalar]) -> String {
        format_terms(x.iter().enumerate().map(|(i, c)| (self.names[i].as_str(), c)))
    }

    /// Sum of positive-degree dimensions, i.e. whether `A` is concentrated in degrees `≤ 0`.
    pub fn is_nonpositive(&self) -> bool {
        self.degrees.iter().all(|&d| d <= 0)
    }

    /// Same algebra with basis changed so that basis element `slot` becomes the unit.
    ///
    /// Requires the unit's coordinate at `slot` to be nonzero; the other
    /// basis elements are kept, so the change of basis is triangular.
    pub fn with_unit_as_basis(&self, slot: usize, name: &str) -> DGAlgebra {
        let field = self.field;
        let dim = self.dim();
        let u = self.unit();
        assert!(!u[slot].is_zero(), "unit has no component at the requested slot");
        // new basis: y_slot = u, y_k = x_k otherwise; x_slot = (u - Σ_{k≠slot} u_k x_k) / u_slot
        let inv = u[slot].inv();
        let old_to_new = |v: &[Scalar]| -> Element {
            let mut w = v.to_vec();
            let c = &v[slot] * &inv;
            w[slot] = c.clone();
            for k in 0..dim {
                if k != slot {
                    w[k] = &w[k] - &(&c * &u[k]);
                }
            }
            w
        };
        let new_to_old = |i: usize| -> Element {
            if i == slot {
                u.clone()
            } else {
                self.basis_element(i)
            }
        };
        let mut names = self.names.clone();
        names[slot] = name.to_string();
        let basis = names.into_iter().zip(self.degrees.iter().copied()).collect();
        let mut unit = vec![field.zero(); dim];
        unit[slot] = field.one();
        let mut out = DGAlgebra::new(field, basis, &unit).expect("renamed basis");
        for i in 0..dim {
            for j in 0..dim {
                let p = self.mul(&new_to_old(i), &new_to_old(j));
                out.set_product(i, j, &old_to_new(&p)).unwrap();
            }
            out.set_diff(i, &old_to_new(&self.d(&new_to_old(i)))).unwrap();
        }
        out
    }
}

/// `x + y` coordinatewise.
pub fn add(x: &[Scalar], y: &[Scalar]) -> Element {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// `c x` coordinatewise.
pub fn sub(x: &[Scalar], y: &[Scalar]) -> Element {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale(c: &Scalar, x: &[Scalar]) -> Element {
    x.iter().map(|a| a * c).collect()
}

pub fn is_zero(x: &[Scalar]) -> bool {
    x.iter().all(|a| a.is_zero())
}

/// Formats `Σ c_k name_k` with exact coefficients; `0` if empty.
pub fn format_terms<'a>(terms: impl Iterator<Item = (&'a str, &'a Scalar)>) -> String {
    let parts: Vec<String> = terms
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| format!("{c}*{n}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn sign_parity(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

fn rows_equal(a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> bool {
    a == b
}

/// Checks degree additivity, associativity, unit, and differential axioms exhaustively.
pub fn validate_algebra(a: &DGAlgebra) -> AlgebraReport {
    AlgebraReport {
        violation: first_violation(a),
    }
}

fn first_violation(a: &DGAlgebra) -> Option<AlgebraViolation> {
    let dim = a.dim();
    let name = |i: usize| a.names[i].clone();
    for i in 0..dim {
        for j in 0..dim {
            if let Some((k, _)) = a
                .product(i, j)
                .iter()
                .find(|(k, _)| a.degrees[*k] != a.degrees[i] + a.degrees[j])
            {
                return Some(AlgebraViolation::ProductDegree {
                    left: name(i),
                    right: name(j),
                    term: name(*k),
                });
            }
        }
    }
    for i in 0..dim {
        if let Some((k, _)) = a.diff[i].iter().find(|(k, _)| a.degrees[*k] != a.degrees[i] + 1) {
            return Some(AlgebraViolation::DifferentialDegree {
                element: name(i),
                term: name(*k),
            });
        }
    }
    let u = a.unit();
    if !a.is_of_degree(&u, 0) || a.degree_of(&u).is_none() {
        return Some(AlgebraViolation::UnitNotHomogeneousOfDegreeZero);
    }
    for i in 0..dim {
        let x = a.basis_element(i);
        if a.mul(&u, &x) != x || a.mul(&x, &u) != x {
            return Some(AlgebraViolation::UnitNotTwoSided { element: name(i) });
        }
    }
    if a.d(&u).iter().any(|c| !c.is_zero()) {
        return Some(AlgebraViolation::UnitNotClosed);
    }
    let assoc = crate::par::map_range(dim, |i| {
        for j in 0..dim {
            let ij = a.product(i, j);
            for k in 0..dim {
                let left = ij
                    .iter()
                    .fold(Vec::new(), |acc, (m, c)| axpy_row(&acc, c, a.product(*m, k)));
                let right = a
                    .product(j, k)
                    .iter()
                    .fold(Vec::new(), |acc, (m, c)| axpy_row(&acc, c, a.product(i, *m)));
                if !rows_equal(&left, &right) {
                    return Some((j, k));
                }
            }
        }
        None
    });
    if let Some((i, (j, k))) = assoc.into_iter().enumerate().find_map(|(i, r)| r.map(|p| (i, p))) {
        return Some(AlgebraViolation::Associativity {
            a: name(i),
            b: name(j),
            c: name(k),
        });
    }
    for i in 0..dim {
        let dd = a.d(&a.d(&a.basis_element(i)));
        if dd.iter().any(|c| !c.is_zero()) {
            return Some(AlgebraViolation::DifferentialSquare { element: name(i) });
        }
    }
    let field = a.field;
    for i in 0..dim {
        let xi = a.basis_element(i);
        let dxi = a.d(&xi);
        for j in 0..dim {
            let xj = a.basis_element(j);
            let lhs = a.d(&a.product_dense(i, j));
            let s = field.sign(a.degrees[i]);
            let t1 = a.mul(&dxi, &xj);
            let t2 = a.mul(&xi, &a.d(&xj));
            let rhs: Element = t1.iter().zip(&t2).map(|(p, q)| p + &(&s * q)).collect();
            if lhs != rhs {
                return Some(AlgebraViolation::Leibniz {
                    left: name(i),
                    right: name(j),
                });
            }
        }
    }
    None
}

/// `A^op`: same basis and differential, `x ·op y = (-1)^{|x||y|} y x`.
pub fn opposite(a: &DGAlgebra) -> DGAlgebra {
    let dim = a.dim();
    let mut out = a.clone();
    for i in 0..dim {
        for j in 0..dim {
            let mut p = a.product(j, i).to_vec();
            if sign_parity(a.degrees[i] * a.degrees[j]) {
                for (_, c) in p.iter_mut() {
                    *c = -&*c;
                }
            }
            out.products[i * dim + j] = p;
        }
    }
    out
}

/// Name of the basis element `x ⊗ y` in a tensor product algebra.
pub fn tensor_name(x: &str, y: &str) -> String {
    format!("{x}o{y}")
}

/// `A ⊗ B` with basis `x_i ⊗ y_j` at index `i * dim B + j` and Koszul signs.
pub fn tensor_algebras(a: &DGAlgebra, b: &DGAlgebra) -> Result<DGAlgebra, AlgebraError> {
    if a.field != b.field {
        return Err(AlgebraError::FieldMismatch(a.field, b.field));
    }
    let field = a.field;
    let (da, db) = (a.dim(), b.dim());
    let mut basis = Vec::with_capacity(da * db);
    for i in 0..da {
        for j in 0..db {
            basis.push((tensor_name(&a.names[i], &b.names[j]), a.degrees[i] + b.degrees[j]));
        }
    }
    let mut unit = vec![field.zero(); da * db];
    for (i, u) in &a.unit {
        for (j, v) in &b.unit {
            unit[i * db + j] = u * v;
        }
    }
    let mut out = DGAlgebra::new(field, basis, &unit)?;
    let n = da * db;
    let products: Vec<SparseRow> = crate::par::map_range(n * n, |k| {
        let (p, q) = (k / n, k % n);
        let (i, j) = (p / db, p % db);
        let (i2, j2) = (q / db, q % db);
        let ap = a.product(i, i2);
        let bp = b.product(j, j2);
        if ap.is_empty() || bp.is_empty() {
            return Vec::new();
        }
        let s = field.sign(b.degrees[j] * a.degrees[i2]);
        let mut row: SparseRow = Vec::with_capacity(ap.len() * bp.len());
        for (x, c) in ap {
            for (y, e) in bp {
                row.push((x * db + y, &(&s * c) * e));
            }
        }
        row
    });
    out.products = products;
    for i in 0..da {
        for j in 0..db {
            let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (x, c) in &a.diff[i] {
                let e = row.entry(x * db + j).or_insert_with(|| field.zero());
                *e = &*e + c;
            }
            let s = field.sign(a.degrees[i]);
            for (y, c) in &b.diff[j] {
                let e = row.entry(i * db + y).or_insert_with(|| field.zero());
                *e = &*e + &(&s * c);
            }
            out.diff[i * db + j] = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
    }
    Ok(out)
}

/// `A^e = A^op ⊗ A`; basis element `i * dim + j` is `x_i ⊗ x_j` with `x_i` in the `A^op` slot.
pub fn enveloping(a: &DGAlgebra) -> DGAlgebra {
    tensor_algebras(&opposite(a), a).expect("same field")
}

/// The left `A^e`-action on `A`: `(a' ⊗ a'') · a = (-1)^{|a'|(|a| + |a''|)} a'' a a'`,
/// for basis elements `a' = x_p`, `a'' = x_q`, `a = x_k`.
pub fn lact(a: &DGAlgebra, p: usize, q: usize, k: usize) -> Element {
    let s = a.field.sign(a.degrees[p] * (a.degrees[k] + a.degrees[q]));
    let qk = a.product_dense(q, k);
    let v = a.mul(&qk, &a.basis_element(p));
    v.into_iter().map(|c| &c * &s).collect()
}

/// The right `A^e`-action on `A`: `a . (a' ⊗ a'') = (-1)^{|a||a'|} a' a a''`.
pub fn ract(a: &DGAlgebra, k: usize, p: usize, q: usize) -> Element {
    let s = a.field.sign(a.degrees[k] * a.degrees[p]);
    let pk = a.product_dense(p, k);
    let v = a.mul(&pk, &a.basis_element(q));
    v.into_iter().map(|c| &c * &s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn k() -> DGAlgebra {
        let mut a = DGAlgebra::new(q(), vec![("1".into(), 0)], &[q().one()]).unwrap();
        a.set_product(0, 0, &[q().one()]).unwrap();
        a
    }

    /// e1, e2, a with a = e2 a e1.
    fn a2(arrow_degree: i64) -> DGAlgebra {
        let one = q().one();
        let z = q().zero();
        let mut a = DGAlgebra::new(
            q(),
            vec![("e1".into(), 0), ("e2".into(), 0), ("a".into(), arrow_degree)],
            &[one.clone(), one.clone(), z.clone()],
        )
        .unwrap();
        a.set_product(0, 0, &a.basis_element(0)).unwrap();
        a.set_product(1, 1, &a.basis_element(1)).unwrap();
        a.set_product(1, 2, &a.basis_element(2)).unwrap();
        a.set_product(2, 0, &a.basis_element(2)).unwrap();
        a
    }

    #[test]
    fn validation_examples() {
        assert!(validate_algebra(&k()).is_valid());
        assert!(validate_algebra(&a2(0)).is_valid());
        assert!(validate_algebra(&a2(-1)).is_valid());
        let mut bad = a2(0);
        bad.set_diff(2, &bad.basis_element(0)).unwrap();
        assert!(matches!(
            validate_algebra(&bad).violation,
            Some(AlgebraViolation::DifferentialDegree { .. })
        ));
        let mut nonassoc = a2(0);
        nonassoc.set_product(0, 2, &nonassoc.basis_element(2)).unwrap();
        assert!(!validate_algebra(&nonassoc).is_valid());
    }

    #[test]
    fn opposite_is_involution() {
        for a in [k(), a2(0), a2(-1)] {
            let op = opposite(&a);
            assert!(validate_algebra(&op).is_valid());
            assert_eq!(opposite(&op), a);
        }
        // in A_2^op the arrow is absorbed by e1 on the left
        let op = opposite(&a2(0));
        assert_eq!(op.product_dense(0, 2), op.basis_element(2));
        assert!(op.product(2, 0).is_empty());
    }

    #[test]
    fn tensor_and_enveloping() {
        let e = enveloping(&a2(0));
        assert_eq!(e.dim(), 9);
        assert!(validate_algebra(&e).is_valid());
        assert!(validate_algebra(&enveloping(&a2(-1))).is_valid());
        let t = tensor_algebras(&k(), &a2(0)).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.degrees(), a2(0).degrees());
    }

    #[test]
    fn diagonal_action_examples() {
        let a = a2(0);
        // (e1 ⊗ e2) · a = e2 a e1 = a
        assert_eq!(lact(&a, 0, 1, 2), a.basis_element(2));
        assert_eq!(ract(&a, 2, 1, 0), a.basis_element(2));
    }

    #[test]
    fn complex_view() {
        let mut a = DGAlgebra::new(
            q(),
            vec![("1".into(), 0), ("x".into(), -1), ("y".into(), 0)],
            &[q().one(), q().zero(), q().zero()],
        )
        .unwrap();
        for i in 0..3 {
            a.set_product(0, i, &a.basis_element(i)).unwrap();
            a.set_product(i, 0, &a.basis_element(i)).unwrap();
        }
        a.set_diff(1, &a.basis_element(2)).unwrap();
        assert!(validate_algebra(&a).is_valid());
        let h = crate::complex::cohomology_dims(&a.as_complex());
        assert_eq!(h, BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn unit_basis_change() {
        let a = a2(0);
        let b = a.with_unit_as_basis(0, "1");
        assert!(validate_algebra(&b).is_valid());
        assert_eq!(b.unit(), b.basis_element(0));
    }
}
