//! Cochain complexes of finite-dimensional graded spaces.
//!
//! Differentials have degree +1. Signs follow one frozen Koszul regime:
//!
//! * shift: `(C[t])^n = C^{n+t}`, `d_{C[t]} = (-1)^t d_C`;
//! * cone of `f: C → D`: `D^n ⊕ C^{n+1}` with `d = (d_D, f; 0, -d_C)`;
//! * tensor: `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`;
//! * Hom: `d(f) = d_E ∘ f - (-1)^{|f|} f ∘ d_C`;
//! * dual: `C^* = Hom(C, k)`, so `d(φ) = -(-1)^{|φ|} φ ∘ d_C`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graded::{GradedError, GradedMap, GradedSpace};
use crate::linalg::{self, LinalgError, SpanQuotient, Splitting};
use crate::matrix::{Matrix, SparseRow};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("map is not closed under the Hom differential")]
    NotClosed,
    #[error("expected a degree-0 map, got degree {0}")]
    NonzeroDegree(i64),
    #[error("entry from basis vector {src} (degree {from}) to {dst} (degree {to}) does not raise degree by {expected}")]
    DegreeViolation {
        src: usize,
        dst: usize,
        from: i64,
        to: i64,
        expected: i64,
    },
    #[error("spanning set at degree {0} is not closed under the differential")]
    NotSubcomplex(i64),
    #[error("source/target spaces do not match the complexes")]
    SpaceMismatch,
}

/// Basis bookkeeping from builder order to `(degree, local index)`.
#[derive(Clone, Debug)]
pub struct Layout {
    space: GradedSpace,
    pos: Vec<(i64, usize)>,
}

impl Layout {
    pub fn from_degrees(degrees: &[i64]) -> Layout {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        let pos = degrees
            .iter()
            .map(|&d| {
                let c = counts.entry(d).or_insert(0);
                *c += 1;
                (d, *c - 1)
            })
            .collect();
        Layout {
            space: GradedSpace::new(counts),
            pos,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn position(&self, i: usize) -> (i64, usize) {
        self.pos[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.pos[i].0
    }

    /// Flat index in the degree-ascending order.
    pub fn flat(&self, i: usize) -> usize {
        let (d, l) = self.pos[i];
        self.space.offset(d) + l
    }

    /// Graded map from `(target, source, value)` triplets in builder indices.
    pub fn map_from_triplets(
        field: Field,
        source: &Layout,
        target: &Layout,
        degree: i64,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<GradedMap, ComplexError> {
        let mut by_deg: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
        for (t, s, v) in triplets {
            let (sd, sl) = source.pos[s];
            let (td, tl) = target.pos[t];
            if td != sd + degree {
                return Err(ComplexError::DegreeViolation {
                    src: s,
                    dst: t,
                    from: sd,
                    to: td,
                    expected: degree,
                });
            }
            by_deg.entry(sd).or_default().push((tl, sl, v));
        }
        let blocks = by_deg.into_iter().map(|(n, t)| {
            (
                n,
                Matrix::from_triplets(field, target.space.dim(n + degree), source.space.dim(n), t),
            )
        });
        Ok(GradedMap::from_blocks(field, &source.space, &target.space, degree, blocks)?)
    }
}

/// Accumulates basis vectors (with degrees) and differential entries in any order.
#[derive(Clone, Debug)]
pub struct ComplexBuilder {
    field: Field,
    degrees: Vec<i64>,
    entries: Vec<(usize, usize, Scalar)>,
}

impl ComplexBuilder {
    pub fn new(field: Field) -> ComplexBuilder {
        ComplexBuilder {
            field,
            degrees: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn add_basis(&mut self, degree: i64) -> usize {
        self.degrees.push(degree);
        self.degrees.len() - 1
    }

    /// Adds `value` to the coefficient of basis vector `target` in `d(source)`.
    pub fn add_entry(&mut self, target: usize, source: usize, value: Scalar) {
        if !value.is_zero() {
            self.entries.push((target, source, value));
        }
    }

    pub fn finish(self) -> Result<(Complex, Layout), ComplexError> {
        let layout = Layout::from_degrees(&self.degrees);
        let d = Layout::map_from_triplets(self.field, &layout, &layout, 1, self.entries)?;
        Ok((
            Complex {
                field: self.field,
                space: layout.space.clone(),
                d,
            },
            layout,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    field: Field,
    space: GradedSpace,
    d: GradedMap,
}

/// Result of [`validate_complex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexReport {
    /// Degrees `n` where `d_{n+1} ∘ d_n ≠ 0`.
    pub violations: Vec<i64>,
}

impl ComplexReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Complex {
    /// Builds from differential blocks keyed by source degree.
    pub fn new(
        field: Field,
        space: GradedSpace,
        blocks: impl IntoIterator<Item = (i64, Matrix)>,
    ) -> Result<Complex, ComplexError> {
        let d = GradedMap::from_blocks(field, &space, &space, 1, blocks)?;
        Ok(Complex { field, space, d })
    }

    pub fn from_differential(d: GradedMap) -> Result<Complex, ComplexError> {
        if d.degree() != 1 || d.source() != d.target() {
            return Err(ComplexError::SpaceMismatch);
        }
        Ok(Complex {
            field: d.field(),
            space: d.source().clone(),
            d,
        })
    }

    pub fn zero(field: Field) -> Complex {
        Complex::with_zero_differential(field, GradedSpace::zero())
    }

    pub fn with_zero_differential(field: Field, space: GradedSpace) -> Complex {
        Complex {
            field,
            d: GradedMap::zero(field, &space, &space, 1),
            space,
        }
    }

    /// The ground field as a complex concentrated in `degree`.
    pub fn unit(field: Field, degree: i64) -> Complex {
        Complex::with_zero_differential(field, GradedSpace::new([(degree, 1)]))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self, n: i64) -> usize {
        self.space.dim(n)
    }

    pub fn differential(&self) -> &GradedMap {
        &self.d
    }

    /// `d: C^n → C^{n+1}`.
    pub fn d(&self, n: i64) -> Matrix {
        self.d.block(n)
    }

    pub fn identity(&self) -> ChainMap {
        ChainMap {
            source: self.clone(),
            target: self.clone(),
            map: GradedMap::identity(self.field, &self.space),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space.euler_characteristic()
    }

    /// Subcomplex spanned by the given vectors per degree (must be independent and `d`-stable).
    /// Returns the subcomplex and the inclusion.
    pub fn subcomplex(
        &self,
        basis: &BTreeMap<i64, Vec<Vec<Scalar>>>,
    ) -> Result<(Complex, ChainMap), ComplexError> {
        let field = self.field;
        let sub_space = GradedSpace::new(basis.iter().map(|(&n, v)| (n, v.len())));
        let splittings: BTreeMap<i64, Splitting> = basis
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(&n, v)| Ok((n, Splitting::new(field, self.dim(n), v)?)))
            .collect::<Result<_, LinalgError>>()?;
        let mut blocks = Vec::new();
        for (&n, vs) in basis.iter().filter(|(_, v)| !v.is_empty()) {
            let dn = self.d(n);
            let images: Vec<Vec<Scalar>> = vs.iter().map(|v| dn.mul_vec(v)).collect();
            let coords: Vec<Vec<Scalar>> = match splittings.get(&(n + 1)) {
                Some(sp) => {
                    let mut out = Vec::new();
                    for img in &images {
                        if sp.quotient_coords(img).iter().any(|x| !x.is_zero()) {
                            return Err(ComplexError::NotSubcomplex(n));
                        }
                        out.push(sp.sub_coords(img));
                    }
                    out
                }
                None => {
                    if images.iter().any(|img| img.iter().any(|x| !x.is_zero())) {
                        return Err(ComplexError::NotSubcomplex(n));
                    }
                    continue;
                }
            };
            blocks.push((n, Matrix::from_columns(field, sub_space.dim(n + 1), &coords)));
        }
        let sub = Complex::new(field, sub_space.clone(), blocks)?;
        let incl_blocks = basis
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(&n, v)| (n, Matrix::from_columns(field, self.dim(n), v)));
        let incl = GradedMap::from_blocks(field, &sub_space, &self.space, 0, incl_blocks)?;
        Ok((
            sub.clone(),
            ChainMap {
                source: sub,
                target: self.clone(),
                map: incl,
            },
        ))
    }

    /// Quotient by the subcomplex spanned by `sub` (any spanning set; must be `d`-stable).
    /// Returns the quotient, the projection, and the section along the
    /// standard complement (a graded map, not a chain map in general).
    pub fn quotient(
        &self,
        sub: &BTreeMap<i64, Vec<Vec<Scalar>>>,
    ) -> Result<(Complex, ChainMap, GradedMap), ComplexError> {
        let sparse = sub
            .iter()
            .map(|(&n, vs)| (n, vs.iter().map(|v| linalg::dense_to_sparse(v)).collect()))
            .collect();
        self.quotient_by_span(&sparse)
    }

    pub fn quotient_by_span(
        &self,
        sub: &BTreeMap<i64, Vec<SparseRow>>,
    ) -> Result<(Complex, ChainMap, GradedMap), ComplexError> {
        let field = self.field;
        let degrees: Vec<i64> = self.space.degrees().collect();
        let quotients = crate::par::map(&degrees, |&n| {
            let span = sub.get(&n).cloned().unwrap_or_default();
            SpanQuotient::new(field, self.dim(n), span)
        });
        let qspace = GradedSpace::new(degrees.iter().zip(&quotients).map(|(&n, q)| (n, q.quotient_dim())));
        let proj = GradedMap::from_blocks(
            field,
            &self.space,
            &qspace,
            0,
            degrees.iter().zip(&quotients).map(|(&n, q)| (n, q.projection())),
        )?;
        let sect = GradedMap::from_blocks(
            field,
            &qspace,
            &self.space,
            0,
            degrees.iter().zip(&quotients).map(|(&n, q)| (n, q.section())),
        )?;
        let qd = proj.compose(&self.d).compose(&sect);
        let q = Complex::from_differential(qd)?;
        for (&n, rows) in sub {
            let Some(qn) = degrees.iter().position(|&m| m == n + 1).map(|i| &quotients[i]) else {
                continue;
            };
            let dn = self.d(n);
            for r in rows {
                let v = linalg::sparse_to_dense(field, self.dim(n), r);
                if !qn.contains(&dn.mul_vec(&v)) {
                    return Err(ComplexError::NotSubcomplex(n));
                }
            }
        }
        let pm = ChainMap {
            source: self.clone(),
            target: q.clone(),
            map: proj,
        };
        Ok((q, pm, sect))
    }
}

pub fn validate_complex(c: &Complex) -> ComplexReport {
    let violations = c
        .space
        .degrees()
        .filter(|&n| {
            let (a, b) = (c.d.block_ref(n), c.d.block_ref(n + 1));
            match (a, b) {
                (Some(a), Some(b)) => !b.mul(a).is_zero(),
                _ => false,
            }
        })
        .collect();
    ComplexReport { violations }
}

/// Cohomology with chosen representatives and class coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySummary {
    pub dims: BTreeMap<i64, usize>,
    /// Cocycle lifts of a basis of `H^n`, as vectors in `C^n`.
    pub representatives: BTreeMap<i64, Vec<Vec<Scalar>>>,
    /// `h_n x dim C^n`; sends a cocycle to the coordinates of its class.
    pub projection: BTreeMap<i64, Matrix>,
}

impl CohomologySummary {
    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn class_of(&self, n: i64, cocycle: &[Scalar]) -> Vec<Scalar> {
        match self.projection.get(&n) {
            Some(p) => p.mul_vec(cocycle),
            None => Vec::new(),
        }
    }
}

/// Degreewise `ker d / im d`, with representatives chosen by the leftmost-pivot rule.
pub fn cohomology(c: &Complex) -> CohomologySummary {
    let field = c.field;
    let degrees: Vec<i64> = c.space.degrees().collect();
    let per_degree = crate::par::map(&degrees, |&n| {
        let dim = c.dim(n);
        let z = linalg::kernel_basis(&c.d(n));
        let dprev = c.d(n - 1);
        let b: Vec<Vec<Scalar>> = linalg::pivot_columns(&dprev)
            .into_iter()
            .map(|j| dprev.column(j))
            .collect();
        let mut rref = linalg::Rref::new(field, dim);
        for v in &b {
            rref.insert_dense(v);
        }
        let reps: Vec<Vec<Scalar>> = z.into_iter().filter(|v| rref.insert_dense(v)).collect();
        if reps.is_empty() {
            return (n, reps, None);
        }
        let mut fam = b.clone();
        fam.extend(reps.iter().cloned());
        let sp = Splitting::new(field, dim, &fam).expect("boundaries and representatives are independent");
        let sub = sp.sub_matrix();
        let rows: Vec<usize> = (b.len()..fam.len()).collect();
        (n, reps, Some(sub.select_rows(&rows)))
    });
    let mut summary = CohomologySummary {
        dims: BTreeMap::new(),
        representatives: BTreeMap::new(),
        projection: BTreeMap::new(),
    };
    for (n, reps, proj) in per_degree {
        if let Some(p) = proj {
            summary.dims.insert(n, reps.len());
            summary.representatives.insert(n, reps);
            summary.projection.insert(n, p);
        }
    }
    summary
}

/// Cohomology dimensions only (rank computations, no representatives).
pub fn cohomology_dims(c: &Complex) -> BTreeMap<i64, usize> {
    let degrees: Vec<i64> = c.space.degrees().collect();
    let ranks: BTreeMap<i64, usize> = crate::par::map(&degrees, |&n| (n, linalg::rank(&c.d(n))))
        .into_iter()
        .collect();
    degrees
        .iter()
        .filter_map(|&n| {
            let h = c.dim(n) - ranks[&n] - ranks.get(&(n - 1)).copied().unwrap_or(0);
            (h > 0).then_some((n, h))
        })
        .collect()
}

/// `c[t]` with `H^n(c[t]) = H^{n+t}(c)`.
pub fn shift(c: &Complex, t: i64) -> Complex {
    let sign = c.field.sign(t);
    let space = c.space.shifted(t);
    let blocks = c.d.blocks().iter().map(|(&n, b)| (n - t, b.scale(&sign)));
    Complex::new(c.field, space, blocks).expect("shifted shapes")
}

/// `c^*` with `(c^*)^n = (c^{-n})^*`.
pub fn dual(c: &Complex) -> Complex {
    let field = c.field;
    let space = c.space.dual();
    // (c^*)^n -> (c^*)^{n+1} is -(-1)^n d_{-n-1}^T
    let blocks: Vec<(i64, Matrix)> = c
        .d
        .blocks()
        .iter()
        .map(|(&m, b)| {
            let n = -m - 1;
            (n, b.transpose().scale(&(-field.sign(n))))
        })
        .collect();
    Complex::new(field, space, blocks).expect("dual shapes")
}

/// Offsets of the `(p, q)` summands of `(c ⊗ e)^n`, ordered by `p`.
pub struct TensorLayout {
    space: GradedSpace,
    offsets: BTreeMap<(i64, i64), usize>,
    right_dims: GradedSpace,
}

impl TensorLayout {
    pub fn new(left: &GradedSpace, right: &GradedSpace) -> TensorLayout {
        let mut offsets = BTreeMap::new();
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for (&p, &dp) in left.dims() {
            for (&q, &dq) in right.dims() {
                let n = p + q;
                let cur = dims.entry(n).or_insert(0);
                offsets.insert((p, q), *cur);
                *cur += dp * dq;
            }
        }
        TensorLayout {
            space: GradedSpace::new(dims),
            offsets,
            right_dims: right.clone(),
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Local index in degree `p + q` of `x_i ⊗ y_j` with `x_i ∈ left^p`, `y_j ∈ right^q`.
    pub fn index(&self, p: i64, i: usize, q: i64, j: usize) -> usize {
        self.offsets[&(p, q)] + i * self.right_dims.dim(q) + j
    }
}

/// Tensor product over the ground field with Koszul-signed differential.
pub fn tensor(c: &Complex, e: &Complex) -> Result<Complex, ComplexError> {
    if c.field != e.field {
        return Err(ComplexError::FieldMismatch(c.field, e.field));
    }
    let field = c.field;
    let lay = TensorLayout::new(&c.space, &e.space);
    let mut by_deg: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
    for (&p, &dp) in c.space.dims() {
        for (&q, &dq) in e.space.dims() {
            let n = p + q;
            let entry = by_deg.entry(n).or_default();
            if let Some(dc) = c.d.block_ref(p) {
                for (i2, i, v) in dc.triplets() {
                    for j in 0..dq {
                        entry.push((lay.index(p + 1, i2, q, j), lay.index(p, i, q, j), v.clone()));
                    }
                }
            }
            if let Some(de) = e.d.block_ref(q) {
                let s = field.sign(p);
                for (j2, j, v) in de.triplets() {
                    for i in 0..dp {
                        entry.push((lay.index(p, i, q + 1, j2), lay.index(p, i, q, j), v * &s));
                    }
                }
            }
        }
    }
    let blocks = by_deg.into_iter().map(|(n, t)| {
        (
            n,
            Matrix::from_triplets(field, lay.space.dim(n + 1), lay.space.dim(n), t),
        )
    });
    Complex::new(field, lay.space.clone(), blocks)
}

/// Basis bookkeeping for `Hom^n(c, e) = ⊕_m Hom(c^m, e^{m+n})`.
///
/// The basis vector `(m, a, b)` is the elementary map sending the `b`-th
/// basis vector of `c^m` to the `a`-th basis vector of `e^{m+n}`.
pub struct HomLayout {
    source: GradedSpace,
    target: GradedSpace,
    space: GradedSpace,
    offsets: BTreeMap<(i64, i64), usize>,
}

impl HomLayout {
    pub fn new(source: &GradedSpace, target: &GradedSpace) -> HomLayout {
        let mut offsets = BTreeMap::new();
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for (&m, &dm) in source.dims() {
            for (&k, &dk) in target.dims() {
                let n = k - m;
                let cur = dims.entry(n).or_insert(0);
                offsets.insert((n, m), *cur);
                *cur += dm * dk;
            }
        }
        HomLayout {
            source: source.clone(),
            target: target.clone(),
            space: GradedSpace::new(dims),
            offsets,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn index(&self, n: i64, m: i64, a: usize, b: usize) -> usize {
        self.offsets[&(n, m)] + a * self.source.dim(m) + b
    }

    /// Vector in `Hom^n` → graded map of degree `n`.
    pub fn to_map(&self, field: Field, n: i64, v: &[Scalar]) -> GradedMap {
        let mut blocks = Vec::new();
        for (&m, &dm) in self.source.dims() {
            let dk = self.target.dim(m + n);
            if dk == 0 {
                continue;
            }
            let off = self.offsets[&(n, m)];
            let t: Vec<(usize, usize, Scalar)> = (0..dk)
                .flat_map(|a| (0..dm).map(move |b| (a, b)))
                .filter_map(|(a, b)| {
                    let x = &v[off + a * dm + b];
                    (!x.is_zero()).then(|| (a, b, x.clone()))
                })
                .collect();
            blocks.push((m, Matrix::from_triplets(field, dk, dm, t)));
        }
        GradedMap::from_blocks(field, &self.source, &self.target, n, blocks).expect("hom blocks")
    }

    pub fn to_vector(&self, f: &GradedMap) -> Vec<Scalar> {
        let n = f.degree();
        let mut v = vec![f.field().zero(); self.space.dim(n)];
        for (&m, b) in f.blocks() {
            for (a, bb, x) in b.triplets() {
                v[self.index(n, m, a, bb)] = x.clone();
            }
        }
        v
    }
}

/// The Hom complex `Hom(c, e)` with `d(f) = d_e ∘ f - (-1)^{|f|} f ∘ d_c`.
pub fn hom_complex(c: &Complex, e: &Complex) -> Result<Complex, ComplexError> {
    Ok(hom_complex_with_layout(c, e)?.0)
}

pub fn hom_complex_with_layout(c: &Complex, e: &Complex) -> Result<(Complex, HomLayout), ComplexError> {
    if c.field != e.field {
        return Err(ComplexError::FieldMismatch(c.field, e.field));
    }
    let field = c.field;
    let lay = HomLayout::new(&c.space, &e.space);
    let mut by_deg: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
    for (&m, &dm) in c.space.dims() {
        for (&k, &dk) in e.space.dims() {
            let n = k - m;
            let entry = by_deg.entry(n).or_default();
            // d_e ∘ E_ab : Hom(c^m, e^{k+1})
            if let Some(de) = e.d.block_ref(k) {
                for (a2, a, v) in de.triplets() {
                    for b in 0..dm {
                        entry.push((lay.index(n + 1, m, a2, b), lay.index(n, m, a, b), v.clone()));
                    }
                }
            }
            // -(-1)^n E_ab ∘ d_c^{m-1} : Hom(c^{m-1}, e^k)
            if let Some(dc) = c.d.block_ref(m - 1) {
                let s = -field.sign(n);
                for (b, b2, v) in dc.triplets() {
                    for a in 0..dk {
                        entry.push((lay.index(n + 1, m - 1, a, b2), lay.index(n, m, a, b), v * &s));
                    }
                }
            }
        }
    }
    let blocks: Vec<(i64, Matrix)> = by_deg
        .into_iter()
        .map(|(n, t)| {
            (
                n,
                Matrix::from_triplets(field, lay.space.dim(n + 1), lay.space.dim(n), t),
            )
        })
        .collect();
    Ok((Complex::new(field, lay.space.clone(), blocks)?, lay))
}

/// A homogeneous map between complexes (closed or not).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    map: GradedMap,
}

impl ChainMap {
    pub fn new(source: &Complex, target: &Complex, map: GradedMap) -> Result<ChainMap, ComplexError> {
        if map.source() != source.space() || map.target() != target.space() {
            return Err(ComplexError::SpaceMismatch);
        }
        Ok(ChainMap {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn zero(source: &Complex, target: &Complex, degree: i64) -> ChainMap {
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            map: GradedMap::zero(source.field, source.space(), target.space(), degree),
        }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn map(&self) -> &GradedMap {
        &self.map
    }

    pub fn degree(&self) -> i64 {
        self.map.degree()
    }

    pub fn block(&self, n: i64) -> Matrix {
        self.map.block(n)
    }

    /// `d(f) = d_target ∘ f - (-1)^{|f|} f ∘ d_source`.
    pub fn hom_differential(&self) -> GradedMap {
        let s = -self.source.field.sign(self.degree());
        self.target
            .d
            .compose(&self.map)
            .add(&self.map.compose(&self.source.d).scale(&s))
    }

    pub fn is_closed(&self) -> bool {
        self.hom_differential().is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&other.map),
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.add(&other.map),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.scale(c),
        }
    }

    /// Matrix of the induced map `H^n(source) → H^{n+t}(target)` in the chosen bases.
    pub fn induced(&self, n: i64, hs: &CohomologySummary, ht: &CohomologySummary) -> Matrix {
        let field = self.source.field;
        let rows = ht.dim(n + self.degree());
        let reps = hs.representatives.get(&n).cloned().unwrap_or_default();
        let cols: Vec<Vec<Scalar>> = reps
            .iter()
            .map(|r| {
                let img = self.map.apply(n, r);
                ht.class_of(n + self.degree(), &img)
            })
            .collect();
        if cols.is_empty() {
            return Matrix::zeros(field, rows, 0);
        }
        Matrix::from_columns(field, rows, &cols)
    }
}

/// `Cone(f) = target ⊕ source[1]` for a closed degree-0 `f`.
pub fn cone(f: &ChainMap) -> Result<Complex, ComplexError> {
    if f.degree() != 0 {
        return Err(ComplexError::NonzeroDegree(f.degree()));
    }
    if !f.is_closed() {
        return Err(ComplexError::NotClosed);
    }
    Ok(cone_unchecked(f))
}

fn cone_unchecked(f: &ChainMap) -> Complex {
    let field = f.source.field;
    let (c, d) = (&f.source, &f.target);
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for (&n, &k) in d.space.dims() {
        *dims.entry(n).or_insert(0) += k;
    }
    for (&n, &k) in c.space.dims() {
        *dims.entry(n - 1).or_insert(0) += k;
    }
    let space = GradedSpace::new(dims.clone());
    let mut blocks = Vec::new();
    for &n in dims.keys() {
        let heights = [d.dim(n + 1), c.dim(n + 2)];
        let widths = [d.dim(n), c.dim(n + 1)];
        let dd = d.d(n);
        let fb = f.block(n + 1);
        let dc = c.d(n + 1).neg();
        let b = Matrix::from_blocks(
            field,
            &heights,
            &widths,
            &[vec![Some(&dd), Some(&fb)], vec![None, Some(&dc)]],
        );
        blocks.push((n, b));
    }
    Complex::new(field, space, blocks).expect("cone shapes")
}

/// Per-degree outcome of a quasi-isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub is_quasi_iso: bool,
    /// Nonzero cohomology dimensions of the cone.
    pub cone_dims: BTreeMap<i64, usize>,
}

pub fn is_quasi_iso(f: &ChainMap) -> Result<QuasiIsoReport, ComplexError> {
    let c = cone(f)?;
    let cone_dims = cohomology_dims(&c);
    Ok(QuasiIsoReport {
        is_quasi_iso: cone_dims.is_empty(),
        cone_dims,
    })
}

/// Quasi-isomorphism test through induced maps on cohomology: every
/// `H^n(f)` must be a square invertible matrix.
pub fn is_quasi_iso_by_induced(f: &ChainMap) -> Result<bool, ComplexError> {
    if f.degree() != 0 {
        return Err(ComplexError::NonzeroDegree(f.degree()));
    }
    if !f.is_closed() {
        return Err(ComplexError::NotClosed);
    }
    let hs = cohomology(&f.source);
    let ht = cohomology(&f.target);
    if hs.dims != ht.dims {
        return Ok(false);
    }
    Ok(hs
        .dims
        .keys()
        .all(|&n| linalg::is_invertible(&f.induced(n, &hs, &ht))))
}

/// Basis of closed degree-`t` maps `c → e`.
pub fn chain_map_space(c: &Complex, e: &Complex, t: i64) -> Result<Vec<ChainMap>, ComplexError> {
    let (h, lay) = hom_complex_with_layout(c, e)?;
    let z = linalg::kernel_basis(&h.d(t));
    Ok(z.iter()
        .map(|v| ChainMap {
            source: c.clone(),
            target: e.clone(),
            map: lay.to_map(c.field, t, v),
        })
        .collect())
}

/// Limits for [`find_quasi_iso`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest total coefficient height `Σ|c_i|` tried for combinations.
    pub max_height: u32,
    /// Hard cap on candidates examined.
    pub max_candidates: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_height: 3,
            max_candidates: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        map: ChainMap,
        /// Integer coefficients on the search basis that produced the witness.
        coefficients: Vec<i64>,
        candidates_tried: usize,
    },
    NotFound {
        reason: String,
        candidates_tried: usize,
    },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn map(&self) -> Option<&ChainMap> {
        match self {
            SearchOutcome::Found { map, .. } => Some(map),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

/// Integer vectors of length `r` with `Σ|c_i| = h`, in a fixed order.
pub fn integer_vectors_of_height(r: usize, h: u32) -> Vec<Vec<i64>> {
    fn rec(r: usize, h: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == r {
            if h == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if prefix.len() + 1 == r {
            for v in if h == 0 { vec![0] } else { vec![h, -h] } {
                prefix.push(v);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for a in 0..=h {
            let signs: &[i64] = if a == 0 { &[1] } else { &[1, -1] };
            for s in signs {
                prefix.push(s * a);
                rec(r, h - a, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    if r > 0 {
        rec(r, h as i64, &mut Vec::new(), &mut out);
    }
    out
}

/// Searches for a closed degree-0 map `c → e` with acyclic cone.
///
/// The closed-map basis is first thinned to a subset whose induced maps on
/// cohomology are independent (other basis elements only add homotopically
/// irrelevant or redundant directions). Candidates are the subset's members
/// in order, then integer combinations by increasing total height. Each
/// candidate is screened by invertibility of its induced maps and the
/// winner is confirmed by cone acyclicity.
pub fn find_quasi_iso(c: &Complex, e: &Complex, budget: SearchBudget) -> Result<SearchOutcome, ComplexError> {
    if c.field != e.field {
        return Err(ComplexError::FieldMismatch(c.field, e.field));
    }
    let hc = cohomology(c);
    let he = cohomology(e);
    if hc.dims != he.dims {
        return Ok(SearchOutcome::NotFound {
            reason: "cohomology dimensions differ".into(),
            candidates_tried: 0,
        });
    }
    if hc.is_acyclic() {
        return Ok(SearchOutcome::Found {
            map: ChainMap::zero(c, e, 0),
            coefficients: Vec::new(),
            candidates_tried: 1,
        });
    }
    let basis = chain_map_space(c, e, 0)?;
    search_span(c, e, &hc, &he, &basis, budget)
}

/// Like [`find_quasi_iso`], but searching only the span of the given closed
/// degree-0 maps (for instance, module maps).
pub fn find_quasi_iso_in(
    c: &Complex,
    e: &Complex,
    basis: &[ChainMap],
    budget: SearchBudget,
) -> Result<SearchOutcome, ComplexError> {
    if c.field != e.field {
        return Err(ComplexError::FieldMismatch(c.field, e.field));
    }
    if basis.iter().any(|f| f.degree() != 0) {
        return Err(ComplexError::NonzeroDegree(1));
    }
    if !basis.iter().all(ChainMap::is_closed) {
        return Err(ComplexError::NotClosed);
    }
    let hc = cohomology(c);
    let he = cohomology(e);
    if hc.dims != he.dims {
        return Ok(SearchOutcome::NotFound {
            reason: "cohomology dimensions differ".into(),
            candidates_tried: 0,
        });
    }
    if hc.is_acyclic() {
        return Ok(SearchOutcome::Found {
            map: ChainMap::zero(c, e, 0),
            coefficients: Vec::new(),
            candidates_tried: 1,
        });
    }
    search_span(c, e, &hc, &he, basis, budget)
}

fn search_span(
    c: &Complex,
    e: &Complex,
    hc: &CohomologySummary,
    he: &CohomologySummary,
    basis: &[ChainMap],
    budget: SearchBudget,
) -> Result<SearchOutcome, ComplexError> {
    let field = c.field;
    if basis.is_empty() {
        return Ok(SearchOutcome::NotFound {
            reason: "no candidate maps".into(),
            candidates_tried: 0,
        });
    }
    let degrees: Vec<i64> = hc.dims.keys().copied().collect();
    let induced: Vec<Vec<Matrix>> = crate::par::map(&basis, |f| {
        degrees.iter().map(|&n| f.induced(n, hc, he)).collect()
    });
    let flat: Vec<Vec<Scalar>> = induced
        .iter()
        .map(|ms| {
            ms.iter()
                .flat_map(|m| m.to_dense().into_iter().flatten())
                .collect()
        })
        .collect();
    let width = flat.first().map_or(0, |v| v.len());
    let chosen = linalg::independent_subset(field, width, &flat);
    let r = chosen.len();
    let mut tried = 0usize;
    for h in 1..=budget.max_height {
        let combos: Vec<Vec<i64>> = if h == 1 {
            (0..r)
                .map(|i| {
                    let mut v = vec![0; r];
                    v[i] = 1;
                    v
                })
                .collect()
        } else {
            integer_vectors_of_height(r, h)
                .into_iter()
                // a vector and its negative give the same verdict
                .filter(|v| v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0))
                .collect()
        };
        let remaining = budget.max_candidates.saturating_sub(tried);
        let combos = &combos[..combos.len().min(remaining)];
        let hit = crate::par::find_map_first(combos, |coef| {
            let ok = degrees.iter().enumerate().all(|(k, _)| {
                let mut acc = Matrix::zeros(field, induced[chosen[0]][k].rows(), induced[chosen[0]][k].cols());
                for (ci, &bi) in coef.iter().zip(&chosen) {
                    if *ci != 0 {
                        acc = acc.add(&induced[bi][k].scale(&field.from_i64(*ci)));
                    }
                }
                linalg::is_invertible(&acc)
            });
            ok.then(|| coef.clone())
        });
        match hit {
            Some(coef) => {
                tried += combos.iter().position(|c| *c == coef).unwrap() + 1;
                let mut map = ChainMap::zero(c, e, 0);
                for (ci, &bi) in coef.iter().zip(&chosen) {
                    if *ci != 0 {
                        map = map.add(&basis[bi].scale(&field.from_i64(*ci)));
                    }
                }
                let report = is_quasi_iso(&map)?;
                if !report.is_quasi_iso {
                    return Err(ComplexError::NotClosed);
                }
                return Ok(SearchOutcome::Found {
                    map,
                    coefficients: coef,
                    candidates_tried: tried,
                });
            }
            None => tried += combos.len(),
        }
        if tried >= budget.max_candidates {
            break;
        }
    }
    Ok(SearchOutcome::NotFound {
        reason: format!("no witness within height {} ({} candidates)", budget.max_height, tried),
        candidates_tried: tried,
    })
}

/// The image of an idempotent endomorphism (chain map or not), with coordinates.
#[derive(Clone, Debug)]
pub struct Summand {
    pub complex: Complex,
    pub inclusion: ChainMap,
    idempotent: GradedMap,
    splittings: BTreeMap<i64, Splitting>,
}

impl Summand {
    /// `e` must be a degree-0 idempotent chain endomorphism of `c`.
    pub fn of_idempotent(c: &Complex, e: &GradedMap) -> Result<Summand, ComplexError> {
        if e.degree() != 0 {
            return Err(ComplexError::NonzeroDegree(e.degree()));
        }
        if e.source() != c.space() || e.target() != c.space() {
            return Err(ComplexError::SpaceMismatch);
        }
        let field = c.field();
        let mut basis = BTreeMap::new();
        for n in c.space().degrees() {
            let b = e.block(n);
            let cols: Vec<Vec<Scalar>> = linalg::pivot_columns(&b).into_iter().map(|j| b.column(j)).collect();
            if !cols.is_empty() {
                basis.insert(n, cols);
            }
        }
        let (sub, inclusion) = c.subcomplex(&basis)?;
        let splittings = basis
            .iter()
            .map(|(&n, v)| Ok((n, Splitting::new(field, c.dim(n), v)?)))
            .collect::<Result<_, LinalgError>>()?;
        Ok(Summand {
            complex: sub,
            inclusion,
            idempotent: e.clone(),
            splittings,
        })
    }

    /// Coordinates of a vector of the image, in degree `n`.
    pub fn coords(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        match self.splittings.get(&n) {
            Some(sp) => sp.sub_coords(v),
            None => Vec::new(),
        }
    }

    /// `c → image`, `v ↦ coords(e v)`.
    pub fn retraction(&self) -> GradedMap {
        let field = self.complex.field();
        let blocks: Vec<(i64, Matrix)> = self
            .splittings
            .iter()
            .map(|(&n, sp)| (n, sp.sub_matrix().mul(&self.idempotent.block(n))))
            .collect();
        GradedMap::from_blocks(field, self.idempotent.source(), self.complex.space(), 0, blocks)
            .expect("retraction blocks")
    }

    /// Restriction of a map `f: X → c` whose image lies in the summand; `None` otherwise.
    pub fn corestrict(&self, f: &GradedMap) -> Option<GradedMap> {
        let field = self.complex.field();
        let mut blocks = Vec::new();
        for (&n, b) in f.blocks() {
            let t = n + f.degree();
            let sp = self.splittings.get(&t)?;
            let mut cols = Vec::with_capacity(b.cols());
            for j in 0..b.cols() {
                let col = b.column(j);
                if sp.quotient_coords(&col).iter().any(|x| !x.is_zero()) {
                    return None;
                }
                cols.push(sp.sub_coords(&col));
            }
            blocks.push((n, Matrix::from_columns(field, sp.sub_dim(), &cols)));
        }
        Some(GradedMap::from_blocks(field, f.source(), self.complex.space(), f.degree(), blocks).expect("corestricted"))
    }

    /// `retraction ∘ f ∘ inclusion` for an endomorphism-like map of `c`.
    pub fn compress(&self, f: &GradedMap) -> GradedMap {
        self.retraction().compose(f).compose(self.inclusion.map())
    }
}

/// `diag((-1)^n)` on a graded space.
pub fn parity(field: Field, space: &GradedSpace) -> GradedMap {
    let blocks = space
        .dims()
        .iter()
        .map(|(&n, &k)| (n, Matrix::scalar_identity(field, k, &field.sign(n))));
    GradedMap::from_blocks(field, space, space, 0, blocks).expect("parity blocks")
}

/// `f ⊗ g` between tensor products laid out by [`TensorLayout`].
///
/// With `koszul` set, `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`; otherwise no sign.
pub fn tensor_maps(f: &GradedMap, g: &GradedMap, koszul: bool) -> GradedMap {
    let field = f.field();
    let src = TensorLayout::new(f.source(), g.source());
    let tgt = TensorLayout::new(f.target(), g.target());
    let (df, dg) = (f.degree(), g.degree());
    let mut by_deg: BTreeMap<i64, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
    for (&p, fb) in f.blocks() {
        let s = if koszul { field.sign(dg * p) } else { field.one() };
        for (&q, gb) in g.blocks() {
            let entry = by_deg.entry(p + q).or_default();
            for (i2, i, a) in fb.triplets() {
                let sa = a * &s;
                for (j2, j, b) in gb.triplets() {
                    entry.push((tgt.index(p + df, i2, q + dg, j2), src.index(p, i, q, j), &sa * b));
                }
            }
        }
    }
    let degree = df + dg;
    let blocks = by_deg.into_iter().map(|(n, t)| {
        (
            n,
            Matrix::from_triplets(field, tgt.space().dim(n + degree), src.space().dim(n), t),
        )
    });
    GradedMap::from_blocks(field, src.space(), tgt.space(), degree, blocks).expect("tensor map blocks")
}
