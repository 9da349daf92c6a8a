//! Twisted modules `(⊕_j A[r_j], α)` over a DG algebra, their morphism
//! complexes, and their realizations as DG modules.
//!
//! Generator `j` sits in degree `-r_j`. The realization has basis `(j, b)`
//! (`b` an algebra basis element) in degree `|b| - r_j`, differential
//! `(d x)_i = (-1)^{r_i} d(x_i) + Σ_j α_ij x_j`, and the coordinatewise right
//! action. A morphism `f` of degree `p` from `(r, α)` to `(s, β)` has entries
//! `f_ij ∈ A^{p + s_i - r_j}` acting by left multiplication, with
//! `d(f)_ij = (-1)^{s_i} d(f_ij) + (β f)_ij - (-1)^p (f α)_ij`.
//!
//! An optional idempotent closed degree-0 endomorphism selects a direct summand.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{cohomology_dims, ChainMap, Complex, ComplexBuilder, ComplexError, Layout, Summand};
use crate::dga::{self, DGAlgebra, Element};
use crate::graded::GradedMap;
use crate::module::{DgModule, ModuleError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwError {
    #[error("entry ({i},{j}) is outside a {rows}x{cols} matrix")]
    Index { i: usize, j: usize, rows: usize, cols: usize },
    #[error("entry ({i},{j}) must have degree {expected}")]
    EntryDegree { i: usize, j: usize, expected: i64 },
    #[error("element has {got} coordinates, algebra has dimension {expected}")]
    Length { expected: usize, got: usize },
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("morphism is not closed")]
    NotClosed,
    #[error("expected a degree-0 morphism, got degree {0}")]
    NonzeroDegree(i64),
    #[error("morphism does not respect the chosen summands")]
    NotCompatible,
    #[error("twisted module is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

pub type Entries = BTreeMap<(usize, usize), Element>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedModule {
    algebra: DGAlgebra,
    shifts: Vec<i64>,
    alpha: Entries,
    idempotent: Option<Entries>,
}

fn put(entries: &mut Entries, i: usize, j: usize, x: Element) {
    if dga::is_zero(&x) {
        entries.remove(&(i, j));
    } else {
        entries.insert((i, j), x);
    }
}

fn accumulate(entries: &mut Entries, i: usize, j: usize, x: &[Scalar]) {
    let cur = entries.remove(&(i, j));
    let next = match cur {
        Some(c) => dga::add(&c, x),
        None => x.to_vec(),
    };
    put(entries, i, j, next);
}

impl TwistedModule {
    /// Generators with the given shifts and `α = 0`.
    pub fn new(algebra: &DGAlgebra, shifts: Vec<i64>) -> TwistedModule {
        TwistedModule {
            algebra: algebra.clone(),
            shifts,
            alpha: Entries::new(),
            idempotent: None,
        }
    }

    /// `(A, 0)`.
    pub fn free(algebra: &DGAlgebra) -> TwistedModule {
        TwistedModule::new(algebra, vec![0])
    }

    pub fn zero(algebra: &DGAlgebra) -> TwistedModule {
        TwistedModule::new(algebra, Vec::new())
    }

    fn check_entry(&self, i: usize, j: usize, x: &[Scalar]) -> Result<(), TwError> {
        let n = self.rank();
        if i >= n || j >= n {
            return Err(TwError::Index { i, j, rows: n, cols: n });
        }
        if x.len() != self.algebra.dim() {
            return Err(TwError::Length {
                expected: self.algebra.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn set_alpha(&mut self, i: usize, j: usize, x: Element) -> Result<(), TwError> {
        self.check_entry(i, j, &x)?;
        put(&mut self.alpha, i, j, x);
        Ok(())
    }

    pub fn set_idempotent_entry(&mut self, i: usize, j: usize, x: Element) -> Result<(), TwError> {
        self.check_entry(i, j, &x)?;
        put(self.idempotent.get_or_insert_with(Entries::new), i, j, x);
        Ok(())
    }

    /// Declares an idempotent (possibly with all entries zero, i.e. the zero summand).
    pub fn set_idempotent(&mut self, e: Entries) -> Result<(), TwError> {
        for ((i, j), x) in &e {
            self.check_entry(*i, *j, x)?;
        }
        self.idempotent = Some(e.into_iter().filter(|(_, x)| !dga::is_zero(x)).collect());
        Ok(())
    }

    pub fn algebra(&self) -> &DGAlgebra {
        &self.algebra
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn alpha(&self, i: usize, j: usize) -> Element {
        self.alpha.get(&(i, j)).cloned().unwrap_or_else(|| self.algebra.zero())
    }

    pub fn alpha_entries(&self) -> &Entries {
        &self.alpha
    }

    pub fn idempotent(&self) -> Option<&Entries> {
        self.idempotent.as_ref()
    }

    pub fn without_idempotent(&self) -> TwistedModule {
        TwistedModule {
            idempotent: None,
            ..self.clone()
        }
    }

    /// The idempotent as an endomorphism of the underlying full object.
    pub fn idempotent_morphism(&self) -> Option<TwMorphism> {
        let full = self.without_idempotent();
        self.idempotent.as_ref().map(|e| TwMorphism {
            source: full.clone(),
            target: full,
            degree: 0,
            entries: e.clone(),
        })
    }

    /// Degree of the realization basis vector `(j, b)`.
    pub fn basis_degree(&self, j: usize, b: usize) -> i64 {
        self.algebra.degree(b) - self.shifts[j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwViolation {
    NotStrictlyUpper { i: usize, j: usize },
    AlphaDegree { i: usize, j: usize, expected: i64 },
    MaurerCartan { i: usize, j: usize, residual: String },
    IdempotentDegree { i: usize, j: usize, expected: i64 },
    IdempotentNotClosed,
    IdempotentNotIdempotent,
}

impl fmt::Display for TwViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TwViolation::*;
        match self {
            NotStrictlyUpper { i, j } => write!(f, "alpha {} {} is on or below the diagonal", i + 1, j + 1),
            AlphaDegree { i, j, expected } => {
                write!(f, "alpha {} {} is not of degree {expected}", i + 1, j + 1)
            }
            MaurerCartan { i, j, residual } => {
                write!(f, "Maurer-Cartan fails at {} {}: residual {residual}", i + 1, j + 1)
            }
            IdempotentDegree { i, j, expected } => {
                write!(f, "idem {} {} is not of degree {expected}", i + 1, j + 1)
            }
            IdempotentNotClosed => write!(f, "idempotent is not closed"),
            IdempotentNotIdempotent => write!(f, "idempotent does not square to itself"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedReport {
    pub violations: Vec<TwViolation>,
}

impl TwistedReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `(-1)^{r_i} d(α_ij) + Σ_k α_ik α_kj`, nonzero entries only.
pub fn maurer_cartan_residual(t: &TwistedModule) -> Entries {
    let a = &t.algebra;
    let field = a.field();
    let mut out = Entries::new();
    for (&(i, j), x) in &t.alpha {
        accumulate(&mut out, i, j, &dga::scale(&field.sign(t.shifts[i]), &a.d(x)));
    }
    for (&(i, k), x) in &t.alpha {
        for (&(k2, j), y) in t.alpha.range((k, 0)..(k + 1, 0)) {
            debug_assert_eq!(k, k2);
            accumulate(&mut out, i, j, &a.mul(x, y));
        }
    }
    out
}

pub fn validate_twisted(t: &TwistedModule) -> TwistedReport {
    let a = &t.algebra;
    let mut violations = Vec::new();
    for (&(i, j), x) in &t.alpha {
        if i >= j {
            violations.push(TwViolation::NotStrictlyUpper { i, j });
        }
        let expected = 1 + t.shifts[i] - t.shifts[j];
        if !a.is_of_degree(x, expected) {
            violations.push(TwViolation::AlphaDegree { i, j, expected });
        }
    }
    if violations.is_empty() {
        for ((i, j), r) in maurer_cartan_residual(t) {
            violations.push(TwViolation::MaurerCartan {
                i,
                j,
                residual: a.format_element(&r),
            });
        }
    }
    if let Some(e) = t.idempotent_morphism() {
        let mut ok = true;
        for (&(i, j), x) in &e.entries {
            let expected = t.shifts[i] - t.shifts[j];
            if !a.is_of_degree(x, expected) {
                violations.push(TwViolation::IdempotentDegree { i, j, expected });
                ok = false;
            }
        }
        if ok && violations.is_empty() {
            if !e.differential().is_zero() {
                violations.push(TwViolation::IdempotentNotClosed);
            }
            if e.compose(&e).entries != e.entries {
                violations.push(TwViolation::IdempotentNotIdempotent);
            }
        }
    }
    TwistedReport { violations }
}

/// A homogeneous morphism between the underlying full objects of two twisted modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwMorphism {
    source: TwistedModule,
    target: TwistedModule,
    degree: i64,
    entries: Entries,
}

impl TwMorphism {
    pub fn zero(source: &TwistedModule, target: &TwistedModule, degree: i64) -> Result<TwMorphism, TwError> {
        if source.algebra != target.algebra {
            return Err(TwError::AlgebraMismatch);
        }
        Ok(TwMorphism {
            source: source.clone(),
            target: target.clone(),
            degree,
            entries: Entries::new(),
        })
    }

    pub fn identity(t: &TwistedModule) -> TwMorphism {
        let u = t.algebra.unit();
        TwMorphism {
            source: t.clone(),
            target: t.clone(),
            degree: 0,
            entries: (0..t.rank()).map(|j| ((j, j), u.clone())).collect(),
        }
    }

    /// Required degree of entry `(i, j)`.
    pub fn entry_degree(&self, i: usize, j: usize) -> i64 {
        self.degree + self.target.shifts[i] - self.source.shifts[j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Element) -> Result<(), TwError> {
        let (rows, cols) = (self.target.rank(), self.source.rank());
        if i >= rows || j >= cols {
            return Err(TwError::Index { i, j, rows, cols });
        }
        if x.len() != self.source.algebra.dim() {
            return Err(TwError::Length {
                expected: self.source.algebra.dim(),
                got: x.len(),
            });
        }
        let expected = self.entry_degree(i, j);
        if !self.source.algebra.is_of_degree(&x, expected) {
            return Err(TwError::EntryDegree { i, j, expected });
        }
        put(&mut self.entries, i, j, x);
        Ok(())
    }

    pub fn source(&self) -> &TwistedModule {
        &self.source
    }

    pub fn target(&self) -> &TwistedModule {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Element {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.source.algebra.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `Tw` differential.
    pub fn differential(&self) -> TwMorphism {
        let a = &self.source.algebra;
        let field = a.field();
        let mut out = Entries::new();
        for (&(i, j), f) in &self.entries {
            accumulate(&mut out, i, j, &dga::scale(&field.sign(self.target.shifts[i]), &a.d(f)));
        }
        for (&(i, k), b) in &self.target.alpha {
            for (&(_, j), f) in self.entries.range((k, 0)..(k + 1, 0)) {
                accumulate(&mut out, i, j, &a.mul(b, f));
            }
        }
        let s = -field.sign(self.degree);
        for (&(i, k), f) in &self.entries {
            for (&(_, j), x) in self.source.alpha.range((k, 0)..(k + 1, 0)) {
                accumulate(&mut out, i, j, &dga::scale(&s, &a.mul(f, x)));
            }
        }
        TwMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree + 1,
            entries: out,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TwMorphism) -> TwMorphism {
        let a = &self.source.algebra;
        let mut out = Entries::new();
        for (&(i, k), g) in &self.entries {
            for (&(_, j), f) in other.entries.range((k, 0)..(k + 1, 0)) {
                accumulate(&mut out, i, j, &a.mul(g, f));
            }
        }
        TwMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            entries: out,
        }
    }

    pub fn add(&self, other: &TwMorphism) -> TwMorphism {
        let mut out = self.entries.clone();
        for (&(i, j), x) in &other.entries {
            accumulate(&mut out, i, j, x);
        }
        TwMorphism {
            entries: out,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &Scalar) -> TwMorphism {
        let mut out = Entries::new();
        for (&(i, j), x) in &self.entries {
            put(&mut out, i, j, dga::scale(c, x));
        }
        TwMorphism {
            entries: out,
            ..self.clone()
        }
    }

    /// The realized map between full realizations (left multiplication by entries).
    pub fn realize_full(&self) -> GradedMap {
        let a = &self.source.algebra;
        let dim = a.dim();
        let src = full_layout(&self.source);
        let tgt = full_layout(&self.target);
        let mut triplets = Vec::new();
        for (&(i, j), f) in &self.entries {
            for b in 0..dim {
                let img = a.mul(f, &a.basis_element(b));
                for (c, v) in img.into_iter().enumerate() {
                    if !v.is_zero() {
                        triplets.push((i * dim + c, j * dim + b, v));
                    }
                }
            }
        }
        Layout::map_from_triplets(a.field(), &src, &tgt, self.degree, triplets).expect("homogeneous morphism")
    }

    /// The realized map between (summand) realizations.
    pub fn realize(&self) -> Result<ChainMap, TwError> {
        let rs = Realization::new(&self.source)?;
        let rt = Realization::new(&self.target)?;
        let full = self.realize_full();
        let map = match (&rs.summand, &rt.summand) {
            (None, None) => full,
            (Some(s), None) => full.compose(s.inclusion.map()),
            (None, Some(t)) => t.retraction().compose(&full),
            (Some(s), Some(t)) => t.retraction().compose(&full).compose(s.inclusion.map()),
        };
        Ok(ChainMap::new(rs.module.complex(), rt.module.complex(), map)?)
    }
}

fn full_layout(t: &TwistedModule) -> Layout {
    let dim = t.algebra.dim();
    let degrees: Vec<i64> = (0..t.rank())
        .flat_map(|j| (0..dim).map(move |b| (j, b)))
        .map(|(j, b)| t.basis_degree(j, b))
        .collect();
    Layout::from_degrees(&degrees)
}

/// A realized twisted module: full module, its layout, and the summand cut by the idempotent.
#[derive(Clone, Debug)]
pub struct Realization {
    pub full: DgModule,
    /// Builder index `j * dim A + b` for basis vector `(j, b)`.
    pub layout: Layout,
    pub summand: Option<Summand>,
    /// The realized module (the summand if an idempotent is present).
    pub module: DgModule,
}

impl Realization {
    pub fn new(t: &TwistedModule) -> Result<Realization, TwError> {
        let a = &t.algebra;
        let field = a.field();
        let dim = a.dim();
        let layout = full_layout(t);
        let mut builder = ComplexBuilder::new(field);
        for j in 0..t.rank() {
            for b in 0..dim {
                builder.add_basis(t.basis_degree(j, b));
            }
        }
        for j in 0..t.rank() {
            let s = field.sign(t.shifts[j]);
            for b in 0..dim {
                for (c, v) in a.diff_of(b) {
                    builder.add_entry(j * dim + c, j * dim + b, &s * v);
                }
            }
        }
        for (&(i, j), x) in &t.alpha {
            for b in 0..dim {
                let img = a.mul(x, &a.basis_element(b));
                for (c, v) in img.into_iter().enumerate() {
                    builder.add_entry(i * dim + c, j * dim + b, v);
                }
            }
        }
        let (complex, built) = builder.finish()?;
        debug_assert_eq!(built.space(), layout.space());
        let action: Vec<GradedMap> = (0..dim)
            .map(|k| {
                let mut triplets = Vec::new();
                for j in 0..t.rank() {
                    for b in 0..dim {
                        for (c, v) in a.product(b, k) {
                            triplets.push((j * dim + c, j * dim + b, v.clone()));
                        }
                    }
                }
                Layout::map_from_triplets(field, &layout, &layout, a.degree(k), triplets).expect("action")
            })
            .collect();
        let full = DgModule::new(a, complex, action)?;
        let (summand, module) = match t.idempotent_morphism() {
            None => (None, full.clone()),
            Some(e) => {
                let em = e.realize_full();
                let (m, _) = full.image_submodule(&em)?;
                (Some(Summand::of_idempotent(full.complex(), &em)?), m)
            }
        };
        Ok(Realization {
            full,
            layout,
            summand,
            module,
        })
    }

    /// Flat (degree-ordered) index of the full-realization basis vector `(j, b)`.
    pub fn flat_index(&self, j: usize, b: usize) -> usize {
        let dim = self.full.algebra().dim();
        self.layout.flat(j * dim + b)
    }
}

/// The realization of `t` as a right DG module (the summand if `t` has an idempotent).
pub fn realize(t: &TwistedModule) -> Result<DgModule, TwError> {
    Ok(Realization::new(t)?.module)
}

/// `Hom_Tw(x, y)` with basis `(i, j, b)`, builder index `(i * rank x + j) * dim A + b`.
#[derive(Clone, Debug)]
pub struct HomTw {
    pub full: Complex,
    pub layout: Layout,
    pub summand: Option<Summand>,
    /// The morphism complex (between summands if idempotents are present).
    pub complex: Complex,
    source: TwistedModule,
    target: TwistedModule,
}

impl HomTw {
    /// Morphism with the given coordinates in `Hom^p` of the full complex.
    pub fn morphism(&self, p: i64, v: &[Scalar]) -> TwMorphism {
        let a = &self.source.algebra;
        let dim = a.dim();
        let nx = self.source.rank();
        let mut f = TwMorphism::zero(&self.source.without_idempotent(), &self.target.without_idempotent(), p)
            .expect("same algebra");
        let offset = self.full.space().offset(p);
        for idx in 0..self.layout.len() {
            let (deg, _) = self.layout.position(idx);
            if deg != p {
                continue;
            }
            let x = &v[self.layout.flat(idx) - offset];
            if x.is_zero() {
                continue;
            }
            let (ij, b) = (idx / dim, idx % dim);
            let (i, j) = (ij / nx, ij % nx);
            let mut e = f.entry(i, j);
            e[b] = &e[b] + x;
            put(&mut f.entries, i, j, e);
        }
        f
    }

    /// Coordinates of a morphism in `Hom^p` of the full complex.
    pub fn vector(&self, f: &TwMorphism) -> Vec<Scalar> {
        let a = &self.source.algebra;
        let dim = a.dim();
        let nx = self.source.rank();
        let p = f.degree;
        let offset = self.full.space().offset(p);
        let mut v = vec![a.field().zero(); self.full.dim(p)];
        for (&(i, j), x) in &f.entries {
            for (b, c) in x.iter().enumerate() {
                if !c.is_zero() {
                    v[self.layout.flat((i * nx + j) * dim + b) - offset] = c.clone();
                }
            }
        }
        v
    }
}

pub fn hom_tw(x: &TwistedModule, y: &TwistedModule) -> Result<HomTw, TwError> {
    if x.algebra != y.algebra {
        return Err(TwError::AlgebraMismatch);
    }
    let a = &x.algebra;
    let field = a.field();
    let dim = a.dim();
    let (nx, ny) = (x.rank(), y.rank());
    let idx = |i: usize, j: usize, b: usize| (i * nx + j) * dim + b;
    let mut builder = ComplexBuilder::new(field);
    for i in 0..ny {
        for j in 0..nx {
            for b in 0..dim {
                builder.add_basis(a.degree(b) - y.shifts[i] + x.shifts[j]);
            }
        }
    }
    for i in 0..ny {
        let s = field.sign(y.shifts[i]);
        for j in 0..nx {
            let p0 = -y.shifts[i] + x.shifts[j];
            for b in 0..dim {
                let p = a.degree(b) + p0;
                let src = idx(i, j, b);
                for (c, v) in a.diff_of(b) {
                    builder.add_entry(idx(i, j, *c), src, &s * v);
                }
                let eb = a.basis_element(b);
                for (&(k, i2), beta) in &y.alpha {
                    if i2 != i {
                        continue;
                    }
                    for (c, v) in a.mul(beta, &eb).into_iter().enumerate() {
                        builder.add_entry(idx(k, j, c), src, v);
                    }
                }
                let sp = -field.sign(p);
                for (&(j2, l), al) in x.alpha.range((j, 0)..(j + 1, 0)) {
                    debug_assert_eq!(j2, j);
                    for (c, v) in a.mul(&eb, al).into_iter().enumerate() {
                        builder.add_entry(idx(i, l, c), src, &sp * &v);
                    }
                }
            }
        }
    }
    let (full, layout) = builder.finish()?;
    let mut hom = HomTw {
        complex: full.clone(),
        full,
        layout,
        summand: None,
        source: x.clone(),
        target: y.clone(),
    };
    if x.idempotent.is_some() || y.idempotent.is_some() {
        let ex = x
            .idempotent_morphism()
            .unwrap_or_else(|| TwMorphism::identity(&x.without_idempotent()));
        let ey = y
            .idempotent_morphism()
            .unwrap_or_else(|| TwMorphism::identity(&y.without_idempotent()));
        let projector = projector_map(&hom, |f| ey.compose(f).compose(&ex));
        let s = Summand::of_idempotent(&hom.full, &projector)?;
        hom.complex = s.complex.clone();
        hom.summand = Some(s);
    }
    Ok(hom)
}

/// Degree-0 graded map on the full Hom complex induced by a linear operation on morphisms.
fn projector_map(hom: &HomTw, op: impl Fn(&TwMorphism) -> TwMorphism) -> GradedMap {
    let field = hom.full.field();
    let blocks: Vec<(i64, crate::matrix::Matrix)> = hom
        .full
        .space()
        .dims()
        .iter()
        .map(|(&p, &n)| {
            let cols: Vec<Vec<Scalar>> = (0..n)
                .map(|k| {
                    let mut e = vec![field.zero(); n];
                    e[k] = field.one();
                    hom.vector(&op(&hom.morphism(p, &e)))
                })
                .collect();
            (p, crate::matrix::Matrix::from_columns(field, n, &cols))
        })
        .collect();
    GradedMap::from_blocks(field, hom.full.space(), hom.full.space(), 0, blocks).expect("projector blocks")
}

/// Cohomology dimensions of `Hom_Tw(x, y)`.
pub fn ext_table(x: &TwistedModule, y: &TwistedModule) -> Result<BTreeMap<i64, usize>, TwError> {
    Ok(cohomology_dims(&hom_tw(x, y)?.complex))
}

/// `t[k]`: shifts `r_j + k`, `α ↦ (-1)^k α`.
pub fn shift_tw(t: &TwistedModule, k: i64) -> TwistedModule {
    let s = t.algebra.field().sign(k);
    TwistedModule {
        algebra: t.algebra.clone(),
        shifts: t.shifts.iter().map(|r| r + k).collect(),
        alpha: t.alpha.iter().map(|(&ij, x)| (ij, dga::scale(&s, x))).collect(),
        idempotent: t.idempotent.clone(),
    }
}

/// Block-diagonal direct sum, generators of `x` first.
pub fn sum_tw(x: &TwistedModule, y: &TwistedModule) -> Result<TwistedModule, TwError> {
    if x.algebra != y.algebra {
        return Err(TwError::AlgebraMismatch);
    }
    let n = x.rank();
    let mut alpha = x.alpha.clone();
    for (&(i, j), v) in &y.alpha {
        alpha.insert((i + n, j + n), v.clone());
    }
    let idempotent = if x.idempotent.is_some() || y.idempotent.is_some() {
        let ex = x
            .idempotent_morphism()
            .unwrap_or_else(|| TwMorphism::identity(&x.without_idempotent()));
        let ey = y
            .idempotent_morphism()
            .unwrap_or_else(|| TwMorphism::identity(&y.without_idempotent()));
        let mut e = ex.entries.clone();
        for (&(i, j), v) in &ey.entries {
            e.insert((i + n, j + n), v.clone());
        }
        Some(e)
    } else {
        None
    };
    let mut shifts = x.shifts.clone();
    shifts.extend_from_slice(&y.shifts);
    Ok(TwistedModule {
        algebra: x.algebra.clone(),
        shifts,
        alpha,
        idempotent,
    })
}

/// `Cone(f) = (Y ⊕ X[1], (β f; 0 -α))` for a closed degree-0 `f: X → Y`.
pub fn cone_tw(f: &TwMorphism) -> Result<TwistedModule, TwError> {
    if f.degree != 0 {
        return Err(TwError::NonzeroDegree(f.degree));
    }
    if !f.is_closed() {
        return Err(TwError::NotClosed);
    }
    let (x, y) = (&f.source, &f.target);
    let field = x.algebra.field();
    let m = y.rank();
    let mut alpha = y.alpha.clone();
    for (&(i, j), v) in &f.entries {
        alpha.insert((i, j + m), v.clone());
    }
    for (&(i, j), v) in &x.alpha {
        alpha.insert((i + m, j + m), dga::scale(&-field.one(), v));
    }
    let idempotent = if x.idempotent.is_some() || y.idempotent.is_some() {
        let ex = x
            .idempotent_morphism()
            .unwrap_or_else(|| TwMorphism::identity(&x.without_idempotent()));
        let ey = y
            .idempotent_morphism()
            .unwrap_or_else(|| TwMorphism::identity(&y.without_idempotent()));
        let cut = TwMorphism {
            source: x.without_idempotent(),
            target: y.without_idempotent(),
            ..f.clone()
        };
        if ey.compose(&cut).compose(&ex).entries != f.entries {
            return Err(TwError::NotCompatible);
        }
        let mut e = ey.entries.clone();
        for (&(i, j), v) in &ex.entries {
            e.insert((i + m, j + m), v.clone());
        }
        Some(e)
    } else {
        None
    };
    let mut shifts = y.shifts.clone();
    shifts.extend(x.shifts.iter().map(|r| r + 1));
    Ok(TwistedModule {
        algebra: x.algebra.clone(),
        shifts,
        alpha,
        idempotent,
    })
}

/// `t^∨ = Hom_A(t, A)` as a twisted module over `A^op`.
///
/// Generator order is reversed (generator `j` becomes `n - 1 - j`) so that
/// `α` stays strictly upper triangular; shifts are negated, and
/// `α'_{ji} = -(-1)^{r_j(1 + r_i)} α_ij`, `e'_{ji} = (-1)^{r_i(1 + r_j)} e_ij`.
/// [`dual_vee_identification`] realizes the isomorphism with `Hom_A(t, A)`.
pub fn dual_vee(t: &TwistedModule) -> TwistedModule {
    let field = t.algebra.field();
    let n = t.rank();
    let r = &t.shifts;
    let rev = |j: usize| n - 1 - j;
    let shifts = (0..n).map(|k| -r[rev(k)]).collect();
    let alpha = t
        .alpha
        .iter()
        .map(|(&(i, j), x)| {
            let s = -field.sign(r[j] * (1 + r[i]));
            ((rev(j), rev(i)), dga::scale(&s, x))
        })
        .collect();
    let idempotent = t.idempotent.as_ref().map(|e| {
        e.iter()
            .map(|(&(i, j), x)| {
                let s = field.sign(r[i] * (1 + r[j]));
                ((rev(j), rev(i)), dga::scale(&s, x))
            })
            .collect()
    });
    TwistedModule {
        algebra: dga::opposite(&t.algebra),
        shifts,
        alpha,
        idempotent,
    }
}

/// The evaluation `t → t^∨∨`, which is `diag((-1)^{r_j})` on generators.
pub fn double_dual_eval(t: &TwistedModule) -> TwMorphism {
    let field = t.algebra.field();
    let u = t.algebra.unit();
    let dd = dual_vee(&dual_vee(t));
    TwMorphism {
        source: t.without_idempotent(),
        target: dd.without_idempotent(),
        degree: 0,
        entries: t
            .shifts
            .iter()
            .enumerate()
            .map(|(j, &r)| ((j, j), dga::scale(&field.sign(r), &u)))
            .collect(),
    }
}

/// `Hom_A(realize t, M)` computed from generators: `f ↦ (f(e_j))_j`, `f(e_j) ∈ M^{|f| - r_j}`,
/// with `d(f)_j = d(f(e_j)) - (-1)^{|f|} Σ_i f(e_i) . α_ij`. Basis `(j, y)` has
/// builder index `j * dim M + y` (`y` a flat index of `M`).
#[derive(Clone, Debug)]
pub struct HomFree {
    pub full: Complex,
    pub layout: Layout,
    pub summand: Option<Summand>,
    pub complex: Complex,
}

pub fn hom_free(t: &TwistedModule, m: &DgModule) -> Result<HomFree, TwError> {
    if *m.algebra() != t.algebra {
        return Err(TwError::AlgebraMismatch);
    }
    let field = t.algebra.field();
    let mc = m.complex();
    let dm = mc.space().total();
    let mdeg = mc.space().flat_degrees();
    let mut builder = ComplexBuilder::new(field);
    for j in 0..t.rank() {
        for y in 0..dm {
            builder.add_basis(mdeg[y] + t.shifts[j]);
        }
    }
    let dflat = mc.differential().to_flat();
    let alpha_flat: BTreeMap<(usize, usize), crate::matrix::Matrix> = t
        .alpha
        .iter()
        .map(|(&ij, x)| {
            let deg = t.algebra.degree_of(x).expect("homogeneous alpha entry");
            (ij, m.act_by(x, deg).to_flat())
        })
        .collect();
    for j in 0..t.rank() {
        for (y2, y, v) in dflat.triplets() {
            builder.add_entry(j * dm + y2, j * dm + y, v.clone());
        }
        for (&(j2, l), act) in t.alpha.range((j, 0)..(j + 1, 0)).map(|(k, _)| (k, &alpha_flat[k])) {
            debug_assert_eq!(j2, j);
            for (y2, y, v) in act.triplets() {
                let p = mdeg[y] + t.shifts[j];
                builder.add_entry(l * dm + y2, j * dm + y, &(-field.sign(p)) * v);
            }
        }
    }
    let (full, layout) = builder.finish()?;
    let mut out = HomFree {
        complex: full.clone(),
        full,
        layout,
        summand: None,
    };
    if let Some(e) = &t.idempotent {
        // precomposition: (f ∘ e)_j = Σ_i f(e_i) . e_ij
        let mut triplets = Vec::new();
        for (&(i, j), x) in e {
            let deg = t.algebra.degree_of(x).expect("homogeneous idempotent entry");
            for (y2, y, v) in m.act_by(x, deg).to_flat().triplets() {
                triplets.push((j * dm + y2, i * dm + y, v.clone()));
            }
        }
        let proj = Layout::map_from_triplets(field, &out.layout, &out.layout, 0, triplets)?;
        let s = Summand::of_idempotent(&out.full, &proj)?;
        out.complex = s.complex.clone();
        out.summand = Some(s);
    }
    Ok(out)
}

/// Chain isomorphism `realize(t^∨) → Hom_A(realize t, A)` on full objects:
/// generator-slot `n - 1 - j` of degree `p` goes to slot `j` with sign `(-1)^{p r_j}`.
pub fn dual_vee_identification(t: &TwistedModule) -> Result<ChainMap, TwError> {
    let a = &t.algebra;
    let field = a.field();
    let dim = a.dim();
    let n = t.rank();
    let dv = dual_vee(t).without_idempotent();
    let src = Realization::new(&dv)?;
    let hom = hom_free(&t.without_idempotent(), &DgModule::regular(a))?;
    let alayout = a.layout();
    let mut triplets = Vec::new();
    for k in 0..n {
        let j = n - 1 - k;
        for c in 0..dim {
            let p = a.degree(c) + t.shifts[j];
            triplets.push((j * dim + alayout.flat(c), k * dim + c, field.sign(p * t.shifts[j])));
        }
    }
    let map = Layout::map_from_triplets(field, &src.layout, &hom.layout, 0, triplets)?;
    Ok(ChainMap::new(src.full.complex(), &hom.full, map)?)
}

/// `X ⊗_B N` for a twisted `B`-module `X` and a complex `N` with a left `B`-action:
/// `⊕_j N[r_j]` with `(d x)_i = (-1)^{r_i} d(x_i) + Σ_j α_ij · x_j`.
/// Basis `(j, y)` has builder index `j * dim N + y`.
#[derive(Clone, Debug)]
pub struct FreeTensor {
    pub full: Complex,
    pub layout: Layout,
    pub summand: Option<Summand>,
    pub complex: Complex,
}

impl FreeTensor {
    /// Slotwise extension `(j, y) ↦ (j, g y)` of a map on `N`, restricted to the summand.
    pub fn slotwise(&self, g: &GradedMap) -> GradedMap {
        let field = self.full.field();
        let dn = g.source().total();
        let slots = if dn == 0 { 0 } else { self.layout.len() / dn };
        let flat = g.to_flat();
        let mut triplets = Vec::new();
        for j in 0..slots {
            for (y2, y, v) in flat.triplets() {
                triplets.push((j * dn + y2, j * dn + y, v.clone()));
            }
        }
        let full = Layout::map_from_triplets(field, &self.layout, &self.layout, g.degree(), triplets)
            .expect("slotwise map");
        match &self.summand {
            None => full,
            Some(s) => s.compress(&full),
        }
    }
}

pub fn free_tensor(t: &TwistedModule, n: &Complex, n_left: &[GradedMap]) -> Result<FreeTensor, TwError> {
    let a = &t.algebra;
    let field = a.field();
    let dn = n.space().total();
    let ndeg = n.space().flat_degrees();
    let left = |x: &[Scalar]| -> crate::matrix::Matrix {
        let deg = a.degree_of(x).unwrap_or(0);
        let mut acc = GradedMap::zero(field, n.space(), n.space(), deg);
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&n_left[k].scale(c));
            }
        }
        acc.to_flat()
    };
    let mut builder = ComplexBuilder::new(field);
    for j in 0..t.rank() {
        for y in 0..dn {
            builder.add_basis(ndeg[y] - t.shifts[j]);
        }
    }
    let dflat = n.differential().to_flat();
    for j in 0..t.rank() {
        let s = field.sign(t.shifts[j]);
        for (y2, y, v) in dflat.triplets() {
            builder.add_entry(j * dn + y2, j * dn + y, &s * v);
        }
    }
    for (&(i, j), x) in &t.alpha {
        for (y2, y, v) in left(x).triplets() {
            builder.add_entry(i * dn + y2, j * dn + y, v.clone());
        }
    }
    let (full, layout) = builder.finish()?;
    let mut out = FreeTensor {
        complex: full.clone(),
        full,
        layout,
        summand: None,
    };
    if let Some(e) = &t.idempotent {
        let mut triplets = Vec::new();
        for (&(i, j), x) in e {
            for (y2, y, v) in left(x).triplets() {
                triplets.push((i * dn + y2, j * dn + y, v.clone()));
            }
        }
        let proj = Layout::map_from_triplets(field, &out.layout, &out.layout, 0, triplets)?;
        let s = Summand::of_idempotent(&out.full, &proj)?;
        out.complex = s.complex.clone();
        out.summand = Some(s);
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::complex::{cone, is_quasi_iso, validate_complex};
    use crate::module::{module_hom, tensor_over, validate_module};
    use crate::scalar::Field;

    pub(crate) fn a2(arrow_degree: i64) -> DGAlgebra {
        let q = Field::Rational;
        let mut a = DGAlgebra::new(
            q,
            vec![("e1".into(), 0), ("e2".into(), 0), ("a".into(), arrow_degree)],
            &[q.one(), q.one(), q.zero()],
        )
        .unwrap();
        a.set_product(0, 0, &a.basis_element(0)).unwrap();
        a.set_product(1, 1, &a.basis_element(1)).unwrap();
        a.set_product(1, 2, &a.basis_element(2)).unwrap();
        a.set_product(2, 0, &a.basis_element(2)).unwrap();
        a
    }

    /// `1, x, y` with `|x| = -1`, `d x = y`, all products of `x, y` zero.
    pub(crate) fn acyclic_pair() -> DGAlgebra {
        let q = Field::Rational;
        let mut a =
            DGAlgebra::new(q, vec![("1".into(), 0), ("x".into(), -1), ("y".into(), 0)], &[q.one(), q.zero(), q.zero()])
                .unwrap();
        for k in 0..3 {
            a.set_product(0, k, &a.basis_element(k)).unwrap();
            a.set_product(k, 0, &a.basis_element(k)).unwrap();
        }
        a.set_diff(1, &a.basis_element(2)).unwrap();
        a
    }

    /// The cone of `a: e1 A → e2 A`, cut out by `diag(e2, e1)`.
    pub(crate) fn arrow_cone(arrow_degree: i64) -> TwistedModule {
        let a = a2(arrow_degree);
        let mut t = TwistedModule::new(&a, vec![0, 1 - arrow_degree]);
        t.set_alpha(0, 1, a.basis_element(2)).unwrap();
        t.set_idempotent_entry(0, 0, a.basis_element(1)).unwrap();
        t.set_idempotent_entry(1, 1, a.basis_element(0)).unwrap();
        t
    }

    pub(crate) fn cases() -> Vec<TwistedModule> {
        let mut out = Vec::new();
        for deg in [0, -1, -2] {
            let t = arrow_cone(deg);
            out.push(t.without_idempotent());
            out.push(shift_tw(&t, 1));
            out.push(t);
        }
        let b = acyclic_pair();
        let mut t = TwistedModule::new(&b, vec![0, 1, -1]);
        t.set_alpha(0, 1, b.basis_element(2)).unwrap();
        out.push(t);
        out
    }

    #[test]
    fn constructions_are_valid() {
        for t in cases() {
            assert!(validate_twisted(&t).is_valid(), "{:?}", validate_twisted(&t));
            assert!(validate_twisted(&dual_vee(&t)).is_valid());
            assert!(validate_twisted(&shift_tw(&t, -3)).is_valid());
            let r = Realization::new(&t).unwrap();
            assert!(validate_complex(r.full.complex()).violations.is_empty());
            assert!(validate_module(&r.full).is_valid());
            assert!(validate_module(&r.module).is_valid());
        }
    }

    #[test]
    fn maurer_cartan_violation_detected() {
        let b = acyclic_pair();
        let mut t = TwistedModule::new(&b, vec![0, 2]);
        t.set_alpha(0, 1, b.basis_element(1)).unwrap();
        let report = validate_twisted(&t);
        assert!(matches!(report.violations[..], [TwViolation::MaurerCartan { i: 0, j: 1, .. }]));
        let mut u = TwistedModule::new(&b, vec![0, 1]);
        u.set_alpha(1, 0, b.basis_element(2)).unwrap();
        assert!(!validate_twisted(&u).is_valid());
    }

    #[test]
    fn arrow_cone_has_one_dimensional_cohomology() {
        for deg in [0, -1, -3] {
            let m = realize(&arrow_cone(deg)).unwrap();
            let h = cohomology_dims(m.complex());
            assert_eq!(h.values().sum::<usize>(), 1);
            assert_eq!(h.get(&0), Some(&1));
        }
    }

    #[test]
    fn hom_tw_matches_module_hom() {
        let all = cases();
        for x in &all {
            for y in &all {
                if x.algebra() != y.algebra() {
                    continue;
                }
                let h = hom_tw(x, y).unwrap();
                assert!(validate_complex(&h.full).violations.is_empty());
                let (mh, _, _) = module_hom(&realize(x).unwrap(), &realize(y).unwrap()).unwrap();
                assert_eq!(cohomology_dims(&h.complex), cohomology_dims(&mh));
            }
        }
    }

    #[test]
    fn tw_differential_matches_hom_complex() {
        let x = arrow_cone(-1).without_idempotent();
        let y = shift_tw(&x, 1);
        let h = hom_tw(&x, &y).unwrap();
        for p in h.full.space().degrees().collect::<Vec<_>>() {
            let n = h.full.dim(p);
            for k in 0..n {
                let mut v = vec![Field::Rational.zero(); n];
                v[k] = Field::Rational.one();
                let f = h.morphism(p, &v);
                assert_eq!(h.vector(&f), v);
                assert_eq!(h.vector(&f.differential()), h.full.d(p).mul_vec(&v));
                let rf = ChainMap::new(realize(&x).unwrap().complex(), realize(&y).unwrap().complex(), f.realize_full())
                    .unwrap();
                let lhs = f.differential().realize_full();
                assert_eq!(lhs, rf.hom_differential());
            }
        }
    }

    #[test]
    fn composition_is_associative_and_leibniz() {
        let x = arrow_cone(-1).without_idempotent();
        let y = shift_tw(&x, -1);
        let hxy = hom_tw(&x, &y).unwrap();
        let hyx = hom_tw(&y, &x).unwrap();
        let q = Field::Rational;
        let f = hxy.morphism(1, &vec![q.one(); hxy.full.dim(1)]);
        let g = hyx.morphism(0, &vec![q.from_i64(2); hyx.full.dim(0)]);
        let lhs = g.compose(&f).differential();
        let rhs = g.differential().compose(&f).add(&g.compose(&f.differential()).scale(&q.sign(g.degree())));
        assert_eq!(lhs.entries(), rhs.entries());
        assert_eq!(g.compose(&f).realize_full(), g.realize_full().compose(&f.realize_full()));
    }

    #[test]
    fn dual_vee_identification_is_isomorphism() {
        for t in cases() {
            let phi = dual_vee_identification(&t).unwrap();
            assert!(phi.is_closed());
            let flat = phi.map().to_flat();
            assert!(crate::linalg::is_invertible(&flat));
        }
    }

    #[test]
    fn double_dual() {
        for t in cases() {
            let dd = dual_vee(&dual_vee(&t));
            assert!(validate_twisted(&dd).is_valid());
            let ev = double_dual_eval(&t);
            assert!(ev.is_closed());
            if let (Some(e), Some(e2)) = (t.idempotent_morphism(), dd.idempotent_morphism()) {
                let lhs = ev.compose(&e);
                let rhs = e2.compose(&ev);
                assert_eq!(lhs.entries(), rhs.entries());
            }
        }
    }

    #[test]
    fn cone_realizes_to_cone() {
        let x = arrow_cone(-1).without_idempotent();
        let y = x.clone();
        let h = hom_tw(&x, &y).unwrap();
        let q = Field::Rational;
        let c = crate::complex::cohomology(&h.full);
        let mut tried = 0;
        for k in 0..c.dim(0) {
            let v = c.representatives[&0][k].clone();
            let f = h.morphism(0, &v);
            let ct = cone_tw(&f).unwrap();
            assert!(validate_twisted(&ct).is_valid());
            let lhs = cohomology_dims(realize(&ct).unwrap().complex());
            let rhs = cohomology_dims(&cone(&f.realize().unwrap()).unwrap());
            assert_eq!(lhs, rhs);
            tried += 1;
        }
        assert!(tried > 0);
        let id = TwMorphism::identity(&x);
        assert!(is_quasi_iso(&id.realize().unwrap()).unwrap().is_quasi_iso);
        assert!(cohomology_dims(realize(&cone_tw(&id.scale(&q.from_i64(3))).unwrap()).unwrap().complex()).is_empty());
    }

    #[test]
    fn hom_free_matches_module_hom() {
        for t in cases() {
            let m = DgModule::regular(t.algebra());
            let h = hom_free(&t, &m).unwrap();
            assert!(validate_complex(&h.full).violations.is_empty());
            let (mh, _, _) = module_hom(&realize(&t).unwrap(), &m).unwrap();
            assert_eq!(cohomology_dims(&h.complex), cohomology_dims(&mh), "{t:?}");
        }
    }

    #[test]
    fn free_tensor_matches_tensor_over() {
        for t in cases() {
            let op = DgModule::regular(&dga::opposite(t.algebra()));
            let n = op.complex().clone();
            let left = op.left_action();
            let ft = free_tensor(&t, &n, &left).unwrap();
            assert!(validate_complex(&ft.full).violations.is_empty());
            let to = tensor_over(&realize(&t).unwrap(), &n, &left).unwrap();
            assert_eq!(cohomology_dims(&ft.complex), cohomology_dims(&to.quotient));
        }
    }
}
