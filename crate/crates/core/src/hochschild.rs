//! Smoothness certificates, Hochschild homology from a perfect bimodule
//! resolution, the truncated normalized Hochschild complex, and the pairing
//! `HH_n × HH_{-n} → k`.
//!
//! Indexing: `HH_n(A) = H^n(A ⊗^L_{A^e} A)` (cohomological). The classical
//! homological index of an ordinary algebra is `-n`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{
    self, cohomology, find_quasi_iso, is_quasi_iso, ChainMap, CohomologySummary, Complex, ComplexBuilder,
    ComplexError, Layout, QuasiIsoReport, SearchBudget, SearchOutcome,
};
use crate::dga::{self, validate_algebra, DGAlgebra, Element};
use crate::graded::GradedMap;
use crate::linalg;
use crate::matrix::Matrix;
use crate::module::{diagonal_action, diagonal_left_action};
use crate::scalar::Scalar;
use crate::twisted::{free_tensor, validate_twisted, Realization, TwError, TwViolation, TwistedModule};

/// The augmentation `realize(pA) → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Epsilon {
    /// `ε(e_j . u) = ε_j . u` (diagonal right action), one element `ε_j ∈ A^{-r_j}` per generator.
    OnGenerators(Vec<Element>),
    /// An explicit degree-0 map on the realization of `pA` (the summand if an idempotent is present).
    Full(GradedMap),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("resolution must be a twisted module over the enveloping algebra")]
    WrongAlgebra,
    #[error("MC_VIOLATION: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    MaurerCartan(Vec<TwViolation>),
    #[error("malformed augmentation: {0}")]
    Malformed(String),
    #[error("EPS_NOT_CLOSED: the augmentation does not commute with the differentials")]
    EpsNotClosed,
    #[error("EPS_NOT_EQUIVARIANT: the augmentation is not a map of A^e-modules")]
    EpsNotEquivariant,
    #[error("NOT_QUASI_ISO: cone of the augmentation has cohomology {}", format_dims(.0))]
    NotQuasiIso(BTreeMap<i64, usize>),
    #[error(transparent)]
    Twisted(#[from] TwError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl CertifyError {
    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            CertifyError::InvalidAlgebra(_) => "INVALID_ALGEBRA",
            CertifyError::WrongAlgebra => "WRONG_ALGEBRA",
            CertifyError::MaurerCartan(_) => "MC_VIOLATION",
            CertifyError::Malformed(_) => "MALFORMED_EPS",
            CertifyError::EpsNotClosed => "EPS_NOT_CLOSED",
            CertifyError::EpsNotEquivariant => "EPS_NOT_EQUIVARIANT",
            CertifyError::NotQuasiIso(_) => "NOT_QUASI_ISO",
            CertifyError::Twisted(_) | CertifyError::Complex(_) => "INTERNAL",
        }
    }
}

pub fn format_dims(dims: &BTreeMap<i64, usize>) -> String {
    if dims.is_empty() {
        return "0".into();
    }
    dims.iter().map(|(n, d)| format!("H^{n}={d}")).collect::<Vec<_>>().join(", ")
}

/// A verified perfect resolution `pA → A` of the diagonal bimodule.
#[derive(Clone, Debug)]
pub struct SmoothCertificate {
    pub algebra: DGAlgebra,
    pub pa: TwistedModule,
    pub eps: Epsilon,
    /// The augmentation as a chain map `realize(pA) → A`.
    pub eps_map: ChainMap,
    pub verification: QuasiIsoReport,
}

fn eps_on_generators(pa: &TwistedModule, a: &DGAlgebra, r: &Realization, eps: &[Element]) -> Result<GradedMap, CertifyError> {
    if eps.len() != pa.rank() {
        return Err(CertifyError::Malformed(format!(
            "{} generators but {} augmentation values",
            pa.rank(),
            eps.len()
        )));
    }
    let dim = a.dim();
    let edim = dim * dim;
    let alayout = a.layout();
    let mut triplets = Vec::new();
    for (j, e) in eps.iter().enumerate() {
        if e.len() != dim {
            return Err(CertifyError::Malformed(format!("value for generator {} has wrong length", j + 1)));
        }
        if !a.is_of_degree(e, -pa.shifts()[j]) {
            return Err(CertifyError::Malformed(format!(
                "value for generator {} must have degree {}",
                j + 1,
                -pa.shifts()[j]
            )));
        }
        for (k, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for u in 0..edim {
                let (p, q) = (u / dim, u % dim);
                for (i, v) in dga::ract(a, k, p, q).into_iter().enumerate() {
                    if !v.is_zero() {
                        triplets.push((i, j * edim + u, c * &v));
                    }
                }
            }
        }
    }
    let full = Layout::map_from_triplets(a.field(), &r.layout, &alayout, 0, triplets)?;
    Ok(match &r.summand {
        Some(s) => full.compose(s.inclusion.map()),
        None => full,
    })
}

/// Runs every check and issues a certificate only if all pass.
pub fn certify_smooth(a: &DGAlgebra, pa: &TwistedModule, eps: &Epsilon) -> Result<SmoothCertificate, CertifyError> {
    let report = validate_algebra(a);
    if let Some(v) = report.violation {
        return Err(CertifyError::InvalidAlgebra(v.to_string()));
    }
    if *pa.algebra() != dga::enveloping(a) {
        return Err(CertifyError::WrongAlgebra);
    }
    let tw = validate_twisted(pa);
    if !tw.is_valid() {
        return Err(CertifyError::MaurerCartan(tw.violations));
    }
    let r = Realization::new(pa)?;
    let target = diagonal_action(a);
    let map = match eps {
        Epsilon::OnGenerators(v) => eps_on_generators(pa, a, &r, v)?,
        Epsilon::Full(g) => {
            if g.degree() != 0 || g.source() != r.module.complex().space() || g.target() != target.complex().space() {
                return Err(CertifyError::Malformed("augmentation has the wrong shape".into()));
            }
            g.clone()
        }
    };
    let eps_map = ChainMap::new(r.module.complex(), target.complex(), map)?;
    if !eps_map.is_closed() {
        return Err(CertifyError::EpsNotClosed);
    }
    if !r.module.is_module_map(&target, eps_map.map()) {
        return Err(CertifyError::EpsNotEquivariant);
    }
    let verification = is_quasi_iso(&eps_map)?;
    if !verification.is_quasi_iso {
        return Err(CertifyError::NotQuasiIso(verification.cone_dims));
    }
    Ok(SmoothCertificate {
        algebra: a.clone(),
        pa: pa.clone(),
        eps: eps.clone(),
        eps_map,
        verification,
    })
}

/// Hochschild homology computed from a certificate.
#[derive(Clone, Debug)]
pub struct HhResult {
    /// `realize(pA) ⊗_{A^e} A`.
    pub complex: Complex,
    /// `n ↦ dim HH_n`, nonzero entries only.
    pub dims: BTreeMap<i64, usize>,
    pub cohomology: CohomologySummary,
}

impl HhResult {
    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    /// Dimensions re-indexed homologically (`i = -n`).
    pub fn classical_dims(&self) -> BTreeMap<i64, usize> {
        self.dims.iter().map(|(&n, &d)| (-n, d)).collect()
    }
}

/// `C = ⊕_j A[r_j]` with differential `±d_A + α` acting through the left `A^e`-action on `A`.
pub fn hh_complex(cert: &SmoothCertificate) -> Result<Complex, TwError> {
    let a = &cert.algebra;
    let ft = free_tensor(&cert.pa, &a.as_complex(), &diagonal_left_action(a))?;
    Ok(ft.complex)
}

pub fn hh_resolution(cert: &SmoothCertificate) -> Result<HhResult, TwError> {
    let complex = hh_complex(cert)?;
    let cohomology = cohomology(&complex);
    Ok(HhResult {
        complex,
        dims: cohomology.dims.clone(),
        cohomology,
    })
}

/// `dim HH_n = dim HH_{-n}` for every `n`.
pub fn dim_symmetry_check(dims: &BTreeMap<i64, usize>) -> bool {
    dims.iter().all(|(&n, &d)| dims.get(&-n).copied().unwrap_or(0) == d)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarError {
    #[error("PRECONDITION_POSITIVE_PART: A/k·1 has elements of positive degree")]
    PositivePart,
    #[error("unit has no basis coordinate usable for the splitting A = k·1 ⊕ Ā")]
    NoUnitSlot,
    #[error("empty window {0}..{1}")]
    EmptyWindow(i64, i64),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BarDegree {
    Stable(usize),
    /// Truncation at the given number of columns cannot decide this degree.
    Unstable,
}

impl fmt::Display for BarDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BarDegree::Stable(d) => write!(f, "{d}"),
            BarDegree::Unstable => write!(f, "UNSTABLE"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarResult {
    pub columns: usize,
    pub dims: BTreeMap<i64, BarDegree>,
}

impl BarResult {
    /// Stable degrees only.
    pub fn stable(&self) -> BTreeMap<i64, usize> {
        self.dims
            .iter()
            .filter_map(|(&n, d)| match d {
                BarDegree::Stable(k) => Some((n, *k)),
                BarDegree::Unstable => None,
            })
            .collect()
    }
}

/// The normalized Hochschild complex `⊕_{n ≤ columns} A ⊗ Ā^{⊗n}` (total degree
/// `Σ|a_i| - n`) with differential `b + (-1)^n δ`, `δ` the internal differential.
///
/// With `degrees = Some((lo, hi))` only basis vectors of degree in `lo..=hi` are
/// kept (a brutal truncation, exact in degrees `lo + 1..=hi - 1`). The algebra is
/// first rewritten so that the unit is a basis element; that algebra is returned too.
pub fn normalized_hochschild_complex(
    a: &DGAlgebra,
    columns: usize,
    degrees: Option<(i64, i64)>,
) -> Result<(Complex, DGAlgebra), BarError> {
    let unit = a.unit();
    let slot = unit.iter().position(|c| !c.is_zero()).ok_or(BarError::NoUnitSlot)?;
    let b = if unit.iter().filter(|c| !c.is_zero()).count() == 1 && unit[slot] == a.field().one() {
        a.clone()
    } else {
        a.with_unit_as_basis(slot, "1")
    };
    let reduced: Vec<usize> = (0..b.dim()).filter(|&i| i != slot).collect();
    if reduced.iter().any(|&i| b.degree(i) > 0) {
        return Err(BarError::PositivePart);
    }
    let field = b.field();
    let dim = b.dim();
    let rdim = reduced.len();
    let (lo, hi) = degrees.unwrap_or((i64::MIN, i64::MAX));
    let pos: BTreeMap<usize, usize> = reduced.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let degree_of = |t: &[usize]| -> i64 { t.iter().map(|&i| b.degree(i)).sum::<i64>() - (t.len() as i64 - 1) };
    let decode = |n: usize, mut idx: usize| -> Vec<usize> {
        let mut out = vec![0; n + 1];
        for k in (1..=n).rev() {
            out[k] = reduced[idx % rdim];
            idx /= rdim;
        }
        out[0] = idx;
        out
    };
    let (amin, amax) = (b.degrees().iter().min().copied().unwrap_or(0), b.degrees().iter().max().copied().unwrap_or(0));
    let rmin = reduced.iter().map(|&i| b.degree(i)).min().unwrap_or(0);
    let rmax = reduced.iter().map(|&i| b.degree(i)).max().unwrap_or(0);
    // builder index of every kept basis vector, per column
    let mut builder = ComplexBuilder::new(field);
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(columns + 1);
    let mut next = 0usize;
    for n in 0..=columns {
        let nn = n as i64;
        let (cmin, cmax) = (amin + nn * rmin - nn, amax + nn * rmax - nn);
        let size = dim * rdim.pow(n as u32);
        if cmax < lo || cmin > hi || (n > 0 && rdim == 0) {
            slots.push(Vec::new());
            continue;
        }
        let mut col = vec![usize::MAX; size];
        for (k, slot_k) in col.iter_mut().enumerate() {
            let deg = degree_of(&decode(n, k));
            if (lo..=hi).contains(&deg) {
                builder.add_basis(deg);
                *slot_k = next;
                next += 1;
            }
        }
        slots.push(col);
    }
    let index = |n: usize, tuple: &[usize]| -> Option<usize> {
        let col = slots.get(n)?;
        if col.is_empty() {
            return None;
        }
        let mut idx = tuple[0];
        for &t in &tuple[1..] {
            idx = idx * rdim + pos[&t];
        }
        Some(col[idx]).filter(|&i| i != usize::MAX)
    };
    // adds c * (tuple with position `at` replaced by element `x`) to column n, dropping unit components
    let push = |builder: &mut ComplexBuilder, src: usize, n: usize, tuple: &[usize], at: usize, x: &[(usize, Scalar)], c: &Scalar| {
        let mut t = tuple.to_vec();
        for (i, v) in x {
            if at > 0 && *i == slot {
                continue;
            }
            t[at] = *i;
            if let Some(tgt) = index(n, &t) {
                builder.add_entry(tgt, src, c * v);
            }
        }
    };
    for n in 0..=columns {
        for (k, &src) in slots[n].iter().enumerate() {
            if src == usize::MAX {
                continue;
            }
            let t = decode(n, k);
            // internal differential, Koszul signs
            let col_sign = field.sign(n as i64);
            let mut before = 0i64;
            for i in 0..=n {
                let s = &col_sign * &field.sign(before);
                push(&mut builder, src, n, &t, i, b.diff_of(t[i]), &s);
                before += b.degree(t[i]);
            }
            if n == 0 {
                continue;
            }
            // face maps
            for i in 0..n {
                let prod = b.product(t[i], t[i + 1]);
                let mut u: Vec<usize> = t[..i].to_vec();
                u.push(0);
                u.extend_from_slice(&t[i + 2..]);
                push(&mut builder, src, n - 1, &u, i, prod, &field.sign(i as i64));
            }
            let last = b.degree(t[n]);
            let rest: i64 = t[..n].iter().map(|&i| b.degree(i)).sum();
            let prod = b.product(t[n], t[0]);
            let mut u: Vec<usize> = vec![0];
            u.extend_from_slice(&t[1..n]);
            push(&mut builder, src, n - 1, &u, 0, prod, &field.sign(n as i64 + last * rest));
        }
    }
    let (c, _) = builder.finish()?;
    Ok((c, b))
}

/// Dimensions of the truncated normalized Hochschild complex on `window`,
/// marking degrees the truncation cannot decide.
pub fn hh_bar(a: &DGAlgebra, window: (i64, i64), columns: usize) -> Result<BarResult, BarError> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(BarError::EmptyWindow(lo, hi));
    }
    let (c, _) = normalized_hochschild_complex(a, columns, Some((lo - 1, hi + 1)))?;
    let dims = complex::cohomology_dims(&c);
    let out = (lo..=hi)
        .map(|w| {
            let stable = (columns as i64) > -w + 1;
            let d = if stable {
                BarDegree::Stable(dims.get(&w).copied().unwrap_or(0))
            } else {
                BarDegree::Unstable
            };
            (w, d)
        })
        .collect();
    Ok(BarResult { columns, dims: out })
}

#[derive(Clone, Debug)]
pub struct PairingResult {
    pub hh: HhResult,
    /// Quasi-isomorphism `C → C^*` when one was found.
    pub theta: Option<ChainMap>,
    pub not_found_reason: Option<String>,
    pub candidates_tried: usize,
    /// `P_n[i][k] = θ(x_i)(y_k)`, `x_i` representatives of `HH_n`, `y_k` of `HH_{-n}`.
    pub matrices: BTreeMap<i64, Matrix>,
    pub nondegenerate: BTreeMap<i64, bool>,
    pub dim_symmetric: bool,
}

impl PairingResult {
    pub fn all_nondegenerate(&self) -> bool {
        self.theta.is_some() && self.nondegenerate.values().all(|&b| b)
    }
}

pub fn hh_pairing(cert: &SmoothCertificate, budget: SearchBudget) -> Result<PairingResult, CertifyError> {
    let hh = hh_resolution(cert)?;
    let c = &hh.complex;
    let d = complex::dual(c);
    let dim_symmetric = dim_symmetry_check(&hh.dims);
    let outcome = find_quasi_iso(c, &d, budget)?;
    let (theta, reason, tried) = match outcome {
        SearchOutcome::Found {
            map, candidates_tried, ..
        } => (Some(map), None, candidates_tried),
        SearchOutcome::NotFound {
            reason,
            candidates_tried,
        } => (None, Some(reason), candidates_tried),
    };
    let field = c.field();
    let mut matrices = BTreeMap::new();
    let mut nondegenerate = BTreeMap::new();
    if let Some(theta) = &theta {
        for (&n, _) in &hh.dims {
            let xs = &hh.cohomology.representatives[&n];
            let ys = hh.cohomology.representatives.get(&-n).cloned().unwrap_or_default();
            let rows: Vec<Vec<Scalar>> = xs
                .iter()
                .map(|x| {
                    let fx = theta.map().apply(n, x);
                    ys.iter()
                        .map(|y| fx.iter().zip(y).fold(field.zero(), |acc, (u, v)| &acc + &(u * v)))
                        .collect()
                })
                .collect();
            let m = Matrix::from_dense(field, &rows);
            nondegenerate.insert(n, xs.len() == ys.len() && linalg::is_invertible(&m));
            matrices.insert(n, m);
        }
    }
    Ok(PairingResult {
        hh,
        theta,
        not_found_reason: reason,
        candidates_tried: tried,
        matrices,
        nondegenerate,
        dim_symmetric,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorollaryError {
    #[error("PRECONDITION: the algebra has elements of positive degree")]
    PositiveDegree,
    #[error(transparent)]
    Twisted(#[from] TwError),
    #[error(transparent)]
    Bar(#[from] BarError),
}

#[derive(Clone, Debug)]
pub struct CorollaryReport {
    pub dims: BTreeMap<i64, usize>,
    /// `HH_n = 0` for `n ≠ 0`.
    pub concentrated_in_zero: bool,
    pub bar: BarResult,
    /// The truncated complex agrees with the resolution on every stable degree of the window.
    pub bar_agrees: bool,
    pub dim_symmetric: bool,
}

impl CorollaryReport {
    pub fn pass(&self) -> bool {
        self.concentrated_in_zero && self.bar_agrees && self.dim_symmetric
    }
}

/// For non-positively graded smooth `A`: `HH` lives in degree 0; cross-checked
/// against the truncated Hochschild complex on `[-(columns - 2), 1]`.
pub fn nonpositive_corollary_check(cert: &SmoothCertificate, columns: usize) -> Result<CorollaryReport, CorollaryError> {
    if !cert.algebra.is_nonpositive() {
        return Err(CorollaryError::PositiveDegree);
    }
    let hh = hh_resolution(cert)?;
    let lo = -(columns as i64 - 2).max(0);
    let bar = hh_bar(&cert.algebra, (lo, 1), columns)?;
    let bar_agrees = bar
        .stable()
        .iter()
        .all(|(n, d)| hh.dims.get(n).copied().unwrap_or(0) == *d);
    Ok(CorollaryReport {
        concentrated_in_zero: hh.dims.keys().all(|&n| n == 0),
        dim_symmetric: dim_symmetry_check(&hh.dims),
        dims: hh.dims,
        bar,
        bar_agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{self, named_example};
    use crate::linalg::SpanQuotient;
    use crate::scalar::Field;

    /// `dim A / [A, A]` for an ungraded algebra, from the commutators of basis elements.
    fn commutator_quotient_dim(a: &DGAlgebra) -> usize {
        let n = a.dim();
        let mut span = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = dga::sub(&a.product_dense(i, j), &a.product_dense(j, i));
                span.push(
                    c.into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .collect::<Vec<_>>(),
                );
            }
        }
        SpanQuotient::new(a.field(), n, span).quotient_dim()
    }

    fn certified(name: &str) -> (DGAlgebra, SmoothCertificate) {
        let (a, c) = named_example(Field::Rational, name).unwrap();
        (a, c.unwrap())
    }

    #[test]
    fn resolution_agrees_with_bar_complex_and_commutator_quotient() {
        for name in ["k", "kxk", "kxk-split", "a2", "a3", "a2-dg"] {
            let (a, c) = certified(name);
            let hh = hh_resolution(&c).unwrap();
            assert_eq!(hh.dims.keys().copied().collect::<Vec<_>>(), vec![0], "{name}");
            let columns = if name == "a3" { 4 } else { 6 };
            let lo = 2 - columns as i64 + 1;
            let bar = hh_bar(&a, (lo, 1), columns).unwrap();
            for (n, d) in bar.stable() {
                assert_eq!(hh.dims.get(&n).copied().unwrap_or(0), d, "{name} degree {n}");
            }
            if a.degrees().iter().all(|&d| d == 0) {
                assert_eq!(hh.dims[&0], commutator_quotient_dim(&a), "{name}");
            }
        }
    }

    #[test]
    fn bar_complex_is_a_complex() {
        for a in [
            certified("a2-dg").0,
            examples::make_exterior(Field::Rational),
            examples::make_dual_numbers(Field::Prime(3)),
        ] {
            let (c, _) = normalized_hochschild_complex(&a, 4, None).unwrap();
            assert!(complex::validate_complex(&c).violations.is_empty());
        }
    }

    #[test]
    fn bar_marks_unstable_degrees() {
        let a = examples::make_dual_numbers(Field::Rational);
        let bar = hh_bar(&a, (-6, 0), 5).unwrap();
        assert_eq!(bar.dims[&-4], BarDegree::Unstable);
        assert_eq!(bar.dims[&-3], BarDegree::Stable(1));
        assert!(matches!(
            hh_bar(&certified("kxk").0.with_unit_as_basis(0, "1"), (0, 0), 3),
            Ok(_)
        ));
    }

    #[test]
    fn positive_part_rejected() {
        let q = Field::Rational;
        let mut a = DGAlgebra::new(q, vec![("1".into(), 0), ("t".into(), 2)], &[q.one(), q.zero()]).unwrap();
        a.set_product(0, 0, &a.basis_element(0)).unwrap();
        a.set_product(0, 1, &a.basis_element(1)).unwrap();
        a.set_product(1, 0, &a.basis_element(1)).unwrap();
        assert_eq!(hh_bar(&a, (-2, 0), 4), Err(BarError::PositivePart));
    }

    #[test]
    fn non_smooth_controls_fail_certification() {
        for a in [examples::make_dual_numbers(Field::Rational), examples::make_exterior(Field::Rational)] {
            let (pa, eps) = examples::naive_resolution(&a);
            let err = certify_smooth(&a, &pa, &eps).unwrap_err();
            assert_eq!(err.code(), "NOT_QUASI_ISO");
            let bar = hh_bar(&a, (-6, 0), 8).unwrap();
            let nonzero = bar.stable().iter().filter(|(n, d)| **n < 0 && **d > 0).count();
            assert!(nonzero >= 3);
        }
    }

    #[test]
    fn certificate_diagnostics() {
        let q = Field::Rational;
        let (a, c) = certified("a2");
        let env = dga::enveloping(&a);
        // α_12 α_23 = 1 ⊗ 1 with α_13 = 0 violates Maurer–Cartan
        let mut bad = TwistedModule::new(&env, vec![0, 1, 2]);
        bad.set_alpha(0, 1, env.unit()).unwrap();
        bad.set_alpha(1, 2, env.unit()).unwrap();
        let eps = Epsilon::OnGenerators(vec![a.unit(), a.zero(), a.zero()]);
        assert_eq!(certify_smooth(&a, &bad, &eps).unwrap_err().code(), "MC_VIOLATION");
        let e1 = a.basis_element(a.index_of("e1").unwrap());
        let not_closed = Epsilon::OnGenerators(vec![e1, a.zero()]);
        assert_eq!(certify_smooth(&a, &c.pa, &not_closed).unwrap_err().code(), "EPS_NOT_CLOSED");
        // composing with the swap e1 <-> e2 keeps closedness but breaks equivariance
        let layout = a.layout();
        let (i1, i2, ia) = (a.index_of("e1").unwrap(), a.index_of("e2").unwrap(), a.index_of("a1").unwrap());
        let swap = Layout::map_from_triplets(
            q,
            &layout,
            &layout,
            0,
            vec![(i2, i1, q.one()), (i1, i2, q.one()), (ia, ia, q.one())],
        )
        .unwrap();
        let swapped = Epsilon::Full(swap.compose(c.eps_map.map()));
        assert_eq!(certify_smooth(&a, &c.pa, &swapped).unwrap_err().code(), "EPS_NOT_EQUIVARIANT");
        let zero = Epsilon::OnGenerators(vec![a.zero(), a.zero()]);
        assert_eq!(certify_smooth(&a, &c.pa, &zero).unwrap_err().code(), "NOT_QUASI_ISO");
        let short = Epsilon::OnGenerators(vec![a.unit()]);
        assert_eq!(certify_smooth(&a, &c.pa, &short).unwrap_err().code(), "MALFORMED_EPS");
    }

    #[test]
    fn pairing_is_nondegenerate() {
        for name in ["k", "kxk", "kxk-split", "a2", "a3", "a2-dg"] {
            let (_, c) = certified(name);
            let p = hh_pairing(&c, SearchBudget::default()).unwrap();
            assert!(p.theta.is_some(), "{name}: {:?}", p.not_found_reason);
            assert!(p.all_nondegenerate(), "{name}");
            assert!(p.dim_symmetric);
        }
    }

    #[test]
    fn corollary_holds() {
        for name in ["k", "kxk", "a2", "a2-dg"] {
            let (_, c) = certified(name);
            let r = nonpositive_corollary_check(&c, 5).unwrap();
            assert!(r.pass(), "{name}: {r:?}");
        }
    }

    #[test]
    fn symmetry_check() {
        let mut dims = BTreeMap::from([(0, 2)]);
        assert!(dim_symmetry_check(&dims));
        dims.insert(-1, 1);
        assert!(!dim_symmetry_check(&dims));
        dims.insert(1, 1);
        assert!(dim_symmetry_check(&dims));
    }
}
