//! Right DG modules over finite-dimensional DG algebras.
//!
//! A module is a complex together with one action map per algebra basis
//! element (`x ↦ x.b_k`, of degree `|b_k|`). Left modules over `A` are right
//! modules over `A^op`, related by `a · x = (-1)^{|a||x|} x . a`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{
    self, hom_complex_with_layout, parity, tensor, tensor_maps, ChainMap, Complex, ComplexError, Summand,
};
use crate::dga::{self, DGAlgebra, Element};
use crate::graded::GradedMap;
use crate::linalg;
use crate::matrix::{Matrix, SparseRow};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("expected {expected} action maps, got {got}")]
    ActionCount { expected: usize, got: usize },
    #[error("action of basis element {index} has the wrong degree or spaces")]
    ActionShape { index: usize },
    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("map is not an idempotent module endomorphism")]
    NotIdempotent,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    algebra: DGAlgebra,
    complex: Complex,
    action: Vec<GradedMap>,
}

/// Outcome of [`validate_module`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleReport {
    pub violation: Option<String>,
}

impl ModuleReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

impl DgModule {
    pub fn new(algebra: &DGAlgebra, complex: Complex, action: Vec<GradedMap>) -> Result<DgModule, ModuleError> {
        if action.len() != algebra.dim() {
            return Err(ModuleError::ActionCount {
                expected: algebra.dim(),
                got: action.len(),
            });
        }
        for (k, r) in action.iter().enumerate() {
            if r.degree() != algebra.degree(k) || r.source() != complex.space() || r.target() != complex.space() {
                return Err(ModuleError::ActionShape { index: k });
            }
        }
        Ok(DgModule {
            algebra: algebra.clone(),
            complex,
            action,
        })
    }

    /// `A` acting on itself by right multiplication.
    pub fn regular(a: &DGAlgebra) -> DgModule {
        let action = (0..a.dim())
            .map(|k| a.right_mul(&a.basis_element(k), a.degree(k)))
            .collect();
        DgModule {
            algebra: a.clone(),
            complex: a.as_complex(),
            action,
        }
    }

    pub fn algebra(&self) -> &DGAlgebra {
        &self.algebra
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn action(&self, k: usize) -> &GradedMap {
        &self.action[k]
    }

    pub fn actions(&self) -> &[GradedMap] {
        &self.action
    }

    /// Right action of a homogeneous element of the given degree.
    pub fn act_by(&self, x: &[Scalar], degree: i64) -> GradedMap {
        let space = self.complex.space();
        let mut acc = GradedMap::zero(self.algebra.field(), space, space, degree);
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                assert_eq!(self.algebra.degree(k), degree, "element is not homogeneous");
                acc = acc.add(&self.action[k].scale(c));
            }
        }
        acc
    }

    /// Left action of `B^op` for a module over `B`: `b · x = (-1)^{|b||x|} x . b`.
    pub fn left_action(&self) -> Vec<GradedMap> {
        let field = self.algebra.field();
        let p = parity(field, self.complex.space());
        self.action
            .iter()
            .enumerate()
            .map(|(k, r)| {
                if self.algebra.degree(k).rem_euclid(2) == 1 {
                    r.compose(&p)
                } else {
                    r.clone()
                }
            })
            .collect()
    }

    /// Module over `target` obtained through an algebra map `target → self.algebra`.
    pub fn restrict(&self, target: &DGAlgebra, image: impl Fn(usize) -> Element) -> DgModule {
        let action = (0..target.dim())
            .map(|k| self.act_by(&image(k), target.degree(k)))
            .collect();
        DgModule {
            algebra: target.clone(),
            complex: self.complex.clone(),
            action,
        }
    }

    /// The image of an idempotent module endomorphism, with its inclusion.
    pub fn image_submodule(&self, e: &GradedMap) -> Result<(DgModule, ChainMap), ModuleError> {
        if e.degree() != 0 || e.compose(e) != *e || e.source() != self.complex.space() {
            return Err(ModuleError::NotIdempotent);
        }
        let s = Summand::of_idempotent(&self.complex, e)?;
        let action = self
            .action
            .iter()
            .map(|r| s.corestrict(&r.compose(s.inclusion.map())).ok_or(ModuleError::NotIdempotent))
            .collect::<Result<Vec<_>, _>>()?;
        let m = DgModule {
            algebra: self.algebra.clone(),
            complex: s.complex.clone(),
            action,
        };
        Ok((m, s.inclusion))
    }

    /// The dual complex with `(φ . a)(x) = (-1)^{|a||x|} φ(x . a)`, a module over `A^op`.
    pub fn dual(&self) -> DgModule {
        let field = self.algebra.field();
        let c = complex::dual(&self.complex);
        let action = self
            .action
            .iter()
            .map(|r| {
                let a = r.degree();
                // block at m: functional on M^{-m} to functional on M^{-m-a}
                let blocks: Vec<(i64, Matrix)> = r
                    .blocks()
                    .iter()
                    .map(|(&src, b)| {
                        let m = -src - a;
                        (m, b.transpose().scale(&field.sign(a * src)))
                    })
                    .collect();
                GradedMap::from_blocks(field, c.space(), c.space(), a, blocks).expect("dual action blocks")
            })
            .collect();
        DgModule {
            algebra: dga::opposite(&self.algebra),
            complex: c,
            action,
        }
    }

    /// Module map check: `f(x . a) = f(x) . a` for every basis element.
    pub fn is_module_map(&self, other: &DgModule, f: &GradedMap) -> bool {
        self.action
            .iter()
            .zip(&other.action)
            .all(|(r, s)| f.compose(r) == s.compose(f))
    }
}

/// Unit, associativity and Leibniz checks on all basis elements.
pub fn validate_module(m: &DgModule) -> ModuleReport {
    let a = &m.algebra;
    let field = a.field();
    let space = m.complex.space();
    let violation = (|| {
        let u = a.unit();
        let deg0 = a.degree_of(&u).unwrap_or(0);
        if m.act_by(&u, deg0) != GradedMap::identity(field, space) {
            return Some("unit does not act as the identity".to_string());
        }
        let bad = crate::par::map_range(a.dim(), |i| {
            (0..a.dim()).find(|&j| {
                let prod = a.product_dense(i, j);
                let lhs = m.act_by(&prod, a.degree(i) + a.degree(j));
                lhs != m.action[j].compose(&m.action[i])
            })
        });
        if let Some((i, j)) = bad.into_iter().enumerate().find_map(|(i, j)| j.map(|j| (i, j))) {
            return Some(format!("associativity fails for ({}, {})", a.name(i), a.name(j)));
        }
        let d = m.complex.differential();
        let p = parity(field, space);
        for k in 0..a.dim() {
            let r = &m.action[k];
            let lhs = d.compose(r);
            let da = a.d(&a.basis_element(k));
            let rhs = r.compose(d).add(&m.act_by(&da, a.degree(k) + 1).compose(&p));
            if lhs != rhs {
                return Some(format!("Leibniz rule fails for {}", a.name(k)));
            }
        }
        None
    })();
    ModuleReport { violation }
}

/// `M ⊗_A N` for a right `A`-module `M` and a complex `N` with a left `A`-action.
pub struct TensorOver {
    /// `M ⊗_k N`.
    pub tensor: Complex,
    pub quotient: Complex,
    /// `M ⊗_k N → M ⊗_A N`.
    pub projection: ChainMap,
    /// Section of the projection along the standard complement.
    pub section: GradedMap,
}

impl TensorOver {
    /// Map on the quotient induced by a map on `M ⊗_k N` preserving the relations.
    pub fn induced(&self, f: &GradedMap) -> GradedMap {
        self.projection.map().compose(f).compose(&self.section)
    }

    /// Right action on the quotient coming from a right action on `N`: `(m ⊗ n) . c = m ⊗ (n . c)`.
    pub fn induced_right_action(&self, m: &DgModule, n_right: &[GradedMap]) -> Vec<GradedMap> {
        let id = GradedMap::identity(m.algebra.field(), m.complex.space());
        n_right
            .iter()
            .map(|r| self.induced(&tensor_maps(&id, r, false)))
            .collect()
    }
}

/// Quotient of `M ⊗_k N` by `x.a ⊗ y - x ⊗ a·y`.
pub fn tensor_over(m: &DgModule, n: &Complex, n_left: &[GradedMap]) -> Result<TensorOver, ModuleError> {
    let a = &m.algebra;
    if n_left.len() != a.dim() {
        return Err(ModuleError::ActionCount {
            expected: a.dim(),
            got: n_left.len(),
        });
    }
    let t = tensor(&m.complex, n)?;
    let field = a.field();
    let id_m = GradedMap::identity(field, m.complex.space());
    let id_n = GradedMap::identity(field, n.space());
    let rel_maps: Vec<GradedMap> = crate::par::map_range(a.dim(), |k| {
        tensor_maps(&m.action[k], &id_n, false).sub(&tensor_maps(&id_m, &n_left[k], false))
    });
    let (quotient, projection, section) = quotient_by_images(&t, &rel_maps)?;
    Ok(TensorOver {
        tensor: t,
        quotient,
        projection,
        section,
    })
}

/// Quotient of `c` by the span of the images of `maps` (each landing in `c`).
pub fn quotient_by_images(c: &Complex, maps: &[GradedMap]) -> Result<(Complex, ChainMap, GradedMap), ModuleError> {
    let mut span: BTreeMap<i64, Vec<SparseRow>> = BTreeMap::new();
    for r in maps {
        for (&src, b) in r.blocks() {
            let bt = b.transpose();
            span.entry(src + r.degree())
                .or_default()
                .extend(bt.into_rows().into_iter().filter(|row| !row.is_empty()));
        }
    }
    Ok(c.quotient_by_span(&span)?)
}

/// `Hom_A(M, N)` as a subcomplex of `Hom_k(M, N)`, with the inclusion.
pub fn module_hom(m: &DgModule, n: &DgModule) -> Result<(Complex, ChainMap, complex::HomLayout), ModuleError> {
    if m.algebra != n.algebra {
        return Err(ModuleError::AlgebraMismatch);
    }
    let field = m.algebra.field();
    let (h, lay) = hom_complex_with_layout(&m.complex, &n.complex)?;
    let degrees: Vec<i64> = h.space().degrees().collect();
    let kernels = crate::par::map(&degrees, |&p| (p, module_kernel(field, m, n, &lay, p, h.dim(p))));
    let basis: BTreeMap<i64, Vec<Vec<Scalar>>> = kernels.into_iter().filter(|(_, k)| !k.is_empty()).collect();
    let (sub, incl) = h.subcomplex(&basis)?;
    Ok((sub, incl, lay))
}

/// Basis of closed degree-0 module maps `M → N`.
pub fn module_map_space(m: &DgModule, n: &DgModule) -> Result<Vec<ChainMap>, ModuleError> {
    let (h, incl, lay) = module_hom(m, n)?;
    let field = m.algebra.field();
    let embed = incl.block(0);
    let maps = linalg::kernel_basis(&h.d(0))
        .into_iter()
        .map(|v| ChainMap::new(&m.complex, &n.complex, lay.to_map(field, 0, &embed.mul_vec(&v))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(maps)
}

/// A bimodule as a right module over `A ⊗ A^op` (basis `i * dim + j`, the
/// `A` factor first): `x . (a ⊗ b) = (-1)^{|b|(|x| + |a|)} b · (x . a)`.
pub fn bimodule(a: &DGAlgebra, c: Complex, left: &[GradedMap], right: &[GradedMap]) -> Result<DgModule, ModuleError> {
    let field = a.field();
    let dim = a.dim();
    for acts in [left, right] {
        if acts.len() != dim {
            return Err(ModuleError::ActionCount {
                expected: dim,
                got: acts.len(),
            });
        }
    }
    let p = parity(field, c.space());
    let action = (0..dim * dim)
        .map(|u| {
            let (i, j) = (u / dim, u % dim);
            let (di, dj) = (a.degree(i), a.degree(j));
            let mut r = left[j].compose(&right[i]);
            if dj.rem_euclid(2) == 1 {
                r = r.compose(&p);
            }
            r.scale(&field.sign(di * dj))
        })
        .collect();
    let b = dga::opposite(&dga::enveloping(a));
    DgModule::new(&b, c, action)
}

/// Kernel of `f ↦ (f ∘ R_a - R_a ∘ f)_a` on `Hom^p(M, N)`.
fn module_kernel(
    field: crate::scalar::Field,
    m: &DgModule,
    n: &DgModule,
    lay: &complex::HomLayout,
    p: i64,
    dim: usize,
) -> Vec<Vec<Scalar>> {
    let hom_target = complex::HomLayout::new(m.complex.space(), n.complex.space());
    let mut cols: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(dim);
    for idx in 0..dim {
        let mut e = vec![field.zero(); dim];
        e[idx] = field.one();
        let f = lay.to_map(field, p, &e);
        let mut col: Vec<(usize, Scalar)> = Vec::new();
        let mut offset = 0usize;
        for (k, (r, s)) in m.action.iter().zip(&n.action).enumerate() {
            let deg = p + m.algebra.degree(k);
            let g = f.compose(r).sub(&s.compose(&f));
            let len = hom_target.space().dim(deg);
            for (i, v) in hom_target.to_vector(&g).into_iter().enumerate() {
                if !v.is_zero() {
                    col.push((offset + i, v));
                }
            }
            offset += len;
        }
        cols.push(col);
    }
    let total: usize = (0..m.algebra.dim())
        .map(|k| hom_target.space().dim(p + m.algebra.degree(k)))
        .sum();
    let t = cols
        .iter()
        .enumerate()
        .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v.clone())));
    let constraint = Matrix::from_triplets(field, total, dim, t);
    linalg::kernel_basis(&constraint)
}

/// `A` as a right `A^e`-module: `a . (a' ⊗ a'') = (-1)^{|a||a'|} a' a a''`.
pub fn diagonal_action(a: &DGAlgebra) -> DgModule {
    let e = dga::enveloping(a);
    let dim = a.dim();
    let layout = a.layout();
    let action = (0..e.dim())
        .map(|u| {
            let (p, q) = (u / dim, u % dim);
            let triplets = (0..dim).flat_map(|k| {
                dga::ract(a, k, p, q)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(move |(i, c)| (i, k, c))
                    .collect::<Vec<_>>()
            });
            complex::Layout::map_from_triplets(a.field(), &layout, &layout, e.degree(u), triplets)
                .expect("homogeneous action")
        })
        .collect();
    DgModule {
        algebra: e,
        complex: a.as_complex(),
        action,
    }
}

/// The left `A^e`-action on `A` from [`dga::lact`], as maps of degree `|u|`.
pub fn diagonal_left_action(a: &DGAlgebra) -> Vec<GradedMap> {
    let dim = a.dim();
    let layout = a.layout();
    (0..dim * dim)
        .map(|u| {
            let (p, q) = (u / dim, u % dim);
            let triplets = (0..dim).flat_map(|k| {
                dga::lact(a, p, q, k)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(move |(i, c)| (i, k, c))
                    .collect::<Vec<_>>()
            });
            complex::Layout::map_from_triplets(a.field(), &layout, &layout, a.degree(p) + a.degree(q), triplets)
                .expect("homogeneous action")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::cohomology_dims;
    use crate::scalar::Field;

    fn a2(arrow_degree: i64) -> DGAlgebra {
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

    /// Λ(ξ) with |ξ| = -1 plus a differential-carrying example: k[x]/x² with |x| = -1, d = 0.
    fn exterior() -> DGAlgebra {
        let q = Field::Rational;
        let mut a = DGAlgebra::new(q, vec![("1".into(), 0), ("xi".into(), -1)], &[q.one(), q.zero()]).unwrap();
        a.set_product(0, 0, &a.basis_element(0)).unwrap();
        a.set_product(0, 1, &a.basis_element(1)).unwrap();
        a.set_product(1, 0, &a.basis_element(1)).unwrap();
        a
    }

    #[test]
    fn regular_and_diagonal_modules_are_valid() {
        for a in [a2(0), a2(-1), exterior()] {
            assert!(validate_module(&DgModule::regular(&a)).is_valid());
            assert!(validate_module(&diagonal_action(&a)).is_valid());
            assert!(validate_module(&DgModule::regular(&a).dual()).is_valid());
            assert!(validate_module(&diagonal_action(&a).dual()).is_valid());
        }
    }

    #[test]
    fn left_action_matches_lact() {
        // the right A^e-action turned into a left (A^e)^op-action agrees with lact
        // after the anti-automorphism a' ⊗ a'' ↦ ±a'' ⊗ a'; checked here through module validity
        for a in [a2(-1), exterior()] {
            let e = dga::enveloping(&a);
            let m = DgModule::new(&dga::opposite(&e), a.as_complex(), diagonal_left_action(&a)).unwrap();
            // lact is a left A^e-action, i.e. a right action of (A^e)^op after the sign twist
            let as_right = DgModule::new(&dga::opposite(&e), a.as_complex(), m.left_action()).unwrap();
            assert!(validate_module(&as_right).is_valid());
        }
    }

    #[test]
    fn tensor_with_regular_is_identity() {
        for a in [a2(0), a2(-1), exterior()] {
            let m = DgModule::regular(&a);
            let left = DgModule::regular(&dga::opposite(&a)).left_action();
            let t = tensor_over(&m, &a.as_complex(), &left).unwrap();
            assert_eq!(t.quotient.space(), a.as_complex().space());
            assert_eq!(cohomology_dims(&t.quotient), cohomology_dims(&a.as_complex()));
        }
    }

    #[test]
    fn module_hom_of_regular_is_algebra() {
        for a in [a2(0), a2(-1)] {
            let m = DgModule::regular(&a);
            let (h, incl, _) = module_hom(&m, &m).unwrap();
            assert_eq!(h.space(), a.as_complex().space());
            assert!(incl.is_closed());
        }
    }
}
