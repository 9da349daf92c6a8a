//! The dualizing bimodule `A^*`, the inverse dualizing bimodule `A^!`, the
//! Nakayama functor `N ↦ (N^∨)^*`, and dimension-level checks of Serre duality
//! and of `A^* ⊗_A A^! ≃ A ≃ A^! ⊗_A A^*`.
//!
//! Bimodules are right modules over `A ⊗ A^op` (basis `i * dim + j`, `A` first),
//! the algebra [`dga::opposite`] of [`dga::enveloping`] produces.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{cohomology_dims, find_quasi_iso_in, tensor_maps, ComplexError, SearchBudget, SearchOutcome};
use crate::dga::{self, DGAlgebra, Element};
use crate::graded::GradedMap;
use crate::hochschild::SmoothCertificate;
use crate::module::{bimodule, diagonal_action, module_map_space, tensor_over, DgModule, ModuleError, TensorOver};
use crate::twisted::{dual_vee, hom_free, hom_tw, realize, TwError, TwistedModule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualityError {
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Twisted(#[from] TwError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `x_k ⊗ 1`.
fn first_slot(a: &DGAlgebra, k: usize) -> Element {
    let dim = a.dim();
    let mut v = vec![a.field().zero(); dim * dim];
    for (j, c) in a.unit().into_iter().enumerate() {
        v[k * dim + j] = c;
    }
    v
}

/// `1 ⊗ x_k`.
fn second_slot(a: &DGAlgebra, k: usize) -> Element {
    let dim = a.dim();
    let mut v = vec![a.field().zero(); dim * dim];
    for (i, c) in a.unit().into_iter().enumerate() {
        v[i * dim + k] = c;
    }
    v
}

/// The right `A`-module underlying a bimodule.
pub fn right_part(a: &DGAlgebra, m: &DgModule) -> DgModule {
    m.restrict(a, |k| first_slot(a, k))
}

/// The left `A`-action of a bimodule.
pub fn left_part(a: &DGAlgebra, m: &DgModule) -> Vec<GradedMap> {
    m.restrict(&dga::opposite(a), |k| second_slot(a, k)).left_action()
}

/// `A` with left and right multiplication.
pub fn diagonal_bimodule(a: &DGAlgebra) -> DgModule {
    let lefts: Vec<GradedMap> = (0..a.dim()).map(|k| a.left_mul(&a.basis_element(k), a.degree(k))).collect();
    let rights = DgModule::regular(a).actions().to_vec();
    bimodule(a, a.as_complex(), &lefts, &rights).expect("diagonal bimodule")
}

/// `A^* = Hom_k(A, k)` with `(a · φ . b)(x) = ± φ(b x a)`.
#[derive(Clone, Debug)]
pub struct DualizingBimodule {
    pub algebra: DGAlgebra,
    pub module: DgModule,
}

impl DualizingBimodule {
    pub fn right_module(&self) -> DgModule {
        right_part(&self.algebra, &self.module)
    }

    pub fn left_action(&self) -> Vec<GradedMap> {
        left_part(&self.algebra, &self.module)
    }
}

pub fn a_star(a: &DGAlgebra) -> DualizingBimodule {
    DualizingBimodule {
        algebra: a.clone(),
        module: diagonal_action(a).dual(),
    }
}

/// How a realized bimodule is known to be projective over one side: an
/// iterated extension of `generators` shifted free modules of rank `free_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivityWitness {
    pub side: &'static str,
    pub generators: usize,
    pub free_rank: usize,
    /// Whether an idempotent cut is applied (a summand of the free filtration).
    pub summand: bool,
}

/// `A^! = (pA)^∨`, a twisted module over `A ⊗ A^op`.
#[derive(Clone, Debug)]
pub struct InverseDualizing {
    pub algebra: DGAlgebra,
    pub twisted: TwistedModule,
    pub realized: DgModule,
    pub witnesses: Vec<ProjectivityWitness>,
}

impl InverseDualizing {
    pub fn right_module(&self) -> DgModule {
        right_part(&self.algebra, &self.realized)
    }

    pub fn left_action(&self) -> Vec<GradedMap> {
        left_part(&self.algebra, &self.realized)
    }
}

pub fn a_shriek(cert: &SmoothCertificate) -> Result<InverseDualizing, DualityError> {
    let a = &cert.algebra;
    let twisted = dual_vee(&cert.pa);
    let realized = realize(&twisted)?;
    let summand = twisted.idempotent().is_some();
    let witnesses = ["right", "left"]
        .into_iter()
        .map(|side| ProjectivityWitness {
            side,
            generators: twisted.rank(),
            free_rank: a.dim(),
            summand,
        })
        .collect();
    Ok(InverseDualizing {
        algebra: a.clone(),
        twisted,
        realized,
        witnesses,
    })
}

/// `S_A(N) = (N^∨)^*`, a right `A`-module.
pub fn nakayama(n: &TwistedModule) -> Result<DgModule, DualityError> {
    let dv = realize(&dual_vee(n))?;
    let s = dv.dual();
    if s.algebra() != n.algebra() {
        return Err(DualityError::AlgebraMismatch);
    }
    Ok(s)
}

/// `M ⊗_A A^!` with the right action of the remaining factor.
pub fn serre_inverse_apply_module(m: &DgModule, ad: &InverseDualizing) -> Result<DgModule, DualityError> {
    if *m.algebra() != ad.algebra {
        return Err(DualityError::AlgebraMismatch);
    }
    let right = ad.right_module();
    let t = tensor_over(m, right.complex(), &ad.left_action())?;
    let action = t.induced_right_action(m, right.actions());
    Ok(DgModule::new(&ad.algebra, t.quotient, action)?)
}

pub fn serre_inverse_apply(n: &TwistedModule, ad: &InverseDualizing) -> Result<DgModule, DualityError> {
    serre_inverse_apply_module(&realize(n)?, ad)
}

/// One dimension table comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimComparison {
    pub label: String,
    pub lhs: BTreeMap<i64, usize>,
    pub rhs: BTreeMap<i64, usize>,
}

impl DimComparison {
    pub fn matches(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Every degree where either side is nonzero.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.lhs.keys().chain(self.rhs.keys()).copied().collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    NotSearched,
    Found { candidates_tried: usize },
    NotFound { reason: String },
}

#[derive(Clone, Debug)]
pub struct SerreReport {
    pub comparisons: Vec<DimComparison>,
    pub witnesses: Vec<(String, Witness)>,
    pub projectivity: Vec<ProjectivityWitness>,
}

impl SerreReport {
    pub fn pass(&self) -> bool {
        self.comparisons.iter().all(DimComparison::matches)
    }
}

fn reflect(dims: BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    dims.into_iter().map(|(n, d)| (-n, d)).collect()
}

/// `dim H^t Hom(N, M) = dim H^{-t} Hom(M, S_A N)` for every `t`.
pub fn serre_check(n: &TwistedModule, m: &TwistedModule) -> Result<SerreReport, DualityError> {
    if n.algebra() != m.algebra() {
        return Err(DualityError::AlgebraMismatch);
    }
    let lhs = cohomology_dims(&hom_tw(n, m)?.complex);
    let s = nakayama(n)?;
    let rhs = reflect(cohomology_dims(&hom_free(m, &s)?.complex));
    Ok(SerreReport {
        comparisons: vec![DimComparison {
            label: "Hom(N,M) vs Hom(M,S(N)) reflected".into(),
            lhs,
            rhs,
        }],
        witnesses: Vec::new(),
        projectivity: Vec::new(),
    })
}

fn tensor_bimodule(a: &DGAlgebra, x: &DgModule, y: &DgModule) -> Result<(TensorOver, DgModule), DualityError> {
    let xr = right_part(a, x);
    let t = tensor_over(&xr, y.complex(), &left_part(a, y))?;
    let id = GradedMap::identity(a.field(), y.complex().space());
    let lefts: Vec<GradedMap> = left_part(a, x).iter().map(|l| t.induced(&tensor_maps(l, &id, false))).collect();
    let rights = t.induced_right_action(&xr, right_part(a, y).actions());
    let m = bimodule(a, t.quotient.clone(), &lefts, &rights)?;
    Ok((t, m))
}

/// Compares `H(A^* ⊗_A A^!)` and `H(A^! ⊗_A A^*)` with `H(A)`. With a budget,
/// also searches bimodule maps `A → A^* ⊗_A A^!` and `A → A^! ⊗_A A^*` for a
/// quasi-isomorphism.
pub fn invert_check(cert: &SmoothCertificate, witness: Option<SearchBudget>) -> Result<SerreReport, DualityError> {
    let a = &cert.algebra;
    let star = a_star(a).module;
    let shriek = a_shriek(cert)?;
    let ha = cohomology_dims(&a.as_complex());
    let diag = diagonal_bimodule(a);

    let mut comparisons = Vec::new();
    let mut witnesses = Vec::new();
    for (label, x, y) in [
        ("A^* (x)_A A^!", &star, &shriek.realized),
        ("A^! (x)_A A^*", &shriek.realized, &star),
    ] {
        let (t, m) = tensor_bimodule(a, x, y)?;
        comparisons.push(DimComparison {
            label: format!("{label} vs A"),
            lhs: cohomology_dims(&t.quotient),
            rhs: ha.clone(),
        });
        let w = match witness {
            None => Witness::NotSearched,
            Some(budget) => {
                let basis = module_map_space(&diag, &m)?;
                match find_quasi_iso_in(diag.complex(), m.complex(), &basis, budget)? {
                    SearchOutcome::Found { candidates_tried, .. } => Witness::Found { candidates_tried },
                    SearchOutcome::NotFound { reason, .. } => Witness::NotFound { reason },
                }
            }
        };
        witnesses.push((label.to_string(), w));
    }
    Ok(SerreReport {
        comparisons,
        witnesses,
        projectivity: shriek.witnesses.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{named_example, RandomTwisted, EXAMPLE_NAMES};
    use crate::module::validate_module;
    use crate::scalar::Field;

    fn certified() -> Vec<(&'static str, SmoothCertificate)> {
        EXAMPLE_NAMES
            .iter()
            .filter_map(|&name| named_example(Field::Rational, name).and_then(|(_, c)| c).map(|c| (name, c)))
            .collect()
    }

    fn cases(a: &DGAlgebra, seed: u64) -> Vec<TwistedModule> {
        let mut rng = RandomTwisted::new(seed);
        (0..4).map(|_| rng.twisted(a)).collect()
    }

    #[test]
    fn bimodules_are_modules() {
        for (name, cert) in certified() {
            let a = &cert.algebra;
            assert!(validate_module(&diagonal_bimodule(a)).is_valid(), "{name}");
            let star = a_star(a);
            assert!(validate_module(&star.module).is_valid(), "{name}");
            assert!(validate_module(&star.right_module()).is_valid(), "{name}");
            let shriek = a_shriek(&cert).unwrap();
            assert!(validate_module(&shriek.right_module()).is_valid(), "{name}");
            let (_, m) = tensor_bimodule(a, &star.module, &shriek.realized).unwrap();
            assert!(validate_module(&m).is_valid(), "{name}");
        }
    }

    #[test]
    fn serre_inverse_undoes_nakayama() {
        for (name, cert) in certified() {
            let shriek = a_shriek(&cert).unwrap();
            for n in cases(&cert.algebra, 3) {
                let s = nakayama(&n).unwrap();
                assert!(validate_module(&s).is_valid());
                let back = serre_inverse_apply_module(&s, &shriek).unwrap();
                assert_eq!(
                    cohomology_dims(back.complex()),
                    cohomology_dims(realize(&n).unwrap().complex()),
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn serre_tables_agree() {
        for (_, cert) in certified() {
            let cs = cases(&cert.algebra, 5);
            for n in &cs {
                for m in &cs {
                    let r = serre_check(n, m).unwrap();
                    assert!(r.pass(), "{:?}", r.comparisons);
                }
            }
        }
    }

    #[test]
    fn dualizing_bimodules_invert() {
        for (name, cert) in certified() {
            let r = invert_check(&cert, Some(SearchBudget::default())).unwrap();
            assert!(r.pass(), "{name}: {:?}", r.comparisons);
            if matches!(name, "k" | "kxk") {
                for (label, w) in &r.witnesses {
                    assert!(matches!(w, Witness::Found { .. }), "{name} {label}: {w:?}");
                }
            }
        }
    }
}
