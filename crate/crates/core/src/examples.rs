//! Built-in algebras with certified bimodule resolutions, negative controls,
//! and random twisted modules for property tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::cohomology;
use crate::dga::{self, DGAlgebra, Element};
use crate::hochschild::{certify_smooth, CertifyError, Epsilon, SmoothCertificate};
use crate::scalar::{Field, Scalar};
use crate::twisted::{cone_tw, hom_tw, validate_twisted, TwistedModule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExampleError {
    #[error("quiver has an oriented cycle")]
    Cyclic,
    #[error("arrow {0} has an endpoint outside 1..={1}")]
    BadVertex(String, usize),
    #[error("at least one vertex is required")]
    NoVertices,
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    /// 0-based.
    pub source: usize,
    /// 0-based.
    pub target: usize,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverSpec {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
}

impl QuiverSpec {
    /// `1 → 2 → … → n` with arrows `a1, …, a_{n-1}` of the given degree.
    pub fn linear(n: usize, degree: i64) -> QuiverSpec {
        QuiverSpec {
            vertices: n,
            arrows: (1..n)
                .map(|i| Arrow {
                    name: format!("a{i}"),
                    source: i - 1,
                    target: i,
                    degree,
                })
                .collect(),
        }
    }
}

/// `k` with `pA = (k, 0)` and `ε = id`.
pub fn make_base_field(field: Field) -> (DGAlgebra, SmoothCertificate) {
    let a = DGAlgebra::new(field, vec![("1".into(), 0)], &[field.one()]).expect("base field");
    let mut a = a;
    a.set_product(0, 0, &[field.one()]).expect("unit");
    let pa = TwistedModule::free(&dga::enveloping(&a));
    let cert = certify_smooth(&a, &pa, &Epsilon::OnGenerators(vec![a.unit()])).expect("k is smooth");
    (a, cert)
}

/// `k^n` with orthogonal idempotents `e1, …, en`.
pub fn product_fields_algebra(field: Field, n: usize) -> DGAlgebra {
    let basis = (1..=n).map(|i| (format!("e{i}"), 0)).collect();
    let mut a = DGAlgebra::new(field, basis, &vec![field.one(); n]).expect("product of fields");
    for i in 0..n {
        a.set_product(i, i, &a.basis_element(i)).expect("idempotent");
    }
    a
}

/// `x ⊗ y` in `A^e = A^op ⊗ A` (`x` in the `A^op` slot).
pub fn env_elem(a: &DGAlgebra, x: &[Scalar], y: &[Scalar]) -> Element {
    let dim = a.dim();
    let mut out = vec![a.field().zero(); dim * dim];
    for (i, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, d) in y.iter().enumerate() {
            if !d.is_zero() {
                out[i * dim + j] = c * d;
            }
        }
    }
    out
}

/// `Σ_i e_i ⊗ e_i` over the given idempotent basis indices.
fn separability(a: &DGAlgebra, idempotents: &[usize]) -> Element {
    let mut out = vec![a.field().zero(); a.dim() * a.dim()];
    for &i in idempotents {
        out = dga::add(&out, &env_elem(a, &a.basis_element(i), &a.basis_element(i)));
    }
    out
}

/// `k^n` with `pA` the summand of `(A^e, 0)` cut by `Σ e_i ⊗ e_i`.
pub fn make_product_fields(field: Field, n: usize) -> (DGAlgebra, SmoothCertificate) {
    let a = product_fields_algebra(field, n);
    let mut pa = TwistedModule::free(&dga::enveloping(&a));
    let idx: Vec<usize> = (0..n).collect();
    pa.set_idempotent_entry(0, 0, separability(&a, &idx)).expect("idempotent");
    let cert = certify_smooth(&a, &pa, &Epsilon::OnGenerators(vec![a.unit()])).expect("k^n is smooth");
    (a, cert)
}

/// `k^n` with one generator per factor, cut by `e_i ⊗ e_i` (a second, different resolution).
pub fn make_product_fields_split(field: Field, n: usize) -> (DGAlgebra, SmoothCertificate) {
    let a = product_fields_algebra(field, n);
    let mut pa = TwistedModule::new(&dga::enveloping(&a), vec![0; n]);
    for i in 0..n {
        pa.set_idempotent_entry(i, i, separability(&a, &[i])).expect("idempotent");
    }
    let eps = (0..n).map(|i| a.basis_element(i)).collect();
    let cert = certify_smooth(&a, &pa, &Epsilon::OnGenerators(eps)).expect("split resolution");
    (a, cert)
}

/// Paths as arrow-index sequences in composition order (`[b, a]` is `b` after `a`).
fn paths(q: &QuiverSpec) -> Result<Vec<Vec<usize>>, ExampleError> {
    let mut all: Vec<Vec<usize>> = q.arrows.iter().enumerate().map(|(i, _)| vec![i]).collect();
    let mut frontier = all.clone();
    let limit = q.arrows.len() + 1;
    let mut len = 1;
    while !frontier.is_empty() {
        len += 1;
        if len > limit {
            return Err(ExampleError::Cyclic);
        }
        let mut next = Vec::new();
        for p in &frontier {
            let head = q.arrows[p[0]].target;
            for (i, ar) in q.arrows.iter().enumerate() {
                if ar.source == head {
                    let mut np = vec![i];
                    np.extend_from_slice(p);
                    next.push(np);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

/// The path algebra: vertices `e1..en`, then paths ordered by (length, names);
/// `p · q` is "`p` after `q`", nonzero when `q` ends where `p` starts.
pub fn make_path_algebra(field: Field, q: &QuiverSpec) -> Result<DGAlgebra, ExampleError> {
    if q.vertices == 0 {
        return Err(ExampleError::NoVertices);
    }
    for ar in &q.arrows {
        if ar.source >= q.vertices || ar.target >= q.vertices {
            return Err(ExampleError::BadVertex(ar.name.clone(), q.vertices));
        }
        if ar.source == ar.target {
            return Err(ExampleError::Cyclic);
        }
    }
    let mut ps = paths(q)?;
    let name = |p: &[usize]| p.iter().map(|&i| q.arrows[i].name.as_str()).collect::<Vec<_>>().join(".");
    ps.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| name(x).cmp(&name(y))));
    let nv = q.vertices;
    let src = |p: &[usize]| q.arrows[*p.last().unwrap()].source;
    let tgt = |p: &[usize]| q.arrows[p[0]].target;
    let mut basis: Vec<(String, i64)> = (1..=nv).map(|i| (format!("e{i}"), 0)).collect();
    for p in &ps {
        basis.push((name(p), p.iter().map(|&i| q.arrows[i].degree).sum()));
    }
    let mut unit = vec![field.zero(); basis.len()];
    for u in unit.iter_mut().take(nv) {
        *u = field.one();
    }
    let mut a = DGAlgebra::new(field, basis, &unit).expect("path algebra basis");
    let index_of = |p: &[usize]| nv + ps.iter().position(|x| x.as_slice() == p).expect("path");
    for v in 0..nv {
        a.set_product(v, v, &a.basis_element(v)).unwrap();
    }
    for p in &ps {
        let i = index_of(p);
        a.set_product(tgt(p), i, &a.basis_element(i)).unwrap();
        a.set_product(i, src(p), &a.basis_element(i)).unwrap();
        for r in &ps {
            if src(p) == tgt(r) {
                let mut pr = p.clone();
                pr.extend_from_slice(r);
                let k = index_of(&pr);
                a.set_product(i, index_of(r), &a.basis_element(k)).unwrap();
            }
        }
    }
    Ok(a)
}

/// The two-term resolution `⊕_arrows A e_t ⊗ e_s A → ⊕_vertices A e_i ⊗ e_i A → A`
/// as a twisted module over `A^e`: generator 1 (shift 0) cut by `Σ e_i ⊗ e_i`, one
/// generator per arrow `a: s → t` (shift `1 - |a|`) cut by `e_t ⊗ e_s`, and
/// `α_{1,a} = a ⊗ e_s - e_t ⊗ a`.
pub fn standard_resolution(a: &DGAlgebra, q: &QuiverSpec) -> TwistedModule {
    let nv = q.vertices;
    let env = dga::enveloping(a);
    let shifts = std::iter::once(0).chain(q.arrows.iter().map(|ar| 1 - ar.degree)).collect();
    let mut pa = TwistedModule::new(&env, shifts);
    let e = |i: usize| a.basis_element(i);
    let idx: Vec<usize> = (0..nv).collect();
    pa.set_idempotent_entry(0, 0, separability(a, &idx)).unwrap();
    for (k, ar) in q.arrows.iter().enumerate() {
        let x = e(a.index_of(&ar.name).expect("arrow is a basis element"));
        let alpha = dga::sub(&env_elem(a, &x, &e(ar.source)), &env_elem(a, &e(ar.target), &x));
        pa.set_alpha(0, k + 1, alpha).unwrap();
        pa.set_idempotent_entry(k + 1, k + 1, env_elem(a, &e(ar.target), &e(ar.source))).unwrap();
    }
    pa
}

/// Path algebra with its certified standard resolution (`ε` = 1 on the vertex generator, 0 on arrows).
pub fn make_path_example(field: Field, q: &QuiverSpec) -> Result<(DGAlgebra, SmoothCertificate), ExampleError> {
    let a = make_path_algebra(field, q)?;
    let pa = standard_resolution(&a, q);
    let mut eps = vec![a.unit()];
    eps.extend(q.arrows.iter().map(|_| a.zero()));
    let cert = certify_smooth(&a, &pa, &Epsilon::OnGenerators(eps))?;
    Ok((a, cert))
}

/// `k[x]/(x²)`, `|x| = 0`.
pub fn make_dual_numbers(field: Field) -> DGAlgebra {
    square_zero(field, 0, "x")
}

/// `Λ(ξ)`, `|ξ| = -1`.
pub fn make_exterior(field: Field) -> DGAlgebra {
    square_zero(field, -1, "xi")
}

fn square_zero(field: Field, degree: i64, name: &str) -> DGAlgebra {
    let mut a = DGAlgebra::new(field, vec![("1".into(), 0), (name.into(), degree)], &[field.one(), field.zero()])
        .expect("square-zero extension");
    a.set_product(0, 0, &a.basis_element(0)).unwrap();
    a.set_product(0, 1, &a.basis_element(1)).unwrap();
    a.set_product(1, 0, &a.basis_element(1)).unwrap();
    a
}

/// `(A^e, 0)` with `ε(1 ⊗ 1) = 1`: the naive attempt at a resolution.
pub fn naive_resolution(a: &DGAlgebra) -> (TwistedModule, Epsilon) {
    (TwistedModule::free(&dga::enveloping(a)), Epsilon::OnGenerators(vec![a.unit()]))
}

/// Named built-in examples: `(name, algebra, certificate if smooth)`.
pub fn named_example(field: Field, name: &str) -> Option<(DGAlgebra, Option<SmoothCertificate>)> {
    let path = |q: QuiverSpec| make_path_example(field, &q).ok().map(|(a, c)| (a, Some(c)));
    match name {
        "k" => {
            let (a, c) = make_base_field(field);
            Some((a, Some(c)))
        }
        "kxk" => {
            let (a, c) = make_product_fields(field, 2);
            Some((a, Some(c)))
        }
        "kxk-split" => {
            let (a, c) = make_product_fields_split(field, 2);
            Some((a, Some(c)))
        }
        "a2" => path(QuiverSpec::linear(2, 0)),
        "a3" => path(QuiverSpec::linear(3, 0)),
        "a2-dg" => path(QuiverSpec::linear(2, -1)),
        "dual-numbers" => Some((make_dual_numbers(field), None)),
        "exterior" => Some((make_exterior(field), None)),
        _ => None,
    }
}

pub const EXAMPLE_NAMES: [&str; 8] = ["k", "kxk", "kxk-split", "a2", "a3", "a2-dg", "dual-numbers", "exterior"];

/// Deterministic random twisted modules, built as iterated cones of random
/// closed degree-0 morphisms out of pure shifts (so Maurer–Cartan holds by construction).
pub struct RandomTwisted {
    rng: ChaCha8Rng,
    pub max_shift: i64,
    pub max_rank: usize,
    pub max_coefficient: i64,
}

impl RandomTwisted {
    pub fn new(seed: u64) -> RandomTwisted {
        RandomTwisted {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_shift: 2,
            max_rank: 3,
            max_coefficient: 2,
        }
    }

    fn shifts(&mut self, n: usize) -> Vec<i64> {
        (0..n).map(|_| self.rng.gen_range(-self.max_shift..=self.max_shift)).collect()
    }

    fn coefficient(&mut self, field: Field) -> Scalar {
        field.from_i64(self.rng.gen_range(-self.max_coefficient..=self.max_coefficient))
    }

    /// A random twisted module with `1..=max_rank` generators.
    pub fn twisted(&mut self, a: &DGAlgebra) -> TwistedModule {
        let field = a.field();
        let first = self.rng.gen_range(1..=self.max_rank);
        let mut t = TwistedModule::new(a, self.shifts(first));
        while t.rank() < self.max_rank {
            let k = self.rng.gen_range(1..=self.max_rank - t.rank());
            let z = TwistedModule::new(a, self.shifts(k));
            let h = hom_tw(&z, &t).expect("same algebra");
            let c = cohomology(&h.full);
            // closed degree-0 morphisms: cocycles plus coboundaries
            let mut cocycles: Vec<Vec<Scalar>> = c.representatives.get(&0).cloned().unwrap_or_default();
            let n0 = h.full.dim(0);
            let d_prev = h.full.d(-1);
            for j in 0..d_prev.cols() {
                cocycles.push(d_prev.column(j));
            }
            let mut v = vec![field.zero(); n0];
            for z in &cocycles {
                let c = self.coefficient(field);
                for (x, y) in v.iter_mut().zip(z) {
                    *x = &*x + &(&c * y);
                }
            }
            let f = h.morphism(0, &v);
            t = cone_tw(&f).expect("closed degree-0 morphism");
        }
        t
    }

    /// Cuts `t` by a diagonal idempotent whose entries are drawn from `idempotents`
    /// (elements with `e^2 = e`, `de = 0`), keeping the first draw that is a
    /// closed morphism. Returns `t` unchanged if none of `tries` draws is.
    pub fn summand(&mut self, t: &TwistedModule, idempotents: &[Element], tries: usize) -> TwistedModule {
        if idempotents.is_empty() {
            return t.clone();
        }
        for _ in 0..tries {
            let mut cut = t.without_idempotent();
            for j in 0..t.rank() {
                let e = idempotents[self.index(idempotents.len())].clone();
                cut.set_idempotent_entry(j, j, e).expect("diagonal entry");
            }
            if validate_twisted(&cut).is_valid() {
                return cut;
            }
        }
        t.clone()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}
