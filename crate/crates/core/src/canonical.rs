//! Canonical comparison maps between tensor and Hom constructions:
//! `M ⊗_A N^∨ → Hom_A(N, M)`, `N ⊗_A M^* → Hom_A(N, M)^*` and the
//! rearrangement `N ⊗_A X ⊗_A M ≅ (N ⊗ M) ⊗_{A^e} X`.
//!
//! Each map is first written down on the tensor product over the ground field
//! and then pushed to the quotient; `well_defined` records whether it really
//! kills the relations.

use crate::complex::{self, tensor, tensor_maps, ChainMap, Complex, TensorLayout};
use crate::dga;
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg;
use crate::matrix::Matrix;
use crate::module::{tensor_over, DgModule};
use crate::scalar::Scalar;
use crate::twisted::{dual_vee, hom_free, Realization, TwError, TwistedModule};

#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub map: ChainMap,
    /// The formula on the ground-field tensor product vanishes on the relations.
    pub well_defined: bool,
}

impl CanonicalMap {
    pub fn is_isomorphism(&self) -> bool {
        self.well_defined && is_chain_isomorphism(&self.map)
    }
}

/// Closed, degree 0, and invertible in every degree.
pub fn is_chain_isomorphism(f: &ChainMap) -> bool {
    f.degree() == 0
        && f.is_closed()
        && f.source().space() == f.target().space()
        && f.source().space().degrees().all(|n| linalg::is_invertible(&f.block(n)))
}

/// Flat indexing of basis vectors `x ⊗ y` of a ground-field tensor product.
struct FlatTensor {
    left: Vec<(i64, usize)>,
    right: Vec<(i64, usize)>,
    layout: TensorLayout,
}

impl FlatTensor {
    fn new(left: &GradedSpace, right: &GradedSpace) -> FlatTensor {
        let locate = |s: &GradedSpace| (0..s.total()).map(|f| s.locate(f)).collect();
        FlatTensor {
            left: locate(left),
            right: locate(right),
            layout: TensorLayout::new(left, right),
        }
    }

    fn index(&self, l: usize, r: usize) -> usize {
        let (p, i) = self.left[l];
        let (q, j) = self.right[r];
        self.layout.space().offset(p + q) + self.layout.index(p, i, q, j)
    }

    fn space(&self) -> &GradedSpace {
        self.layout.space()
    }
}

fn from_triplets(
    source: &GradedSpace,
    target: &GradedSpace,
    field: crate::scalar::Field,
    triplets: Vec<(usize, usize, Scalar)>,
) -> GradedMap {
    let flat = Matrix::from_triplets(field, target.total(), source.total(), triplets);
    GradedMap::from_flat(source, target, 0, &flat).expect("degree-0 canonical map")
}

/// `f^*: F^* → S^*` for a degree-0 map `f: S → F`.
fn dual_of_degree_zero(f: &GradedMap) -> GradedMap {
    let blocks: Vec<(i64, Matrix)> = f.blocks().iter().map(|(&n, b)| (-n, b.transpose())).collect();
    GradedMap::from_blocks(f.field(), &f.target().dual(), &f.source().dual(), 0, blocks).expect("dual blocks")
}

/// Pushes a map defined on `tensor` down along `projection`, recording well-definedness.
fn descend(
    full: GradedMap,
    projection: &ChainMap,
    section: &GradedMap,
    source: &Complex,
    target: &Complex,
) -> Result<CanonicalMap, TwError> {
    let reduced = full.compose(section);
    let well_defined = reduced.compose(projection.map()) == full;
    Ok(CanonicalMap {
        map: ChainMap::new(source, target, reduced)?,
        well_defined,
    })
}

/// `F(m ⊗ f)(x) = m f(x)`, from `M ⊗_A realize(n^∨)` to `Hom_A(realize n, M)`.
pub fn map_f(n: &TwistedModule, m: &DgModule) -> Result<CanonicalMap, TwError> {
    let a = n.algebra();
    if m.algebra() != a {
        return Err(TwError::AlgebraMismatch);
    }
    let field = a.field();
    let dim = a.dim();
    let rank = n.rank();
    let r = n.shifts();
    let dv = Realization::new(&dual_vee(n))?;
    let to = tensor_over(m, dv.module.complex(), &dv.module.left_action())?;
    let hom = hom_free(n, m)?;
    let mspace = m.complex().space();
    let dm = mspace.total();
    let ft = FlatTensor::new(mspace, dv.full.complex().space());
    let mut triplets = Vec::new();
    for c in 0..dim {
        let act = m.action(c).to_flat();
        for k in 0..rank {
            let j = rank - 1 - k;
            let sign = field.sign((a.degree(c) + r[j]) * r[j]);
            let src = dv.flat_index(k, c);
            for (z, y, v) in act.triplets() {
                triplets.push((hom.layout.flat(j * dm + z), ft.index(y, src), &sign * v));
            }
        }
    }
    let mut full = from_triplets(ft.space(), hom.full.space(), field, triplets);
    if let Some(s) = &dv.summand {
        let id = GradedMap::identity(field, mspace);
        full = full.compose(&tensor_maps(&id, s.inclusion.map(), false));
    }
    let mut well_defined = true;
    if let Some(s) = &hom.summand {
        full = match s.corestrict(&full) {
            Some(g) => g,
            None => {
                well_defined = false;
                s.retraction().compose(&full)
            }
        };
    }
    let mut out = descend(full, &to.projection, &to.section, &to.quotient, &hom.complex)?;
    out.well_defined &= well_defined;
    Ok(out)
}

/// `G(x ⊗ ν)(f) = (-1)^{|x|(|ν| + |f|)} ν(f(x))`, from `realize(n) ⊗_A M^*` to
/// `Hom_A(realize n, M)^*`.
pub fn map_g(n: &TwistedModule, m: &DgModule) -> Result<CanonicalMap, TwError> {
    let a = n.algebra();
    if m.algebra() != a {
        return Err(TwError::AlgebraMismatch);
    }
    let field = a.field();
    let dim = a.dim();
    let r = n.shifts();
    let nr = Realization::new(n)?;
    let md = m.dual();
    let to = tensor_over(&nr.module, md.complex(), &md.left_action())?;
    let hom = hom_free(n, m)?;
    let hom_dual = complex::dual(&hom.full);
    let mspace = m.complex().space();
    let dm = mspace.total();
    let mdeg = mspace.flat_degrees();
    let dual_space = md.complex().space();
    let nu_index = |z: usize| {
        let (d, l) = mspace.locate(z);
        dual_space.offset(-d) + l
    };
    let fspace = hom.full.space();
    let functional = |h: usize| {
        let (d, l) = fspace.locate(h);
        hom_dual.space().offset(-d) + l
    };
    let ft = FlatTensor::new(nr.full.complex().space(), dual_space);
    let mut triplets = Vec::new();
    for b in 0..dim {
        let act = m.action(b).to_flat();
        for j in 0..n.rank() {
            let x = nr.flat_index(j, b);
            let xdeg = a.degree(b) - r[j];
            for (z, y, v) in act.triplets() {
                let sign = field.sign(xdeg * (-mdeg[z] + mdeg[y] + r[j]));
                let h = hom.layout.flat(j * dm + y);
                triplets.push((functional(h), ft.index(x, nu_index(z)), &sign * v));
            }
        }
    }
    let mut full = from_triplets(ft.space(), hom_dual.space(), field, triplets);
    if let Some(s) = &nr.summand {
        let id = GradedMap::identity(field, dual_space);
        full = full.compose(&tensor_maps(s.inclusion.map(), &id, false));
    }
    let target = match &hom.summand {
        Some(s) => {
            full = dual_of_degree_zero(s.inclusion.map()).compose(&full);
            complex::dual(&hom.complex)
        }
        None => hom_dual,
    };
    descend(full, &to.projection, &to.section, &to.quotient, &target)
}

/// Both sides of the rearrangement together with the comparison map.
#[derive(Clone, Debug)]
pub struct Rearrangement {
    /// `N ⊗_A X ⊗_A M`.
    pub lhs: Complex,
    /// `(N ⊗ M) ⊗_{A^e} X`.
    pub rhs: Complex,
    /// `n ⊗ x ⊗ m ↦ (-1)^{|x||m|} (n ⊗ m) ⊗ x`.
    pub map: CanonicalMap,
}

/// `N ⊗_A X ⊗_A M ≅ (N ⊗ M) ⊗_{A^e} X` for a right `A`-module `N`, a right
/// `A^e`-module `X` (`A^e = A^op ⊗ A`) and a right `A^op`-module `M`.
///
/// `X` is a left `A`-module through the `A^op` factor and a right `A`-module
/// through the `A` factor; `N ⊗ M` is a right `A^e`-module by
/// `(n ⊗ m).(a' ⊗ a'') = (-1)^{|a'||a''| + |m||a''|} n a'' ⊗ m a'`, and `X` a left
/// `A^e`-module by `u · x = (-1)^{|u||x|} x . τ(u)` with `τ(a' ⊗ a'') = (-1)^{|a'||a''|} a'' ⊗ a'`.
pub fn rearrange_twoten(n: &DgModule, x: &DgModule, m: &DgModule) -> Result<Rearrangement, TwError> {
    let a = n.algebra();
    let op = dga::opposite(a);
    let env = dga::enveloping(a);
    if *x.algebra() != env || *m.algebra() != op {
        return Err(TwError::AlgebraMismatch);
    }
    let field = a.field();
    let dim = a.dim();
    let unit = a.unit();
    let first = |k: usize| -> Vec<Scalar> {
        let mut v = env.zero();
        for (j, c) in unit.iter().enumerate() {
            v[k * dim + j] = c.clone();
        }
        v
    };
    let second = |k: usize| -> Vec<Scalar> {
        let mut v = env.zero();
        for (i, c) in unit.iter().enumerate() {
            v[i * dim + k] = c.clone();
        }
        v
    };
    let x_left = x.restrict(&op, first).left_action();
    let x_right: Vec<GradedMap> = x.restrict(a, second).actions().to_vec();

    // left-hand side, as (N ⊗_A X) ⊗_A M
    let nx = tensor_over(n, x.complex(), &x_left)?;
    let nx_module = DgModule::new(a, nx.quotient.clone(), nx.induced_right_action(n, &x_right))?;
    let lhs = tensor_over(&nx_module, m.complex(), &m.left_action())?;

    // right-hand side
    let nm = tensor(n.complex(), m.complex())?;
    let pm = complex::parity(field, m.complex().space());
    let nm_action: Vec<GradedMap> = (0..env.dim())
        .map(|u| {
            let (p, q) = (u / dim, u % dim);
            let rm = if a.degree(q).rem_euclid(2) == 1 {
                m.action(p).compose(&pm)
            } else {
                m.action(p).clone()
            };
            tensor_maps(n.action(q), &rm, false).scale(&field.sign(a.degree(p) * a.degree(q)))
        })
        .collect();
    let nm_module = DgModule::new(&env, nm, nm_action)?;
    let x_op_left = x.left_action();
    let x_env_left: Vec<GradedMap> = (0..env.dim())
        .map(|u| {
            let (p, q) = (u / dim, u % dim);
            x_op_left[q * dim + p].scale(&field.sign(a.degree(p) * a.degree(q)))
        })
        .collect();
    let rhs = tensor_over(&nm_module, x.complex(), &x_env_left)?;

    // the map on ground-field tensors: (N ⊗ X) ⊗ M → (N ⊗ M) ⊗ X
    let (ns, xs, ms) = (n.complex().space(), x.complex().space(), m.complex().space());
    let nx_t = FlatTensor::new(ns, xs);
    let src_t = FlatTensor::new(nx_t.space(), ms);
    let nm_t = FlatTensor::new(ns, ms);
    let tgt_t = FlatTensor::new(nm_t.space(), xs);
    let (xdeg, mdeg) = (xs.flat_degrees(), ms.flat_degrees());
    let mut triplets = Vec::new();
    for i in 0..ns.total() {
        for k in 0..xs.total() {
            for l in 0..ms.total() {
                let src = src_t.index(nx_t.index(i, k), l);
                let tgt = tgt_t.index(nm_t.index(i, l), k);
                triplets.push((tgt, src, field.sign(xdeg[k] * mdeg[l])));
            }
        }
    }
    let swap = from_triplets(src_t.space(), tgt_t.space(), field, triplets);
    let id_m = GradedMap::identity(field, ms);
    let full = rhs.projection.map().compose(&swap);
    let lift = tensor_maps(&nx.section, &id_m, false).compose(&lhs.section);
    let reduced = full.compose(&lift);
    let back = lhs.projection.map().compose(&tensor_maps(nx.projection.map(), &id_m, false));
    let well_defined = reduced.compose(&back) == full;
    let map = ChainMap::new(&lhs.quotient, &rhs.quotient, reduced)?;
    Ok(Rearrangement {
        lhs: lhs.quotient,
        rhs: rhs.quotient,
        map: CanonicalMap { map, well_defined },
    })
}
