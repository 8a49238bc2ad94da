//! Representations of `Π^λ(Q)`, morphisms between them, and the three-term
//! complex computing `Hom`, `Ext¹` and the dual of `Hom` in the other direction.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::quiver::{DoubleQuiver, IntVector, Quiver, QuiverClass, QuiverError};
use crate::roots::{RootError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("negative dimension at vertex {0}")]
    NegativeDim(usize),
    #[error("map {arrow} has shape {got:?}, expected {expected:?}")]
    Shape {
        arrow: String,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("relations fail:{}", describe_residuals(.0))]
    Relations(Vec<(usize, Matrix)>),
    #[error("representations live over different weights")]
    IncompatibleWeights,
    #[error("representations live over different quivers")]
    IncompatibleQuivers,
    #[error("the quiver is Dynkin")]
    DynkinQuiver,
    #[error("the quiver is disconnected")]
    Disconnected,
    #[error("not a morphism between the given representations")]
    NotAMorphism,
    #[error("change of basis at vertex {0} is not invertible")]
    Singular(usize),
    #[error("d1 after d0 is nonzero")]
    ComplexNotExact,
}

fn describe_residuals(res: &[(usize, Matrix)]) -> String {
    let mut s = String::new();
    for (i, m) in res {
        let _ = write!(s, " vertex {i} residual {m:?};");
    }
    s
}

/// A finite-dimensional representation of `Π^λ(Q)`: one matrix per double
/// arrow, in the order of [`DoubleQuiver::arrows`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    double: Arc<DoubleQuiver>,
    weight: Weight,
    dims: IntVector,
    maps: Vec<Matrix>,
}

/// Checks shapes and returns `Σ_{h(a)=i} ε(a) V_a V_{a*} − λ_i` for each vertex.
pub fn relation_residuals(
    double: &DoubleQuiver,
    weight: &Weight,
    dims: &IntVector,
    maps: &[Matrix],
) -> Result<Vec<Matrix>, RepError> {
    let n = double.vertex_count();
    let field = weight.field();
    if weight.len() != n {
        return Err(RepError::Length {
            expected: n,
            got: weight.len(),
        });
    }
    if dims.len() != n {
        return Err(RepError::Length {
            expected: n,
            got: dims.len(),
        });
    }
    if let Some(i) = (0..n).find(|&i| dims[i] < 0) {
        return Err(RepError::NegativeDim(i));
    }
    if maps.len() != double.arrows().len() {
        return Err(RepError::Length {
            expected: double.arrows().len(),
            got: maps.len(),
        });
    }
    for (a, m) in double.arrows().iter().zip(maps) {
        if m.field() != field {
            return Err(RepError::FieldMismatch(m.field(), field));
        }
        let expected = (dims[a.head] as usize, dims[a.tail] as usize);
        if m.shape() != expected {
            return Err(RepError::Shape {
                arrow: a.id.clone(),
                expected,
                got: m.shape(),
            });
        }
    }
    Ok((0..n)
        .map(|i| {
            let d = dims[i] as usize;
            let mut r = Matrix::scalar(field, d, weight.get(i)).neg();
            for k in double.arrows_into(i) {
                let a = double.arrow(k);
                let term = maps[k].mul(&maps[a.star]);
                r = if a.epsilon > 0 { r.add(&term) } else { r.sub(&term) };
            }
            r
        })
        .collect())
}

impl Representation {
    pub fn new(
        double: Arc<DoubleQuiver>,
        weight: Weight,
        dims: IntVector,
        maps: Vec<Matrix>,
    ) -> Result<Self, RepError> {
        let res = relation_residuals(&double, &weight, &dims, &maps)?;
        let bad: Vec<(usize, Matrix)> = res.into_iter().enumerate().filter(|(_, m)| !m.is_zero()).collect();
        if !bad.is_empty() {
            return Err(RepError::Relations(bad));
        }
        Ok(Representation {
            double,
            weight,
            dims,
            maps,
        })
    }

    /// All maps zero; valid iff `λ_i = 0` wherever `dims[i] > 0`.
    pub fn zero(double: Arc<DoubleQuiver>, weight: Weight, dims: IntVector) -> Result<Self, RepError> {
        let field = weight.field();
        if dims.len() != double.vertex_count() {
            return Err(RepError::Length {
                expected: double.vertex_count(),
                got: dims.len(),
            });
        }
        if let Some(i) = (0..dims.len()).find(|&i| dims[i] < 0) {
            return Err(RepError::NegativeDim(i));
        }
        let maps = double
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(field, dims[a.head] as usize, dims[a.tail] as usize))
            .collect();
        Representation::new(double, weight, dims, maps)
    }

    /// The one-dimensional representation at `i` with all maps zero.
    pub fn coordinate_simple(double: Arc<DoubleQuiver>, weight: Weight, i: usize) -> Result<Self, RepError> {
        double.base().check_vertex(i)?;
        let n = double.vertex_count();
        Representation::zero(double, weight, IntVector::unit(n, i))
    }

    pub fn double(&self) -> &Arc<DoubleQuiver> {
        &self.double
    }

    pub fn quiver(&self) -> &Quiver {
        self.double.base()
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn field(&self) -> Field {
        self.weight.field()
    }

    pub fn dims(&self) -> &IntVector {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i] as usize
    }

    pub fn total_dim(&self) -> usize {
        self.dims.height() as usize
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn map(&self, k: usize) -> &Matrix {
        &self.maps[k]
    }

    pub fn map_by_id(&self, id: &str) -> Option<&Matrix> {
        self.double.arrow_index(id).map(|k| &self.maps[k])
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_zero()
    }

    /// Residual matrices of the deformed relation, one per vertex.
    pub fn check_relations(&self) -> Vec<Matrix> {
        relation_residuals(&self.double, &self.weight, &self.dims, &self.maps)
            .expect("shapes validated at construction")
    }

    /// Same quiver, same field, same weight.
    pub fn compatible(&self, other: &Representation) -> Result<(), RepError> {
        if !Arc::ptr_eq(&self.double, &other.double) && self.double != other.double {
            return Err(RepError::IncompatibleQuivers);
        }
        if self.field() != other.field() {
            return Err(RepError::FieldMismatch(self.field(), other.field()));
        }
        if self.weight != other.weight {
            return Err(RepError::IncompatibleWeights);
        }
        Ok(())
    }

    /// `V'_a = P_{h(a)} V_a P_{t(a)}^{-1}`.
    pub fn conjugate(&self, changes: &[Matrix]) -> Result<Representation, RepError> {
        let n = self.double.vertex_count();
        if changes.len() != n {
            return Err(RepError::Length {
                expected: n,
                got: changes.len(),
            });
        }
        let mut inverses = Vec::with_capacity(n);
        for (i, p) in changes.iter().enumerate() {
            if p.shape() != (self.dim(i), self.dim(i)) {
                return Err(RepError::Singular(i));
            }
            inverses.push(p.inverse().ok_or(RepError::Singular(i))?);
        }
        let maps = self
            .double
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| changes[a.head].mul(m).mul(&inverses[a.tail]))
            .collect();
        Representation::new(self.double.clone(), self.weight.clone(), self.dims.clone(), maps)
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, RepError> {
        self.compatible(other)?;
        let field = self.field();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(x, y)| Matrix::block_diag(field, &[x, y]))
            .collect();
        Representation::new(self.double.clone(), self.weight.clone(), &self.dims + &other.dims, maps)
    }
}

/// A family of per-vertex linear maps `f_i : U_i → V_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    blocks: Vec<Matrix>,
}

impl Morphism {
    pub fn new(blocks: Vec<Matrix>) -> Self {
        Morphism { blocks }
    }

    pub fn identity(rep: &Representation) -> Self {
        Morphism {
            blocks: (0..rep.dims.len())
                .map(|i| Matrix::identity(rep.field(), rep.dim(i)))
                .collect(),
        }
    }

    pub fn zero(src: &Representation, tgt: &Representation) -> Self {
        Morphism {
            blocks: (0..src.dims.len())
                .map(|i| Matrix::zeros(src.field(), tgt.dim(i), src.dim(i)))
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Matrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<Matrix> {
        self.blocks
    }

    /// Shapes match and `f_{h(a)} U_a = V_a f_{t(a)}` for every double arrow.
    pub fn is_morphism(&self, src: &Representation, tgt: &Representation) -> bool {
        if src.compatible(tgt).is_err() || self.blocks.len() != src.dims.len() {
            return false;
        }
        if self
            .blocks
            .iter()
            .enumerate()
            .any(|(i, b)| b.shape() != (tgt.dim(i), src.dim(i)))
        {
            return false;
        }
        src.double
            .arrows()
            .iter()
            .enumerate()
            .all(|(k, a)| self.blocks[a.head].mul(&src.maps[k]) == tgt.maps[k].mul(&self.blocks[a.tail]))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism) -> Morphism {
        Morphism {
            blocks: self.blocks.iter().zip(&first.blocks).map(|(g, f)| g.mul(f)).collect(),
        }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Morphism {
        Morphism {
            blocks: self.blocks.iter().map(|x| x.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// Every block square and invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.blocks.iter().all(|b| b.is_square() && b.is_invertible())
    }

    pub fn inverse(&self) -> Option<Morphism> {
        self.blocks
            .iter()
            .map(Matrix::inverse)
            .collect::<Option<Vec<_>>>()
            .map(Morphism::new)
    }

    /// Coordinates in the degree-0 term of the complex.
    pub fn to_vector(&self) -> Vec<Scalar> {
        self.blocks.iter().flat_map(Matrix::vectorize).collect()
    }

    pub(crate) fn from_vector(field: Field, src: &Representation, tgt: &Representation, x: &[Scalar]) -> Morphism {
        let mut off = 0;
        let blocks = (0..src.dims.len())
            .map(|i| {
                let (r, c) = (tgt.dim(i), src.dim(i));
                let m = Matrix::from_vec(field, r, c, x[off..off + r * c].to_vec()).expect("sized slice");
                off += r * c;
                m
            })
            .collect();
        Morphism { blocks }
    }
}

fn vertex_offsets(m: &Representation, n: &Representation) -> Vec<usize> {
    let mut off = vec![0];
    for i in 0..m.dims.len() {
        off.push(off[i] + n.dim(i) * m.dim(i));
    }
    off
}

fn arrow_offsets(m: &Representation, n: &Representation) -> Vec<usize> {
    let mut off = vec![0];
    for (k, a) in m.double.arrows().iter().enumerate() {
        off.push(off[k] + n.dim(a.head) * m.dim(a.tail));
    }
    off
}

/// `d⁰(f)_a = f_{h(a)} M_a − N_a f_{t(a)}`, on row-major coordinates.
pub fn d0_matrix(m: &Representation, n: &Representation) -> Matrix {
    let field = m.field();
    let v0 = vertex_offsets(m, n);
    let v1 = arrow_offsets(m, n);
    let mut d = Matrix::zeros(field, *v1.last().unwrap(), *v0.last().unwrap());
    for (k, a) in m.double.arrows().iter().enumerate() {
        let (h, t) = (a.head, a.tail);
        let (ma, na) = (&m.maps[k], &n.maps[k]);
        let (nh, mh, nt, mt) = (n.dim(h), m.dim(h), n.dim(t), m.dim(t));
        for r in 0..nh {
            for c in 0..mt {
                let row = v1[k] + r * mt + c;
                // f_h[r, j] M_a[j, c]
                for j in 0..mh {
                    let col = v0[h] + r * mh + j;
                    let x = d.get(row, col) + ma.get(j, c);
                    d.set(row, col, x);
                }
                // − N_a[r, j] f_t[j, c]
                for j in 0..nt {
                    let col = v0[t] + j * mt + c;
                    let x = d.get(row, col) - na.get(r, j);
                    d.set(row, col, x);
                }
            }
        }
    }
    d
}

/// `d¹(φ)_i = Σ_{h(a)=i} ε(a) (N_a φ_{a*} + φ_a M_{a*})`.
pub fn d1_matrix(m: &Representation, n: &Representation) -> Matrix {
    let field = m.field();
    let v1 = arrow_offsets(m, n);
    let v2 = vertex_offsets(m, n);
    let mut d = Matrix::zeros(field, *v2.last().unwrap(), *v1.last().unwrap());
    let double = &m.double;
    for i in 0..double.vertex_count() {
        let (ni, mi) = (n.dim(i), m.dim(i));
        for k in double.arrows_into(i) {
            let a = double.arrow(k);
            let s = a.star;
            let t = a.tail;
            let (nt, mt) = (n.dim(t), m.dim(t));
            let eps = field.from_i64(a.epsilon);
            let (na, mstar) = (&n.maps[k], &m.maps[s]);
            for r in 0..ni {
                for c in 0..mi {
                    let row = v2[i] + r * mi + c;
                    // N_a[r, j] φ_{a*}[j, c], φ_{a*} is nt × mi
                    for j in 0..nt {
                        let col = v1[s] + j * mi + c;
                        let x = d.get(row, col) + &(&eps * na.get(r, j));
                        d.set(row, col, x);
                    }
                    // φ_a[r, j] M_{a*}[j, c], φ_a is ni × mt
                    for j in 0..mt {
                        let col = v1[k] + r * mt + j;
                        let x = d.get(row, col) + &(&eps * mstar.get(j, c));
                        d.set(row, col, x);
                    }
                }
            }
        }
    }
    d
}

/// A basis of `Hom(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomBasis {
    pub basis: Vec<Morphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn hom_basis(u: &Representation, v: &Representation) -> Result<HomBasis, RepError> {
    u.compatible(v)?;
    let k = d0_matrix(u, v).kernel_basis();
    Ok(HomBasis {
        basis: (0..k.cols())
            .map(|c| Morphism::from_vector(u.field(), u, v, &k.column(c)))
            .collect(),
    })
}

pub fn hom_dim(u: &Representation, v: &Representation) -> Result<usize, RepError> {
    u.compatible(v)?;
    let d = d0_matrix(u, v);
    Ok(d.cols() - d.rank())
}

/// A 1-cochain: one matrix `φ_a : M_{t(a)} → N_{h(a)}` per double arrow.
pub type Cochain = Vec<Matrix>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtComplexSummary {
    pub c0: usize,
    pub c1: usize,
    pub c2: usize,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    /// Cocycles whose classes form a basis of `Ext¹(M, N)`.
    #[serde(skip)]
    pub cocycles: Vec<Cochain>,
}

impl ExtComplexSummary {
    pub fn euler_characteristic(&self) -> i64 {
        self.c0 as i64 - self.c1 as i64 + self.c2 as i64
    }
}

pub fn ext_complex(m: &Representation, n: &Representation) -> Result<ExtComplexSummary, RepError> {
    m.compatible(n)?;
    let field = m.field();
    let d0 = d0_matrix(m, n);
    let d1 = d1_matrix(m, n);
    if !d1.mul(&d0).is_zero() {
        return Err(RepError::ComplexNotExact);
    }
    let (c0, c1, c2) = (d0.cols(), d0.rows(), d1.rows());
    let r0 = d0.rank();
    let z = d1.kernel_basis();
    let r1 = c1 - z.cols();
    // extend a basis of the coboundaries by cocycles, keeping the new pivots
    let joint = Matrix::hstack(field, c1, &[&d0, &z]);
    let pivots = joint.rref().pivots;
    let offsets = arrow_offsets(m, n);
    let cocycles: Vec<Cochain> = pivots
        .iter()
        .filter(|&&p| p >= c0)
        .map(|&p| {
            let col = z.column(p - c0);
            m.double
                .arrows()
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    Matrix::from_vec(
                        field,
                        n.dim(a.head),
                        m.dim(a.tail),
                        col[offsets[k]..offsets[k + 1]].to_vec(),
                    )
                    .expect("sized slice")
                })
                .collect()
        })
        .collect();
    let h1 = z.cols() - r0;
    debug_assert_eq!(cocycles.len(), h1);
    Ok(ExtComplexSummary {
        c0,
        c1,
        c2,
        h0: c0 - r0,
        h1,
        h2: c2 - r1,
        cocycles,
    })
}

/// `dim Hom(M,N) + dim Hom(N,M) − (Dim M, Dim N)`, for connected non-Dynkin `Q`.
pub fn ext1_dim_formula(m: &Representation, n: &Representation) -> Result<i64, RepError> {
    m.compatible(n)?;
    let q = m.quiver();
    if !q.is_connected() {
        return Err(RepError::Disconnected);
    }
    if q.classify()? == QuiverClass::Dynkin {
        return Err(RepError::DynkinQuiver);
    }
    let hom_mn = hom_dim(m, n)? as i64;
    let hom_nm = hom_dim(n, m)? as i64;
    Ok(hom_mn + hom_nm - q.symmetric_form(m.dims(), n.dims())?)
}

/// Result of [`is_isomorphic`]. `ProbablyNo` means no invertible element
/// of `Hom(u, v)` turned up among the samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    Yes(Morphism),
    No,
    ProbablyNo,
}

impl IsoOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoOutcome::Yes(_))
    }
}

pub const ISO_SAMPLES: usize = 32;
pub const ISO_SEED: u64 = 0x5eed_1505;
/// Over `F_p`, Hom spaces with at most this many elements are searched exhaustively.
const EXHAUSTIVE_LIMIT: u64 = 4096;

pub fn is_isomorphic(u: &Representation, v: &Representation) -> Result<IsoOutcome, RepError> {
    is_isomorphic_seeded(u, v, ISO_SEED, ISO_SAMPLES)
}

pub fn is_isomorphic_seeded(
    u: &Representation,
    v: &Representation,
    seed: u64,
    samples: usize,
) -> Result<IsoOutcome, RepError> {
    u.compatible(v)?;
    if u.dims != v.dims {
        return Ok(IsoOutcome::No);
    }
    if u.total_dim() == 0 {
        return Ok(IsoOutcome::Yes(Morphism::identity(u)));
    }
    let basis = hom_basis(u, v)?.basis;
    if basis.is_empty() {
        return Ok(IsoOutcome::No);
    }
    // an isomorphism u ≅ v identifies all four of these spaces
    let end_u = hom_dim(u, u)?;
    if basis.len() != end_u || hom_dim(v, u)? != end_u || hom_dim(v, v)? != end_u {
        return Ok(IsoOutcome::No);
    }
    if let Some(f) = basis.iter().find(|f| f.is_isomorphism()) {
        return Ok(IsoOutcome::Yes(f.clone()));
    }
    let field = u.field();
    let combine = |coeffs: &[Scalar]| {
        basis
            .iter()
            .zip(coeffs)
            .fold(Morphism::zero(u, v), |acc, (f, t)| acc.add(&f.scale(t)))
    };
    if let Field::Prime(p) = field {
        let size = (p as u64).checked_pow(basis.len() as u32);
        if size.is_some_and(|s| s <= EXHAUSTIVE_LIMIT) {
            let elements = field.elements().expect("finite field");
            let mut idx = vec![0usize; basis.len()];
            loop {
                let coeffs: Vec<Scalar> = idx.iter().map(|&k| elements[k].clone()).collect();
                let f = combine(&coeffs);
                if f.is_isomorphism() {
                    return Ok(IsoOutcome::Yes(f));
                }
                // odometer over F_p^k
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        return Ok(IsoOutcome::No);
                    }
                    idx[pos] += 1;
                    if idx[pos] < p as usize {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
            }
        }
    }
    let radius = (4 * u.total_dim() as i64).max(64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let coeffs: Vec<Scalar> = (0..basis.len()).map(|_| field.random(&mut rng, radius)).collect();
        let f = combine(&coeffs);
        if f.is_isomorphism() {
            return Ok(IsoOutcome::Yes(f));
        }
    }
    Ok(IsoOutcome::ProbablyNo)
}

/// `dim End(m) = 1` and `Ext¹(m, m) = 0`.
pub fn is_rigid_simple_candidate(m: &Representation) -> Result<bool, RepError> {
    if hom_dim(m, m)? != 1 {
        return Ok(false);
    }
    Ok(ext_complex(m, m)?.h1 == 0)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    pub fn kronecker_rep(field: Field, l: i64, a: i64, b: i64, a_star: i64, b_star: i64) -> Representation {
        let dq = Arc::new(Quiver::kronecker().double());
        let w = Weight::from_i64(field, &[l, -l]);
        let m = |x: i64| Matrix::from_i64(field, &[&[x]]);
        Representation::new(dq, w, IntVector(vec![1, 1]), vec![m(a), m(b), m(a_star), m(b_star)]).unwrap()
    }

    /// A random representation of `Q` with the reversed arrows acting by zero,
    /// which is valid for `λ = 0`.
    pub fn random_base_rep<R: Rng>(q: &Quiver, field: Field, dims: &[i64], rng: &mut R) -> Representation {
        let dq = Arc::new(q.double());
        let maps = dq
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (dims[a.head] as usize, dims[a.tail] as usize);
                let data = (0..r * c)
                    .map(|_| {
                        if a.epsilon > 0 {
                            field.random(rng, 3)
                        } else {
                            field.zero()
                        }
                    })
                    .collect();
                Matrix::from_vec(field, r, c, data).unwrap()
            })
            .collect();
        Representation::new(
            dq,
            Weight::zero(field, q.vertex_count()),
            IntVector(dims.to_vec()),
            maps,
        )
        .unwrap()
    }

    pub fn random_invertible<R: Rng>(field: Field, n: usize, rng: &mut R) -> Matrix {
        loop {
            let data = (0..n * n).map(|_| field.random(rng, 3)).collect();
            let m = Matrix::from_vec(field, n, n, data).unwrap();
            if m.is_invertible() {
                return m;
            }
        }
    }

    fn simple(q: &Quiver, w: &[i64], i: usize) -> Representation {
        let dq = Arc::new(q.double());
        Representation::coordinate_simple(dq, Weight::from_i64(Field::Rationals, w), i).unwrap()
    }

    // independent construction of d⁰ and d¹ from Kronecker products:
    // vec(A X B) = (A ⊗ Bᵀ) vec(X) in row-major order
    fn kron_d0(m: &Representation, n: &Representation) -> Matrix {
        let f = m.field();
        let nv = m.dims().len();
        let arrows = m.double().arrows();
        let rows: Vec<Matrix> = arrows
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let parts: Vec<Matrix> = (0..nv)
                    .map(|i| {
                        let mut blk = Matrix::zeros(f, n.dim(a.head) * m.dim(a.tail), n.dim(i) * m.dim(i));
                        if i == a.head {
                            blk = blk.add(&Matrix::identity(f, n.dim(i)).kron(&m.map(k).transpose()));
                        }
                        if i == a.tail {
                            blk = blk.sub(&n.map(k).kron(&Matrix::identity(f, m.dim(i))));
                        }
                        blk
                    })
                    .collect();
                let refs: Vec<&Matrix> = parts.iter().collect();
                Matrix::hstack(f, n.dim(a.head) * m.dim(a.tail), &refs)
            })
            .collect();
        let refs: Vec<&Matrix> = rows.iter().collect();
        let total: usize = (0..nv).map(|i| n.dim(i) * m.dim(i)).sum();
        Matrix::vstack(f, total, &refs)
    }

    fn kron_d1(m: &Representation, n: &Representation) -> Matrix {
        let f = m.field();
        let nv = m.dims().len();
        let arrows = m.double().arrows();
        let rows: Vec<Matrix> = (0..nv)
            .map(|i| {
                let parts: Vec<Matrix> = arrows
                    .iter()
                    .map(|b| {
                        let mut blk = Matrix::zeros(f, n.dim(i) * m.dim(i), n.dim(b.head) * m.dim(b.tail));
                        // b = a with h(a) = i contributes φ_a M_{a*}
                        if b.head == i {
                            let t = Matrix::identity(f, n.dim(i)).kron(&m.map(b.star).transpose());
                            blk = blk.add(&t.scale(&f.from_i64(b.epsilon)));
                        }
                        // b = a* with h(a) = i contributes N_a φ_{a*}
                        let a = arrows[b.star].clone();
                        if a.head == i {
                            let t = n.map(b.star).kron(&Matrix::identity(f, m.dim(i)));
                            blk = blk.add(&t.scale(&f.from_i64(a.epsilon)));
                        }
                        blk
                    })
                    .collect();
                let refs: Vec<&Matrix> = parts.iter().collect();
                Matrix::hstack(f, n.dim(i) * m.dim(i), &refs)
            })
            .collect();
        let refs: Vec<&Matrix> = rows.iter().collect();
        let total: usize = arrows.iter().map(|a| n.dim(a.head) * m.dim(a.tail)).sum();
        Matrix::vstack(f, total, &refs)
    }

    #[test]
    fn relation_examples() {
        let dq = Arc::new(Quiver::star(4).double());
        let z = Representation::zero(
            dq.clone(),
            Weight::zero(Field::Rationals, 5),
            IntVector(vec![2, 1, 0, 3, 1]),
        )
        .unwrap();
        assert!(z.check_relations().iter().all(Matrix::is_zero));
        let w = Weight::from_i64(Field::Rationals, &[0, 1, 0, 0, 0]);
        assert!(Representation::coordinate_simple(dq.clone(), w.clone(), 0).is_ok());
        assert!(matches!(
            Representation::coordinate_simple(dq, w, 1),
            Err(RepError::Relations(_))
        ));
        let m = kronecker_rep(Field::Rationals, 1, 1, 0, -1, 0);
        assert!(m.check_relations().iter().all(Matrix::is_zero));
    }

    #[test]
    fn relation_error_reports_residual() {
        let dq = Arc::new(Quiver::kronecker().double());
        let f = Field::Rationals;
        let one = Matrix::from_i64(f, &[&[1]]);
        let zero = Matrix::from_i64(f, &[&[0]]);
        let err = Representation::new(
            dq,
            Weight::zero(f, 2),
            IntVector(vec![1, 1]),
            vec![one.clone(), zero.clone(), one, zero],
        )
        .unwrap_err();
        let text = err.to_string();
        assert!(text.contains("vertex 0") && text.contains("vertex 1"), "{text}");
    }

    #[test]
    fn shape_errors() {
        let dq = Arc::new(Quiver::kronecker().double());
        let f = Field::Rationals;
        let bad = Representation::new(
            dq,
            Weight::zero(f, 2),
            IntVector(vec![1, 1]),
            vec![
                Matrix::zeros(f, 1, 2),
                Matrix::zeros(f, 1, 1),
                Matrix::zeros(f, 1, 1),
                Matrix::zeros(f, 1, 1),
            ],
        );
        assert!(matches!(bad, Err(RepError::Shape { .. })));
    }

    #[test]
    fn hom_examples() {
        let q = Quiver::star(4);
        let s0 = simple(&q, &[0; 5], 0);
        let s1 = simple(&q, &[0; 5], 1);
        assert_eq!(hom_basis(&s0, &s0).unwrap().dim(), 1);
        assert_eq!(hom_basis(&s0, &s1).unwrap().dim(), 0);
        let other = simple(&q, &[0, 0, 1, 0, 0], 0);
        assert_eq!(hom_basis(&s0, &other), Err(RepError::IncompatibleWeights));
    }

    #[test]
    fn ext_examples() {
        let k = Quiver::kronecker();
        let s0 = simple(&k, &[0, 0], 0);
        let s1 = simple(&k, &[0, 0], 1);
        assert_eq!(ext_complex(&s0, &s1).unwrap().h1, 2);
        assert_eq!(ext1_dim_formula(&s0, &s1).unwrap(), 2);
        let e = ext_complex(&s0, &s0).unwrap();
        assert_eq!((e.h0, e.h1, e.h2), (1, 0, 1));
        let m = kronecker_rep(Field::Rationals, 1, 1, 0, -1, 0);
        let e = ext_complex(&m, &m).unwrap();
        assert_eq!(e.euler_characteristic(), 0);
        let d4 = Quiver::star(4);
        let sc = simple(&d4, &[0; 5], 0);
        let sl = simple(&d4, &[0; 5], 3);
        assert_eq!(ext1_dim_formula(&sc, &sl).unwrap(), 1);
        assert_eq!(ext_complex(&sc, &sl).unwrap().h1, 1);
    }

    #[test]
    fn formula_refuses_dynkin_and_disconnected() {
        let a2 = Quiver::linear(2);
        let s = simple(&a2, &[0, 0], 0);
        assert_eq!(ext1_dim_formula(&s, &s), Err(RepError::DynkinQuiver));
        let two = Quiver::from_edges(2, &[]).unwrap();
        let s = simple(&two, &[0, 0], 0);
        assert_eq!(ext1_dim_formula(&s, &s), Err(RepError::Disconnected));
        // relation checking and the complex itself still work
        assert_eq!(ext_complex(&s, &s).unwrap().h0, 1);
    }

    #[test]
    fn kronecker_family_is_not_rigid_simple() {
        let m = kronecker_rep(Field::Rationals, 1, 1, 0, -1, 0);
        assert!(!is_rigid_simple_candidate(&m).unwrap());
        // it is simple with End = K, but Ext¹ is nonzero
        assert_eq!(hom_dim(&m, &m).unwrap(), 1);
        assert_eq!(ext_complex(&m, &m).unwrap().h1, 2);
        let s = simple(&Quiver::kronecker(), &[0, 0], 0);
        assert!(is_rigid_simple_candidate(&s).unwrap());
        assert!(!is_rigid_simple_candidate(&s.direct_sum(&s).unwrap()).unwrap());
    }

    #[test]
    fn isomorphism_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = kronecker_rep(Field::Rationals, 1, 2, 3, 1, -1);
        assert!(is_isomorphic(&m, &m).unwrap().is_yes());
        let s = simple(&Quiver::kronecker(), &[0, 0], 0);
        let t = simple(&Quiver::kronecker(), &[0, 0], 1);
        assert_eq!(is_isomorphic(&s, &t).unwrap(), IsoOutcome::No);
        let q = Quiver::star(4);
        for _ in 0..5 {
            let v = random_base_rep(&q, Field::Rationals, &[3, 1, 2, 1, 2], &mut rng);
            let p: Vec<Matrix> = (0..5)
                .map(|i| random_invertible(Field::Rationals, v.dim(i), &mut rng))
                .collect();
            let w = v.conjugate(&p).unwrap();
            let IsoOutcome::Yes(f) = is_isomorphic(&v, &w).unwrap() else {
                panic!("conjugate not recognised")
            };
            assert!(f.is_morphism(&v, &w) && f.is_isomorphism());
        }
    }

    #[test]
    fn isomorphism_distinguishes_kronecker_family() {
        // the (1,1) modules with a = 1, b = t are pairwise non-isomorphic over ℚ
        let m1 = kronecker_rep(Field::Rationals, 0, 1, 1, 0, 0);
        let m2 = kronecker_rep(Field::Rationals, 0, 1, 2, 0, 0);
        assert_eq!(is_isomorphic(&m1, &m2).unwrap(), IsoOutcome::No);
        // over F_5 the exhaustive search is definitive
        let f = Field::prime(5).unwrap();
        let n1 = kronecker_rep(f, 0, 1, 1, 0, 0);
        let n2 = kronecker_rep(f, 0, 2, 2, 0, 0);
        assert!(is_isomorphic(&n1, &n2).unwrap().is_yes());
    }

    #[test]
    fn direct_sum_and_hom_additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = Quiver::cycle(3);
        for _ in 0..4 {
            let m = random_base_rep(&q, Field::Rationals, &[1, 2, 1], &mut rng);
            let mm = m.direct_sum(&m).unwrap();
            assert_eq!(hom_dim(&m, &mm).unwrap(), 2 * hom_dim(&m, &m).unwrap());
            assert_eq!(mm.dims(), &IntVector(vec![2, 4, 2]));
        }
    }

    #[test]
    fn differentials_match_kronecker_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Field::prime(7).unwrap();
        for q in [Quiver::star(4), Quiver::cycle(3), Quiver::kronecker()] {
            let n = q.vertex_count();
            for _ in 0..3 {
                let da: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                let db: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                let m = random_base_rep(&q, f, &da, &mut rng);
                let nn = random_base_rep(&q, f, &db, &mut rng);
                assert_eq!(d0_matrix(&m, &nn), kron_d0(&m, &nn));
                assert_eq!(d1_matrix(&m, &nn), kron_d1(&m, &nn));
            }
        }
        let m = kronecker_rep(Field::Rationals, 2, 1, 3, -2, 0);
        let n = kronecker_rep(Field::Rationals, 2, 2, 1, -1, 0);
        assert_eq!(d0_matrix(&m, &n), kron_d0(&m, &n));
        assert_eq!(d1_matrix(&m, &n), kron_d1(&m, &n));
    }

    #[test]
    fn cocycles_are_cocycles_and_independent() {
        let d4 = Quiver::star(4);
        let sc = simple(&d4, &[0; 5], 0);
        let sl = simple(&d4, &[0; 5], 2);
        let e = ext_complex(&sc, &sl).unwrap();
        assert_eq!(e.cocycles.len(), 1);
        let d1 = d1_matrix(&sc, &sl);
        let x: Vec<Scalar> = e.cocycles[0].iter().flat_map(Matrix::vectorize).collect();
        let col = Matrix::from_vec(Field::Rationals, x.len(), 1, x).unwrap();
        assert!(d1.mul(&col).is_zero());
        assert!(!col.is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn complex_invariants(seed in 0u64..1000, l in -3i64..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Field::Rationals;
            let pick = |rng: &mut ChaCha8Rng| {
                let a = rng.gen_range(1..4);
                let b = rng.gen_range(-2..3);
                let a_star = rng.gen_range(-2..3);
                // solve a a* + b b* = −l for b* when b ≠ 0, else adjust a*
                if b != 0 && (-l - a * a_star) % b == 0 {
                    kronecker_rep(f, l, a, b, a_star, (-l - a * a_star) / b)
                } else if (-l) % a == 0 {
                    kronecker_rep(f, l, a, 0, -l / a, rng.gen_range(-2..3))
                } else {
                    kronecker_rep(f, l, 1, 0, -l, rng.gen_range(-2..3))
                }
            };
            let m = pick(&mut rng);
            let n = pick(&mut rng);
            let e = ext_complex(&m, &n).unwrap();
            prop_assert_eq!(e.euler_characteristic(), m.quiver().symmetric_form(m.dims(), n.dims()).unwrap());
            prop_assert_eq!(e.h0, hom_dim(&m, &n).unwrap());
            prop_assert_eq!(e.h2, hom_dim(&n, &m).unwrap());
            prop_assert_eq!(e.h1 as i64, ext1_dim_formula(&m, &n).unwrap());
            prop_assert_eq!(e.h1, ext_complex(&n, &m).unwrap().h1);
            prop_assert!(d1_matrix(&m, &n).mul(&d0_matrix(&m, &n)).is_zero());
            for f in hom_basis(&m, &n).unwrap().basis {
                prop_assert!(f.is_morphism(&m, &n));
            }
        }

        #[test]
        fn base_reps_satisfy_ext_symmetry(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Field::prime(3).unwrap();
            let q = Quiver::star(4);
            let da: Vec<i64> = (0..5).map(|_| rng.gen_range(0..3)).collect();
            let db: Vec<i64> = (0..5).map(|_| rng.gen_range(0..3)).collect();
            let m = random_base_rep(&q, f, &da, &mut rng);
            let n = random_base_rep(&q, f, &db, &mut rng);
            let e = ext_complex(&m, &n).unwrap();
            prop_assert_eq!(e.h1, ext_complex(&n, &m).unwrap().h1);
            prop_assert_eq!(e.h1 as i64, ext1_dim_formula(&m, &n).unwrap());
        }
    }
}
