//! Families of rigid simples, membership in `add S_1 ∗ ⋯ ∗ add S_r`,
//! extensions from cocycles, and the Serre subcategory of two simples.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::quiver::{DoubleQuiver, IntVector};
use crate::rep::{ext_complex, hom_basis, hom_dim, is_isomorphic, Cochain, Morphism, RepError, Representation};
use crate::roots::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SerreError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("{0} has an endomorphism ring of dimension {1}, not 1")]
    NotSimple(String, usize),
    #[error("{0} has self-extensions")]
    NotRigid(String),
    #[error("{0} and {1} are isomorphic")]
    Duplicate(String, String),
    #[error("family is empty")]
    EmptyFamily,
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("cocycle index {index} out of range; Ext¹ has dimension {available}")]
    CocycleIndex { index: usize, available: usize },
    #[error("relation needs dim Ext¹(S,T) ∈ {{0,1}}, found {0}")]
    Hypothesis(usize),
    #[error("exhaustive enumeration needs a prime field, got {0}")]
    NotFinite(Field),
    #[error("enumeration of {0} configurations exceeds the limit")]
    TooLarge(String),
    #[error("submodule data is not stable under the maps")]
    NotSubmodule,
}

/// Labeled split rigid simples over a common quiver and weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleFamily {
    labels: Vec<String>,
    members: Vec<Representation>,
}

impl SimpleFamily {
    /// Checks `End = K`, `Ext¹(S,S) = 0`, and pairwise non-isomorphism.
    /// Simplicity itself is assumed.
    pub fn new(entries: Vec<(String, Representation)>) -> Result<Self, SerreError> {
        let Some((_, first)) = entries.first() else {
            return Err(SerreError::EmptyFamily);
        };
        for (label, s) in &entries {
            first.compatible(s)?;
            let end = hom_dim(s, s)?;
            if end != 1 {
                return Err(SerreError::NotSimple(label.clone(), end));
            }
            if ext_complex(s, s)?.h1 != 0 {
                return Err(SerreError::NotRigid(label.clone()));
            }
        }
        for (a, (la, sa)) in entries.iter().enumerate() {
            for (lb, sb) in &entries[a + 1..] {
                if la == lb || is_isomorphic(sa, sb)?.is_yes() {
                    return Err(SerreError::Duplicate(la.clone(), lb.clone()));
                }
            }
        }
        let (labels, members) = entries.into_iter().unzip();
        Ok(SimpleFamily { labels, members })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn members(&self) -> &[Representation] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, k: usize) -> &Representation {
        &self.members[k]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, SerreError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| SerreError::UnknownLabel(label.to_string()))
    }

    pub fn chain(&self, labels: &[&str]) -> Result<SerreChain, SerreError> {
        Ok(SerreChain {
            layers: labels.iter().map(|l| self.index_of(l)).collect::<Result<_, _>>()?,
        })
    }

    /// `S_1, …, S_k` repeated `rounds` times: every module of `𝓔(𝒮)` with at
    /// most `rounds` composition factors lies in this chain.
    pub fn cyclic_chain(&self, rounds: usize) -> SerreChain {
        SerreChain {
            layers: (0..rounds).flat_map(|_| 0..self.len()).collect(),
        }
    }
}

/// Layer indices into a [`SimpleFamily`], bottom layer first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SerreChain {
    pub layers: Vec<usize>,
}

/// Submodule spanned by per-vertex column bases, with its inclusion.
pub fn subrepresentation(m: &Representation, bases: &[Matrix]) -> Result<(Representation, Morphism), SerreError> {
    let double = m.double();
    let mut maps = Vec::with_capacity(double.arrows().len());
    for (k, a) in double.arrows().iter().enumerate() {
        let image = m.map(k).mul(&bases[a.tail]);
        maps.push(
            bases[a.head]
                .solve_right(&image)
                .map_err(|_| SerreError::NotSubmodule)?,
        );
    }
    let dims = IntVector(bases.iter().map(|b| b.cols() as i64).collect());
    let sub = Representation::new(Arc::clone(double), m.weight().clone(), dims, maps)?;
    Ok((sub, Morphism::new(bases.to_vec())))
}

/// Quotient by a submodule given by per-vertex column bases, with the projection.
pub fn quotient(m: &Representation, bases: &[Matrix]) -> Result<(Representation, Morphism), SerreError> {
    let double = m.double();
    let (proj, sections): (Vec<Matrix>, Vec<Matrix>) = bases.iter().map(Matrix::cokernel_projection).unzip();
    let maps = double
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| proj[a.head].mul(m.map(k)).mul(&sections[a.tail]))
        .collect();
    let dims = IntVector(proj.iter().map(|c| c.rows() as i64).collect());
    let q = Representation::new(Arc::clone(double), m.weight().clone(), dims, maps)?;
    Ok((q, Morphism::new(proj)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub multiplicity: usize,
    pub submodule: Representation,
    pub inclusion: Morphism,
    pub quotient: Representation,
    pub projection: Morphism,
}

/// Column bases of `Σ_f im f` over `f ∈ Hom(s, m)`.
fn image_span(s: &Representation, m: &Representation) -> Result<Vec<Matrix>, SerreError> {
    let basis = hom_basis(s, m)?.basis;
    let field = m.field();
    Ok((0..m.dims().len())
        .map(|i| {
            let parts: Vec<&Matrix> = basis.iter().map(|f| f.block(i)).collect();
            Matrix::hstack(field, m.dim(i), &parts).column_space_basis()
        })
        .collect())
}

/// The largest submodule of `m` isomorphic to a direct sum of copies of `s`.
pub fn trace_submodule(s: &Representation, m: &Representation) -> Result<Trace, SerreError> {
    s.compatible(m)?;
    let end = hom_dim(s, s)?;
    if end != 1 {
        return Err(SerreError::NotSimple("argument".into(), end));
    }
    let bases = image_span(s, m)?;
    let (submodule, inclusion) = subrepresentation(m, &bases)?;
    let (quotient, projection) = quotient(m, &bases)?;
    Ok(Trace {
        multiplicity: submodule.total_dim() / s.total_dim(),
        submodule,
        inclusion,
        quotient,
        projection,
    })
}

/// Whether `m ∈ add S_1 ∗ ⋯ ∗ add S_r`, by stripping the `S_1`-trace and
/// recursing on the quotient.
pub fn chain_member(m: &Representation, family: &SimpleFamily, chain: &SerreChain) -> Result<bool, SerreError> {
    m.compatible(family.get(0))?;
    let mut cur = m.clone();
    for &l in &chain.layers {
        if cur.is_zero() {
            return Ok(true);
        }
        cur = trace_submodule(family.get(l), &cur)?.quotient;
    }
    Ok(cur.is_zero())
}

/// Column bases of all `r`-dimensional subspaces of `F_p^d`, from reduced
/// echelon forms.
pub fn subspaces(field: Field, d: usize, r: usize) -> Result<Vec<Matrix>, SerreError> {
    let Some(elements) = field.elements() else {
        return Err(SerreError::NotFinite(field));
    };
    let mut out = Vec::new();
    for pivots in combinations(d, r) {
        // free slots: row t, columns after its pivot that are not pivots
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(t, &p)| (p + 1..d).filter(|c| !pivots.contains(c)).map(move |c| (t, c)))
            .collect();
        let mut idx = vec![0usize; free.len()];
        loop {
            let mut rows = Matrix::zeros(field, r, d);
            for (t, &p) in pivots.iter().enumerate() {
                rows.set(t, p, field.one());
            }
            for (&(t, c), &k) in free.iter().zip(&idx) {
                rows.set(t, c, elements[k].clone());
            }
            out.push(rows.transpose());
            if !advance(&mut idx, elements.len()) {
                break;
            }
        }
    }
    Ok(out)
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            go(k + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Odometer step over `0..base` digits; `false` after the last tuple.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for x in idx.iter_mut() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

/// `x ≅ s^k`: `dim Hom(s, x) = k` and the images of `Hom(s, x)` fill `x`.
fn is_isotypic(x: &Representation, s: &Representation, k: usize) -> Result<bool, SerreError> {
    if k == 0 {
        return Ok(x.is_zero());
    }
    if hom_dim(s, x)? != k {
        return Ok(false);
    }
    let filled: usize = image_span(s, x)?.iter().map(Matrix::cols).sum();
    Ok(filled == x.total_dim())
}

/// Chain membership by trying every submodule isomorphic to some `S_1^k`
/// as the bottom layer. Prime fields only.
pub fn brute_force_chain_member(
    m: &Representation,
    family: &SimpleFamily,
    chain: &SerreChain,
) -> Result<bool, SerreError> {
    m.compatible(family.get(0))?;
    brute_force_rec(m, family, &chain.layers)
}

fn brute_force_rec(m: &Representation, family: &SimpleFamily, layers: &[usize]) -> Result<bool, SerreError> {
    if m.is_zero() {
        return Ok(true);
    }
    let Some((&first, rest)) = layers.split_first() else {
        return Ok(false);
    };
    let s = family.get(first);
    let field = m.field();
    let n = m.dims().len();
    for k in 0.. {
        let target = s.dims().scale(k as i64);
        if !target.dominated_by(m.dims()) {
            break;
        }
        let choices: Vec<Vec<Matrix>> = (0..n)
            .map(|i| subspaces(field, m.dim(i), target[i] as usize))
            .collect::<Result<_, _>>()?;
        let mut idx = vec![0usize; n];
        loop {
            let bases: Vec<Matrix> = (0..n).map(|i| choices[i][idx[i]].clone()).collect();
            if let Ok((sub, _)) = subrepresentation(m, &bases) {
                if is_isotypic(&sub, s, k)? {
                    let (q, _) = quotient(m, &bases)?;
                    if brute_force_rec(&q, family, rest)? {
                        return Ok(true);
                    }
                }
            }
            // mixed-radix odometer over the per-vertex choices
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    Ok(false)
}

/// The extension with maps `[[socle_a, φ_a], [0, top_a]]`.
pub fn extension_from_cochain(
    top: &Representation,
    socle: &Representation,
    phi: &Cochain,
) -> Result<Representation, SerreError> {
    top.compatible(socle)?;
    let field = top.field();
    let double = top.double();
    let maps = double
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let (sh, st, th, tt) = (socle.dim(a.head), socle.dim(a.tail), top.dim(a.head), top.dim(a.tail));
            let mut e = Matrix::zeros(field, sh + th, st + tt);
            e.set_block(0, 0, socle.map(k));
            e.set_block(0, st, &phi[k]);
            e.set_block(sh, st, top.map(k));
            e
        })
        .collect();
    Ok(Representation::new(
        Arc::clone(double),
        top.weight().clone(),
        socle.dims() + top.dims(),
        maps,
    )?)
}

/// The extension of `top` by `socle` given by the `index`-th basis cocycle.
pub fn build_extension(
    top: &Representation,
    socle: &Representation,
    index: usize,
) -> Result<Representation, SerreError> {
    let ext = ext_complex(top, socle)?;
    let phi = ext.cocycles.get(index).ok_or(SerreError::CocycleIndex {
        index,
        available: ext.cocycles.len(),
    })?;
    extension_from_cochain(top, socle, phi)
}

/// Whether the inclusion of `socle` as the first block of `e` has a retraction.
pub fn is_split_extension(e: &Representation, socle: &Representation) -> Result<bool, SerreError> {
    e.compatible(socle)?;
    let field = e.field();
    let inclusion = Morphism::new(
        (0..e.dims().len())
            .map(|i| {
                let mut b = Matrix::zeros(field, e.dim(i), socle.dim(i));
                b.set_block(0, 0, &Matrix::identity(field, socle.dim(i)));
                b
            })
            .collect(),
    );
    if !inclusion.is_morphism(socle, e) {
        return Err(SerreError::NotSubmodule);
    }
    let target = Morphism::identity(socle).to_vector();
    if target.is_empty() {
        return Ok(true);
    }
    let retractions: Vec<Vec<Scalar>> = hom_basis(e, socle)?
        .basis
        .iter()
        .map(|r| r.compose(&inclusion).to_vector())
        .collect();
    let rows = target.len();
    let a = Matrix::from_vec(
        field,
        rows,
        retractions.len(),
        (0..rows)
            .flat_map(|r| retractions.iter().map(move |x| x[r].clone()))
            .collect(),
    )
    .expect("sized data");
    let b = Matrix::from_vec(field, rows, 1, target).expect("sized data");
    Ok(a.solve_right(&b).is_ok())
}

/// Every representation of the given dimension vector over a prime field.
pub fn all_representations(
    double: &Arc<DoubleQuiver>,
    weight: &Weight,
    dims: &IntVector,
) -> Result<Vec<Representation>, SerreError> {
    const LIMIT: u128 = 1 << 20;
    let field = weight.field();
    let Some(elements) = field.elements() else {
        return Err(SerreError::NotFinite(field));
    };
    let shapes: Vec<(usize, usize)> = double
        .arrows()
        .iter()
        .map(|a| (dims[a.head] as usize, dims[a.tail] as usize))
        .collect();
    let entries: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let count = (elements.len() as u128).checked_pow(entries as u32);
    if count.is_none_or(|c| c > LIMIT) {
        return Err(SerreError::TooLarge(format!("{}^{entries}", elements.len())));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; entries];
    loop {
        let mut off = 0;
        let maps: Vec<Matrix> = shapes
            .iter()
            .map(|&(r, c)| {
                let data = idx[off..off + r * c].iter().map(|&k| elements[k].clone()).collect();
                off += r * c;
                Matrix::from_vec(field, r, c, data).expect("sized data")
            })
            .collect();
        if let Ok(v) = Representation::new(Arc::clone(double), weight.clone(), dims.clone(), maps) {
            out.push(v);
        }
        if !advance(&mut idx, elements.len()) {
            break;
        }
    }
    Ok(out)
}

/// Every module of `𝓔(𝒮)` over a prime field whose dimension vector is a
/// nonzero combination of the family's, with total dimension at most `bound`.
pub fn serre_corpus(family: &SimpleFamily, bound: usize) -> Result<Vec<Representation>, SerreError> {
    let base = family.get(0);
    let n = base.dims().len();
    let mut dims_seen: Vec<IntVector> = Vec::new();
    let mut coeffs = vec![0i64; family.len()];
    loop {
        let d = family
            .members()
            .iter()
            .zip(&coeffs)
            .fold(IntVector::zero(n), |acc, (s, &c)| &acc + &s.dims().scale(c));
        if !d.is_zero() && d.height() as usize <= bound && !dims_seen.contains(&d) {
            dims_seen.push(d);
        }
        // odometer over coefficient vectors, bounded by the total dimension
        let mut pos = 0;
        while pos < coeffs.len() {
            coeffs[pos] += 1;
            if coeffs[pos] as usize * family.get(pos).total_dim() <= bound {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
        if pos == coeffs.len() {
            break;
        }
    }
    dims_seen.sort();
    let mut corpus = Vec::new();
    for d in dims_seen {
        let chain = family.cyclic_chain(d.height() as usize);
        for v in all_representations(base.double(), base.weight(), &d)? {
            if chain_member(&v, family, &chain)? {
                corpus.push(v);
            }
        }
    }
    Ok(corpus)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub instances: usize,
    /// Dimension vectors of corpus modules where the two sides disagree.
    pub counterexamples: Vec<IntVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub ext_dim: usize,
    pub corpus_size: usize,
    pub checks: Vec<RelationCheck>,
}

impl StarReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.counterexamples.is_empty())
    }
}

/// Checks `[S,S] = [S]`, and `[S,T] = [T,S]` or `[S,T,S] = [T,S,T]` according to
/// `dim Ext¹(S,T)`, on every module of the exhaustive corpus.
pub fn verify_star_relations(family: &SimpleFamily, bound: usize) -> Result<StarReport, SerreError> {
    if family.len() != 2 {
        return Err(SerreError::TooLarge(format!(
            "family of {} simples; need 2",
            family.len()
        )));
    }
    let ext_dim = ext_complex(family.get(0), family.get(1))?.h1;
    let (s, t) = (0, 1);
    let mut pairs: Vec<(String, Vec<usize>, Vec<usize>)> = vec![
        ("SS=S".into(), vec![s, s], vec![s]),
        ("TT=T".into(), vec![t, t], vec![t]),
    ];
    match ext_dim {
        0 => pairs.push(("ST=TS".into(), vec![s, t], vec![t, s])),
        1 => pairs.push(("STS=TST".into(), vec![s, t, s], vec![t, s, t])),
        d => return Err(SerreError::Hypothesis(d)),
    }
    let corpus = serre_corpus(family, bound)?;
    let mut checks = Vec::new();
    for (name, left, right) in pairs {
        let (left, right) = (SerreChain { layers: left }, SerreChain { layers: right });
        let mut counterexamples = Vec::new();
        for m in &corpus {
            if chain_member(m, family, &left)? != chain_member(m, family, &right)? {
                counterexamples.push(m.dims().clone());
            }
        }
        checks.push(RelationCheck {
            name,
            instances: corpus.len(),
            counterexamples,
        });
    }
    Ok(StarReport {
        ext_dim,
        corpus_size: corpus.len(),
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "result", content = "counts")]
pub enum CompositionVector {
    Counts(Vec<i64>),
    Indeterminate,
}

/// `[M] = Σ (M : S) e_S`, read off the dimension vector when the family's
/// dimension vectors are independent and `M ∈ 𝓔(𝒮)`.
pub fn composition_vector(m: &Representation, family: &SimpleFamily) -> Result<CompositionVector, SerreError> {
    let n = m.dims().len();
    let k = family.len();
    let q = Field::Rationals;
    let mut a = Matrix::zeros(q, n, k);
    for (j, s) in family.members().iter().enumerate() {
        for i in 0..n {
            a.set(i, j, q.from_i64(s.dims()[i]));
        }
    }
    if a.rank() < k {
        return Ok(CompositionVector::Indeterminate);
    }
    let mut b = Matrix::zeros(q, n, 1);
    for i in 0..n {
        b.set(i, 0, q.from_i64(m.dims()[i]));
    }
    let Ok(x) = a.solve_right(&b) else {
        return Ok(CompositionVector::Indeterminate);
    };
    let counts: Option<Vec<i64>> = (0..k).map(|j| x.get(j, 0).to_i64().filter(|&c| c >= 0)).collect();
    let Some(counts) = counts else {
        return Ok(CompositionVector::Indeterminate);
    };
    let rounds = counts.iter().sum::<i64>() as usize;
    if !chain_member(m, family, &family.cyclic_chain(rounds))? {
        return Ok(CompositionVector::Indeterminate);
    }
    Ok(CompositionVector::Counts(counts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposition {
    Zero,
    Indecomposable,
    Decomposable,
    Unknown,
}

fn as_block_matrix(f: &Morphism, field: Field) -> Matrix {
    let parts: Vec<&Matrix> = f.blocks().iter().collect();
    Matrix::block_diag(field, &parts)
}

/// Row basis of the span of vectorized matrices.
fn span_basis(field: Field, mats: &[Matrix], width: usize) -> Vec<Matrix> {
    if mats.is_empty() {
        return Vec::new();
    }
    let data: Vec<Scalar> = mats.iter().flat_map(Matrix::vectorize).collect();
    let r = Matrix::from_vec(field, mats.len(), width * width, data)
        .expect("sized data")
        .rref();
    (0..r.rank)
        .map(|row| {
            let v = (0..width * width).map(|c| r.matrix.get(row, c).clone()).collect();
            Matrix::from_vec(field, width, width, v).expect("sized data")
        })
        .collect()
}

/// `End = K·1 ⊕ N` with `N` closed under products and nilpotent.
fn is_split_local(field: Field, end: &[Matrix], n: usize) -> bool {
    let mut radical = Vec::with_capacity(end.len());
    for b in end {
        let shifts: Vec<Scalar> = match field.characteristic() {
            p if p == 0 || !n.is_multiple_of(p as usize) => {
                vec![&b.trace() * &field.from_i64(n as i64).inv().expect("n invertible")]
            }
            _ => field.elements().expect("prime field"),
        };
        let Some(x) = shifts
            .iter()
            .map(|c| b.sub(&Matrix::scalar(field, n, c)))
            .find(Matrix::is_nilpotent)
        else {
            return false;
        };
        radical.push(x);
    }
    let nbasis = span_basis(field, &radical, n);
    let products: Vec<Matrix> = nbasis
        .iter()
        .flat_map(|x| nbasis.iter().map(move |y| x.mul(y)))
        .collect();
    let mut joined = nbasis.clone();
    joined.extend(products.iter().cloned());
    if span_basis(field, &joined, n).len() != nbasis.len() {
        return false;
    }
    // N ⊇ N² ⊇ N³ ⊇ ⋯ must reach zero
    let mut power = nbasis.clone();
    for _ in 0..=nbasis.len() {
        if power.is_empty() {
            return true;
        }
        let next: Vec<Matrix> = power
            .iter()
            .flat_map(|x| nbasis.iter().map(move |y| x.mul(y)))
            .collect();
        power = span_basis(field, &next, n);
    }
    power.is_empty()
}

/// Indecomposability via the endomorphism ring. A non-nilpotent, non-invertible
/// endomorphism certifies a decomposition (Fitting); a split-local ring certifies
/// indecomposability; small finite rings are searched exhaustively.
pub fn decomposition_kind(m: &Representation) -> Result<Decomposition, SerreError> {
    const EXHAUSTIVE: u64 = 1 << 16;
    if m.is_zero() {
        return Ok(Decomposition::Zero);
    }
    let field = m.field();
    let n = m.total_dim();
    let end: Vec<Matrix> = hom_basis(m, m)?
        .basis
        .iter()
        .map(|f| as_block_matrix(f, field))
        .collect();
    if is_split_local(field, &end, n) {
        return Ok(Decomposition::Indecomposable);
    }
    let fitting = |f: &Matrix| !f.is_nilpotent() && !f.is_invertible();
    let shifts: Vec<Scalar> = field
        .elements()
        .unwrap_or_else(|| (-2..=2).map(|k| field.from_i64(k)).collect());
    for b in &end {
        if shifts.iter().any(|c| fitting(&b.sub(&Matrix::scalar(field, n, c)))) {
            return Ok(Decomposition::Decomposable);
        }
    }
    if let Some(elements) = field.elements() {
        let total = (elements.len() as u64).checked_pow(end.len() as u32);
        if total.is_some_and(|t| t <= EXHAUSTIVE) {
            let mut idx = vec![0usize; end.len()];
            loop {
                let f = end.iter().zip(&idx).fold(Matrix::zeros(field, n, n), |acc, (b, &k)| {
                    acc.add(&b.scale(&elements[k]))
                });
                if fitting(&f) {
                    return Ok(Decomposition::Decomposable);
                }
                if !advance(&mut idx, elements.len()) {
                    return Ok(Decomposition::Indecomposable);
                }
            }
        }
    }
    Ok(Decomposition::Unknown)
}

/// Indecomposable members of `corpus`, one per isomorphism class.
pub fn indecomposable_classes(corpus: &[Representation]) -> Result<Vec<Representation>, SerreError> {
    let mut classes: Vec<Representation> = Vec::new();
    for m in corpus {
        match decomposition_kind(m)? {
            Decomposition::Indecomposable => {}
            Decomposition::Unknown => return Err(SerreError::TooLarge("endomorphism ring".into())),
            _ => continue,
        }
        let mut known = false;
        for c in &classes {
            if c.dims() == m.dims() && is_isomorphic(c, m)?.is_yes() {
                known = true;
                break;
            }
        }
        if !known {
            classes.push(m.clone());
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use crate::rep::tests::kronecker_rep;
    use crate::rep::IsoOutcome;

    fn simple(q: &Quiver, field: Field, w: &[i64], i: usize) -> Representation {
        Representation::coordinate_simple(Arc::new(q.double()), Weight::from_i64(field, w), i).unwrap()
    }

    fn d4_family(field: Field, a: usize, b: usize) -> SimpleFamily {
        let q = Quiver::star(4);
        SimpleFamily::new(vec![
            ("S".into(), simple(&q, field, &[0; 5], a)),
            ("T".into(), simple(&q, field, &[0; 5], b)),
        ])
        .unwrap()
    }

    #[test]
    fn family_validation() {
        let k = Quiver::kronecker();
        let s = simple(&k, Field::Rationals, &[0, 0], 0);
        assert!(matches!(
            SimpleFamily::new(vec![("A".into(), s.clone()), ("B".into(), s.clone())]),
            Err(SerreError::Duplicate(..))
        ));
        let m = kronecker_rep(Field::Rationals, 1, 1, 0, -1, 0);
        assert!(matches!(
            SimpleFamily::new(vec![("M".into(), m)]),
            Err(SerreError::NotRigid(_))
        ));
        let ss = s.direct_sum(&s).unwrap();
        assert!(matches!(
            SimpleFamily::new(vec![("SS".into(), ss)]),
            Err(SerreError::NotSimple(_, 4))
        ));
        assert_eq!(SimpleFamily::new(vec![]), Err(SerreError::EmptyFamily));
    }

    #[test]
    fn trace_examples() {
        let f = Field::Rationals;
        let k = Quiver::kronecker();
        let (s0, s1) = (simple(&k, f, &[0, 0], 0), simple(&k, f, &[0, 0], 1));
        let t = trace_submodule(&s0, &s0).unwrap();
        assert_eq!(t.multiplicity, 1);
        assert!(t.quotient.is_zero());
        let t = trace_submodule(&s0, &s1).unwrap();
        assert_eq!(t.multiplicity, 0);
        assert_eq!(t.quotient, s1);
        // E with top S_0 and socle S_1
        let e = build_extension(&s0, &s1, 0).unwrap();
        assert_eq!(hom_dim(&e, &e).unwrap(), 1);
        let t = trace_submodule(&s1, &e).unwrap();
        assert_eq!(t.multiplicity, 1);
        assert!(is_isomorphic(&t.submodule, &s1).unwrap().is_yes());
        assert!(is_isomorphic(&t.quotient, &s0).unwrap().is_yes());
        assert!(t.inclusion.is_morphism(&t.submodule, &e));
        assert!(t.projection.is_morphism(&e, &t.quotient));
        assert_eq!(trace_submodule(&s0, &e).unwrap().multiplicity, 0);
    }

    #[test]
    fn chain_examples() {
        let fam = d4_family(Field::Rationals, 0, 1);
        let (s, t) = (fam.get(0).clone(), fam.get(1).clone());
        let zero = Representation::zero(s.double().clone(), s.weight().clone(), IntVector::zero(5)).unwrap();
        assert!(chain_member(&zero, &fam, &fam.chain(&["T"]).unwrap()).unwrap());
        assert!(chain_member(&s, &fam, &fam.chain(&["S"]).unwrap()).unwrap());
        assert!(!chain_member(&s, &fam, &fam.chain(&["T"]).unwrap()).unwrap());
        // socle T, top S
        let e = build_extension(&s, &t, 0).unwrap();
        assert!(chain_member(&e, &fam, &fam.chain(&["T", "S"]).unwrap()).unwrap());
        assert!(!chain_member(&e, &fam, &fam.chain(&["S", "T"]).unwrap()).unwrap());
        assert!(chain_member(&e, &fam, &fam.chain(&["S", "T", "S"]).unwrap()).unwrap());
        assert!(matches!(fam.chain(&["X"]), Err(SerreError::UnknownLabel(_))));
    }

    #[test]
    fn extension_splitting() {
        let f = Field::Rationals;
        let q = Quiver::star(4);
        let (s, t) = (simple(&q, f, &[0; 5], 0), simple(&q, f, &[0; 5], 2));
        let ext = ext_complex(&s, &t).unwrap();
        let zero: Cochain = ext.cocycles[0]
            .iter()
            .map(|m| Matrix::zeros(f, m.rows(), m.cols()))
            .collect();
        let split = extension_from_cochain(&s, &t, &zero).unwrap();
        assert_eq!(split, t.direct_sum(&s).unwrap());
        assert!(is_split_extension(&split, &t).unwrap());
        let e1 = build_extension(&s, &t, 0).unwrap();
        assert!(!is_split_extension(&e1, &t).unwrap());
        let scaled: Cochain = ext.cocycles[0].iter().map(|m| m.scale(&f.from_i64(-3))).collect();
        let e2 = extension_from_cochain(&s, &t, &scaled).unwrap();
        assert!(is_isomorphic(&e1, &e2).unwrap().is_yes());
        assert_eq!(
            build_extension(&s, &t, 1),
            Err(SerreError::CocycleIndex { index: 1, available: 1 })
        );
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomials [4 choose r]_2 = 1, 15, 35, 15, 1
        let f2 = Field::prime(2).unwrap();
        let counts: Vec<usize> = (0..=4).map(|r| subspaces(f2, 4, r).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 15, 35, 15, 1]);
        let f3 = Field::prime(3).unwrap();
        assert_eq!(subspaces(f3, 3, 1).unwrap().len(), 13);
        for u in subspaces(f3, 3, 2).unwrap() {
            assert_eq!(u.rank(), 2);
        }
        assert!(subspaces(Field::Rationals, 2, 1).is_err());
    }

    #[test]
    fn greedy_matches_brute_force_exhaustively() {
        for p in [2, 3] {
            let f = Field::prime(p).unwrap();
            for (a, b) in [(0, 1), (1, 2)] {
                let fam = d4_family(f, a, b);
                let corpus = serre_corpus(&fam, 4).unwrap();
                assert!(!corpus.is_empty());
                let mut chains = Vec::new();
                for len in 1..=3 {
                    for bits in 0..(1u32 << len) {
                        chains.push(SerreChain {
                            layers: (0..len).map(|k| ((bits >> k) & 1) as usize).collect(),
                        });
                    }
                }
                for m in &corpus {
                    for c in &chains {
                        assert_eq!(
                            chain_member(m, &fam, c).unwrap(),
                            brute_force_chain_member(m, &fam, c).unwrap(),
                            "p={p} dims={} chain={:?}",
                            m.dims(),
                            c.layers
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn star_relations_on_d4() {
        let f2 = Field::prime(2).unwrap();
        let r = verify_star_relations(&d4_family(f2, 0, 3), 4).unwrap();
        assert_eq!(r.ext_dim, 1);
        assert!(r.passed(), "{r:?}");
        assert!(r.checks.iter().any(|c| c.name == "STS=TST"));
        let r = verify_star_relations(&d4_family(f2, 1, 2), 4).unwrap();
        assert_eq!(r.ext_dim, 0);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn star_relations_refuse_large_ext() {
        let f2 = Field::prime(2).unwrap();
        let k = Quiver::kronecker();
        let fam = SimpleFamily::new(vec![
            ("S".into(), simple(&k, f2, &[0, 0], 0)),
            ("T".into(), simple(&k, f2, &[0, 0], 1)),
        ])
        .unwrap();
        assert_eq!(verify_star_relations(&fam, 3), Err(SerreError::Hypothesis(2)));
    }

    #[test]
    fn indecomposables_of_two_simple_category() {
        let f2 = Field::prime(2).unwrap();
        let fam = d4_family(f2, 0, 4);
        let (s, t) = (fam.get(0), fam.get(1));
        let corpus = serre_corpus(&fam, 4).unwrap();
        let classes = indecomposable_classes(&corpus).unwrap();
        let expected = [
            s.clone(),
            t.clone(),
            build_extension(s, t, 0).unwrap(),
            build_extension(t, s, 0).unwrap(),
        ];
        assert_eq!(classes.len(), 4);
        for e in &expected {
            assert_eq!(decomposition_kind(e).unwrap(), Decomposition::Indecomposable);
            assert!(classes
                .iter()
                .any(|c| c.dims() == e.dims() && is_isomorphic(c, e).unwrap().is_yes()));
        }
        assert!(classes.iter().all(|c| c.total_dim() <= 2));
    }

    #[test]
    fn decomposition_examples() {
        let f = Field::Rationals;
        let k = Quiver::kronecker();
        let s = simple(&k, f, &[0, 0], 0);
        assert_eq!(decomposition_kind(&s).unwrap(), Decomposition::Indecomposable);
        assert_eq!(
            decomposition_kind(&s.direct_sum(&s).unwrap()).unwrap(),
            Decomposition::Decomposable
        );
        let m = kronecker_rep(f, 0, 1, 1, 0, 0);
        let n = kronecker_rep(f, 0, 1, 2, 0, 0);
        assert_eq!(
            decomposition_kind(&m.direct_sum(&n).unwrap()).unwrap(),
            Decomposition::Decomposable
        );
        assert_eq!(is_isomorphic(&m, &n).unwrap(), IsoOutcome::No);
    }

    #[test]
    fn composition_vectors() {
        let f = Field::Rationals;
        let fam = d4_family(f, 0, 1);
        let (s, t) = (fam.get(0), fam.get(1));
        assert_eq!(
            composition_vector(s, &fam).unwrap(),
            CompositionVector::Counts(vec![1, 0])
        );
        let e = build_extension(t, s, 0).unwrap();
        assert_eq!(
            composition_vector(&e, &fam).unwrap(),
            CompositionVector::Counts(vec![1, 1])
        );
        let q = Quiver::star(4);
        let other = simple(&q, f, &[0; 5], 3);
        assert_eq!(
            composition_vector(&other, &fam).unwrap(),
            CompositionVector::Indeterminate
        );
    }

    #[test]
    fn composition_outside_span() {
        let f = Field::Rationals;
        let q = Quiver::cycle(3);
        let w = Weight::from_i64(f, &[0, 2, -2]);
        let s0 = Representation::coordinate_simple(Arc::new(q.double()), w.clone(), 0).unwrap();
        let m = crate::reflection::construct_rigid_simple(&q, &w, &IntVector(vec![0, 1, 1])).unwrap();
        let fam = SimpleFamily::new(vec![("A".into(), s0.clone()), ("B".into(), m.clone())]).unwrap();
        assert_eq!(
            composition_vector(&m, &fam).unwrap(),
            CompositionVector::Counts(vec![0, 1])
        );
        let single = SimpleFamily::new(vec![("A".into(), s0)]).unwrap();
        assert_eq!(
            composition_vector(&m, &single).unwrap(),
            CompositionVector::Indeterminate
        );
    }
}
