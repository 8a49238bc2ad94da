//! Weights, simple reflections, roots, the fundamental region and `Σ_λ^re`.
//!
//! The root system of a quiver is infinite in general; every enumerator here
//! takes an explicit componentwise bound.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::quiver::{IntVector, Quiver, QuiverError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("vertex {0} carries a loop; no reflection is defined there")]
    LoopAtVertex(usize),
    #[error("weight has length {got}, quiver has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },
    #[error("weight lives over {weight}, expected {expected}")]
    FieldMismatch { weight: Field, expected: Field },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A weight `λ ∈ K^I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    field: Field,
    coords: Vec<Scalar>,
}

impl Weight {
    pub fn new(field: Field, coords: Vec<Scalar>) -> Result<Self, RootError> {
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(RootError::FieldMismatch {
                weight: bad.field(),
                expected: field,
            });
        }
        Ok(Weight { field, coords })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Self {
        Weight {
            field,
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn zero(field: Field, n: usize) -> Self {
        Weight {
            field,
            coords: vec![field.zero(); n],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    fn check(&self, q: &Quiver) -> Result<(), RootError> {
        if self.coords.len() != q.vertex_count() {
            return Err(RootError::SizeMismatch {
                expected: q.vertex_count(),
                got: self.coords.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn require_loop_free(q: &Quiver, i: usize) -> Result<(), RootError> {
    q.check_vertex(i)?;
    if !q.is_loop_free(i) {
        return Err(RootError::LoopAtVertex(i));
    }
    Ok(())
}

/// `s_i(a) = a − (a, ε_i) ε_i`.
pub fn reflect_dim(q: &Quiver, i: usize, a: &IntVector) -> Result<IntVector, RootError> {
    require_loop_free(q, i)?;
    if a.len() != q.vertex_count() {
        return Err(QuiverError::SizeMismatch {
            expected: q.vertex_count(),
            got: a.len(),
        }
        .into());
    }
    let mut out = a.clone();
    out.0[i] -= q.pair_with_unit(a, i);
    Ok(out)
}

/// `(r_i λ)_j = λ_j − (ε_i, ε_j) λ_i`.
pub fn reflect_weight(q: &Quiver, i: usize, w: &Weight) -> Result<Weight, RootError> {
    require_loop_free(q, i)?;
    w.check(q)?;
    let n = q.vertex_count();
    let ei = IntVector::unit(n, i);
    let li = w.get(i).clone();
    let coords = (0..n)
        .map(|j| {
            let b = q.pair_with_unit(&ei, j);
            w.get(j) - &(&w.field.from_i64(b) * &li)
        })
        .collect();
    Ok(Weight { field: w.field, coords })
}

/// `λ·α = Σ λ_i α_i`.
pub fn pair_weight(w: &Weight, a: &IntVector) -> Result<Scalar, RootError> {
    if w.len() != a.len() {
        return Err(RootError::SizeMismatch {
            expected: w.len(),
            got: a.len(),
        });
    }
    Ok(w.coords
        .iter()
        .zip(&a.0)
        .fold(w.field.zero(), |acc, (l, &x)| &acc + &(l * &w.field.from_i64(x))))
}

/// `s_{i_1} ∘ ⋯ ∘ s_{i_k}(a)`, the rightmost letter acting first.
pub fn apply_word(q: &Quiver, word: &[usize], a: &IntVector) -> Result<IntVector, RootError> {
    word.iter().rev().try_fold(a.clone(), |acc, &i| reflect_dim(q, i, &acc))
}

/// `r_{i_1} ∘ ⋯ ∘ r_{i_k}(λ)`.
pub fn apply_weight_word(q: &Quiver, word: &[usize], w: &Weight) -> Result<Weight, RootError> {
    word.iter()
        .rev()
        .try_fold(w.clone(), |acc, &i| reflect_weight(q, i, &acc))
}

/// `a ∈ ℕ^I`, `a ≠ 0`, connected support, and `(a, ε_i) ≤ 0` for all `i`.
pub fn in_fundamental_region(q: &Quiver, a: &IntVector) -> bool {
    a.len() == q.vertex_count()
        && a.is_positive()
        && q.support_connected(a)
        && (0..q.vertex_count()).all(|i| q.pair_with_unit(a, i) <= 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootKind {
    Real,
    Imaginary,
}

/// Decides whether a positive vector is a root, by reflecting down to either
/// a simple root or the fundamental region.
pub fn positive_root_kind(q: &Quiver, a: &IntVector) -> Option<RootKind> {
    if a.len() != q.vertex_count() || !a.is_positive() {
        return None;
    }
    let loop_free = q.loop_free_vertices();
    let mut cur = a.clone();
    'descend: loop {
        for &i in &loop_free {
            let p = q.pair_with_unit(&cur, i);
            if p > 0 {
                let next_i = cur[i] - p;
                if next_i < 0 {
                    // s_i permutes the positive roots other than ε_i
                    let is_simple = cur.0.iter().enumerate().all(|(j, &x)| x == if j == i { 1 } else { 0 });
                    return is_simple.then_some(RootKind::Real);
                }
                cur.0[i] = next_i;
                if cur.is_zero() {
                    return None;
                }
                continue 'descend;
            }
        }
        break;
    }
    in_fundamental_region(q, &cur).then_some(RootKind::Imaginary)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Root {
    pub vector: IntVector,
    pub kind: RootKind,
}

/// Positive roots below a bound, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn vectors(&self) -> Vec<IntVector> {
        self.roots.iter().map(|r| r.vector.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

fn in_box(a: &IntVector, bound: &IntVector) -> bool {
    a.0.iter().zip(&bound.0).all(|(x, b)| x.abs() <= *b)
}

/// Positive real roots `α ≤ bound`: closure of the simple roots under the
/// simple reflections inside the box `[−bound, bound]`.
pub fn enumerate_positive_real_roots(q: &Quiver, bound: &IntVector) -> Result<RootSet, RootError> {
    let n = q.vertex_count();
    if bound.len() != n {
        return Err(QuiverError::SizeMismatch {
            expected: n,
            got: bound.len(),
        }
        .into());
    }
    let loop_free = q.loop_free_vertices();
    let mut seen: HashSet<IntVector> = HashSet::new();
    let mut queue = VecDeque::new();
    for &i in &loop_free {
        let e = IntVector::unit(n, i);
        if in_box(&e, bound) && seen.insert(e.clone()) {
            queue.push_back(e);
        }
    }
    while let Some(a) = queue.pop_front() {
        for &i in &loop_free {
            let b = reflect_dim(q, i, &a)?;
            if in_box(&b, bound) && seen.insert(b.clone()) {
                queue.push_back(b);
            }
        }
    }
    let positive: BTreeSet<IntVector> = seen.into_iter().filter(IntVector::is_positive).collect();
    Ok(RootSet {
        roots: positive
            .into_iter()
            .map(|vector| Root {
                vector,
                kind: RootKind::Real,
            })
            .collect(),
    })
}

/// Every vector `0 < v ≤ bound`, in lexicographic order.
fn box_vectors(bound: &IntVector) -> impl Iterator<Item = IntVector> + '_ {
    let n = bound.len();
    let mut cur = vec![0i64; n];
    let mut done = bound.0.iter().any(|&b| b < 0) || n == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        // odometer increment, last coordinate fastest
        let mut k = n;
        loop {
            if k == 0 {
                done = true;
                return None;
            }
            k -= 1;
            if cur[k] < bound[k] {
                cur[k] += 1;
                for x in cur.iter_mut().skip(k + 1) {
                    *x = 0;
                }
                return Some(IntVector(cur.clone()));
            }
        }
    })
}

/// All positive roots (real and imaginary) `≤ bound`.
pub fn enumerate_positive_roots(q: &Quiver, bound: &IntVector) -> Result<RootSet, RootError> {
    enumerate_positive_roots_where(q, bound, |_| true)
}

fn enumerate_positive_roots_where(
    q: &Quiver,
    bound: &IntVector,
    keep: impl Fn(&IntVector) -> bool,
) -> Result<RootSet, RootError> {
    if bound.len() != q.vertex_count() {
        return Err(QuiverError::SizeMismatch {
            expected: q.vertex_count(),
            got: bound.len(),
        }
        .into());
    }
    let mut roots = Vec::new();
    for v in box_vectors(bound) {
        if q.quadratic_form(&v)? > 1 || !keep(&v) {
            continue;
        }
        if let Some(kind) = positive_root_kind(q, &v) {
            roots.push(Root { vector: v, kind });
        }
    }
    Ok(RootSet { roots })
}

/// `Σ_λ^re` below `bound`: positive real roots `α` with `λ·α = 0` that are not
/// a sum of two or more positive roots (repetition allowed) each orthogonal
/// to `λ`.
pub fn sigma_lambda_re(q: &Quiver, w: &Weight, bound: &IntVector) -> Result<Vec<IntVector>, RootError> {
    w.check(q)?;
    let orthogonal = |v: &IntVector| pair_weight(w, v).map(|s| s.is_zero()).unwrap_or(false);
    let candidates: Vec<IntVector> = enumerate_positive_real_roots(q, bound)?
        .vectors()
        .into_iter()
        .filter(|a| orthogonal(a))
        .collect();
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let mut summands: Vec<IntVector> = enumerate_positive_roots_where(q, bound, orthogonal)?.vectors();
    summands.sort_by_key(IntVector::height);
    let mut memo: HashMap<IntVector, bool> = HashMap::new();
    let summand_set: HashSet<IntVector> = summands.iter().cloned().collect();
    Ok(candidates
        .into_iter()
        .filter(|a| !splits(a, &summands, &summand_set, &mut memo))
        .collect())
}

/// Whether `a` is a sum of at least two of the `summands`.
fn splits(
    a: &IntVector,
    summands: &[IntVector],
    set: &HashSet<IntVector>,
    memo: &mut HashMap<IntVector, bool>,
) -> bool {
    summands
        .iter()
        .filter(|b| b.strictly_below(a))
        .any(|b| reachable(&(a - b), summands, set, memo))
}

/// Whether `g` is a nonempty sum of `summands`.
fn reachable(
    g: &IntVector,
    summands: &[IntVector],
    set: &HashSet<IntVector>,
    memo: &mut HashMap<IntVector, bool>,
) -> bool {
    if set.contains(g) {
        return true;
    }
    if let Some(&r) = memo.get(g) {
        return r;
    }
    let r = splits(g, summands, set, memo);
    memo.insert(g.clone(), r);
    r
}
