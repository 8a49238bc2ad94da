//! Quivers, their doubles, dimension vectors and the Ringel / symmetric /
//! quadratic forms.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::{Add, Index, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("vector has length {got}, quiver has {expected} vertices")]
    SizeMismatch { expected: usize, got: usize },
    #[error("arrow `{id}` has endpoint {vertex} outside 0..{n}")]
    VertexOutOfRange { id: String, vertex: usize, n: usize },
    #[error("arrow id `{0}` is used twice")]
    DuplicateArrowId(String),
    #[error("arrow id `{0}` ends in `*`, which is reserved for reversed arrows")]
    ReservedArrowId(String),
    #[error("quiver is not connected")]
    Disconnected,
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// Integer vector indexed by vertices: dimension vectors, roots, `ε_i`, `δ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn zero(n: usize) -> Self {
        IntVector(vec![0; n])
    }

    /// The coordinate vector `ε_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        IntVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Nonnegative and nonzero.
    pub fn is_positive(&self) -> bool {
        self.is_nonneg() && !self.is_zero()
    }

    pub fn is_nonpos(&self) -> bool {
        self.0.iter().all(|&x| x <= 0)
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Componentwise `self ≤ other`.
    pub fn dominated_by(&self, other: &IntVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise `self ≤ other` and `self ≠ other`.
    pub fn strictly_below(&self, other: &IntVector) -> bool {
        self.dominated_by(other) && self != other
    }

    pub fn scale(&self, k: i64) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] != 0).collect()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl Index<usize> for IntVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

/// A finite quiver on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<Arrow>,
}

/// Result of [`Quiver::classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum QuiverClass {
    Dynkin,
    ExtendedDynkin { delta: IntVector },
    Other,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut ids = HashSet::new();
        for a in &arrows {
            for v in [a.tail, a.head] {
                if v >= vertices {
                    return Err(QuiverError::VertexOutOfRange {
                        id: a.id.clone(),
                        vertex: v,
                        n: vertices,
                    });
                }
            }
            if a.id.ends_with('*') {
                return Err(QuiverError::ReservedArrowId(a.id.clone()));
            }
            if !ids.insert(a.id.clone()) {
                return Err(QuiverError::DuplicateArrowId(a.id.clone()));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Builds from `(id, tail, head)` triples.
    pub fn from_edges(vertices: usize, edges: &[(&str, usize, usize)]) -> Result<Self, QuiverError> {
        Quiver::new(
            vertices,
            edges
                .iter()
                .map(|&(id, tail, head)| Arrow {
                    id: id.to_string(),
                    tail,
                    head,
                })
                .collect(),
        )
    }

    /// `A_n` with arrows `i → i+1`.
    pub fn linear(n: usize) -> Self {
        let arrows = (0..n.saturating_sub(1))
            .map(|i| Arrow {
                id: format!("a{i}"),
                tail: i,
                head: i + 1,
            })
            .collect();
        Quiver { vertices: n, arrows }
    }

    /// Two vertices, two arrows `a, b: 0 → 1`.
    pub fn kronecker() -> Self {
        Quiver::from_edges(2, &[("a", 0, 1), ("b", 0, 1)]).expect("valid")
    }

    /// The oriented cycle `0 → 1 → ⋯ → n-1 → 0` (type `Ã_{n-1}` for `n ≥ 2`).
    pub fn cycle(n: usize) -> Self {
        let arrows = (0..n)
            .map(|i| Arrow {
                id: format!("a{i}"),
                tail: i,
                head: (i + 1) % n,
            })
            .collect();
        Quiver { vertices: n, arrows }
    }

    /// Star with center `0` and `leaves` leaves, arrows leaf → center.
    /// Four leaves give `D̃_4`.
    pub fn star(leaves: usize) -> Self {
        let arrows = (1..=leaves)
            .map(|l| Arrow {
                id: format!("a{l}"),
                tail: l,
                head: 0,
            })
            .collect();
        Quiver {
            vertices: leaves + 1,
            arrows,
        }
    }

    /// One vertex with `loops` loops.
    pub fn loops(loops: usize) -> Self {
        let arrows = (0..loops)
            .map(|k| Arrow {
                id: format!("x{k}"),
                tail: 0,
                head: 0,
            })
            .collect();
        Quiver { vertices: 1, arrows }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn double(&self) -> DoubleQuiver {
        DoubleQuiver::new(self.clone())
    }

    fn check_len(&self, v: &IntVector) -> Result<(), QuiverError> {
        if v.len() != self.vertices {
            return Err(QuiverError::SizeMismatch {
                expected: self.vertices,
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn check_vertex(&self, i: usize) -> Result<(), QuiverError> {
        if i >= self.vertices {
            return Err(QuiverError::NoSuchVertex(i));
        }
        Ok(())
    }

    /// `⟨a,b⟩ = Σ a_i b_i − Σ_arrows a_{t} b_{h}`.
    pub fn ringel_form(&self, a: &IntVector, b: &IntVector) -> Result<i64, QuiverError> {
        self.check_len(a)?;
        self.check_len(b)?;
        let diag: i64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
        let off: i64 = self.arrows.iter().map(|e| a[e.tail] * b[e.head]).sum();
        Ok(diag - off)
    }

    /// `(a,b) = ⟨a,b⟩ + ⟨b,a⟩`.
    pub fn symmetric_form(&self, a: &IntVector, b: &IntVector) -> Result<i64, QuiverError> {
        Ok(self.ringel_form(a, b)? + self.ringel_form(b, a)?)
    }

    /// `q(a) = ⟨a,a⟩`.
    pub fn quadratic_form(&self, a: &IntVector) -> Result<i64, QuiverError> {
        self.ringel_form(a, a)
    }

    /// `C_ij = δ_ij − #{arrows i → j}`, so `⟨a,b⟩ = aᵀ C b`.
    pub fn ringel_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertices;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 1;
        }
        for a in &self.arrows {
            c[a.tail][a.head] -= 1;
        }
        c
    }

    /// Gram matrix of the symmetric form, `B_ij = (ε_i, ε_j)`.
    pub fn symmetric_matrix(&self) -> Vec<Vec<i64>> {
        let c = self.ringel_matrix();
        let n = self.vertices;
        (0..n).map(|i| (0..n).map(|j| c[i][j] + c[j][i]).collect()).collect()
    }

    /// `(a, ε_i)` without allocating `ε_i`.
    pub fn pair_with_unit(&self, a: &IntVector, i: usize) -> i64 {
        let mut s = 2 * a[i];
        for e in &self.arrows {
            if e.head == i {
                s -= a[e.tail];
            }
            if e.tail == i {
                s -= a[e.head];
            }
        }
        s
    }

    pub fn is_loop_free(&self, i: usize) -> bool {
        !self.arrows.iter().any(|a| a.tail == i && a.head == i)
    }

    pub fn loop_free_vertices(&self) -> Vec<usize> {
        (0..self.vertices).filter(|&i| self.is_loop_free(i)).collect()
    }

    /// Number of arrows of `Q` joining `i` and `j` in either direction.
    pub fn arrows_between(&self, i: usize, j: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| (a.tail == i && a.head == j) || (a.tail == j && a.head == i))
            .count()
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().filter_map(move |a| {
            if a.tail == i {
                Some(a.head)
            } else if a.head == i {
                Some(a.tail)
            } else {
                None
            }
        })
    }

    /// Whether the vertices in `set` induce a connected subgraph of the
    /// underlying graph. The empty set counts as disconnected.
    pub fn is_connected_on(&self, set: &[usize]) -> bool {
        let Some(&start) = set.first() else {
            return false;
        };
        let inside: HashSet<usize> = set.iter().copied().collect();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if inside.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == inside.len()
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.vertices).collect();
        self.is_connected_on(&all)
    }

    pub fn support_connected(&self, a: &IntVector) -> bool {
        self.is_connected_on(&a.support())
    }

    /// Connected components of the underlying graph, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices];
        let mut out = Vec::new();
        for s in 0..self.vertices {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Full subquiver on `vertices` (renumbered in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Quiver {
        let pos = |v: usize| vertices.iter().position(|&w| w == v);
        let arrows = self
            .arrows
            .iter()
            .filter_map(|a| {
                Some(Arrow {
                    id: a.id.clone(),
                    tail: pos(a.tail)?,
                    head: pos(a.head)?,
                })
            })
            .collect();
        Quiver {
            vertices: vertices.len(),
            arrows,
        }
    }

    /// Dynkin iff the quadratic form is positive definite; extended Dynkin iff
    /// positive semidefinite with one-dimensional radical, returning the
    /// primitive positive radical generator `δ`.
    pub fn classify(&self) -> Result<QuiverClass, QuiverError> {
        if !self.is_connected() {
            return Err(QuiverError::Disconnected);
        }
        let b = self.symmetric_matrix();
        let n = self.vertices;
        let q = Field::Rationals;
        let rows: Vec<&[i64]> = b.iter().map(Vec::as_slice).collect();
        let kernel = Matrix::from_i64(q, &rows).kernel_basis();
        match kernel.cols() {
            0 => Ok(if positive_definite(&b) {
                QuiverClass::Dynkin
            } else {
                QuiverClass::Other
            }),
            1 => {
                let delta = primitive_integer_vector(&kernel.column(0));
                let Some(delta) = delta else {
                    return Ok(QuiverClass::Other);
                };
                let Some(pivot) = (0..n).find(|&i| delta[i] != 0) else {
                    return Ok(QuiverClass::Other);
                };
                let rest: Vec<usize> = (0..n).filter(|&i| i != pivot).collect();
                let minor: Vec<Vec<i64>> = rest.iter().map(|&i| rest.iter().map(|&j| b[i][j]).collect()).collect();
                if positive_definite(&minor) && delta.0.iter().all(|&x| x > 0) {
                    Ok(QuiverClass::ExtendedDynkin { delta })
                } else {
                    Ok(QuiverClass::Other)
                }
            }
            _ => Ok(QuiverClass::Other),
        }
    }

    /// A conventional type label (`A_n`, `D̃_4`, ...) for Dynkin and extended
    /// Dynkin quivers.
    pub fn type_label(&self) -> Option<String> {
        match self.classify().ok()? {
            QuiverClass::Other => None,
            QuiverClass::ExtendedDynkin { delta } => {
                let n = self.vertices - 1;
                let max = delta.0.iter().copied().max().unwrap_or(0);
                let ones = delta.0.iter().filter(|&&x| x == 1).count();
                Some(if max == 1 {
                    format!("Ã_{n}")
                } else if max == 2 && ones == 4 {
                    format!("D̃_{n}")
                } else {
                    format!("Ẽ_{n}")
                })
            }
            QuiverClass::Dynkin => {
                let n = self.vertices;
                let degrees: Vec<usize> = (0..n).map(|i| self.neighbours(i).count()).collect();
                let Some(branch) = (0..n).find(|&i| degrees[i] == 3) else {
                    return Some(format!("A_{n}"));
                };
                let mut arms: Vec<usize> = self
                    .neighbours(branch)
                    .map(|start| {
                        let (mut prev, mut cur, mut len) = (branch, start, 1);
                        loop {
                            let next = self.neighbours(cur).find(|&w| w != prev);
                            match next {
                                Some(w) if degrees[cur] == 2 => {
                                    prev = cur;
                                    cur = w;
                                    len += 1;
                                }
                                _ => break len,
                            }
                        }
                    })
                    .collect();
                arms.sort_unstable();
                Some(if arms[0] == 1 && arms[1] == 1 {
                    format!("D_{n}")
                } else {
                    format!("E_{n}")
                })
            }
        }
    }
}

/// Gaussian elimination without pivoting; positive definite iff every pivot
/// is positive.
fn positive_definite(b: &[Vec<i64>]) -> bool {
    let q = Field::Rationals;
    let n = b.len();
    let mut m: Vec<Vec<_>> = b
        .iter()
        .map(|row| row.iter().map(|&x| q.from_i64(x)).collect())
        .collect();
    for k in 0..n {
        if m[k][k].signum() != Some(1) {
            return false;
        }
        let inv = m[k][k].inv().expect("positive pivot");
        for r in k + 1..n {
            let f = &m[r][k] * &inv;
            for c in k..n {
                let v = &m[r][c] - &(&f * &m[k][c]);
                m[r][c] = v;
            }
        }
    }
    true
}

/// Scales a rational vector to a primitive integer vector whose first nonzero
/// entry is positive.
fn primitive_integer_vector(v: &[crate::field::Scalar]) -> Option<IntVector> {
    use crate::field::Scalar;
    use num_integer::Integer;
    use num_traits::{Signed, ToPrimitive, Zero};
    let mut lcm = num_bigint::BigInt::from(1);
    for s in v {
        let Scalar::Rational(r) = s else { return None };
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<num_bigint::BigInt> = v
        .iter()
        .map(|s| match s {
            Scalar::Rational(r) => (r * num_rational::BigRational::from_integer(lcm.clone())).to_integer(),
            Scalar::Modular { .. } => unreachable!(),
        })
        .collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return None;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    let out: Option<Vec<i64>> = ints
        .iter()
        .map(|x| {
            let y = x / &g;
            (if sign { -y } else { y }).to_i64()
        })
        .collect();
    out.map(IntVector)
}

/// One arrow of the double quiver.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoubleArrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    /// Index of the partner `a*` in [`DoubleQuiver::arrows`].
    pub star: usize,
    /// `+1` for arrows of `Q`, `-1` for reversed arrows.
    pub epsilon: i64,
}

/// The double `Q̄`: base arrows first (in order), then their reverses with id
/// `id + "*"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoubleQuiver {
    base: Quiver,
    arrows: Vec<DoubleArrow>,
}

impl DoubleQuiver {
    pub fn new(base: Quiver) -> Self {
        let m = base.arrows.len();
        let mut arrows = Vec::with_capacity(2 * m);
        for (k, a) in base.arrows.iter().enumerate() {
            arrows.push(DoubleArrow {
                id: a.id.clone(),
                tail: a.tail,
                head: a.head,
                star: m + k,
                epsilon: 1,
            });
        }
        for (k, a) in base.arrows.iter().enumerate() {
            arrows.push(DoubleArrow {
                id: format!("{}*", a.id),
                tail: a.head,
                head: a.tail,
                star: k,
                epsilon: -1,
            });
        }
        DoubleQuiver { base, arrows }
    }

    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertices
    }

    pub fn arrows(&self) -> &[DoubleArrow] {
        &self.arrows
    }

    pub fn arrow(&self, k: usize) -> &DoubleArrow {
        &self.arrows[k]
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// Indices of arrows with head `i`, ordered lexicographically by id.
    pub fn arrows_into(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.arrows.len()).filter(|&k| self.arrows[k].head == i).collect();
        v.sort_by(|&x, &y| self.arrows[x].id.cmp(&self.arrows[y].id));
        v
    }
}
