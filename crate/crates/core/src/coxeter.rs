//! Ext-quivers of rigid simples, the Coxeter group they present, its
//! geometric representation on the class lattice, and the Demazure product.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::{Arrow, IntVector, Quiver, QuiverClass, QuiverError};
use crate::reflection::{construct_rigid_simple, ReflectError};
use crate::rep::{ext_complex, Representation};
use crate::roots::{sigma_lambda_re, RootError, Weight};
use crate::serre::{composition_vector, CompositionVector, SerreError, SimpleFamily};

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error(transparent)]
    Serre(#[from] SerreError),
    #[error(transparent)]
    Reflect(#[from] ReflectError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("arrow counts are not a square matrix of size {0}")]
    Shape(usize),
    #[error("m[{0}][{1}] = {2} but m[{1}][{0}] = {3}")]
    Asymmetric(usize, usize, i64, i64),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("negative arrow count at ({0},{1})")]
    Negative(usize, usize),
    #[error("m[{i}][{j}] = {m} but the roots give {expected}")]
    FormMismatch { i: usize, j: usize, m: i64, expected: i64 },
    #[error("ext quiver carries no root labels")]
    NoRoots,
    #[error("ambient quiver is not extended Dynkin")]
    NotExtendedDynkin,
    #[error("no generator `{0}`")]
    UnknownGenerator(String),
    #[error("composition multiplicities are indeterminate")]
    Indeterminate,
    #[error("form matrix must be symmetric with diagonal 2")]
    BadForm,
}

/// Vertex labels and arrow counts `m_ij = dim Ext¹(S_i, S_j)`; optionally
/// the dimension vectors of the simples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtQuiverData {
    labels: Vec<String>,
    m: IntMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<Vec<IntVector>>,
}

#[derive(Deserialize)]
struct RawExtQuiver {
    labels: Vec<String>,
    m: IntMatrix,
    #[serde(default)]
    roots: Option<Vec<IntVector>>,
}

impl<'de> Deserialize<'de> for ExtQuiverData {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawExtQuiver::deserialize(d)?;
        let eq = ExtQuiverData::new(raw.labels, raw.m).map_err(serde::de::Error::custom)?;
        match raw.roots {
            Some(r) if r.len() != eq.len() => Err(serde::de::Error::custom("one root per label required")),
            roots => Ok(ExtQuiverData { roots, ..eq }),
        }
    }
}

impl ExtQuiverData {
    /// Validates shape, symmetry, nonnegativity and the absence of loops.
    pub fn new(labels: Vec<String>, m: IntMatrix) -> Result<Self, CoxeterError> {
        let k = labels.len();
        if m.len() != k || m.iter().any(|r| r.len() != k) {
            return Err(CoxeterError::Shape(k));
        }
        for i in 0..k {
            if m[i][i] != 0 {
                return Err(CoxeterError::Loop(i));
            }
            for j in 0..k {
                if m[i][j] < 0 {
                    return Err(CoxeterError::Negative(i, j));
                }
                if m[i][j] != m[j][i] {
                    return Err(CoxeterError::Asymmetric(i, j, m[i][j], m[j][i]));
                }
            }
        }
        Ok(ExtQuiverData { labels, m, roots: None })
    }

    /// Labels each vertex by a root of `q`, with `m_ij = −(α_i, α_j)`.
    pub fn from_roots(q: &Quiver, roots: &[IntVector]) -> Result<Self, CoxeterError> {
        let mut m = vec![vec![0; roots.len()]; roots.len()];
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                if i != j {
                    m[i][j] = -q.symmetric_form(a, b)?;
                }
            }
        }
        let labels = roots.iter().map(IntVector::to_string).collect();
        Ok(ExtQuiverData {
            roots: Some(roots.to_vec()),
            ..ExtQuiverData::new(labels, m)?
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn m(&self) -> &IntMatrix {
        &self.m
    }

    pub fn roots(&self) -> Option<&[IntVector]> {
        self.roots.as_deref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `Γ`: `m_ij` arrows `i → j` for each `i < j`.
    pub fn gamma(&self) -> Quiver {
        let k = self.len();
        let mut arrows = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                for c in 0..self.m[i][j] {
                    arrows.push(Arrow {
                        id: format!("g{i}_{j}_{c}"),
                        tail: i,
                        head: j,
                    });
                }
            }
        }
        Quiver::new(k, arrows).expect("valid arrows")
    }

    /// `q_Γ(d) = Σ d_i² − Σ_{i<j} m_ij d_i d_j`.
    pub fn quadratic_form(&self, d: &[i64]) -> i64 {
        let k = self.len();
        let mut acc: i64 = d.iter().map(|x| x * x).sum();
        for i in 0..k {
            for j in i + 1..k {
                acc -= self.m[i][j] * d[i] * d[j];
            }
        }
        acc
    }

    /// `Σ d_i α_i`.
    pub fn combine_roots(&self, d: &[i64]) -> Result<IntVector, CoxeterError> {
        let roots = self.roots.as_ref().ok_or(CoxeterError::NoRoots)?;
        let n = roots.first().map_or(0, IntVector::len);
        Ok(roots
            .iter()
            .zip(d)
            .fold(IntVector::zero(n), |acc, (a, &c)| &acc + &a.scale(c)))
    }
}

/// Ext-quiver of a family of split rigid simples, from the Ext complex.
/// Arrow counts are checked against `−(α_i, α_j)`, which is what the 2-CY
/// formula gives for non-isomorphic simples.
pub fn build_ext_quiver(family: &SimpleFamily) -> Result<ExtQuiverData, CoxeterError> {
    let k = family.len();
    let mut m = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            m[i][j] = ext_complex(family.get(i), family.get(j)).map_err(SerreError::from)?.h1 as i64;
        }
    }
    let eq = ExtQuiverData::new(family.labels().to_vec(), m)?;
    let q = family.get(0).quiver();
    let roots: Vec<IntVector> = family.members().iter().map(|s| s.dims().clone()).collect();
    for i in 0..k {
        for j in 0..k {
            let expected = -q.symmetric_form(&roots[i], &roots[j])?;
            if i != j && eq.m[i][j] != expected {
                return Err(CoxeterError::FormMismatch {
                    i,
                    j,
                    m: eq.m[i][j],
                    expected,
                });
            }
        }
    }
    Ok(ExtQuiverData {
        roots: Some(roots),
        ..eq
    })
}

/// The family of rigid simples with dimension vectors in `Σ_λ^re`, built by
/// reflection functors.
pub fn sigma_family(q: &Quiver, w: &Weight, bound: &IntVector) -> Result<SimpleFamily, CoxeterError> {
    let entries = sigma_lambda_re(q, w, bound)?
        .into_iter()
        .map(|a| Ok((a.to_string(), construct_rigid_simple(q, w, &a)?)))
        .collect::<Result<Vec<_>, CoxeterError>>()?;
    Ok(SimpleFamily::new(entries)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaComponent {
    pub vertices: Vec<usize>,
    #[serde(flatten)]
    pub class: QuiverClass,
    pub type_label: Option<String>,
}

/// Connected components of `Γ` with their classification.
pub fn decompose_gamma(eq: &ExtQuiverData) -> Vec<GammaComponent> {
    let gamma = eq.gamma();
    gamma
        .components()
        .into_iter()
        .map(|vertices| {
            let sub = gamma.induced(&vertices);
            GammaComponent {
                class: sub.classify().expect("components are connected"),
                type_label: sub.type_label(),
                vertices,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaCertificate {
    pub vertices: Vec<usize>,
    /// `δ′` of the component, when it is extended Dynkin.
    pub delta_prime: Option<IntVector>,
    /// `Σ δ′_i α_i` in the ambient lattice.
    pub image: Option<IntVector>,
    pub holds: bool,
}

/// For each component `Γ′`, checks `Σ_{i∈Γ′} δ′_i α_i = δ`.
pub fn delta_decomposition(eq: &ExtQuiverData, q: &Quiver) -> Result<Vec<DeltaCertificate>, CoxeterError> {
    let QuiverClass::ExtendedDynkin { delta } = q.classify()? else {
        return Err(CoxeterError::NotExtendedDynkin);
    };
    let roots = eq.roots().ok_or(CoxeterError::NoRoots)?;
    let out = decompose_gamma(eq)
        .into_iter()
        .map(|c| match c.class {
            QuiverClass::ExtendedDynkin { delta: dp } => {
                let image = c
                    .vertices
                    .iter()
                    .zip(dp.as_slice())
                    .fold(IntVector::zero(q.vertex_count()), |acc, (&v, &k)| {
                        &acc + &roots[v].scale(k)
                    });
                DeltaCertificate {
                    holds: image == delta,
                    vertices: c.vertices,
                    delta_prime: Some(dp),
                    image: Some(image),
                }
            }
            _ => DeltaCertificate {
                vertices: c.vertices,
                delta_prime: None,
                image: None,
                holds: false,
            },
        })
        .collect();
    Ok(out)
}

/// `𝒵` with the form `B_ss = 2`, `B_st = −m_st`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassLattice {
    b: IntMatrix,
}

impl ClassLattice {
    pub fn new(b: IntMatrix) -> Result<Self, CoxeterError> {
        let k = b.len();
        let ok = b.iter().all(|r| r.len() == k) && (0..k).all(|i| b[i][i] == 2 && (0..k).all(|j| b[i][j] == b[j][i]));
        if ok {
            Ok(ClassLattice { b })
        } else {
            Err(CoxeterError::BadForm)
        }
    }

    pub fn from_ext_quiver(eq: &ExtQuiverData) -> Self {
        let k = eq.len();
        let b = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 2 } else { -eq.m[i][j] }).collect())
            .collect();
        ClassLattice { b }
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn form_matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn form(&self, x: &[i64], y: &[i64]) -> i64 {
        (0..self.rank())
            .map(|i| x[i] * (0..self.rank()).map(|j| self.b[i][j] * y[j]).sum::<i64>())
            .sum()
    }

    /// `σ_s(x) = x − (e_s, x) e_s`.
    pub fn sigma_action(&self, s: usize, x: &[i64]) -> Vec<i64> {
        let c: i64 = (0..self.rank()).map(|j| self.b[s][j] * x[j]).sum();
        let mut y = x.to_vec();
        y[s] -= c;
        y
    }

    /// Matrix of `σ_s`; columns are images of the basis.
    pub fn generator_matrix(&self, s: usize) -> IntMatrix {
        let mut m = identity(self.rank());
        for j in 0..self.rank() {
            m[s][j] -= self.b[s][j];
        }
        m
    }
}

fn identity(k: usize) -> IntMatrix {
    (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

fn column(a: &IntMatrix, j: usize) -> Vec<i64> {
    a.iter().map(|r| r[j]).collect()
}

/// An element of `W(𝒮)`: its lex-least reduced word and its matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoxeterElement {
    word: Vec<usize>,
    matrix: IntMatrix,
    #[serde(skip)]
    inverse: IntMatrix,
}

impl CoxeterElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

/// `W(𝒮)` acting on its class lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterGroup {
    lattice: ClassLattice,
    labels: Vec<String>,
    gens: Vec<IntMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub generators: Vec<usize>,
    pub relation: String,
    pub holds: bool,
}

impl CoxeterGroup {
    pub fn new(eq: &ExtQuiverData) -> Self {
        let lattice = ClassLattice::from_ext_quiver(eq);
        let gens = (0..lattice.rank()).map(|s| lattice.generator_matrix(s)).collect();
        CoxeterGroup {
            lattice,
            labels: eq.labels.clone(),
            gens,
        }
    }

    pub fn lattice(&self) -> &ClassLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_matrix(&self, s: usize) -> &IntMatrix {
        &self.gens[s]
    }

    pub fn identity(&self) -> CoxeterElement {
        let id = identity(self.rank());
        CoxeterElement {
            word: Vec::new(),
            matrix: id.clone(),
            inverse: id,
        }
    }

    /// Product of generator matrices, leftmost letter outermost.
    pub fn matrix_of_word(&self, word: &[usize]) -> IntMatrix {
        word.iter()
            .fold(identity(self.rank()), |acc, &s| mat_mul(&acc, &self.gens[s]))
    }

    /// Resolves `s3`-style names (1-based) or labels.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, CoxeterError> {
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                if let Some(k) = self.labels.iter().position(|l| l == t) {
                    return Ok(k);
                }
                t.strip_prefix('s')
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| (1..=self.rank()).contains(&n))
                    .map(|n| n - 1)
                    .ok_or_else(|| CoxeterError::UnknownGenerator(t.to_string()))
            })
            .collect()
    }

    /// Lex-least reduced word, by repeatedly stripping the smallest left
    /// descent `t` (`w⁻¹(e_t)` negative).
    fn canonical_word(&self, matrix: &IntMatrix, inverse: &IntMatrix) -> Vec<usize> {
        let id = identity(self.rank());
        let (mut w, mut winv) = (matrix.clone(), inverse.clone());
        let mut word = Vec::new();
        while w != id {
            let t = (0..self.rank())
                .find(|&t| column(&winv, t).iter().all(|&x| x <= 0))
                .expect("non-identity element has a left descent");
            word.push(t);
            w = mat_mul(&self.gens[t], &w);
            winv = mat_mul(&winv, &self.gens[t]);
        }
        word
    }

    /// `w(e_s)` is negative, i.e. `ℓ(w σ_s) < ℓ(w)`.
    pub fn is_right_descent(&self, w: &CoxeterElement, s: usize) -> bool {
        column(&w.matrix, s).iter().all(|&x| x <= 0)
    }

    /// `β_j = σ_{s_1}⋯σ_{s_{j−1}}(e_{s_j})` along a word.
    pub fn prefix_roots(&self, word: &[usize]) -> Vec<Vec<i64>> {
        let mut prefix = identity(self.rank());
        word.iter()
            .map(|&s| {
                let beta = column(&prefix, s);
                prefix = mat_mul(&prefix, &self.gens[s]);
                beta
            })
            .collect()
    }

    /// `w·σ_s`. The word from the exchange condition and the canonical word
    /// read off the matrix must agree in length and matrix.
    pub fn multiply(&self, w: &CoxeterElement, s: usize) -> CoxeterElement {
        let matrix = mat_mul(&w.matrix, &self.gens[s]);
        let inverse = mat_mul(&self.gens[s], &w.inverse);
        let image = column(&w.matrix, s);
        let exchanged = if image.iter().all(|&x| x >= 0) {
            let mut word = w.word.clone();
            word.push(s);
            word
        } else {
            let target: Vec<i64> = image.iter().map(|x| -x).collect();
            let j = self
                .prefix_roots(&w.word)
                .iter()
                .position(|b| *b == target)
                .expect("strong exchange locates a letter");
            let mut word = w.word.clone();
            word.remove(j);
            word
        };
        let word = self.canonical_word(&matrix, &inverse);
        assert_eq!(word.len(), exchanged.len(), "exchange and canonical lengths disagree");
        assert_eq!(
            self.matrix_of_word(&exchanged),
            matrix,
            "exchange word has the wrong matrix"
        );
        CoxeterElement { word, matrix, inverse }
    }

    pub fn from_word(&self, word: &[usize]) -> CoxeterElement {
        word.iter().fold(self.identity(), |w, &s| self.multiply(&w, s))
    }

    /// Canonical forms of many words, in parallel.
    pub fn reduce_batch(&self, words: &[Vec<usize>]) -> Vec<CoxeterElement> {
        words.par_iter().map(|w| self.from_word(w)).collect()
    }

    /// 0-Hecke product: a letter that would shorten the element is absorbed.
    pub fn demazure_product(&self, word: &[usize]) -> CoxeterElement {
        word.iter().fold(self.identity(), |w, &s| {
            if self.is_right_descent(&w, s) {
                w
            } else {
                self.multiply(&w, s)
            }
        })
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.from_word(word).length() == word.len()
    }

    /// `σ_s² = 1`, `(σ_sσ_t)² = 1` for `m_st = 0`, `σ_sσ_tσ_s = σ_tσ_sσ_t`
    /// for `m_st = 1`, on matrices.
    pub fn check_presented_relations(&self) -> Vec<RelationReport> {
        let k = self.rank();
        let id = identity(k);
        let b = self.lattice.form_matrix();
        let mut out = Vec::new();
        for s in 0..k {
            out.push(RelationReport {
                generators: vec![s],
                relation: "s^2=1".into(),
                holds: self.matrix_of_word(&[s, s]) == id,
            });
            for t in s + 1..k {
                let (relation, holds) = match -b[s][t] {
                    0 => ("(st)^2=1", self.matrix_of_word(&[s, t, s, t]) == id),
                    1 => (
                        "sts=tst",
                        self.matrix_of_word(&[s, t, s]) == self.matrix_of_word(&[t, s, t]),
                    ),
                    _ => continue,
                };
                out.push(RelationReport {
                    generators: vec![s, t],
                    relation: relation.into(),
                    holds,
                });
            }
        }
        out
    }

    /// Positions where a commutation or braid move applies, with the move.
    fn moves(&self, word: &[usize]) -> Vec<(usize, Vec<usize>, usize)> {
        let b = self.lattice.form_matrix();
        let mut out = Vec::new();
        for p in 0..word.len() {
            if p + 1 < word.len() && word[p] != word[p + 1] && b[word[p]][word[p + 1]] == 0 {
                out.push((p, vec![word[p + 1], word[p]], 2));
            }
            if p + 2 < word.len() && word[p] == word[p + 2] && word[p] != word[p + 1] && b[word[p]][word[p + 1]] == -1 {
                out.push((p, vec![word[p + 1], word[p], word[p + 1]], 3));
            }
        }
        out
    }

    /// Applies `steps` random commutation/braid moves.
    pub fn random_moves<R: Rng + ?Sized>(&self, word: &[usize], steps: usize, rng: &mut R) -> Vec<usize> {
        let mut word = word.to_vec();
        for _ in 0..steps {
            let moves = self.moves(&word);
            if moves.is_empty() {
                break;
            }
            let (p, replacement, span) = moves[rng.gen_range(0..moves.len())].clone();
            word.splice(p..p + span, replacement);
        }
        word
    }

    /// All elements of length at most `max_len`.
    pub fn elements_up_to(&self, max_len: usize) -> Vec<CoxeterElement> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut layer = vec![self.identity()];
        seen.insert(Vec::new());
        let mut out = layer.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for s in 0..self.rank() {
                    if self.is_right_descent(w, s) {
                        continue;
                    }
                    let v = self.multiply(w, s);
                    if seen.insert(v.word.clone()) {
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// `[M] ∈ 𝒵` from composition multiplicities.
pub fn class_of_module(m: &Representation, family: &SimpleFamily) -> Result<Vec<i64>, CoxeterError> {
    match composition_vector(m, family)? {
        CompositionVector::Counts(c) => Ok(c),
        CompositionVector::Indeterminate => Err(CoxeterError::Indeterminate),
    }
}

/// Predicted class `σ_s([M])` of `I_S ⊗ M`.
pub fn predicted_tensor_class(
    lattice: &ClassLattice,
    s: usize,
    m: &Representation,
    family: &SimpleFamily,
) -> Result<Vec<i64>, CoxeterError> {
    Ok(lattice.sigma_action(s, &class_of_module(m, family)?))
}
