//! The reflection functors `C_i` (cokernel) and `K_i` (kernel) on objects and
//! morphisms, their adjunction, and rigid simples built from reflection chains.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::field::Scalar;
use crate::matrix::{LinalgError, Matrix};
use crate::quiver::{IntVector, Quiver};
use crate::rep::{hom_basis, is_isomorphic, IsoOutcome, Morphism, RepError, Representation};
use crate::roots::{pair_weight, reflect_dim, reflect_weight, RootError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReflectError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("vertex {0} carries a loop")]
    LoopAtVertex(usize),
    #[error("weight vanishes at vertex {0}; the functor is not an equivalence there")]
    ZeroWeightAtVertex(usize),
    #[error("weights are not related by the reflection at vertex {0}")]
    WeightMismatch(usize),
    #[error("not a morphism between the given representations")]
    NotAMorphism,
    #[error("vertices {0} and {1} are joined by {2} arrows; no relation applies")]
    NoRelation(usize, usize, usize),
    #[error("{0} is not a positive vector orthogonal to the weight")]
    InvalidTarget(IntVector),
    #[error("no admissible reflection chain for {alpha} within depth {depth}")]
    NotReached { alpha: IntVector, depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Functor {
    C,
    K,
}

/// The maps `μ : V_i → V_⊕` and `π : V_⊕ → V_i` at a vertex, with
/// `V_⊕ = ⊕_{h(a)=i} V_{t(a)}` ordered by arrow id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionData {
    pub vertex: usize,
    pub in_arrows: Vec<usize>,
    /// Start of each in-arrow's block in `V_⊕`, plus the total at the end.
    pub offsets: Vec<usize>,
    pub mu: Matrix,
    pub pi: Matrix,
}

impl ReflectionData {
    pub fn new(v: &Representation, i: usize) -> Result<Self, ReflectError> {
        let q = v.quiver();
        q.check_vertex(i).map_err(RootError::from)?;
        if !q.is_loop_free(i) {
            return Err(ReflectError::LoopAtVertex(i));
        }
        let field = v.field();
        let double = v.double();
        let in_arrows = double.arrows_into(i);
        let mut offsets = vec![0];
        for &k in &in_arrows {
            offsets.push(offsets.last().unwrap() + v.dim(double.arrow(k).tail));
        }
        let stars: Vec<&Matrix> = in_arrows.iter().map(|&k| v.map(double.arrow(k).star)).collect();
        let signed: Vec<Matrix> = in_arrows
            .iter()
            .map(|&k| v.map(k).scale(&field.from_i64(double.arrow(k).epsilon)))
            .collect();
        let signed_refs: Vec<&Matrix> = signed.iter().collect();
        let mu = Matrix::vstack(field, v.dim(i), &stars);
        let pi = Matrix::hstack(field, v.dim(i), &signed_refs);
        assert_eq!(
            pi.mul(&mu),
            Matrix::scalar(field, v.dim(i), v.weight().get(i)),
            "π μ = λ_i fails on a validated representation"
        );
        Ok(ReflectionData {
            vertex: i,
            in_arrows,
            offsets,
            mu,
            pi,
        })
    }

    pub fn plus_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// `μ π − λ_i` on `V_⊕`.
    fn mu_pi_minus_lambda(&self, lambda_i: &Scalar) -> Matrix {
        let n = self.plus_dim();
        self.mu.mul(&self.pi).sub(&Matrix::scalar(self.mu.field(), n, lambda_i))
    }

    /// `⊕_{h(a)=i} f_{t(a)} : U_⊕ → V_⊕`.
    fn sum_of_blocks(&self, double: &crate::quiver::DoubleQuiver, f: &Morphism) -> Matrix {
        let parts: Vec<&Matrix> = self.in_arrows.iter().map(|&k| f.block(double.arrow(k).tail)).collect();
        Matrix::block_diag(self.mu.field(), &parts)
    }
}

struct CokernelParts {
    data: ReflectionData,
    c: Matrix,
    gamma: Matrix,
}

fn cokernel_parts(v: &Representation, i: usize) -> Result<CokernelParts, ReflectError> {
    let data = ReflectionData::new(v, i)?;
    let (c, s) = data.mu.cokernel_projection();
    let gamma = data.mu_pi_minus_lambda(v.weight().get(i)).mul(&s);
    Ok(CokernelParts { data, c, gamma })
}

struct KernelParts {
    data: ReflectionData,
    iota: Matrix,
    gamma: Matrix,
}

fn kernel_parts(v: &Representation, i: usize) -> Result<KernelParts, ReflectError> {
    let data = ReflectionData::new(v, i)?;
    let iota = data.pi.kernel_basis();
    let retraction = iota.solve_left(&Matrix::identity(v.field(), iota.cols()))?;
    let gamma = retraction.mul(&data.mu_pi_minus_lambda(v.weight().get(i)));
    Ok(KernelParts { data, iota, gamma })
}

/// Assembles the image representation. `into_i(pos)` gives the new map for
/// the in-arrow at position `pos`; `out_of_i(pos)` the new map for its star.
fn assemble(
    v: &Representation,
    data: &ReflectionData,
    new_dim: usize,
    into_i: impl Fn(usize) -> Matrix,
    out_of_i: impl Fn(usize) -> Matrix,
) -> Result<Representation, ReflectError> {
    let i = data.vertex;
    let double = v.double();
    let mut maps: Vec<Matrix> = v.maps().to_vec();
    for (pos, &k) in data.in_arrows.iter().enumerate() {
        maps[k] = into_i(pos);
        maps[double.arrow(k).star] = out_of_i(pos);
    }
    let mut dims = v.dims().clone();
    dims.0[i] = new_dim as i64;
    let weight = reflect_weight(v.quiver(), i, v.weight())?;
    Ok(Representation::new(Arc::clone(double), weight, dims, maps)?)
}

/// `C_i(V)`, a representation over `r_i λ`.
pub fn cokernel_functor_obj(v: &Representation, i: usize) -> Result<Representation, ReflectError> {
    let CokernelParts { data, c, gamma } = cokernel_parts(v, i)?;
    let field = v.field();
    let double = v.double();
    let o = &data.offsets;
    assemble(
        v,
        &data,
        c.rows(),
        |pos| {
            let eps = field.from_i64(double.arrow(data.in_arrows[pos]).epsilon);
            c.block(0, c.rows(), o[pos], o[pos + 1]).scale(&eps)
        },
        |pos| gamma.block(o[pos], o[pos + 1], 0, gamma.cols()),
    )
}

/// `K_i(V)`, a representation over `r_i λ`.
pub fn kernel_functor_obj(v: &Representation, i: usize) -> Result<Representation, ReflectError> {
    let KernelParts { data, iota, gamma } = kernel_parts(v, i)?;
    let field = v.field();
    let double = v.double();
    let o = &data.offsets;
    assemble(
        v,
        &data,
        iota.cols(),
        |pos| {
            let eps = field.from_i64(double.arrow(data.in_arrows[pos]).epsilon);
            gamma.block(0, gamma.rows(), o[pos], o[pos + 1]).scale(&eps)
        },
        |pos| iota.block(o[pos], o[pos + 1], 0, iota.cols()),
    )
}

pub fn apply_functor(which: Functor, v: &Representation, i: usize) -> Result<Representation, ReflectError> {
    match which {
        Functor::C => cokernel_functor_obj(v, i),
        Functor::K => kernel_functor_obj(v, i),
    }
}

/// The equivalence `E_i`, defined when `λ_i ≠ 0`.
pub fn equivalence_obj(v: &Representation, i: usize) -> Result<Representation, ReflectError> {
    if v.weight().get(i).is_zero() {
        return Err(ReflectError::ZeroWeightAtVertex(i));
    }
    cokernel_functor_obj(v, i)
}

/// Applies `F_{i_1} ∘ ⋯ ∘ F_{i_k}`, the rightmost letter first.
pub fn apply_functor_word(which: Functor, v: &Representation, word: &[usize]) -> Result<Representation, ReflectError> {
    word.iter()
        .rev()
        .try_fold(v.clone(), |acc, &i| apply_functor(which, &acc, i))
}

/// The image of `f : U → V` under `C_i` or `K_i`, as a morphism between the
/// images computed by [`apply_functor`].
pub fn functor_on_morphism(
    which: Functor,
    f: &Morphism,
    src: &Representation,
    tgt: &Representation,
    i: usize,
) -> Result<Morphism, ReflectError> {
    if !f.is_morphism(src, tgt) {
        return Err(ReflectError::NotAMorphism);
    }
    let double = src.double();
    let mut blocks = f.blocks().to_vec();
    blocks[i] = match which {
        Functor::C => {
            let u = cokernel_parts(src, i)?;
            let v = cokernel_parts(tgt, i)?;
            let f_plus = u.data.sum_of_blocks(double, f);
            // C(f)_i c^U = c^V F_⊕
            u.c.solve_left(&v.c.mul(&f_plus))?
        }
        Functor::K => {
            let u = kernel_parts(src, i)?;
            let v = kernel_parts(tgt, i)?;
            let f_plus = u.data.sum_of_blocks(double, f);
            // ι^V K(f)_i = F_⊕ ι^U
            v.iota.solve_right(&f_plus.mul(&u.iota))?
        }
    };
    Ok(Morphism::new(blocks))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    /// `dim Hom(C_i V, W)`.
    pub left_dim: usize,
    /// `dim Hom(V, K_i W)`.
    pub right_dim: usize,
    /// The map `f ↦ g` lands in morphisms, is invertible on bases, and the
    /// inverse construction undoes it.
    pub bijective: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.left_dim == self.right_dim && self.bijective
    }
}

/// Checks `Hom(C_i V, W) ≅ Hom(V, K_i W)` for `V` over `λ` and `W` over `r_i λ`
/// through the explicit bijection.
pub fn verify_adjunction(v: &Representation, w: &Representation, i: usize) -> Result<AdjunctionReport, ReflectError> {
    if reflect_weight(v.quiver(), i, v.weight())? != *w.weight() {
        return Err(ReflectError::WeightMismatch(i));
    }
    let cv = cokernel_functor_obj(v, i)?;
    let kw = kernel_functor_obj(w, i)?;
    let left = hom_basis(&cv, w)?.basis;
    let right = hom_basis(v, &kw)?.basis;
    let mut report = AdjunctionReport {
        left_dim: left.len(),
        right_dim: right.len(),
        bijective: false,
    };
    if left.len() != right.len() {
        return Ok(report);
    }
    let field = v.field();
    let cok = cokernel_parts(v, i)?;
    let ker = kernel_parts(w, i)?;
    let double = v.double();
    let forward = |f: &Morphism| -> Result<Morphism, ReflectError> {
        // ι^W g_i = F_⊕ μ^V
        let f_plus = cok.data.sum_of_blocks(double, f);
        let mut blocks = f.blocks().to_vec();
        blocks[i] = ker.iota.solve_right(&f_plus.mul(&cok.data.mu))?;
        Ok(Morphism::new(blocks))
    };
    let backward = |g: &Morphism| -> Result<Morphism, ReflectError> {
        // f_i c^V = π^W G_⊕
        let g_plus = cok.data.sum_of_blocks(double, g);
        let mut blocks = g.blocks().to_vec();
        blocks[i] = cok.c.solve_left(&ker.data.pi.mul(&g_plus))?;
        Ok(Morphism::new(blocks))
    };
    let mut images = Vec::with_capacity(left.len());
    for f in &left {
        let Ok(g) = forward(f) else {
            return Ok(report);
        };
        if !g.is_morphism(v, &kw) || backward(&g).ok().as_ref() != Some(f) {
            return Ok(report);
        }
        images.push(g.to_vector());
    }
    let basis: Vec<Vec<Scalar>> = right.iter().map(Morphism::to_vector).collect();
    let rows: usize = (0..v.dims().len()).map(|j| kw.dim(j) * v.dim(j)).sum();
    report.bijective = match columns(field, rows, &basis).solve_right(&columns(field, rows, &images)) {
        Ok(p) => p.is_invertible(),
        Err(_) => false,
    };
    Ok(report)
}

fn columns(field: crate::field::Field, rows: usize, vecs: &[Vec<Scalar>]) -> Matrix {
    let data = (0..rows).flat_map(|r| vecs.iter().map(move |x| x[r].clone())).collect();
    Matrix::from_vec(field, rows, vecs.len(), data).expect("sized data")
}

/// `C_i^{r_i λ} C_i^λ V ≅ V`, for `λ_i ≠ 0`.
pub fn verify_equivalence_roundtrip(v: &Representation, i: usize) -> Result<IsoOutcome, ReflectError> {
    if v.weight().get(i).is_zero() {
        return Err(ReflectError::ZeroWeightAtVertex(i));
    }
    let back = cokernel_functor_obj(&cokernel_functor_obj(v, i)?, i)?;
    Ok(is_isomorphic(v, &back)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidCheck {
    pub left_word: Vec<usize>,
    pub right_word: Vec<usize>,
    pub left: Representation,
    pub right: Representation,
    pub outcome: IsoOutcome,
}

/// The two words compared for vertices `i, j`: `ij = ji` without arrows,
/// `iji = jij` with a single arrow.
pub fn relation_words(q: &Quiver, i: usize, j: usize) -> Result<(Vec<usize>, Vec<usize>), ReflectError> {
    match q.arrows_between(i, j) {
        0 => Ok((vec![i, j], vec![j, i])),
        1 => Ok((vec![i, j, i], vec![j, i, j])),
        m => Err(ReflectError::NoRelation(i, j, m)),
    }
}

pub fn check_braid(which: Functor, v: &Representation, i: usize, j: usize) -> Result<BraidCheck, ReflectError> {
    let (left_word, right_word) = relation_words(v.quiver(), i, j)?;
    let left = apply_functor_word(which, v, &left_word)?;
    let right = apply_functor_word(which, v, &right_word)?;
    let outcome = is_isomorphic(&left, &right)?;
    Ok(BraidCheck {
        left_word,
        right_word,
        left,
        right,
        outcome,
    })
}

/// Searches loop-free vertices `i_1, …, i_k` with `s_{i_k} ⋯ s_{i_1} α = ε_j`,
/// every step taken at a vertex where the current weight is nonzero, ending
/// at a weight vanishing at `j`. Returns the word and `j`.
pub fn find_reflection_chain(
    q: &Quiver,
    w: &Weight,
    alpha: &IntVector,
    max_depth: usize,
) -> Result<Option<(Vec<usize>, usize)>, ReflectError> {
    type State = (Weight, IntVector);
    let target = |w: &Weight, a: &IntVector| -> Option<usize> {
        let s = a.support();
        (s.len() == 1 && a[s[0]] == 1 && w.get(s[0]).is_zero()).then(|| s[0])
    };
    let start: State = (w.clone(), alpha.clone());
    if let Some(j) = target(w, alpha) {
        return Ok(Some((Vec::new(), j)));
    }
    let mut parent: HashMap<State, (State, usize)> = HashMap::new();
    let mut depth: HashMap<State, usize> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start.clone()]);
    let loop_free = q.loop_free_vertices();
    while let Some(state) = queue.pop_front() {
        let d = depth[&state];
        if d == max_depth {
            continue;
        }
        for &i in &loop_free {
            if state.0.get(i).is_zero() {
                continue;
            }
            let a = reflect_dim(q, i, &state.1)?;
            if !a.is_positive() {
                continue;
            }
            let next: State = (reflect_weight(q, i, &state.0)?, a);
            if depth.contains_key(&next) {
                continue;
            }
            depth.insert(next.clone(), d + 1);
            parent.insert(next.clone(), (state.clone(), i));
            if let Some(j) = target(&next.0, &next.1) {
                let mut word = Vec::new();
                let mut cur = next;
                while let Some((prev, i)) = parent.get(&cur) {
                    word.push(*i);
                    cur = prev.clone();
                }
                word.reverse();
                return Ok(Some((word, j)));
            }
            queue.push_back(next);
        }
    }
    Ok(None)
}

/// A rigid simple of dimension `α` over `λ`: `S_j` over the end weight of a
/// reflection chain, carried back by the equivalences.
pub fn construct_rigid_simple(q: &Quiver, w: &Weight, alpha: &IntVector) -> Result<Representation, ReflectError> {
    if !alpha.is_positive() || !pair_weight(w, alpha)?.is_zero() {
        return Err(ReflectError::InvalidTarget(alpha.clone()));
    }
    let depth = 8 * alpha.height() as usize;
    let Some((word, j)) = find_reflection_chain(q, w, alpha, depth)? else {
        return Err(ReflectError::NotReached {
            alpha: alpha.clone(),
            depth,
        });
    };
    let mut weights = vec![w.clone()];
    for &i in &word {
        weights.push(reflect_weight(q, i, weights.last().unwrap())?);
    }
    let double = Arc::new(q.double());
    let mut rep = Representation::coordinate_simple(double, weights.last().unwrap().clone(), j)?;
    for &i in word.iter().rev() {
        rep = equivalence_obj(&rep, i)?;
    }
    debug_assert_eq!(rep.dims(), alpha);
    Ok(rep)
}
