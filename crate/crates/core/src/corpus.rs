//! Deterministic corpora of representations for a quiver and weight, and
//! the built-in fixtures.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::field::Field;
use crate::io::{quiver_from_json, weight_from_json, IoError};
use crate::matrix::Matrix;
use crate::quiver::{DoubleQuiver, IntVector, Quiver};
use crate::reflection::{cokernel_functor_obj, ReflectError};
use crate::rep::{ext_complex, is_isomorphic, RepError, Representation};
use crate::roots::{apply_weight_word, pair_weight, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusConfig {
    pub seed: u64,
    /// Largest total dimension kept.
    pub max_total_dim: usize,
    /// Number of representations to stop at.
    pub size: usize,
    /// Entries of random maps lie in `[-radius, radius]`.
    pub radius: i64,
    /// Longest reflection word used to transport seeds.
    pub depth: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0x5eed,
            max_total_dim: 5,
            size: 48,
            radius: 2,
            depth: 3,
        }
    }
}

/// Random base maps, then star maps solving the (linear in stars) relations,
/// with a random kernel component added. `None` when the system is
/// inconsistent for the drawn base maps.
pub fn random_lift<R: Rng + ?Sized>(
    double: &Arc<DoubleQuiver>,
    weight: &Weight,
    dims: &IntVector,
    radius: i64,
    rng: &mut R,
) -> Option<Representation> {
    let field = weight.field();
    let n = double.vertex_count();
    let base_count = double.base().arrows().len();
    let arrows = double.arrows();
    let d = |i: usize| dims[i] as usize;
    let base: Vec<Matrix> = arrows[..base_count]
        .iter()
        .map(|a| {
            let data = (0..d(a.head) * d(a.tail)).map(|_| field.random(rng, radius)).collect();
            Matrix::from_vec(field, d(a.head), d(a.tail), data).expect("sized data")
        })
        .collect();
    // unknowns: entries of each star map a*: dims[t(a)] x dims[h(a)], row-major
    let mut offsets = Vec::with_capacity(base_count);
    let mut unknowns = 0;
    for a in &arrows[..base_count] {
        offsets.push(unknowns);
        unknowns += d(a.tail) * d(a.head);
    }
    let eq_offsets: Vec<usize> = (0..n)
        .scan(0, |acc, i| {
            let o = *acc;
            *acc += d(i) * d(i);
            Some(o)
        })
        .collect();
    let equations: usize = (0..n).map(|i| d(i) * d(i)).sum();
    let mut a_mat = Matrix::zeros(field, equations, unknowns);
    let mut rhs = Matrix::zeros(field, equations, 1);
    for i in 0..n {
        for r in 0..d(i) {
            rhs.set(eq_offsets[i] + r * d(i) + r, 0, weight.get(i).clone());
        }
    }
    let star_col = |k: usize, row: usize, col: usize, heads: usize| offsets[k] + row * heads + col;
    for (k, a) in arrows[..base_count].iter().enumerate() {
        let (h, t) = (a.head, a.tail);
        let m = &base[k];
        // + a·a* at the head: (r, c) += Σ_l a[r,l] a*[l,c]
        for r in 0..d(h) {
            for c in 0..d(h) {
                for l in 0..d(t) {
                    let row = eq_offsets[h] + r * d(h) + c;
                    let col = star_col(k, l, c, d(h));
                    let v = &a_mat.get(row, col).clone() + m.get(r, l);
                    a_mat.set(row, col, v);
                }
            }
        }
        // − a*·a at the tail: (r, c) −= Σ_l a*[r,l] a[l,c]
        for r in 0..d(t) {
            for c in 0..d(t) {
                for l in 0..d(h) {
                    let row = eq_offsets[t] + r * d(t) + c;
                    let col = star_col(k, r, l, d(h));
                    let v = &a_mat.get(row, col).clone() - m.get(l, c);
                    a_mat.set(row, col, v);
                }
            }
        }
    }
    let mut x = a_mat.solve_right(&rhs).ok()?;
    let kernel = a_mat.kernel_basis();
    for c in 0..kernel.cols() {
        let coeff = field.random(rng, radius);
        x = x.add(&kernel.select_columns(&[c]).scale(&coeff));
    }
    let mut maps = base;
    for (k, a) in arrows[..base_count].iter().enumerate() {
        let (h, t) = (d(a.head), d(a.tail));
        let data = (0..t * h).map(|e| x.get(offsets[k] + e, 0).clone()).collect();
        maps.push(Matrix::from_vec(field, t, h, data).expect("sized data"));
    }
    Representation::new(Arc::clone(double), weight.clone(), dims.clone(), maps).ok()
}

/// Invertible matrix with small random entries.
pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, radius: i64, rng: &mut R) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| field.random(rng, radius)).collect();
        let m = Matrix::from_vec(field, n, n, data).expect("sized data");
        if m.is_invertible() {
            return m;
        }
    }
}

/// Nonnegative vectors of height `1..=max` orthogonal to `w`, lex order.
fn orthogonal_dims(w: &Weight, max: usize) -> Vec<IntVector> {
    let n = w.len();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        let v = IntVector(cur.clone());
        let h = v.height() as usize;
        if h >= 1 && h <= max && pair_weight(w, &v).map(|s| s.is_zero()).unwrap_or(false) {
            out.push(v);
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                out.sort();
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur.iter().sum::<i64>() as usize <= max {
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// Words of length `1..=depth` with no letter repeated consecutively.
fn reflection_words(n: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..n {
                if w.last() != Some(&i) {
                    let mut x = w.clone();
                    x.push(i);
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Reflect(#[from] ReflectError),
    #[error("weight has {got} entries, quiver has {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Root(#[from] crate::roots::RootError),
}

struct Builder {
    kept: Vec<Representation>,
    cfg: CorpusConfig,
    /// Size limit of the current stage.
    cap: usize,
}

impl Builder {
    fn full(&self) -> bool {
        self.kept.len() >= self.cap
    }

    /// Keeps `m` unless it is zero, too large, or certified isomorphic to a
    /// kept representation.
    fn offer(&mut self, m: Representation) -> Result<(), CorpusError> {
        if self.full() || m.is_zero() || m.total_dim() > self.cfg.max_total_dim {
            return Ok(());
        }
        for k in &self.kept {
            if k.dims() == m.dims() && is_isomorphic(k, &m)?.is_yes() {
                return Ok(());
            }
        }
        self.kept.push(m);
        Ok(())
    }
}

/// Coordinate simples, random lifts, reflection-functor images of seeds from
/// the weight orbit, nonsplit extensions and direct sums; deduplicated up to
/// certified isomorphism and put in a random basis. Identical inputs give
/// identical output.
pub fn generate_corpus(q: &Quiver, w: &Weight, cfg: &CorpusConfig) -> Result<Vec<Representation>, CorpusError> {
    let n = q.vertex_count();
    if w.len() != n {
        return Err(CorpusError::Length {
            expected: n,
            got: w.len(),
        });
    }
    let field = w.field();
    let double = Arc::new(q.double());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut b = Builder {
        kept: Vec::new(),
        cfg: cfg.clone(),
        cap: cfg.size / 2,
    };
    let seeds = |weight: &Weight, max: usize, rng: &mut ChaCha8Rng| -> Vec<Representation> {
        let mut out: Vec<Representation> = (0..n)
            .filter(|&i| weight.get(i).is_zero())
            .filter_map(|i| Representation::coordinate_simple(Arc::clone(&double), weight.clone(), i).ok())
            .collect();
        // singleton supports only give semisimple modules
        for d in orthogonal_dims(weight, max) {
            if d.support().len() < 2 || !q.support_connected(&d) {
                continue;
            }
            out.extend(random_lift(&double, weight, &d, cfg.radius, rng));
        }
        out
    };
    for m in seeds(w, cfg.max_total_dim, &mut rng) {
        b.offer(m)?;
    }
    b.cap = cfg.size * 3 / 4;
    let loop_free: Vec<usize> = q.loop_free_vertices();
    for word in reflection_words(loop_free.len(), cfg.depth) {
        if b.full() {
            break;
        }
        let word: Vec<usize> = word.iter().map(|&k| loop_free[k]).collect();
        // seeds over r_{i_k}⋯r_{i_1} λ come back to λ under C_{i_1}⋯C_{i_k}
        let mut back = word.clone();
        back.reverse();
        let mu = apply_weight_word(q, &back, w)?;
        for s in seeds(&mu, 3, &mut rng) {
            let mut m = s;
            for &i in word.iter().rev() {
                m = cokernel_functor_obj(&m, i)?;
            }
            b.offer(m)?;
        }
    }
    b.cap = cfg.size * 7 / 8;
    let base: Vec<Representation> = b.kept.clone();
    for x in &base {
        for y in &base {
            if b.full() {
                break;
            }
            if x.total_dim() + y.total_dim() > cfg.max_total_dim {
                continue;
            }
            let ext = ext_complex(x, y)?;
            if let Some(phi) = ext.cocycles.first() {
                if let Ok(e) = crate::serre::extension_from_cochain(x, y, phi) {
                    b.offer(e)?;
                }
            }
        }
    }
    b.cap = cfg.size;
    for (k, x) in base.iter().enumerate() {
        for y in &base[k..] {
            if b.full() {
                break;
            }
            if x.total_dim() + y.total_dim() <= cfg.max_total_dim {
                b.offer(x.direct_sum(y)?)?;
            }
        }
    }
    b.kept
        .into_iter()
        .map(|m| {
            let g: Vec<Matrix> = (0..n)
                .map(|i| random_invertible(field, m.dim(i), cfg.radius, &mut rng))
                .collect();
            Ok(m.conjugate(&g)?)
        })
        .collect()
}

/// A quiver with the weights it is exercised at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub quiver: Quiver,
    pub weights: Vec<Weight>,
}

const FIXTURE_FILES: [&str; 3] = [
    include_str!("../fixtures/kronecker.json"),
    include_str!("../fixtures/a2tilde.json"),
    include_str!("../fixtures/d4tilde.json"),
];

pub fn fixture_from_json(v: &Value) -> Result<Fixture, IoError> {
    let name = v
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| IoError::Schema("fixture needs a \"name\"".into()))?
        .to_string();
    let field = Field::parse(v.get("field").and_then(Value::as_str).unwrap_or("Q"))?;
    let quiver = quiver_from_json(
        v.get("quiver")
            .ok_or_else(|| IoError::Schema("fixture needs a \"quiver\"".into()))?,
    )?;
    let weights = v
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| IoError::Schema("fixture needs \"weights\"".into()))?
        .iter()
        .map(|w| weight_from_json(field, w))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(w) = weights.iter().find(|w| w.len() != quiver.vertex_count()) {
        return Err(IoError::Schema(format!("weight {w} has the wrong length")));
    }
    Ok(Fixture { name, quiver, weights })
}

/// Kronecker, the cyclic `Ã_2`, and `D̃_4`.
pub fn builtin_fixtures() -> Vec<Fixture> {
    FIXTURE_FILES
        .iter()
        .map(|text| fixture_from_json(&serde_json::from_str(text).expect("fixture JSON")).expect("fixture"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::rep_to_json;

    #[test]
    fn lifts_satisfy_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for fx in builtin_fixtures() {
            let d = Arc::new(fx.quiver.double());
            for w in &fx.weights {
                let mut found = 0;
                for dims in orthogonal_dims(w, 3) {
                    if let Some(m) = random_lift(&d, w, &dims, 3, &mut rng) {
                        assert!(m.check_relations().iter().all(Matrix::is_zero));
                        assert_eq!(m.dims(), &dims);
                        found += 1;
                    }
                }
                assert!(found > 0, "{} {w}", fx.name);
            }
        }
    }

    #[test]
    fn orthogonal_dims_examples() {
        let w = Weight::from_i64(Field::Rationals, &[0, 2]);
        assert_eq!(
            orthogonal_dims(&w, 3),
            vec![IntVector(vec![1, 0]), IntVector(vec![2, 0]), IntVector(vec![3, 0])]
        );
        let w = Weight::from_i64(Field::Rationals, &[1, -1]);
        assert_eq!(
            orthogonal_dims(&w, 4),
            vec![IntVector(vec![1, 1]), IntVector(vec![2, 2])]
        );
    }

    #[test]
    fn fixtures_load() {
        let names: Vec<String> = builtin_fixtures().into_iter().map(|f| f.name).collect();
        assert_eq!(names, vec!["kronecker", "a2tilde", "d4tilde"]);
        assert!(builtin_fixtures().iter().all(|f| f.weights.len() == 3));
    }

    #[test]
    fn kronecker_corpus_contents() {
        let q = Quiver::kronecker();
        let w = Weight::zero(Field::Rationals, 2);
        let cfg = CorpusConfig {
            size: 10,
            ..CorpusConfig::default()
        };
        let corpus = generate_corpus(&q, &w, &cfg).unwrap();
        assert_eq!(corpus.len(), 10);
        let d = Arc::new(q.double());
        let s0 = Representation::coordinate_simple(d.clone(), w.clone(), 0).unwrap();
        let s1 = Representation::coordinate_simple(d, w.clone(), 1).unwrap();
        let has = |x: &Representation| {
            corpus
                .iter()
                .any(|m| m.dims() == x.dims() && is_isomorphic(m, x).unwrap().is_yes())
        };
        assert!(has(&s0) && has(&s1));
        assert!(corpus.iter().any(|m| m.total_dim() == 2));
        for (k, x) in corpus.iter().enumerate() {
            for y in &corpus[k + 1..] {
                assert!(x.dims() != y.dims() || !is_isomorphic(x, y).unwrap().is_yes());
            }
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let fx = &builtin_fixtures()[1];
        let cfg = CorpusConfig {
            size: 12,
            ..CorpusConfig::default()
        };
        let a = generate_corpus(&fx.quiver, &fx.weights[1], &cfg).unwrap();
        let b = generate_corpus(&fx.quiver, &fx.weights[1], &cfg).unwrap();
        let text = |c: &[Representation]| c.iter().map(|m| rep_to_json(m).to_string()).collect::<Vec<_>>();
        assert_eq!(text(&a), text(&b));
        assert_eq!(
            generate_corpus(&fx.quiver, &Weight::zero(Field::Rationals, 2), &cfg),
            Err(CorpusError::Length { expected: 3, got: 2 })
        );
    }
}
