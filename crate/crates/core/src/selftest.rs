//! Property suites over the fixtures. Each check reports instance counts and
//! the failing instances; the CLI and the acceptance test both run these.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{builtin_fixtures, generate_corpus, CorpusConfig, Fixture};
use crate::coxeter::{build_ext_quiver, decompose_gamma, delta_decomposition, CoxeterGroup, ExtQuiverData};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::quiver::{IntVector, Quiver, QuiverClass};
use crate::reflection::{
    check_braid, cokernel_functor_obj, construct_rigid_simple, kernel_functor_obj, relation_words, verify_adjunction,
    verify_equivalence_roundtrip, Functor, ReflectError,
};
use crate::rep::{ext1_dim_formula, ext_complex, hom_dim, is_isomorphic, Representation};
use crate::roots::{pair_weight, reflect_dim, reflect_weight, sigma_lambda_re, Weight};
use crate::serre::{
    all_representations, brute_force_chain_member, build_extension, chain_member, indecomposable_classes, serre_corpus,
    verify_star_relations, SerreChain, SimpleFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Linalg,
    Forms,
    Roots,
    Ext,
    Reflect,
    Braid,
    Serre,
    Coxeter,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Linalg,
        Suite::Forms,
        Suite::Roots,
        Suite::Ext,
        Suite::Reflect,
        Suite::Braid,
        Suite::Serre,
        Suite::Coxeter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Linalg => "linalg",
            Suite::Forms => "forms",
            Suite::Roots => "roots",
            Suite::Ext => "ext",
            Suite::Reflect => "reflect",
            Suite::Braid => "braid",
            Suite::Serre => "serre",
            Suite::Coxeter => "coxeter",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One invariant checked over many instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub min_instances: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, min_instances: usize, outcomes: Vec<Result<(), String>>) -> Check {
        let instances = outcomes.len();
        let mut failures: Vec<String> = outcomes.into_iter().filter_map(Result::err).collect();
        if instances < min_instances {
            failures.push(format!("only {instances} instances, need {min_instances}"));
        }
        Check {
            name: name.to_string(),
            instances,
            min_instances,
            passed: failures.is_empty(),
            failures,
        }
    }

    fn merge(name: &str, parts: Vec<Check>) -> Check {
        let instances = parts.iter().map(|c| c.instances).sum();
        let failures: Vec<String> = parts
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| format!("{}: {f}", c.name)))
            .collect();
        Check {
            name: name.to_string(),
            instances,
            min_instances: 0,
            passed: failures.is_empty(),
            failures,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Fixtures and their corpora, generated once.
pub struct Workbench {
    pub fixtures: Vec<Fixture>,
    pub corpus: CorpusConfig,
    pub seed: u64,
    corpora: OnceLock<Vec<Entry>>,
}

/// A corpus over one fixture weight.
pub struct Entry {
    pub fixture: usize,
    pub weight: Weight,
    pub reps: Vec<Representation>,
}

impl Workbench {
    pub fn new(fixtures: Vec<Fixture>, corpus: CorpusConfig, seed: u64) -> Self {
        Workbench {
            fixtures,
            corpus,
            seed,
            corpora: OnceLock::new(),
        }
    }

    /// Built-in fixtures with the default corpus configuration.
    pub fn builtin() -> Self {
        Workbench::new(builtin_fixtures(), CorpusConfig::default(), 0x5eed)
    }

    pub fn corpora(&self) -> &[Entry] {
        self.corpora.get_or_init(|| {
            let jobs: Vec<(usize, Weight)> = self
                .fixtures
                .iter()
                .enumerate()
                .flat_map(|(k, f)| f.weights.iter().map(move |w| (k, w.clone())))
                .collect();
            jobs.into_par_iter()
                .map(|(k, weight)| {
                    let reps =
                        generate_corpus(&self.fixtures[k].quiver, &weight, &self.corpus).expect("corpus generation");
                    Entry {
                        fixture: k,
                        weight,
                        reps,
                    }
                })
                .collect()
        })
    }

    fn quiver(&self, e: &Entry) -> &Quiver {
        &self.fixtures[e.fixture].quiver
    }

    fn label(&self, e: &Entry) -> String {
        format!("{} λ={}", self.fixtures[e.fixture].name, e.weight)
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn delta_of(q: &Quiver) -> Option<IntVector> {
    match q.classify() {
        Ok(QuiverClass::ExtendedDynkin { delta }) => Some(delta),
        _ => None,
    }
}

fn random_matrix<R: Rng>(field: Field, r: usize, c: usize, rng: &mut R) -> Matrix {
    let data = (0..r * c)
        .map(|_| {
            if rng.gen_bool(0.3) {
                field.zero()
            } else {
                field.random(rng, 4)
            }
        })
        .collect();
    Matrix::from_vec(field, r, c, data).expect("sized data")
}

/// Kernel, cokernel, solve and inverse identities on random matrices.
pub fn linalg_identities(wb: &Workbench) -> Check {
    let fields = [
        Field::Rationals,
        Field::prime(5).expect("prime"),
        Field::prime(2).expect("prime"),
    ];
    let outcomes = (0..300u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = wb.rng(k);
            let field = fields[k as usize % fields.len()];
            let (r, c) = (rng.gen_range(0..6), rng.gen_range(0..6));
            let a = random_matrix(field, r, c, &mut rng);
            let ker = a.kernel_basis();
            ensure(a.rank() + ker.cols() == c, || format!("rank-nullity on {r}x{c}"))?;
            ensure(a.mul(&ker).is_zero(), || "A·ker A ≠ 0".into())?;
            ensure(ker.rank() == ker.cols(), || "kernel basis dependent".into())?;
            let (proj, section) = a.cokernel_projection();
            ensure(proj.mul(&a).is_zero(), || "coker ∘ A ≠ 0".into())?;
            ensure(proj.mul(&section) == Matrix::identity(field, proj.rows()), || {
                "c·s ≠ I".into()
            })?;
            ensure(proj.rows() == r - a.rank(), || "cokernel dimension".into())?;
            let y = random_matrix(field, c, 2, &mut rng);
            let b = a.mul(&y);
            let x = a.solve_right(&b).map_err(|e| e.to_string())?;
            ensure(a.mul(&x) == b, || "solve_right".into())?;
            let z = random_matrix(field, 2, r, &mut rng);
            let b = z.mul(&a);
            let x = a.solve_left(&b).map_err(|e| e.to_string())?;
            ensure(x.mul(&a) == b, || "solve_left".into())?;
            let sq = random_matrix(field, c, c, &mut rng);
            if let Some(inv) = sq.inverse() {
                ensure(sq.mul(&inv) == Matrix::identity(field, c), || "inverse".into())?;
            } else {
                ensure(sq.rank() < c, || "invertible matrix without inverse".into())?;
            }
            Ok(())
        })
        .collect();
    Check::new("linear algebra identities", 300, outcomes)
}

/// Form symmetrization, reflection involutions and invariance, weight pairing,
/// and the classification of the fixture quivers.
pub fn form_identities(wb: &Workbench) -> Check {
    let mut outcomes = Vec::new();
    for (fi, fx) in wb.fixtures.iter().enumerate() {
        let q = &fx.quiver;
        let n = q.vertex_count();
        outcomes.push(ensure(delta_of(q).is_some(), || {
            format!("{} is not extended Dynkin", fx.name)
        }));
        let mut rng = wb.rng(100 + fi as u64);
        for _ in 0..40 {
            let a = IntVector((0..n).map(|_| rng.gen_range(-4..=4)).collect());
            let b = IntVector((0..n).map(|_| rng.gen_range(-4..=4)).collect());
            let i = rng.gen_range(0..n);
            outcomes.push((|| {
                let sym = q.symmetric_form(&a, &b).map_err(|e| e.to_string())?;
                let ringel = q.ringel_form(&a, &b).map_err(|e| e.to_string())?
                    + q.ringel_form(&b, &a).map_err(|e| e.to_string())?;
                ensure(sym == ringel, || format!("{}: (a,b) ≠ ⟨a,b⟩+⟨b,a⟩", fx.name))?;
                let sa = reflect_dim(q, i, &a).map_err(|e| e.to_string())?;
                let sb = reflect_dim(q, i, &b).map_err(|e| e.to_string())?;
                ensure(reflect_dim(q, i, &sa).map_err(|e| e.to_string())? == a, || {
                    "s_i not an involution".into()
                })?;
                ensure(q.symmetric_form(&sa, &sb).map_err(|e| e.to_string())? == sym, || {
                    "s_i changes the form".into()
                })?;
                for w in &fx.weights {
                    let rw = reflect_weight(q, i, w).map_err(|e| e.to_string())?;
                    ensure(reflect_weight(q, i, &rw).map_err(|e| e.to_string())? == *w, || {
                        "r_i not an involution".into()
                    })?;
                    let before = pair_weight(w, &a).map_err(|e| e.to_string())?;
                    let after = pair_weight(&rw, &sa).map_err(|e| e.to_string())?;
                    ensure(before == after, || format!("{}: r_iλ·s_iα ≠ λ·α", fx.name))?;
                }
                Ok(())
            })());
        }
    }
    Check::new("form and reflection identities", 100, outcomes)
}

/// Every corpus representation satisfies the deformed relations exactly.
pub fn relation_soundness(wb: &Workbench) -> Check {
    let outcomes = wb
        .corpora()
        .iter()
        .flat_map(|e| {
            e.reps.iter().map(move |m| {
                let bad: Vec<usize> = m
                    .check_relations()
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(i, _)| i)
                    .collect();
                ensure(bad.is_empty(), || {
                    format!("{} dims {}: vertices {bad:?}", wb.label(e), m.dims())
                })
            })
        })
        .collect();
    Check::new("relation soundness", 200, outcomes)
}

fn corpus_pairs(e: &Entry, cap: usize) -> Vec<(&Representation, &Representation)> {
    let n = e.reps.len();
    let mut pairs = Vec::new();
    for gap in 0..n {
        for a in 0..n - gap {
            if pairs.len() >= cap {
                return pairs;
            }
            pairs.push((&e.reps[a], &e.reps[a + gap]));
        }
    }
    pairs
}

/// `h1(M,N) = h1(N,M)`, `h2(M,N) = dim Hom(N,M)`, Euler characteristic equal to
/// `(Dim M, Dim N)`, and the Ext¹ formula agreeing with the complex.
pub fn two_cy_shadow(wb: &Workbench) -> Check {
    let jobs: Vec<(&Entry, &Representation, &Representation)> = wb
        .corpora()
        .iter()
        .flat_map(|e| corpus_pairs(e, 24).into_iter().map(move |(m, n)| (e, m, n)))
        .collect();
    let outcomes = jobs
        .into_par_iter()
        .map(|(e, m, n)| {
            let tag = || format!("{} {} vs {}", wb.label(e), m.dims(), n.dims());
            let mn = ext_complex(m, n).map_err(|x| x.to_string())?;
            let nm = ext_complex(n, m).map_err(|x| x.to_string())?;
            ensure(mn.h1 == nm.h1, || format!("{}: h1 {} ≠ {}", tag(), mn.h1, nm.h1))?;
            let hom_nm = hom_dim(n, m).map_err(|x| x.to_string())?;
            ensure(mn.h2 == hom_nm, || {
                format!("{}: h2 {} ≠ dim Hom(N,M) {}", tag(), mn.h2, hom_nm)
            })?;
            let form = wb
                .quiver(e)
                .symmetric_form(m.dims(), n.dims())
                .map_err(|x| x.to_string())?;
            ensure(mn.euler_characteristic() == form, || {
                format!("{}: Euler characteristic", tag())
            })?;
            let formula = ext1_dim_formula(m, n).map_err(|x| x.to_string())?;
            ensure(formula == mn.h1 as i64, || {
                format!("{}: formula {formula} ≠ {}", tag(), mn.h1)
            })
        })
        .collect();
    Check::new("2-CY shadow", 100, outcomes)
}

/// `Dim C_i(M) = s_i(Dim M)` whenever `λ_i ≠ 0`.
pub fn dimension_law(wb: &Workbench) -> Check {
    let jobs: Vec<(&Entry, &Representation, usize)> = wb
        .corpora()
        .iter()
        .flat_map(|e| {
            let q = wb.quiver(e);
            e.reps.iter().flat_map(move |m| {
                (0..q.vertex_count())
                    .filter(move |&i| !e.weight.get(i).is_zero() && q.is_loop_free(i))
                    .map(move |i| (e, m, i))
            })
        })
        .collect();
    let outcomes = jobs
        .into_par_iter()
        .map(|(e, m, i)| {
            let c = cokernel_functor_obj(m, i).map_err(|x| x.to_string())?;
            let expected = reflect_dim(wb.quiver(e), i, m.dims()).map_err(|x| x.to_string())?;
            ensure(*c.dims() == expected, || {
                format!("{} {} at {i}: got {}", wb.label(e), m.dims(), c.dims())
            })
        })
        .collect();
    Check::new("reflection dimension law", 50, outcomes)
}

/// `dim Hom(C_i V, W) = dim Hom(V, K_i W)` with `W` over `r_iλ`, and the
/// constructed correspondence bijective.
pub fn adjunction(wb: &Workbench) -> Check {
    let mut jobs = Vec::new();
    for e in wb.corpora() {
        let q = wb.quiver(e);
        for i in (0..q.vertex_count()).filter(|&i| q.is_loop_free(i)) {
            for (a, v) in e.reps.iter().enumerate().take(4) {
                for w in e.reps.iter().skip(a % 3).step_by(3).take(2) {
                    jobs.push((e, v, w, i));
                }
            }
        }
    }
    let outcomes = jobs
        .into_par_iter()
        .map(|(e, v, w_src, i)| {
            let w = cokernel_functor_obj(w_src, i).map_err(|x| x.to_string())?;
            let r = verify_adjunction(v, &w, i).map_err(|x| x.to_string())?;
            ensure(r.holds(), || {
                format!("{} {} vs {} at {i}: {r:?}", wb.label(e), v.dims(), w.dims())
            })
        })
        .collect();
    Check::new("adjunction", 50, outcomes)
}

/// `C_i C_i V ≅ V` and `C_i V ≅ K_i V` with certified witnesses when `λ_i ≠ 0`.
pub fn equivalence_roundtrip(wb: &Workbench) -> Check {
    let jobs: Vec<(&Entry, &Representation, usize)> = wb
        .corpora()
        .iter()
        .flat_map(|e| {
            let q = wb.quiver(e);
            e.reps.iter().flat_map(move |m| {
                (0..q.vertex_count())
                    .filter(move |&i| !e.weight.get(i).is_zero() && q.is_loop_free(i))
                    .map(move |i| (e, m, i))
            })
        })
        .collect();
    let outcomes = jobs
        .into_par_iter()
        .map(|(e, m, i)| {
            let tag = || format!("{} {} at {i}", wb.label(e), m.dims());
            let back = verify_equivalence_roundtrip(m, i).map_err(|x| x.to_string())?;
            ensure(back.is_yes(), || format!("{}: C_iC_i V ≇ V", tag()))?;
            let c = cokernel_functor_obj(m, i).map_err(|x| x.to_string())?;
            let k = kernel_functor_obj(m, i).map_err(|x| x.to_string())?;
            ensure(is_isomorphic(&c, &k).map_err(|x| x.to_string())?.is_yes(), || {
                format!("{}: C_i V ≇ K_i V", tag())
            })
        })
        .collect();
    Check::new("equivalence round-trip", 50, outcomes)
}

/// Braid and commutation relations for `C` on `Ã_2` and `D̃_4`.
pub fn braid_relations(wb: &Workbench) -> Check {
    let mut jobs = Vec::new();
    for e in wb.corpora() {
        if !matches!(wb.fixtures[e.fixture].name.as_str(), "a2tilde" | "d4tilde") {
            continue;
        }
        let q = wb.quiver(e);
        let n = q.vertex_count();
        for (k, m) in e.reps.iter().enumerate().filter(|(_, m)| m.total_dim() <= 3).take(8) {
            // rotate through vertex pairs so each rep sees a few of them
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| relation_words(q, i, j).is_ok())
                .collect();
            for t in 0..3.min(pairs.len()) {
                jobs.push((e, m, pairs[(k + t * 2) % pairs.len()]));
            }
        }
    }
    let reps: HashSet<(usize, usize)> = jobs
        .iter()
        .map(|(e, m, _)| (e as *const _ as usize, *m as *const _ as usize))
        .collect();
    let weights: BTreeSet<String> = jobs.iter().map(|(e, _, _)| wb.label(e)).collect();
    let zero_weights = jobs
        .iter()
        .filter(|(e, _, _)| e.weight.coords().iter().any(|x| x.is_zero()))
        .map(|(e, _, _)| wb.label(e))
        .collect::<BTreeSet<_>>()
        .len();
    let mut outcomes: Vec<Result<(), String>> = jobs
        .into_par_iter()
        .map(|(e, m, (i, j))| {
            let b = check_braid(Functor::C, m, i, j).map_err(|x| x.to_string())?;
            ensure(b.outcome.is_yes(), || {
                format!(
                    "{} {}: {:?} vs {:?} not certified",
                    wb.label(e),
                    m.dims(),
                    b.left_word,
                    b.right_word
                )
            })
        })
        .collect();
    outcomes.push(ensure(reps.len() >= 30, || {
        format!("only {} distinct reps", reps.len())
    }));
    outcomes.push(ensure(weights.len() >= 3, || format!("only {} weights", weights.len())));
    outcomes.push(ensure(zero_weights >= 1, || "no weight with a zero coordinate".into()));
    Check::new("braid relations", 30, outcomes)
}

/// `Σ_λ^re` agrees at bounds `3δ` and `10δ`; members lie below `δ` when
/// `λ·δ = 0`; for `λ = 0` they are the loop-free coordinate vectors.
pub fn sigma_stabilization(wb: &Workbench) -> Check {
    let jobs: Vec<(usize, &Weight)> = wb
        .fixtures
        .iter()
        .enumerate()
        .flat_map(|(k, f)| f.weights.iter().map(move |w| (k, w)))
        .collect();
    let outcomes = jobs
        .into_par_iter()
        .map(|(k, w)| {
            let fx = &wb.fixtures[k];
            let q = &fx.quiver;
            let tag = format!("{} λ={w}", fx.name);
            let delta = delta_of(q).ok_or_else(|| format!("{tag}: not extended Dynkin"))?;
            let small = sigma_lambda_re(q, w, &delta.scale(3)).map_err(|x| x.to_string())?;
            let large = sigma_lambda_re(q, w, &delta.scale(10)).map_err(|x| x.to_string())?;
            ensure(small == large, || format!("{tag}: {small:?} at 3δ vs {large:?} at 10δ"))?;
            if pair_weight(w, &delta).map_err(|x| x.to_string())?.is_zero() {
                ensure(small.iter().all(|a| a.strictly_below(&delta)), || {
                    format!("{tag}: member not below δ")
                })?;
            }
            if w.is_zero() {
                let units: Vec<IntVector> = q
                    .loop_free_vertices()
                    .into_iter()
                    .map(|i| IntVector::unit(q.vertex_count(), i))
                    .collect();
                let mut sorted = units.clone();
                sorted.sort();
                ensure(small == sorted, || {
                    format!("{tag}: {small:?} is not the coordinate vectors")
                })?;
            }
            Ok(())
        })
        .collect();
    Check::new("Σ_λ^re stabilization", 9, outcomes)
}

/// Rigid simples built by reflection functors for each `α ∈ Σ_λ^re`.
pub fn rigid_simple_construction(wb: &Workbench) -> Check {
    let jobs: Vec<(usize, &Weight, IntVector)> = wb
        .fixtures
        .iter()
        .enumerate()
        .flat_map(|(k, f)| {
            let delta = delta_of(&f.quiver).unwrap_or_else(|| IntVector::zero(f.quiver.vertex_count()));
            f.weights.iter().flat_map(move |w| {
                sigma_lambda_re(&f.quiver, w, &delta.scale(3))
                    .unwrap_or_default()
                    .into_iter()
                    .map(move |a| (k, w, a))
            })
        })
        .collect();
    let outcomes = jobs
        .into_par_iter()
        .map(|(k, w, a)| {
            let fx = &wb.fixtures[k];
            let tag = format!("{} λ={w} α={a}", fx.name);
            let m = match construct_rigid_simple(&fx.quiver, w, &a) {
                Ok(m) => m,
                Err(ReflectError::NotReached { .. }) => return Err(format!("{tag}: not reached")),
                Err(x) => return Err(format!("{tag}: {x}")),
            };
            ensure(*m.dims() == a, || format!("{tag}: dims {}", m.dims()))?;
            ensure(hom_dim(&m, &m).map_err(|x| x.to_string())? == 1, || {
                format!("{tag}: End ≠ K")
            })?;
            ensure(ext_complex(&m, &m).map_err(|x| x.to_string())?.h1 == 0, || {
                format!("{tag}: Ext¹ ≠ 0")
            })
        })
        .collect();
    Check::new("rigid simple construction", 1, outcomes)
}

/// The Ext-quiver of the rigid simples for each fixture weight with
/// `λ·δ = 0`, or `None` when `Σ_λ^re` is empty.
pub fn fixture_ext_quivers(wb: &Workbench) -> Vec<(String, usize, Weight, Option<ExtQuiverData>)> {
    let jobs: Vec<(usize, &Weight)> = wb
        .fixtures
        .iter()
        .enumerate()
        .flat_map(|(k, f)| f.weights.iter().map(move |w| (k, w)))
        .filter(|(k, w)| {
            let q = &wb.fixtures[*k].quiver;
            delta_of(q).is_some_and(|d| pair_weight(w, &d).is_ok_and(|s| s.is_zero()))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(k, w)| {
            let fx = &wb.fixtures[k];
            let delta = delta_of(&fx.quiver).expect("extended Dynkin");
            let roots = sigma_lambda_re(&fx.quiver, w, &delta.scale(3)).expect("roots");
            let eq = if roots.is_empty() {
                None
            } else {
                let entries = roots
                    .iter()
                    .map(|a| {
                        (
                            a.to_string(),
                            construct_rigid_simple(&fx.quiver, w, a).expect("rigid simple"),
                        )
                    })
                    .collect();
                Some(build_ext_quiver(&SimpleFamily::new(entries).expect("family")).expect("ext quiver"))
            };
            (format!("{} λ={w}", fx.name), k, w.clone(), eq)
        })
        .collect()
}

/// Symmetric loop-free Ext-quiver, extended Dynkin components of `Γ`, the
/// pulled-back quadratic form, `Σ δ′_i α_i = δ`, and `Q(𝓡) = Q̄` at `λ = 0`.
pub fn ext_quiver_structure(wb: &Workbench) -> Check {
    let mut outcomes = Vec::new();
    for (tag, k, w, eq) in fixture_ext_quivers(wb) {
        let q = &wb.fixtures[k].quiver;
        let Some(eq) = eq else {
            continue;
        };
        let m = eq.m();
        outcomes.push(ensure(
            (0..eq.len()).all(|i| m[i][i] == 0 && (0..eq.len()).all(|j| m[i][j] == m[j][i])),
            || format!("{tag}: not symmetric and loop-free"),
        ));
        for c in decompose_gamma(&eq) {
            outcomes.push(ensure(matches!(c.class, QuiverClass::ExtendedDynkin { .. }), || {
                format!("{tag}: component {:?} is {:?}", c.vertices, c.class)
            }));
        }
        match delta_decomposition(&eq, q) {
            Ok(certs) => outcomes.extend(
                certs
                    .into_iter()
                    .map(|c| ensure(c.holds, || format!("{tag}: Σδ′α = {:?} on {:?}", c.image, c.vertices))),
            ),
            Err(x) => outcomes.push(Err(format!("{tag}: {x}"))),
        }
        let mut rng = wb.rng(800 + k as u64);
        for _ in 0..40 {
            let d: Vec<i64> = (0..eq.len()).map(|_| rng.gen_range(-3..=3)).collect();
            let pulled = eq.combine_roots(&d).ok().and_then(|v| q.quadratic_form(&v).ok());
            outcomes.push(ensure(pulled == Some(eq.quadratic_form(&d)), || {
                format!("{tag}: q_Γ({d:?})")
            }));
        }
        if w.is_zero() {
            // the simple labelled ε_v sits at vertex v
            let n = q.vertex_count();
            let vertex: Vec<Option<usize>> = eq
                .roots()
                .unwrap_or_default()
                .iter()
                .map(|a| (0..n).find(|&v| *a == IntVector::unit(n, v)))
                .collect();
            let double_counts = vertex.iter().all(Option::is_some)
                && (0..eq.len()).all(|k| {
                    (0..eq.len()).all(|l| {
                        let (i, j) = (vertex[k].unwrap_or(0), vertex[l].unwrap_or(0));
                        m[k][l] == if k == l { 0 } else { q.arrows_between(i, j) as i64 }
                    })
                });
            outcomes.push(ensure(eq.len() == n && double_counts, || format!("{tag}: Q(𝓡) ≠ Q̄")));
        }
    }
    Check::new("Ext-quiver structure", 100, outcomes)
}

fn d4_family(field: Field) -> SimpleFamily {
    let q = Quiver::star(4);
    let d = Arc::new(q.double());
    let w = Weight::zero(field, 5);
    SimpleFamily::new(vec![
        (
            "S".into(),
            Representation::coordinate_simple(d.clone(), w.clone(), 0).expect("simple"),
        ),
        ("T".into(), Representation::coordinate_simple(d, w, 1).expect("simple")),
    ])
    .expect("family")
}

/// Greedy chain membership against subspace enumeration over `F_2` on every
/// `D̃_4` module of total dimension at most 4, and the indecomposables of
/// `𝓔({S,T})`.
pub fn serre_oracle(_wb: &Workbench) -> Check {
    let f2 = Field::prime(2).expect("prime");
    let fam = d4_family(f2);
    let base = fam.get(0);
    let mut dims = Vec::new();
    for d0 in 0..=4i64 {
        for d1 in 0..=4 - d0 {
            for d2 in 0..=4 - d0 - d1 {
                for d3 in 0..=4 - d0 - d1 - d2 {
                    for d4 in 0..=4 - d0 - d1 - d2 - d3 {
                        let v = IntVector(vec![d0, d1, d2, d3, d4]);
                        if !v.is_zero() {
                            dims.push(v);
                        }
                    }
                }
            }
        }
    }
    let chains: Vec<SerreChain> = (1..=3)
        .flat_map(|len| {
            (0..1u32 << len).map(move |bits| SerreChain {
                layers: (0..len).map(|k| ((bits >> k) & 1) as usize).collect(),
            })
        })
        .collect();
    let mut outcomes: Vec<Result<(), String>> = dims
        .par_iter()
        .flat_map_iter(|d| {
            let reps = all_representations(base.double(), base.weight(), d).expect("enumeration");
            let chains = &chains;
            let fam = &fam;
            reps.into_iter().map(move |m| {
                for c in chains {
                    let greedy = chain_member(&m, fam, c).map_err(|x| x.to_string())?;
                    let brute = brute_force_chain_member(&m, fam, c).map_err(|x| x.to_string())?;
                    ensure(greedy == brute, || {
                        format!("dims {} chain {:?}: greedy {greedy}", m.dims(), c.layers)
                    })?;
                }
                Ok(())
            })
        })
        .collect();
    let (s, t) = (fam.get(0), fam.get(1));
    let expected = [
        s.clone(),
        t.clone(),
        build_extension(s, t, 0).expect("extension"),
        build_extension(t, s, 0).expect("extension"),
    ];
    let classes = serre_corpus(&fam, 4).and_then(|c| indecomposable_classes(&c));
    outcomes.push(match classes {
        Ok(classes) => {
            let matched = |x: &Representation, pool: &[Representation]| {
                pool.iter()
                    .any(|c| c.dims() == x.dims() && is_isomorphic(c, x).is_ok_and(|o| o.is_yes()))
            };
            ensure(
                classes.len() == expected.len() && expected.iter().all(|x| matched(x, &classes)),
                || {
                    format!(
                        "indecomposables have dims {:?}",
                        classes.iter().map(|c| c.dims().to_string()).collect::<Vec<_>>()
                    )
                },
            )
        }
        Err(x) => Err(x.to_string()),
    });
    Check::new("Serre oracle equivalence", 1000, outcomes)
}

/// The relations `[S,S] = [S]` and `[S,T,S] = [T,S,T]` or `[S,T] = [T,S]` on
/// two-simple `D̃_4` categories.
pub fn serre_relations(_wb: &Workbench) -> Check {
    let f2 = Field::prime(2).expect("prime");
    let q = Quiver::star(4);
    let d = Arc::new(q.double());
    let w = Weight::zero(f2, 5);
    let simple = |i: usize| Representation::coordinate_simple(d.clone(), w.clone(), i).expect("simple");
    let outcomes = [(0, 1), (1, 2), (0, 4), (3, 4)]
        .into_iter()
        .flat_map(|(a, b)| {
            let fam = SimpleFamily::new(vec![("S".into(), simple(a)), ("T".into(), simple(b))]).expect("family");
            match verify_star_relations(&fam, 4) {
                Ok(r) => r
                    .checks
                    .into_iter()
                    .map(|c| {
                        ensure(c.counterexamples.is_empty(), || {
                            format!("S_{a},S_{b} {}: {:?}", c.name, c.counterexamples)
                        })
                    })
                    .collect::<Vec<_>>(),
                Err(x) => vec![Err(x.to_string())],
            }
        })
        .collect();
    Check::new("Serre chain relations", 12, outcomes)
}

/// Presented relations on generator matrices, canonical form under random
/// moves, faithfulness at small length, and the Demazure relations.
pub fn coxeter_calculus(wb: &Workbench) -> Check {
    let mut quivers: Vec<(String, ExtQuiverData)> = fixture_ext_quivers(wb)
        .into_iter()
        .filter_map(|(tag, _, _, eq)| eq.map(|e| (tag, e)))
        .collect();
    quivers.push((
        "A_3 + A_1".into(),
        ExtQuiverData::new(
            (0..4).map(|i| format!("s{i}")).collect(),
            vec![vec![0, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 0]],
        )
        .expect("valid"),
    ));
    let mut outcomes = Vec::new();
    let groups: Vec<(String, CoxeterGroup)> = quivers.iter().map(|(t, e)| (t.clone(), CoxeterGroup::new(e))).collect();
    for (tag, g) in &groups {
        for r in g.check_presented_relations() {
            outcomes.push(ensure(r.holds, || {
                format!("{tag}: {} on {:?}", r.relation, r.generators)
            }));
        }
        let k = g.rank();
        let b = g.lattice().form_matrix();
        for s in 0..k {
            outcomes.push(ensure(g.demazure_product(&[s, s]) == g.from_word(&[s]), || {
                format!("{tag}: [s,s] ≠ [s]")
            }));
            for t in s + 1..k {
                match -b[s][t] {
                    0 => outcomes.push(ensure(
                        g.demazure_product(&[s, t]) == g.demazure_product(&[t, s]),
                        || format!("{tag}: [{s},{t}] ≠ [{t},{s}]"),
                    )),
                    1 => outcomes.push(ensure(
                        g.demazure_product(&[s, t, s]) == g.demazure_product(&[t, s, t]),
                        || format!("{tag}: braid fails for {s},{t}"),
                    )),
                    _ => {}
                }
            }
        }
    }
    let small: Vec<&(String, CoxeterGroup)> = groups.iter().filter(|(_, g)| g.rank() <= 5 && g.rank() > 0).collect();
    let mut rng = wb.rng(1000);
    let sequences: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..1000)
        .map(|_| {
            let gi = rng.gen_range(0..small.len());
            let g = &small[gi].1;
            let len = rng.gen_range(1..=10);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.rank())).collect();
            let steps = rng.gen_range(1..=20);
            let moved = g.random_moves(&word, steps, &mut rng);
            (gi, word, moved)
        })
        .collect();
    let moved: Vec<Result<(), String>> = sequences
        .into_par_iter()
        .map(|(gi, word, moved)| {
            let (tag, g) = small[gi];
            let (a, b) = (g.from_word(&word), g.from_word(&moved));
            ensure(a == b, || format!("{tag}: {word:?} and {moved:?} differ"))?;
            ensure(g.demazure_product(&word) == g.demazure_product(&moved), || {
                format!("{tag}: Demazure differs on {word:?}")
            })
        })
        .collect();
    outcomes.extend(moved);
    let faithful: Vec<Result<(), String>> = small
        .par_iter()
        .map(|(tag, g)| {
            let elems = g.elements_up_to(8);
            let mats: HashSet<_> = elems.iter().map(|e| e.matrix().clone()).collect();
            ensure(mats.len() == elems.len(), || {
                format!("{tag}: {} elements, {} matrices", elems.len(), mats.len())
            })?;
            for e in &elems {
                ensure(
                    g.prefix_roots(e.word()).iter().all(|b| b.iter().all(|&x| x >= 0)),
                    || format!("{tag}: non-positive prefix root on {:?}", e.word()),
                )?;
                ensure(g.demazure_product(e.word()) == *e, || {
                    format!("{tag}: Demazure of reduced {:?}", e.word())
                })?;
            }
            Ok(())
        })
        .collect();
    outcomes.extend(faithful);
    Check::new("Coxeter calculus", 1000, outcomes)
}

/// Checks for one suite; `All` runs every suite.
pub fn suite_checks(wb: &Workbench, suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Linalg => vec![linalg_identities(wb)],
        Suite::Forms => vec![form_identities(wb)],
        Suite::Roots => vec![sigma_stabilization(wb), rigid_simple_construction(wb)],
        Suite::Ext => vec![relation_soundness(wb), two_cy_shadow(wb)],
        Suite::Reflect => vec![dimension_law(wb), adjunction(wb), equivalence_roundtrip(wb)],
        Suite::Braid => vec![braid_relations(wb)],
        Suite::Serre => vec![serre_oracle(wb), serre_relations(wb)],
        Suite::Coxeter => vec![ext_quiver_structure(wb), coxeter_calculus(wb)],
        Suite::All => Suite::EACH.iter().flat_map(|&s| suite_checks(wb, s)).collect(),
    }
}

/// Runs a suite on a pool of `jobs` threads.
pub fn run(wb: &Workbench, suite: Suite, jobs: usize) -> Report {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let checks = pool.install(|| suite_checks(wb, suite));
    Report {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// A check that all parts passed, named after the whole.
pub fn combine(name: &str, parts: Vec<Check>) -> Check {
    Check::merge(name, parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn check_counts_failures_and_minimums() {
        let c = Check::new("x", 3, vec![Ok(()), Err("bad".into())]);
        assert!(!c.passed);
        assert_eq!(c.failures.len(), 2);
        let c = Check::new("y", 1, vec![Ok(())]);
        assert!(c.passed);
        let m = combine("z", vec![c, Check::new("w", 0, vec![Err("e".into())])]);
        assert_eq!(m.failures, vec!["w: e".to_string()]);
    }

    #[test]
    fn linalg_and_forms_pass() {
        let wb = Workbench::builtin();
        assert!(linalg_identities(&wb).passed);
        let f = form_identities(&wb);
        assert!(f.passed, "{:?}", f.failures);
    }

    #[test]
    fn tampered_fixture_corpus_is_caught() {
        let wb = Workbench::builtin();
        let q = Field::Rationals;
        let mut caught = 0;
        for m in wb.corpora().iter().flat_map(|e| &e.reps) {
            for a in m.double().arrows() {
                let x = m.map_by_id(&a.id).unwrap();
                if x.rows() * x.cols() == 0 {
                    continue;
                }
                let mut v = crate::io::rep_to_json(m);
                let bumped = x.get(0, 0) + &q.one();
                v["maps"][&a.id][0][0] = serde_json::json!(bumped.to_string());
                if let Err(err) = crate::io::rep_from_json(&v) {
                    assert!(err.to_string().contains("vertex"), "{err}");
                    caught += 1;
                }
            }
        }
        assert!(caught > 100);
    }
}
