use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use preproj::corpus::{fixture_from_json, generate_corpus, CorpusConfig, Fixture};
use preproj::coxeter::{
    build_ext_quiver, decompose_gamma, delta_decomposition, sigma_family, CoxeterElement, CoxeterGroup,
};
use preproj::field::Field;
use preproj::io::{
    ext_quiver_to_json, load_ext_quiver, load_family, load_reps, matrix_to_json, parse_int_vector, parse_weight,
    quiver_from_json, read_json, rep_from_json, rep_to_json, weight_to_json, write_json, write_reps,
};
use preproj::quiver::{IntVector, Quiver, QuiverClass};
use preproj::reflection::{apply_functor, check_braid, equivalence_obj, relation_words, Functor};
use preproj::rep::{ext1_dim_formula, ext_complex, hom_basis, IsoOutcome, Morphism, Representation};
use preproj::roots::{enumerate_positive_real_roots, enumerate_positive_roots, sigma_lambda_re, Weight};
use preproj::selftest::{self, Suite, Workbench};
use preproj::serre::{brute_force_chain_member, chain_member, composition_vector, decomposition_kind};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "preproj",
    version,
    about = "Exact computations for deformed preprojective algebras"
)]
struct Cli {
    /// Also write the result to this file (a directory for `corpus generate`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Quiver(QuiverCmd),
    #[command(subcommand)]
    Roots(RootsCmd),
    #[command(subcommand)]
    Sigma(SigmaCmd),
    #[command(subcommand)]
    Rep(RepCmd),
    #[command(subcommand)]
    Reflect(ReflectCmd),
    #[command(subcommand)]
    Braid(BraidCmd),
    #[command(subcommand)]
    Extquiver(ExtquiverCmd),
    #[command(subcommand)]
    Coxeter(CoxeterCmd),
    #[command(subcommand)]
    Serre(SerreCmd),
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Run a property suite over the built-in or given fixtures.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum QuiverCmd {
    /// Dynkin, extended Dynkin (with δ) or neither.
    Classify {
        #[arg(long)]
        quiver: PathBuf,
    },
}

#[derive(Subcommand)]
enum RootsCmd {
    /// Positive roots below a box bound.
    Enum {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long)]
        bound: String,
        /// Only real roots.
        #[arg(long)]
        real: bool,
        /// Emit `{vector, kind}` objects instead of bare vectors.
        #[arg(long)]
        kinds: bool,
    },
}

#[derive(Subcommand)]
enum SigmaCmd {
    /// Members of Σ_λ^re below a bound (default 3δ on extended Dynkin quivers).
    Enum {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Rigid simples realizing Σ_λ^re, written to --out as S1.json, S2.json, ...
    Family {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        bound: Option<String>,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Load a representation and report its shape.
    Check {
        #[arg(long)]
        rep: PathBuf,
    },
    /// A basis of Hom(M, N).
    Hom(PairArgs),
    /// The Ext complex between two representations.
    Ext1(PairArgs),
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctorArg {
    C,
    K,
    E,
}

#[derive(Subcommand)]
enum ReflectCmd {
    Apply {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_enum, ignore_case = true)]
        functor: FunctorArg,
    },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Checks the braid relations of the functors on every corpus member.
    Verify {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum, ignore_case = true, default_value = "c")]
        functor: FunctorArg,
    },
}

#[derive(Subcommand)]
enum ExtquiverCmd {
    Build {
        #[arg(long)]
        family: PathBuf,
        /// Also split Γ into components and test Σ δ′_i α_i = δ.
        #[arg(long)]
        decompose: bool,
    },
}

#[derive(Subcommand)]
enum CoxeterCmd {
    /// Lex-least reduced word of each given word.
    Reduce(WordArgs),
    /// Demazure product of each given word.
    Demazure(WordArgs),
}

#[derive(Args)]
struct WordArgs {
    /// Comma-separated generators, by label or as s1, s2, ...; repeatable.
    #[arg(long, required = true)]
    word: Vec<String>,
    #[arg(long)]
    extquiver: PathBuf,
}

#[derive(Subcommand)]
enum SerreCmd {
    /// Membership of a representation in a Serre chain.
    Member {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        family: PathBuf,
        /// Cross-check by subspace enumeration (finite fields only).
        #[arg(long)]
        brute_force: bool,
    },
    /// Relations among the chain operators on all modules up to a dimension.
    Relations {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    Generate {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 48)]
        size: usize,
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
        #[arg(long, default_value_t = 2)]
        radius: i64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(default_value = "all")]
    suite: Suite,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Fixture files (quiver plus weights), or plain quivers with --lambda.
    #[arg(long)]
    quiver: Vec<PathBuf>,
    /// Weights for plain quivers; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Vec<String>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 48)]
    size: usize,
}

/// Exit 1 for a failed property, 2 for bad input.
enum Failure {
    Property(Value),
    Input(String),
}

fn input<E: Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli.command, out.as_deref());
    let (value, code) = match result {
        Ok(v) => (v, 0),
        Err(Failure::Property(v)) => (v, 1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = out
        .as_deref()
        .filter(|_| !matches!(value.get("written"), Some(Value::Array(_))))
    {
        if let Err(e) = write_json(path, &value) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    println!("{}", serde_json::to_string_pretty(&value).expect("values serialize"));
    ExitCode::from(code)
}

fn run(cmd: Command, out: Option<&Path>) -> Outcome {
    match cmd {
        Command::Quiver(QuiverCmd::Classify { quiver }) => classify(&quiver),
        Command::Roots(RootsCmd::Enum {
            quiver,
            bound,
            real,
            kinds,
        }) => roots_enum(&quiver, &bound, real, kinds),
        Command::Sigma(SigmaCmd::Enum {
            quiver,
            lambda,
            field,
            bound,
        }) => sigma_enum(&quiver, &lambda, &field, bound.as_deref()),
        Command::Sigma(SigmaCmd::Family {
            quiver,
            lambda,
            field,
            bound,
        }) => sigma_write_family(&quiver, &lambda, &field, bound.as_deref(), out),
        Command::Rep(RepCmd::Check { rep }) => rep_check(&rep),
        Command::Rep(RepCmd::Hom(p)) => rep_hom(&p),
        Command::Rep(RepCmd::Ext1(p)) => rep_ext1(&p),
        Command::Reflect(ReflectCmd::Apply { rep, vertex, functor }) => reflect_apply(&rep, vertex, functor),
        Command::Braid(BraidCmd::Verify {
            quiver,
            lambda,
            field,
            corpus,
            functor,
        }) => braid_verify(&quiver, &lambda, &field, &corpus, functor),
        Command::Extquiver(ExtquiverCmd::Build { family, decompose }) => extquiver_build(&family, decompose),
        Command::Coxeter(CoxeterCmd::Reduce(w)) => coxeter_words(&w, false),
        Command::Coxeter(CoxeterCmd::Demazure(w)) => coxeter_words(&w, true),
        Command::Serre(SerreCmd::Member {
            rep,
            chain,
            family,
            brute_force,
        }) => serre_member(&rep, &chain, &family, brute_force),
        Command::Serre(SerreCmd::Relations { family, bound }) => serre_relations(&family, bound),
        Command::Corpus(CorpusCmd::Generate {
            quiver,
            lambda,
            field,
            seed,
            size,
            max_dim,
            radius,
            depth,
        }) => {
            let cfg = CorpusConfig {
                seed,
                max_total_dim: max_dim,
                size,
                radius,
                depth,
            };
            corpus_generate(&quiver, &lambda, &field, cfg, out)
        }
        Command::Selftest(args) => run_selftest(&args),
    }
}

/// A quiver file, or any object with a `"quiver"` member (fixtures, reps).
fn load_quiver_any(path: &Path) -> Result<Quiver, Failure> {
    let v = read_json(path).map_err(input)?;
    let q = match v.get("quiver") {
        Some(inner) => quiver_from_json(inner),
        None => quiver_from_json(&v),
    };
    q.map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_rep(path: &Path) -> Result<Representation, Failure> {
    let v = read_json(path).map_err(input)?;
    rep_from_json(&v).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn weight(q: &Quiver, field: &str, lambda: &str) -> Result<Weight, Failure> {
    let field = Field::parse(field).map_err(input)?;
    let w = parse_weight(field, lambda).map_err(input)?;
    if w.len() != q.vertex_count() {
        return Err(input(format!(
            "λ has {} entries, the quiver {} vertices",
            w.len(),
            q.vertex_count()
        )));
    }
    Ok(w)
}

fn bound_vector(q: &Quiver, text: &str) -> Result<IntVector, Failure> {
    let b = parse_int_vector(text).map_err(input)?;
    if b.len() != q.vertex_count() {
        return Err(input(format!(
            "bound has {} entries, the quiver {} vertices",
            b.len(),
            q.vertex_count()
        )));
    }
    Ok(b)
}

fn morphism_json(f: &Morphism) -> Value {
    Value::Array(f.blocks().iter().map(matrix_to_json).collect())
}

fn classify(path: &Path) -> Outcome {
    let q = load_quiver_any(path)?;
    let class = q.classify().map_err(input)?;
    let mut v = serde_json::to_value(&class).expect("serializable");
    v["type"] = json!(q.type_label());
    v["vertices"] = json!(q.vertex_count());
    v["arrows"] = json!(q.arrows().len());
    Ok(v)
}

fn roots_enum(path: &Path, bound: &str, real: bool, kinds: bool) -> Outcome {
    let q = load_quiver_any(path)?;
    let b = bound_vector(&q, bound)?;
    let set = if real {
        enumerate_positive_real_roots(&q, &b)
    } else {
        enumerate_positive_roots(&q, &b)
    }
    .map_err(input)?;
    Ok(if kinds {
        serde_json::to_value(&set).expect("serializable")
    } else {
        json!(set.vectors())
    })
}

fn sigma_bound(q: &Quiver, bound: Option<&str>) -> Result<IntVector, Failure> {
    match bound {
        Some(text) => bound_vector(q, text),
        None => match q.classify().map_err(input)? {
            QuiverClass::ExtendedDynkin { delta } => Ok(delta.scale(3)),
            _ => Err(input("--bound is required unless the quiver is extended Dynkin")),
        },
    }
}

fn sigma_enum(path: &Path, lambda: &str, field: &str, bound: Option<&str>) -> Outcome {
    let q = load_quiver_any(path)?;
    let w = weight(&q, field, lambda)?;
    let sigma = sigma_lambda_re(&q, &w, &sigma_bound(&q, bound)?).map_err(input)?;
    Ok(json!(sigma))
}

fn sigma_write_family(path: &Path, lambda: &str, field: &str, bound: Option<&str>, out: Option<&Path>) -> Outcome {
    let dir = out.ok_or_else(|| input("sigma family needs --out <dir>"))?;
    let q = load_quiver_any(path)?;
    let w = weight(&q, field, lambda)?;
    let family = sigma_family(&q, &w, &sigma_bound(&q, bound)?).map_err(input)?;
    // zero-padded so the directory listing keeps the family order
    let width = family.len().to_string().len();
    let labels: Vec<String> = (1..=family.len()).map(|k| format!("S{k:0width$}")).collect();
    let written = write_reps(dir, labels.iter().map(String::as_str).zip(family.members())).map_err(input)?;
    Ok(json!({
        "labels": labels,
        "dims": family.members().iter().map(|m| m.dims().clone()).collect::<Vec<_>>(),
        "written": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    }))
}

fn rep_check(path: &Path) -> Outcome {
    let m = load_rep(path)?;
    let kind = decomposition_kind(&m).map_err(input)?;
    Ok(json!({
        "valid": true,
        "field": m.field().to_string(),
        "dims": m.dims(),
        "total_dim": m.total_dim(),
        "lambda": weight_to_json(m.weight()),
        "decomposition": kind,
    }))
}

fn load_pair(p: &PairArgs) -> Result<(Representation, Representation), Failure> {
    let m = load_rep(&p.from)?;
    let n = load_rep(&p.to)?;
    m.compatible(&n).map_err(input)?;
    Ok((m, n))
}

fn rep_hom(p: &PairArgs) -> Outcome {
    let (m, n) = load_pair(p)?;
    let basis = hom_basis(&m, &n).map_err(input)?;
    Ok(json!({
        "dim": basis.dim(),
        "basis": basis.basis.iter().map(morphism_json).collect::<Vec<_>>(),
    }))
}

fn rep_ext1(p: &PairArgs) -> Outcome {
    let (m, n) = load_pair(p)?;
    let summary = ext_complex(&m, &n).map_err(input)?;
    let formula = ext1_dim_formula(&m, &n).map_err(input)?;
    let mut v = serde_json::to_value(&summary).expect("serializable");
    v["ext1"] = json!(summary.h1);
    v["formula"] = json!(formula);
    v["agrees"] = json!(formula == summary.h1 as i64);
    if formula == summary.h1 as i64 {
        Ok(v)
    } else {
        Err(Failure::Property(v))
    }
}

fn reflect_apply(path: &Path, vertex: usize, functor: FunctorArg) -> Outcome {
    let m = load_rep(path)?;
    let image = match functor {
        FunctorArg::C => apply_functor(Functor::C, &m, vertex),
        FunctorArg::K => apply_functor(Functor::K, &m, vertex),
        FunctorArg::E => equivalence_obj(&m, vertex),
    }
    .map_err(input)?;
    let mut v = rep_to_json(&image);
    v["format"] = json!(preproj::io::FORMAT);
    Ok(v)
}

fn outcome_label(o: &IsoOutcome) -> &'static str {
    match o {
        IsoOutcome::Yes(_) => "isomorphic",
        IsoOutcome::No => "not isomorphic",
        IsoOutcome::ProbablyNo => "inconclusive",
    }
}

fn braid_verify(quiver: &Path, lambda: &str, field: &str, corpus: &Path, functor: FunctorArg) -> Outcome {
    let q = load_quiver_any(quiver)?;
    let w = weight(&q, field, lambda)?;
    let which = match functor {
        FunctorArg::C => Functor::C,
        FunctorArg::K => Functor::K,
        FunctorArg::E => return Err(input("braid verify takes --functor C or K")),
    };
    let reps = load_reps(corpus).map_err(input)?;
    for (name, m) in &reps {
        if m.quiver() != &q || m.weight() != &w {
            return Err(input(format!("{name}: quiver or λ differs from the command line")));
        }
    }
    let n = q.vertex_count();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| relation_words(&q, i, j).is_ok())
        .collect();
    let jobs: Vec<(&String, &Representation, usize, usize)> = reps
        .iter()
        .flat_map(|(name, m)| pairs.iter().map(move |&(i, j)| (name, m, i, j)))
        .collect();
    let results: Vec<Result<Value, String>> = jobs
        .par_iter()
        .map(|&(name, m, i, j)| {
            let b = check_braid(which, m, i, j).map_err(|e| format!("{name} ({i},{j}): {e}"))?;
            Ok(json!({
                "rep": name,
                "vertices": [i, j],
                "left": b.left_word,
                "right": b.right_word,
                "outcome": outcome_label(&b.outcome),
            }))
        })
        .collect();
    let checks: Vec<Value> = results.into_iter().collect::<Result<_, _>>().map_err(input)?;
    let failures: Vec<&Value> = checks.iter().filter(|c| c["outcome"] != "isomorphic").collect();
    let v = json!({
        "reps": reps.len(),
        "instances": checks.len(),
        "passed": failures.is_empty(),
        "failures": failures,
    });
    if v["passed"] == true {
        Ok(v)
    } else {
        Err(Failure::Property(v))
    }
}

fn extquiver_build(dir: &Path, decompose: bool) -> Outcome {
    let family = load_family(dir).map_err(input)?;
    let eq = build_ext_quiver(&family).map_err(input)?;
    let mut v = ext_quiver_to_json(&eq);
    if !decompose {
        return Ok(v);
    }
    v["components"] = json!(decompose_gamma(&eq));
    let base = family.get(0).quiver();
    if let Ok(QuiverClass::ExtendedDynkin { .. }) = base.classify() {
        let certs = delta_decomposition(&eq, base).map_err(input)?;
        let holds = certs.iter().all(|c| c.holds);
        v["delta_decomposition"] = json!(certs);
        if !holds {
            return Err(Failure::Property(v));
        }
    }
    Ok(v)
}

fn element_json(g: &CoxeterGroup, input_word: &[usize], e: &CoxeterElement) -> Value {
    let names = |w: &[usize]| w.iter().map(|&s| g.labels()[s].clone()).collect::<Vec<_>>();
    json!({
        "input": names(input_word),
        "word": names(e.word()),
        "length": e.length(),
        "input_reduced": input_word.len() == e.length() && g.is_reduced(input_word),
        "matrix": e.matrix(),
    })
}

fn coxeter_words(args: &WordArgs, demazure: bool) -> Outcome {
    let eq = load_ext_quiver(&args.extquiver).map_err(input)?;
    let g = CoxeterGroup::new(&eq);
    let words: Vec<Vec<usize>> = args
        .word
        .iter()
        .map(|w| g.parse_word(w))
        .collect::<Result<_, _>>()
        .map_err(input)?;
    let elements = if demazure {
        words.par_iter().map(|w| g.demazure_product(w)).collect()
    } else {
        g.reduce_batch(&words)
    };
    let mut out: Vec<Value> = words
        .iter()
        .zip(&elements)
        .map(|(w, e)| element_json(&g, w, e))
        .collect();
    Ok(if out.len() == 1 {
        out.remove(0)
    } else {
        Value::Array(out)
    })
}

fn serre_member(rep: &Path, chain: &str, dir: &Path, brute_force: bool) -> Outcome {
    let family = load_family(dir).map_err(input)?;
    let m = load_rep(rep)?;
    let labels: Vec<&str> = chain.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let c = family.chain(&labels).map_err(input)?;
    let member = chain_member(&m, &family, &c).map_err(input)?;
    let mut v = json!({
        "chain": labels,
        "member": member,
        "composition": composition_vector(&m, &family).map_err(input)?,
    });
    if brute_force {
        let bf = brute_force_chain_member(&m, &family, &c).map_err(input)?;
        v["brute_force"] = json!(bf);
        if bf != member {
            return Err(Failure::Property(v));
        }
    }
    Ok(v)
}

fn serre_relations(dir: &Path, bound: usize) -> Outcome {
    let family = load_family(dir).map_err(input)?;
    let report = preproj::serre::verify_star_relations(&family, bound).map_err(input)?;
    let mut v = serde_json::to_value(&report).expect("serializable");
    v["passed"] = json!(report.passed());
    if report.passed() {
        Ok(v)
    } else {
        Err(Failure::Property(v))
    }
}

fn corpus_generate(quiver: &Path, lambda: &str, field: &str, cfg: CorpusConfig, out: Option<&Path>) -> Outcome {
    let q = load_quiver_any(quiver)?;
    let w = weight(&q, field, lambda)?;
    let reps = generate_corpus(&q, &w, &cfg).map_err(input)?;
    let Some(dir) = out else {
        return Ok(Value::Array(reps.iter().map(rep_to_json).collect()));
    };
    std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    let names: Vec<String> = (0..reps.len()).map(|k| format!("m{k:03}")).collect();
    let written = write_reps(dir, names.iter().map(String::as_str).zip(&reps)).map_err(input)?;
    Ok(json!({
        "count": reps.len(),
        "dims": reps.iter().map(|m| m.dims().clone()).collect::<Vec<_>>(),
        "written": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    }))
}

fn load_fixtures(args: &SelftestArgs) -> Result<Vec<Fixture>, Failure> {
    let mut out = Vec::new();
    for path in &args.quiver {
        let v = read_json(path).map_err(input)?;
        if v.get("weights").is_some() {
            out.push(fixture_from_json(&v).map_err(|e| input(format!("{}: {e}", path.display())))?);
            continue;
        }
        let q = load_quiver_any(path)?;
        if args.lambda.is_empty() {
            return Err(input(format!("{}: plain quiver needs --lambda", path.display())));
        }
        let weights = args
            .lambda
            .iter()
            .map(|l| weight(&q, "Q", l))
            .collect::<Result<_, _>>()?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        out.push(Fixture {
            name,
            quiver: q,
            weights,
        });
    }
    Ok(out)
}

fn run_selftest(args: &SelftestArgs) -> Outcome {
    let fixtures = if args.quiver.is_empty() {
        preproj::corpus::builtin_fixtures()
    } else {
        load_fixtures(args)?
    };
    let cfg = CorpusConfig {
        seed: args.seed,
        size: args.size,
        ..CorpusConfig::default()
    };
    let wb = Workbench::new(fixtures, cfg, args.seed);
    let jobs = match args.jobs {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    };
    let report = selftest::run(&wb, args.suite, jobs);
    let v = serde_json::to_value(&report).expect("serializable");
    if report.passed {
        Ok(v)
    } else {
        Err(Failure::Property(v))
    }
}
