use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn preproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preproj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = preproj(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_delta() {
    let v = json_ok(&["quiver", "classify", "--quiver", s(&fixture("d4tilde.json"))]);
    assert_eq!(v["class"], "extended_dynkin");
    assert_eq!(v["delta"], serde_json::json!([2, 1, 1, 1, 1]));
}

#[test]
fn kronecker_roots_in_a_box() {
    // real roots (n, n±1) and imaginary roots (n, n)
    let v = json_ok(&[
        "roots",
        "enum",
        "--quiver",
        s(&fixture("kronecker.json")),
        "--bound",
        "2,2",
    ]);
    let expected = serde_json::json!([[0, 1], [1, 0], [1, 1], [1, 2], [2, 1], [2, 2]]);
    assert_eq!(v, expected);
    let real = json_ok(&[
        "roots",
        "enum",
        "--quiver",
        s(&fixture("kronecker.json")),
        "--bound",
        "2,2",
        "--real",
    ]);
    assert_eq!(real, serde_json::json!([[0, 1], [1, 0], [1, 2], [2, 1]]));
}

#[test]
fn sigma_at_zero_weight_is_the_vertices() {
    let v = json_ok(&[
        "sigma",
        "enum",
        "--quiver",
        s(&fixture("a2tilde.json")),
        "--lambda",
        "0,0,0",
    ]);
    assert_eq!(v, serde_json::json!([[0, 0, 1], [0, 1, 0], [1, 0, 0]]));
}

#[test]
fn tampered_rep_is_rejected_with_vertex() {
    let dir = scratch("tamper");
    json_ok(&[
        "corpus",
        "generate",
        "--quiver",
        s(&fixture("a2tilde.json")),
        "--lambda",
        "0,2,-2",
        "--size",
        "8",
        "--out",
        s(&dir),
    ]);
    // bumping a(r, c) moves a*·a by a*[:, r], so pick r with a nonzero there
    let (victim, mut v, arrow, r) = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find_map(|p| {
            let v: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
            for arrow in ["a0", "a1", "a2"] {
                let star = v["maps"][format!("{arrow}*")].as_array()?.clone();
                for row in &star {
                    if let Some(r) = row.as_array()?.iter().position(|x| x != "0") {
                        return Some((p.clone(), v.clone(), arrow, r));
                    }
                }
            }
            None
        })
        .expect("a rep with a nonzero star map");
    let old = v["maps"][arrow][r][0].as_str().unwrap().to_string();
    v["maps"][arrow][r][0] = Value::String(if old == "7" { "8" } else { "7" }.into());
    let bad = dir.join("bad.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = preproj(&["rep", "check", "--rep", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex"));

    let ok = json_ok(&["rep", "check", "--rep", s(&victim)]);
    assert_eq!(ok["valid"], true);
}

#[test]
fn malformed_input_exits_two() {
    let dir = scratch("malformed");
    let p = dir.join("junk.json");
    fs::write(&p, "{ not json").unwrap();
    assert_eq!(preproj(&["rep", "check", "--rep", s(&p)]).status.code(), Some(2));
    assert_eq!(
        preproj(&["quiver", "classify", "--quiver", s(&dir.join("missing.json"))])
            .status
            .code(),
        Some(2)
    );
    let wrong_len = preproj(&[
        "sigma",
        "enum",
        "--quiver",
        s(&fixture("kronecker.json")),
        "--lambda",
        "1,2,3",
    ]);
    assert_eq!(wrong_len.status.code(), Some(2));
}

#[test]
fn corpus_generation_is_deterministic() {
    let a = scratch("det-a");
    let b = scratch("det-b");
    for dir in [&a, &b] {
        json_ok(&[
            "corpus",
            "generate",
            "--quiver",
            s(&fixture("d4tilde.json")),
            "--lambda",
            "-1,1,1,0,0",
            "--seed",
            "7",
            "--size",
            "12",
            "--out",
            s(dir),
        ]);
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 12);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap());
    }
}

#[test]
fn braid_verify_and_reflect_on_a_corpus() {
    let dir = scratch("braid");
    json_ok(&[
        "corpus",
        "generate",
        "--quiver",
        s(&fixture("a2tilde.json")),
        "--lambda",
        "0,2,-2",
        "--size",
        "10",
        "--out",
        s(&dir),
    ]);
    let v = json_ok(&[
        "braid",
        "verify",
        "--quiver",
        s(&fixture("a2tilde.json")),
        "--lambda",
        "0,2,-2",
        "--corpus",
        s(&dir),
    ]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["instances"], 30);

    // E_1 twice returns the dimension vector
    let rep = dir.join("m000.json");
    let once = dir.join("once.json");
    let e1 = json_ok(&[
        "reflect",
        "apply",
        "--rep",
        s(&rep),
        "--vertex",
        "1",
        "--functor",
        "E",
        "--out",
        s(&once),
    ]);
    let back = json_ok(&["reflect", "apply", "--rep", s(&once), "--vertex", "1", "--functor", "E"]);
    let orig: Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(back["dims"], orig["dims"]);
    assert_eq!(e1["lambda"], serde_json::json!(["2", "-2", "0"]));

    let mismatch = preproj(&[
        "braid",
        "verify",
        "--quiver",
        s(&fixture("a2tilde.json")),
        "--lambda",
        "0,1,2",
        "--corpus",
        s(&dir),
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn ext1_matches_the_formula() {
    let dir = scratch("ext1");
    json_ok(&[
        "corpus",
        "generate",
        "--quiver",
        s(&fixture("kronecker.json")),
        "--lambda",
        "0,0",
        "--size",
        "6",
        "--out",
        s(&dir),
    ]);
    let v = json_ok(&[
        "rep",
        "ext1",
        "--from",
        s(&dir.join("m000.json")),
        "--to",
        s(&dir.join("m001.json")),
    ]);
    assert_eq!(v["agrees"], true);
    let hom = json_ok(&[
        "rep",
        "hom",
        "--from",
        s(&dir.join("m000.json")),
        "--to",
        s(&dir.join("m000.json")),
    ]);
    assert!(hom["dim"].as_u64().unwrap() >= 1);
}

#[test]
fn family_ext_quiver_and_coxeter_words() {
    let fam = scratch("family");
    let listed = json_ok(&[
        "sigma",
        "family",
        "--quiver",
        s(&fixture("d4tilde.json")),
        "--lambda",
        "-1,1,1,0,0",
        "--out",
        s(&fam),
    ]);
    assert_eq!(listed["labels"].as_array().unwrap().len(), 4);
    let eq_path = scratch("eq").join("eq.json");
    let eq = json_ok(&[
        "extquiver",
        "build",
        "--family",
        s(&fam),
        "--decompose",
        "--out",
        s(&eq_path),
    ]);
    assert_eq!(eq["components"][0]["type_label"], "Ã_3");
    assert_eq!(eq["delta_decomposition"][0]["holds"], true);

    let r = json_ok(&["coxeter", "reduce", "--word", "s1,s1,s3", "--extquiver", s(&eq_path)]);
    assert_eq!(r["word"], serde_json::json!(["S3"]));
    assert_eq!(r["input_reduced"], false);
    // S1 and S2 commute, so s2 s1 reduces to the lex-least s1 s2
    let r = json_ok(&["coxeter", "reduce", "--word", "S2,S1", "--extquiver", s(&eq_path)]);
    assert_eq!(r["word"], serde_json::json!(["S1", "S2"]));
    let d = json_ok(&["coxeter", "demazure", "--word", "s1,s1,s3", "--extquiver", s(&eq_path)]);
    assert_eq!(d["word"], serde_json::json!(["S1", "S3"]));
    assert_eq!(
        preproj(&["coxeter", "reduce", "--word", "s9", "--extquiver", s(&eq_path)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn serre_relations_and_membership() {
    let all = scratch("f2-family");
    json_ok(&[
        "sigma",
        "family",
        "--quiver",
        s(&fixture("d4tilde.json")),
        "--lambda",
        "0,0,0,0,0",
        "--field",
        "Fp:2",
        "--out",
        s(&all),
    ]);
    // a leaf simple and the centre simple, joined by one arrow
    let pair = scratch("f2-pair");
    fs::copy(all.join("S1.json"), pair.join("S.json")).unwrap();
    fs::copy(all.join("S5.json"), pair.join("T.json")).unwrap();
    let v = json_ok(&["serre", "relations", "--family", s(&pair), "--bound", "3"]);
    assert_eq!(v["ext_dim"], 1);
    assert_eq!(v["passed"], true);

    let m = json_ok(&[
        "serre",
        "member",
        "--rep",
        s(&pair.join("T.json")),
        "--chain",
        "S,T",
        "--family",
        s(&pair),
        "--brute-force",
    ]);
    assert_eq!(m["member"], true);
    assert_eq!(m["brute_force"], true);
    let m = json_ok(&[
        "serre",
        "member",
        "--rep",
        s(&pair.join("T.json")),
        "--chain",
        "S,S",
        "--family",
        s(&pair),
    ]);
    assert_eq!(m["member"], false);
    let bad = preproj(&[
        "serre",
        "member",
        "--rep",
        s(&pair.join("T.json")),
        "--chain",
        "X",
        "--family",
        s(&pair),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn selftest_braid_on_one_fixture() {
    let v = json_ok(&[
        "selftest",
        "braid",
        "--quiver",
        s(&fixture("a2tilde.json")),
        "--jobs",
        "2",
    ]);
    assert_eq!(v["suite"], "braid");
    assert_eq!(v["passed"], true);
    assert_eq!(preproj(&["selftest", "nonsense"]).status.code(), Some(2));
}
