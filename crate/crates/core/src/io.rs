//! JSON files: quivers, representations, ext quivers, and family
//! directories. Every loader re-validates what it reads.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::coxeter::ExtQuiverData;
use crate::field::{Field, FieldError, Scalar};
use crate::matrix::Matrix;
use crate::quiver::{Arrow, IntVector, Quiver, QuiverError};
use crate::rep::{RepError, Representation};
use crate::roots::Weight;
use crate::serre::{SerreError, SimpleFamily};

pub const FORMAT: u64 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error("unsupported format version {0}")]
    Version(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Serre(#[from] SerreError),
}

fn schema(msg: impl Into<String>) -> IoError {
    IoError::Schema(msg.into())
}

/// Accepts a missing `"format"` (embedded objects) and rejects any other
/// version.
fn check_format(v: &Value) -> Result<(), IoError> {
    match v.get("format") {
        None => Ok(()),
        Some(f) => match f.as_u64() {
            Some(FORMAT) => Ok(()),
            Some(other) => Err(IoError::Version(other)),
            None => Err(schema("\"format\" must be an integer")),
        },
    }
}

fn field_of(key: &str, v: &Value) -> Result<Value, IoError> {
    v.get(key).cloned().ok_or_else(|| schema(format!("missing \"{key}\"")))
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::Rational(_) => Value::String(x.to_string()),
        Scalar::Modular { .. } => json!(x.to_i64().expect("residue")),
    }
}

/// Rationals as `"p/q"` strings (bare integers also accepted); residues as
/// integers in `[0, p)`.
pub fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar, IoError> {
    match (field, v) {
        (Field::Rationals, Value::String(s)) => Ok(field.parse_element(s)?),
        (Field::Rationals, Value::Number(n)) if n.is_i64() => Ok(field.from_i64(n.as_i64().expect("i64"))),
        (Field::Prime(p), Value::Number(n)) => match n.as_u64() {
            Some(k) if k < u64::from(p) => Ok(field.from_i64(k as i64)),
            _ => Err(schema(format!("{n} is not a residue in [0, {p})"))),
        },
        _ => Err(schema(format!("{v} is not an element of {field}"))),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| scalar_to_json(m.get(r, c))).collect()))
            .collect(),
    )
}

/// Parses a matrix whose shape is known from context, so that `[]` is
/// unambiguous.
pub fn matrix_from_json(field: Field, v: &Value, rows: usize, cols: usize) -> Result<Matrix, IoError> {
    let arr = v.as_array().ok_or_else(|| schema("matrix must be an array of rows"))?;
    if arr.len() != rows {
        return Err(schema(format!("matrix has {} rows, expected {rows}", arr.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for row in arr {
        let row = row.as_array().ok_or_else(|| schema("matrix row must be an array"))?;
        if row.len() != cols {
            return Err(schema(format!("matrix row has {} entries, expected {cols}", row.len())));
        }
        for x in row {
            data.push(scalar_from_json(field, x)?);
        }
    }
    Ok(Matrix::from_vec(field, rows, cols, data).expect("checked shape"))
}

pub fn quiver_to_json(q: &Quiver) -> Value {
    json!({
        "vertices": q.vertex_count(),
        "arrows": q.arrows(),
    })
}

pub fn quiver_from_json(v: &Value) -> Result<Quiver, IoError> {
    check_format(v)?;
    let n = field_of("vertices", v)?
        .as_u64()
        .ok_or_else(|| schema("\"vertices\" must be a nonnegative integer"))? as usize;
    let arrows: Vec<Arrow> = serde_json::from_value(field_of("arrows", v)?)?;
    Ok(Quiver::new(n, arrows)?)
}

pub fn weight_to_json(w: &Weight) -> Value {
    Value::Array(w.coords().iter().map(scalar_to_json).collect())
}

pub fn weight_from_json(field: Field, v: &Value) -> Result<Weight, IoError> {
    let arr = v.as_array().ok_or_else(|| schema("weight must be an array"))?;
    let coords = arr
        .iter()
        .map(|x| scalar_from_json(field, x))
        .collect::<Result<_, _>>()?;
    Weight::new(field, coords).map_err(|e| schema(e.to_string()))
}

/// Parses `"1,-1,0"` or `"1/2,0"` into a weight.
pub fn parse_weight(field: Field, text: &str) -> Result<Weight, IoError> {
    let coords = text
        .split(',')
        .map(|t| field.parse_element(t))
        .collect::<Result<_, _>>()?;
    Weight::new(field, coords).map_err(|e| schema(e.to_string()))
}

/// Parses `"2,1,1"` into an integer vector.
pub fn parse_int_vector(text: &str) -> Result<IntVector, IoError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| schema(format!("`{t}` is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(IntVector)
}

pub fn rep_to_json(m: &Representation) -> Value {
    let mut maps = Map::new();
    for (k, a) in m.double().arrows().iter().enumerate() {
        maps.insert(a.id.clone(), matrix_to_json(m.map(k)));
    }
    json!({
        "format": FORMAT,
        "field": m.field().to_string(),
        "quiver": quiver_to_json(m.quiver()),
        "lambda": weight_to_json(m.weight()),
        "dims": m.dims(),
        "maps": maps,
    })
}

/// Every double arrow must be present; relations are checked on load and a
/// failure names the offending vertices with their residuals.
pub fn rep_from_json(v: &Value) -> Result<Representation, IoError> {
    check_format(v)?;
    let field = Field::parse(
        field_of("field", v)?
            .as_str()
            .ok_or_else(|| schema("\"field\" must be a string"))?,
    )?;
    let quiver = quiver_from_json(&field_of("quiver", v)?)?;
    let weight = weight_from_json(field, &field_of("lambda", v)?)?;
    let dims: IntVector = serde_json::from_value(field_of("dims", v)?)?;
    if dims.len() != quiver.vertex_count() {
        return Err(RepError::Length {
            expected: quiver.vertex_count(),
            got: dims.len(),
        }
        .into());
    }
    if let Some(i) = (0..dims.len()).find(|&i| dims[i] < 0) {
        return Err(RepError::NegativeDim(i).into());
    }
    let maps_v = field_of("maps", v)?;
    let maps_obj = maps_v.as_object().ok_or_else(|| schema("\"maps\" must be an object"))?;
    let double = Arc::new(quiver.double());
    for key in maps_obj.keys() {
        if double.arrow_index(key).is_none() {
            return Err(schema(format!("unknown arrow `{key}` in \"maps\"")));
        }
    }
    let maps = double
        .arrows()
        .iter()
        .map(|a| {
            let mv = maps_obj
                .get(&a.id)
                .ok_or_else(|| schema(format!("missing map for arrow `{}`", a.id)))?;
            matrix_from_json(field, mv, dims[a.head] as usize, dims[a.tail] as usize)
                .map_err(|e| schema(format!("arrow `{}`: {e}", a.id)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Representation::new(double, weight, dims, maps)?)
}

pub fn ext_quiver_to_json(eq: &ExtQuiverData) -> Value {
    let mut v = serde_json::to_value(eq).expect("serializable");
    v["format"] = json!(FORMAT);
    v
}

pub fn ext_quiver_from_json(v: &Value) -> Result<ExtQuiverData, IoError> {
    check_format(v)?;
    let mut v = v.clone();
    if let Some(o) = v.as_object_mut() {
        o.remove("format");
    }
    Ok(serde_json::from_value(v)?)
}

pub fn read_json(path: &Path) -> Result<Value, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| IoError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: &Path, v: &Value) -> Result<(), IoError> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| IoError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn at_path<T>(path: &Path, r: Result<T, IoError>) -> Result<T, IoError> {
    r.map_err(|e| match e {
        e @ IoError::File { .. } => e,
        other => IoError::File {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    })
}

pub fn load_quiver(path: &Path) -> Result<Quiver, IoError> {
    at_path(path, read_json(path).and_then(|v| quiver_from_json(&v)))
}

pub fn load_rep(path: &Path) -> Result<Representation, IoError> {
    at_path(path, read_json(path).and_then(|v| rep_from_json(&v)))
}

pub fn load_ext_quiver(path: &Path) -> Result<ExtQuiverData, IoError> {
    at_path(path, read_json(path).and_then(|v| ext_quiver_from_json(&v)))
}

/// `*.json` files of a directory, sorted by name.
pub fn json_files(dir: &Path) -> Result<Vec<PathBuf>, IoError> {
    let entries = fs::read_dir(dir).map_err(|e| IoError::File {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn load_reps(dir: &Path) -> Result<Vec<(String, Representation)>, IoError> {
    json_files(dir)?
        .into_iter()
        .map(|p| {
            let label = p.file_stem().expect("file name").to_string_lossy().into_owned();
            Ok((label, load_rep(&p)?))
        })
        .collect()
}

/// A directory of representation files; labels are the file stems.
pub fn load_family(dir: &Path) -> Result<SimpleFamily, IoError> {
    Ok(SimpleFamily::new(load_reps(dir)?)?)
}

pub fn write_reps<'a>(
    dir: &Path,
    reps: impl IntoIterator<Item = (&'a str, &'a Representation)>,
) -> Result<Vec<PathBuf>, IoError> {
    fs::create_dir_all(dir).map_err(|e| IoError::File {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    reps.into_iter()
        .map(|(label, m)| {
            let p = dir.join(format!("{label}.json"));
            write_json(&p, &rep_to_json(m))?;
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::tests::kronecker_rep;

    #[test]
    fn scalar_round_trip() {
        let q = Field::Rationals;
        let x = q.from_ratio(-3, 6);
        assert_eq!(scalar_to_json(&x), json!("-1/2"));
        assert_eq!(scalar_from_json(q, &json!("-1/2")).unwrap(), x);
        assert_eq!(scalar_from_json(q, &json!(4)).unwrap(), q.from_i64(4));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(scalar_to_json(&f5.from_i64(-1)), json!(4));
        assert!(scalar_from_json(f5, &json!(5)).is_err());
        assert!(scalar_from_json(f5, &json!("2")).is_err());
    }

    #[test]
    fn rep_round_trip() {
        for field in [Field::Rationals, Field::prime(7).unwrap()] {
            let m = kronecker_rep(field, 2, 1, 3, 1, -1);
            let v = rep_to_json(&m);
            assert_eq!(v["format"], json!(1));
            assert!(v["maps"].get("a*").is_some());
            let back = rep_from_json(&v).unwrap();
            assert_eq!(back, m);
            // byte-identical re-serialization
            assert_eq!(
                serde_json::to_string(&rep_to_json(&back)).unwrap(),
                serde_json::to_string(&v).unwrap()
            );
        }
    }

    #[test]
    fn zero_dimensional_maps() {
        let q = Quiver::kronecker();
        let w = Weight::zero(Field::Rationals, 2);
        let s = Representation::coordinate_simple(Arc::new(q.double()), w, 1).unwrap();
        let v = rep_to_json(&s);
        assert_eq!(v["maps"]["a"], json!([[]]));
        assert_eq!(v["maps"]["a*"], json!([]));
        assert_eq!(rep_from_json(&v).unwrap(), s);
    }

    #[test]
    fn tampered_rep_reports_vertex() {
        let m = kronecker_rep(Field::Rationals, 1, 2, 3, 1, -1);
        let mut v = rep_to_json(&m);
        v["maps"]["a"][0][0] = json!("5");
        let err = rep_from_json(&v).unwrap_err().to_string();
        assert!(err.contains("vertex"), "{err}");
        let mut v = rep_to_json(&m);
        v["maps"].as_object_mut().unwrap().remove("b*");
        assert!(rep_from_json(&v).unwrap_err().to_string().contains("b*"));
        let mut v = rep_to_json(&m);
        v["format"] = json!(2);
        assert!(matches!(rep_from_json(&v), Err(IoError::Version(2))));
        let mut v = rep_to_json(&m);
        v["maps"]["c"] = json!([]);
        assert!(rep_from_json(&v).is_err());
    }

    #[test]
    fn quiver_and_ext_quiver_json() {
        let q = Quiver::star(4);
        assert_eq!(quiver_from_json(&quiver_to_json(&q)).unwrap(), q);
        assert!(quiver_from_json(&json!({"vertices": 2, "arrows": [{"id": "a*", "tail": 0, "head": 1}]})).is_err());
        assert!(quiver_from_json(&json!({"vertices": 1, "arrows": [{"id": "a", "tail": 0, "head": 1}]})).is_err());
        let eq = ext_quiver_from_json(&json!({"labels": ["S", "T"], "m": [[0, 2], [2, 0]]})).unwrap();
        assert_eq!(ext_quiver_from_json(&ext_quiver_to_json(&eq)).unwrap(), eq);
        assert!(ext_quiver_from_json(&json!({"labels": ["S"], "m": [[1]]})).is_err());
    }

    #[test]
    fn parse_helpers() {
        let w = parse_weight(Field::Rationals, "1/2, -1").unwrap();
        assert_eq!(w.get(0), &Field::Rationals.from_ratio(1, 2));
        assert_eq!(parse_int_vector("2,1,1").unwrap(), IntVector(vec![2, 1, 1]));
        assert!(parse_int_vector("2,x").is_err());
    }

    #[test]
    fn family_directory_round_trip() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../target/test-scratch/io-family");
        let q = Quiver::star(4);
        let d = Arc::new(q.double());
        let w = Weight::zero(Field::Rationals, 5);
        let s = Representation::coordinate_simple(d.clone(), w.clone(), 0).unwrap();
        let t = Representation::coordinate_simple(d, w, 1).unwrap();
        write_reps(&dir, [("S", &s), ("T", &t)]).unwrap();
        let fam = load_family(&dir).unwrap();
        assert_eq!(fam.labels(), &["S".to_string(), "T".to_string()]);
        assert_eq!(fam.get(1), &t);
        fs::remove_dir_all(&dir).unwrap();
    }
}
