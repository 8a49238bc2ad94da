//! Browser entry points. Every function takes and returns JSON text; the
//! `api` functions are the same operations without the JS error type, so
//! they run in native tests.

use wasm_bindgen::prelude::*;

pub mod api {
    use preproj::corpus::builtin_fixtures;
    use preproj::coxeter::{build_ext_quiver, decompose_gamma, sigma_family, CoxeterElement, CoxeterGroup};
    use preproj::field::Field;
    use preproj::io::{
        ext_quiver_from_json, ext_quiver_to_json, parse_int_vector, parse_weight, quiver_from_json, quiver_to_json,
        weight_to_json,
    };
    use preproj::quiver::{IntVector, Quiver, QuiverClass};
    use preproj::roots::{enumerate_positive_roots, sigma_lambda_re};
    use serde_json::{json, Value};

    fn err<E: std::fmt::Display>(e: E) -> String {
        e.to_string()
    }

    fn quiver(text: &str) -> Result<Quiver, String> {
        let v: Value = serde_json::from_str(text).map_err(err)?;
        quiver_from_json(v.get("quiver").unwrap_or(&v)).map_err(err)
    }

    fn vector(q: &Quiver, text: &str, what: &str) -> Result<IntVector, String> {
        let b = parse_int_vector(text).map_err(err)?;
        if b.len() != q.vertex_count() {
            return Err(format!("{what} needs {} entries", q.vertex_count()));
        }
        Ok(b)
    }

    /// Empty bound text means `3δ` on an extended Dynkin quiver.
    fn bound(q: &Quiver, text: &str) -> Result<IntVector, String> {
        if !text.trim().is_empty() {
            return vector(q, text, "bound");
        }
        match q.classify().map_err(err)? {
            QuiverClass::ExtendedDynkin { delta } => Ok(delta.scale(3)),
            _ => Err("give a bound for this quiver".into()),
        }
    }

    fn to_text(v: Value) -> String {
        serde_json::to_string(&v).expect("values serialize")
    }

    pub fn fixtures() -> String {
        let list: Vec<Value> = builtin_fixtures()
            .iter()
            .map(|f| {
                json!({
                    "name": f.name,
                    "quiver": quiver_to_json(&f.quiver),
                    "weights": f.weights.iter().map(weight_to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        to_text(Value::Array(list))
    }

    pub fn classify(quiver_json: &str) -> Result<String, String> {
        let q = quiver(quiver_json)?;
        let mut v = serde_json::to_value(q.classify().map_err(err)?).map_err(err)?;
        v["type"] = json!(q.type_label());
        Ok(to_text(v))
    }

    pub fn roots(quiver_json: &str, bound_text: &str) -> Result<String, String> {
        let q = quiver(quiver_json)?;
        let set = enumerate_positive_roots(&q, &bound(&q, bound_text)?).map_err(err)?;
        Ok(to_text(serde_json::to_value(set).map_err(err)?))
    }

    /// `Σ_λ^re` over ℚ, its Ext-quiver and the components of `Γ`.
    pub fn sigma(quiver_json: &str, lambda: &str, bound_text: &str) -> Result<String, String> {
        let q = quiver(quiver_json)?;
        let w = parse_weight(Field::Rationals, lambda).map_err(err)?;
        if w.len() != q.vertex_count() {
            return Err(format!("λ needs {} entries", q.vertex_count()));
        }
        let b = bound(&q, bound_text)?;
        let members = sigma_lambda_re(&q, &w, &b).map_err(err)?;
        if members.is_empty() {
            return Ok(to_text(
                json!({ "sigma": members, "extquiver": null, "components": [] }),
            ));
        }
        let family = sigma_family(&q, &w, &b).map_err(err)?;
        let eq = build_ext_quiver(&family).map_err(err)?;
        Ok(to_text(json!({
            "sigma": members,
            "extquiver": ext_quiver_to_json(&eq),
            "components": decompose_gamma(&eq),
        })))
    }

    fn element(g: &CoxeterGroup, input: &[usize], e: &CoxeterElement) -> String {
        let names = |w: &[usize]| w.iter().map(|&s| g.labels()[s].clone()).collect::<Vec<_>>();
        to_text(json!({
            "input": names(input),
            "word": names(e.word()),
            "length": e.length(),
            "matrix": e.matrix(),
        }))
    }

    fn group(extquiver_json: &str) -> Result<CoxeterGroup, String> {
        let v: Value = serde_json::from_str(extquiver_json).map_err(err)?;
        Ok(CoxeterGroup::new(&ext_quiver_from_json(&v).map_err(err)?))
    }

    pub fn coxeter_reduce(extquiver_json: &str, word: &str) -> Result<String, String> {
        let g = group(extquiver_json)?;
        let w = g.parse_word(word).map_err(err)?;
        Ok(element(&g, &w, &g.from_word(&w)))
    }

    pub fn coxeter_demazure(extquiver_json: &str, word: &str) -> Result<String, String> {
        let g = group(extquiver_json)?;
        let w = g.parse_word(word).map_err(err)?;
        Ok(element(&g, &w, &g.demazure_product(&w)))
    }
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fixtures() -> String {
    api::fixtures()
}

#[wasm_bindgen]
pub fn classify(quiver_json: &str) -> Result<String, JsError> {
    js(api::classify(quiver_json))
}

#[wasm_bindgen]
pub fn roots(quiver_json: &str, bound: &str) -> Result<String, JsError> {
    js(api::roots(quiver_json, bound))
}

#[wasm_bindgen]
pub fn sigma(quiver_json: &str, lambda: &str, bound: &str) -> Result<String, JsError> {
    js(api::sigma(quiver_json, lambda, bound))
}

#[wasm_bindgen]
pub fn coxeter_reduce(extquiver_json: &str, word: &str) -> Result<String, JsError> {
    js(api::coxeter_reduce(extquiver_json, word))
}

#[wasm_bindgen]
pub fn coxeter_demazure(extquiver_json: &str, word: &str) -> Result<String, JsError> {
    js(api::coxeter_demazure(extquiver_json, word))
}
