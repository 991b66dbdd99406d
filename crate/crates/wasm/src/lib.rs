//! Browser bindings: every function takes and returns JSON strings so the
//! page needs no generated glue beyond wasm-bindgen's own.

use wasm_bindgen::prelude::wasm_bindgen;

use degenp::fiber::{conservation_check, realize_double, realize_global, realize_simple};
use degenp::galois::{enum_simple, extract_degdata};
use degenp::json::{Document, Payload};
use degenp::validate::{check_double, check_global, check_simple, ValidationReport};
use degenp::PrimeContext;

fn fail(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

fn report_json(rep: &ValidationReport) -> serde_json::Value {
    serde_json::json!({
        "ok": rep.all_pass(),
        "entries": serde_json::to_value(&rep.entries).expect("report serializes"),
    })
}

/// Validate a document; returns `{ok, entries}` or `{error}`.
#[wasm_bindgen]
pub fn validate_document(text: &str) -> String {
    let doc = match Document::parse(text) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let ctx = doc.prime_context;
    let fq = match doc.working_field() {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let rep = match &doc.payload {
        Payload::Simple(d) => check_simple(&ctx, &fq, d),
        Payload::Double(d) => check_double(&ctx, &fq, d),
        Payload::Global(g) => check_global(&ctx, &fq, g),
        Payload::Cover(c) => match extract_degdata(&ctx, &fq, c) {
            Ok(g) => check_global(&ctx, &fq, &g),
            Err(e) => return fail(e),
        },
        Payload::Fiber(_) => return fail("fiber documents carry no axioms to check"),
    };
    report_json(&rep).to_string()
}

/// Validate then realize a document; returns `{ok, fiber, dot}`, a failing
/// report `{ok: false, entries}`, or `{error}`.
#[wasm_bindgen]
pub fn realize_document(text: &str) -> String {
    let doc = match Document::parse(text) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let ctx = doc.prime_context;
    let fq = match doc.working_field() {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    match &doc.payload {
        Payload::Simple(d) => {
            let rep = check_simple(&ctx, &fq, d);
            if !rep.all_pass() {
                return report_json(&rep).to_string();
            }
            match realize_simple(&ctx, d) {
                Ok(f) => serde_json::json!({
                    "ok": true,
                    "fragment": serde_json::to_value(&f).expect("fragment serializes"),
                    "dot": f.to_dot(),
                })
                .to_string(),
                Err(e) => fail(e),
            }
        }
        Payload::Double(d) => {
            let rep = check_double(&ctx, &fq, d);
            if !rep.all_pass() {
                return report_json(&rep).to_string();
            }
            match realize_double(&ctx, d) {
                Ok(f) => serde_json::json!({
                    "ok": true,
                    "fragment": serde_json::to_value(&f).expect("fragment serializes"),
                    "dot": f.to_dot(),
                })
                .to_string(),
                Err(e) => fail(e),
            }
        }
        Payload::Global(g) => {
            let rep = check_global(&ctx, &fq, g);
            if !rep.all_pass() {
                return report_json(&rep).to_string();
            }
            let fiber = match realize_global(&ctx, g) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let cons = match conservation_check(&ctx, g) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            serde_json::json!({
                "ok": true,
                "fiber": serde_json::to_value(&fiber).expect("fiber serializes"),
                "dot": fiber.to_dot(),
                "conservation": serde_json::to_value(&cons).expect("check serializes"),
            })
            .to_string()
        }
        Payload::Cover(c) => {
            let g = match extract_degdata(&ctx, &fq, c) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            match realize_global(&ctx, &g) {
                Ok(f) => serde_json::json!({
                    "ok": true,
                    "fiber": serde_json::to_value(&f).expect("fiber serializes"),
                    "dot": f.to_dot(),
                })
                .to_string(),
                Err(e) => fail(e),
            }
        }
        Payload::Fiber(_) => fail("document already is a fiber"),
    }
}

/// Enumerate simple data; returns `{count, documents}` or `{error}`.
/// Bounds are clamped small enough to keep the page responsive.
#[wasm_bindgen]
pub fn enumerate_simple_data(p: u32, vertices: u32, max_m: i32, max_t: u32) -> String {
    let p = p as u64;
    if p < 2 {
        return fail("p must be a prime");
    }
    let ctx = match PrimeContext::new(p, 2 * (p - 1)) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let vertices = vertices.min(3) as usize;
    let max_m = (max_m as i64).clamp(0, 6);
    let max_t = (max_t as u64).clamp(1, 4);
    let docs: Vec<serde_json::Value> = enum_simple(&ctx, vertices, max_m, max_t)
        .into_iter()
        .map(|d| {
            serde_json::to_value(Document::new(&ctx, 1, Payload::Simple(d)))
                .expect("document serializes")
        })
        .collect();
    serde_json::json!({ "count": docs.len(), "documents": docs }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bindings_round_trip() {
        let (ctx, _, d) = degenp::fixtures::tail(3);
        let doc = Document::new(&ctx, 1, Payload::Simple(d));
        let text = doc.to_string_pretty();

        let out: serde_json::Value =
            serde_json::from_str(&validate_document(&text)).unwrap();
        assert_eq!(out["ok"], true);

        let out: serde_json::Value =
            serde_json::from_str(&realize_document(&text)).unwrap();
        assert_eq!(out["ok"], true);
        assert!(out["dot"].as_str().unwrap().contains("total_genus=1"));

        let out: serde_json::Value =
            serde_json::from_str(&enumerate_simple_data(3, 1, 4, 1)).unwrap();
        assert_eq!(out["count"], 12);

        let out: serde_json::Value =
            serde_json::from_str(&validate_document("{}")).unwrap();
        assert!(out["error"].as_str().is_some());
    }
}
