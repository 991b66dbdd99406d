//! The on-disk document format: a version header, the ambient context, the
//! working field degree, and one payload of any supported species.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::field::Fq;
use crate::arith::PrimeContext;
use crate::degdata::{DoubleDegData, GlobalDegData, SimpleDegData};
use crate::fiber::SpecialFiber;
use crate::galois::CoverDescription;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Simple(SimpleDegData),
    Double(DoubleDegData),
    Global(GlobalDegData),
    Cover(CoverDescription),
    Fiber(SpecialFiber),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format_version: String,
    pub prime_context: PrimeContext,
    /// Degree of the working field over the prime field; concrete torsor
    /// coefficients and places live there.
    #[serde(default = "one")]
    pub field_degree: usize,
    pub payload: Payload,
}

fn one() -> usize {
    1
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported format version {0}, this build reads version {FORMAT_VERSION}")]
    Version(String),
    #[error("{0}")]
    Context(crate::error::ArithError),
}

impl Document {
    pub fn new(ctx: &PrimeContext, field_degree: usize, payload: Payload) -> Document {
        Document {
            format_version: FORMAT_VERSION.to_string(),
            prime_context: *ctx,
            field_degree,
            payload,
        }
    }

    /// Parse and sanity-check a document; schema violations are located.
    pub fn parse(text: &str) -> Result<Document, DocumentError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
            DocumentError::Schema { path: e.path().to_string(), message: e.inner().to_string() }
        })?;
        if doc.format_version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.format_version));
        }
        PrimeContext::new(doc.prime_context.p, doc.prime_context.vkp)
            .map_err(DocumentError::Context)?;
        if doc.field_degree == 0 {
            return Err(DocumentError::Schema {
                path: "field_degree".to_string(),
                message: "field degree must be at least 1".to_string(),
            });
        }
        Ok(doc)
    }

    /// The working field the document's places and coefficients live in.
    pub fn working_field(&self) -> Result<Fq, crate::error::ArithError> {
        Fq::make(self.prime_context.p, self.field_degree)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        let (ctx, _, d) = fixtures::ramified_pair(3);
        let doc = Document::new(&ctx, 1, Payload::Simple(d));
        let text = doc.to_string_pretty();
        let back = Document::parse(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn concrete_round_trip() {
        let (ctx, fq, d) = fixtures::ramified_pair_concrete();
        let doc = Document::new(&ctx, fq.degree(), Payload::Simple(d));
        let back = Document::parse(&doc.to_string_pretty()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.working_field().unwrap().order(), 9);
    }

    #[test]
    fn schema_errors_are_located() {
        let err = Document::parse("{\"format_version\": \"1\"}").unwrap_err();
        assert!(matches!(err, DocumentError::Schema { .. }));

        let (ctx, _, d) = fixtures::tail(3);
        let doc = Document::new(&ctx, 1, Payload::Simple(d));
        let mut v: serde_json::Value = serde_json::from_str(&doc.to_string_pretty()).unwrap();
        v["payload"]["simple"]["surprise"] = serde_json::json!(1);
        let err = Document::parse(&v.to_string()).unwrap_err();
        match err {
            DocumentError::Schema { path, .. } => assert!(path.contains("simple")),
            other => panic!("wrong error: {other}"),
        }

        v = serde_json::from_str(&doc.to_string_pretty()).unwrap();
        v["format_version"] = serde_json::json!("9");
        assert!(matches!(Document::parse(&v.to_string()), Err(DocumentError::Version(_))));

        v = serde_json::from_str(&doc.to_string_pretty()).unwrap();
        v["prime_context"]["p"] = serde_json::json!(4);
        assert!(matches!(Document::parse(&v.to_string()), Err(DocumentError::Context(_))));
    }
}
