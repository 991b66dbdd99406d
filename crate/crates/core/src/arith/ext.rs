//! Extension fields with a distinguished embedding of the working field.
//!
//! For a working field F_Q (Q = p^n) and a degree d, the extension is the
//! canonical F_{p^{nd}} together with the embedding sending the generator of
//! F_Q to the smallest root of its modulus. Geometric points of degree d
//! live in this extension as explicit elements; embeddings are only ever one
//! hop (working field into one extension), never composed, so no
//! compatibility lattice is needed.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::factor::roots_in_field;
use super::field::{Fq, FqElem};
use super::poly::{normalize, Poly};

#[derive(Debug)]
pub struct Extension {
    pub base: Fq,
    pub ext: Fq,
    /// Powers gamma^0 .. gamma^{n-1} of the embedded base generator.
    gamma_pows: Vec<FqElem>,
}

impl Extension {
    /// Embed a base-field element into the extension.
    pub fn embed(&self, a: &FqElem) -> FqElem {
        let mut acc = self.ext.zero();
        for (c, gp) in a.0.iter().zip(&self.gamma_pows) {
            acc = self.ext.add(&acc, &self.ext.scale(gp, *c));
        }
        acc
    }

    /// Embed a polynomial coefficient-wise.
    pub fn embed_poly(&self, f: &Poly) -> Poly {
        normalize(&self.ext, f.0.iter().map(|c| self.embed(c)).collect())
    }
}

fn cache() -> &'static Mutex<BTreeMap<(u64, usize, usize), Arc<Extension>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<(u64, usize, usize), Arc<Extension>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// The canonical degree-d extension of the working field, with embedding.
pub fn extension(base: &Fq, d: usize) -> Arc<Extension> {
    assert!(d >= 1);
    let key = (base.p(), base.degree(), d);
    if let Some(e) = cache().lock().unwrap().get(&key) {
        return e.clone();
    }
    let ext = Fq::make(base.p(), base.degree() * d).expect("valid extension parameters");
    // The base modulus has prime-field coefficients, so it lifts to the
    // extension directly; its smallest root anchors the embedding.
    let lifted = normalize(
        &ext,
        base.modulus().iter().map(|&c| ext.from_u64(c)).collect(),
    );
    let gamma = if base.degree() == 1 {
        // modulus is x; the embedded generator of F_p is irrelevant, use 0.
        ext.zero()
    } else if d == 1 {
        // same field: the identity embedding, not a Frobenius twist
        ext.decode(base.p() as u128)
    } else {
        roots_in_field(&ext, &lifted)
            .into_iter()
            .next()
            .expect("base modulus splits in a degree-multiple extension")
    };
    let mut gamma_pows = Vec::with_capacity(base.degree());
    let mut acc = ext.one();
    for _ in 0..base.degree() {
        gamma_pows.push(acc.clone());
        acc = ext.mul(&acc, &gamma);
    }
    let e = Arc::new(Extension {
        base: base.clone(),
        ext,
        gamma_pows,
    });
    cache().lock().unwrap().insert(key, e.clone());
    e
}
