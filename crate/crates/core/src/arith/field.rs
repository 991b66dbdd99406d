//! Finite fields F_{p^n} with a canonical modulus per (p, n).
//!
//! Elements are little-endian coefficient vectors over the prime field.
//! The modulus for degree n is the lexicographically smallest monic
//! irreducible polynomial of degree n over F_p (constant coefficient first),
//! so two fields of the same order are always structurally identical.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::ArithError;

/// An element of a finite field, as coefficients over F_p (little-endian,
/// length = field degree). Raw container; all arithmetic goes through [`Fq`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct FqElem(pub Vec<u64>);

impl FqElem {
    /// Integer encoding sum c_i p^i, used for canonical element ordering.
    pub fn encode(&self, p: u64) -> u128 {
        let mut acc: u128 = 0;
        for c in self.0.iter().rev() {
            acc = acc * p as u128 + *c as u128;
        }
        acc
    }
}

#[derive(Debug, PartialEq, Eq)]
struct FqData {
    p: u64,
    n: usize,
    /// Monic irreducible over F_p, little-endian, length n+1.
    modulus: Vec<u64>,
}

/// A finite field F_{p^n}. Cheap to clone (shared descriptor).
#[derive(Clone, Debug)]
pub struct Fq(Arc<FqData>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.n == other.0.n
    }
}
impl Eq for Fq {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Fq {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Fq, ArithError> {
        Fq::make(p, 1)
    }

    /// Build F_{p^n} with the canonical modulus. Degree 1 uses modulus x.
    pub fn make(p: u64, n: usize) -> Result<Fq, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if n == 0 {
            return Err(ArithError::BadDegree);
        }
        if p >= 1 << 31 {
            return Err(ArithError::PrimeTooLarge(p));
        }
        let modulus = canonical_modulus(p, n);
        Ok(Fq(Arc::new(FqData { p, n, modulus })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    /// Field order p^n.
    pub fn order(&self) -> u128 {
        (self.0.p as u128).pow(self.0.n as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.0.n])
    }

    pub fn one(&self) -> FqElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.0.n];
        v[0] = c % self.0.p;
        FqElem(v)
    }

    /// Element from its integer encoding (inverse of [`FqElem::encode`]).
    pub fn decode(&self, mut k: u128) -> FqElem {
        let mut v = vec![0u64; self.0.n];
        for c in v.iter_mut() {
            *c = (k % self.0.p as u128) as u64;
            k /= self.0.p as u128;
        }
        FqElem(v)
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.0.p;
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.0.p;
        FqElem(a.0.iter().map(|&x| (p - x % p) % p).collect())
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &FqElem, c: u64) -> FqElem {
        let p = self.0.p;
        let c = c % p;
        FqElem(
            a.0.iter()
                .map(|&x| ((x as u128 * c as u128) % p as u128) as u64)
                .collect(),
        )
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.0.p as u128;
        let n = self.0.n;
        debug_assert_eq!(a.0.len(), n);
        debug_assert_eq!(b.0.len(), n);
        // Schoolbook product, then reduction by the monic modulus.
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // x^k = x^{k-n} * (-(modulus - x^n))
            for (j, &m) in self.0.modulus[..n].iter().enumerate() {
                if m == 0 {
                    continue;
                }
                let idx = k - n + j;
                let sub = (c * m as u128) % p;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
        }
        FqElem(prod[..n].iter().map(|&c| c as u64).collect())
    }

    pub fn pow(&self, a: &FqElem, mut e: u128) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem, ArithError> {
        if self.is_zero(a) {
            return Err(ArithError::DivisionByZero);
        }
        // a^{q-2} in a field of order q.
        Ok(self.pow(a, self.order() - 2))
    }

    /// The p-power Frobenius x -> x^p.
    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.0.p as u128)
    }

    /// Inverse Frobenius: the unique p-th root.
    pub fn pth_root(&self, a: &FqElem) -> FqElem {
        // x^{p^{n-1}} since x^{p^n} = x.
        let mut r = a.clone();
        for _ in 0..self.0.n - 1 {
            r = self.frobenius(&r);
        }
        r
    }

    /// Trace to the prime field, as an integer in [0, p).
    pub fn trace(&self, a: &FqElem) -> u64 {
        let mut acc = self.zero();
        let mut x = a.clone();
        for _ in 0..self.0.n {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0));
        acc.0[0]
    }

    /// All field elements in encoding order. Intended for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order()).map(move |k| self.decode(k))
    }
}

/// Exponent realizing x -> x^(q^e) on a field of the given order, reduced so
/// it stays small and also fixes 0: x^(q^e) = x^(((q^e - 1) mod (S-1)) + 1).
pub fn frobenius_exponent(field_order: u128, q: u64, e: u64) -> u128 {
    let m = field_order - 1;
    let mut acc: u128 = 1 % m;
    let mut base = (q as u128) % m;
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        k >>= 1;
    }
    (acc + m - 1) % m + 1
}

/// Lexicographically smallest monic irreducible of degree n over F_p.
fn canonical_modulus(p: u64, n: usize) -> Vec<u64> {
    if n == 1 {
        return vec![0, 1]; // x itself; F_p[x]/(x) = F_p
    }
    let fp = Fq(Arc::new(FqData {
        p,
        n: 1,
        modulus: vec![0, 1],
    }));
    let count = (p as u128).pow(n as u32);
    for k in 0..count {
        let mut coeffs: Vec<FqElem> = Vec::with_capacity(n + 1);
        let mut kk = k;
        for _ in 0..n {
            coeffs.push(fp.from_u64((kk % p as u128) as u64));
            kk /= p as u128;
        }
        coeffs.push(fp.one());
        let f = crate::arith::poly::Poly(coeffs);
        if crate::arith::poly::is_irreducible(&fp, &f) {
            return f.0.iter().map(|c| c.0[0]).collect();
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}
