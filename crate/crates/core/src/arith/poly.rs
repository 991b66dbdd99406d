//! Dense univariate polynomials over a finite field.
//!
//! Coefficients are little-endian (constant term first) with no trailing
//! zeros; the zero polynomial is the empty vector. All operations take the
//! coefficient field explicitly.

use serde::{Deserialize, Serialize};

use super::field::{Fq, FqElem};
use crate::error::ArithError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Poly(pub Vec<FqElem>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn constant(c: FqElem, fq: &Fq) -> Poly {
        normalize(fq, vec![c])
    }

    /// The monomial x.
    pub fn x(fq: &Fq) -> Poly {
        Poly(vec![fq.zero(), fq.one()])
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize, fq: &Fq) -> FqElem {
        self.0.get(i).cloned().unwrap_or_else(|| fq.zero())
    }

    pub fn is_monic(&self, fq: &Fq) -> bool {
        self.leading().map(|c| *c == fq.one()).unwrap_or(false)
    }

    /// Canonical byte-friendly encoding for ordering and hashing.
    pub fn encode(&self, fq: &Fq) -> Vec<u128> {
        self.0.iter().map(|c| c.encode(fq.p())).collect()
    }
}

pub fn normalize(_fq: &Fq, mut coeffs: Vec<FqElem>) -> Poly {
    while let Some(last) = coeffs.last() {
        if last.0.iter().all(|&c| c == 0) {
            coeffs.pop();
        } else {
            break;
        }
    }
    Poly(coeffs)
}

pub fn padd(fq: &Fq, a: &Poly, b: &Poly) -> Poly {
    let n = a.0.len().max(b.0.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(fq.add(&a.coeff(i, fq), &b.coeff(i, fq)));
    }
    normalize(fq, out)
}

pub fn pneg(fq: &Fq, a: &Poly) -> Poly {
    Poly(a.0.iter().map(|c| fq.neg(c)).collect())
}

pub fn psub(fq: &Fq, a: &Poly, b: &Poly) -> Poly {
    padd(fq, a, &pneg(fq, b))
}

pub fn pmul(fq: &Fq, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![fq.zero(); a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        if fq.is_zero(x) {
            continue;
        }
        for (j, y) in b.0.iter().enumerate() {
            out[i + j] = fq.add(&out[i + j], &fq.mul(x, y));
        }
    }
    normalize(fq, out)
}

pub fn pscale(fq: &Fq, a: &Poly, c: &FqElem) -> Poly {
    normalize(fq, a.0.iter().map(|x| fq.mul(x, c)).collect())
}

/// Euclidean division: (quotient, remainder).
pub fn pdivmod(fq: &Fq, a: &Poly, b: &Poly) -> Result<(Poly, Poly), ArithError> {
    let db = b.deg().ok_or(ArithError::DivisionByZero)?;
    let lead_inv = fq.inv(b.leading().unwrap())?;
    let mut rem = a.0.clone();
    if rem.len() < db + 1 {
        return Ok((Poly::zero(), a.clone()));
    }
    let mut quot = vec![fq.zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = fq.mul(&rem[k], &lead_inv);
        if fq.is_zero(&c) {
            continue;
        }
        quot[k - db] = c.clone();
        for (j, m) in b.0.iter().enumerate() {
            let t = fq.mul(&c, m);
            rem[k - db + j] = fq.sub(&rem[k - db + j], &t);
        }
    }
    Ok((normalize(fq, quot), normalize(fq, rem)))
}

pub fn prem(fq: &Fq, a: &Poly, b: &Poly) -> Result<Poly, ArithError> {
    Ok(pdivmod(fq, a, b)?.1)
}

/// Exact division; errors if the remainder is nonzero.
pub fn pdiv_exact(fq: &Fq, a: &Poly, b: &Poly) -> Result<Poly, ArithError> {
    let (q, r) = pdivmod(fq, a, b)?;
    if !r.is_zero() {
        return Err(ArithError::InexactDivision);
    }
    Ok(q)
}

pub fn make_monic(fq: &Fq, a: &Poly) -> Poly {
    match a.leading() {
        None => Poly::zero(),
        Some(l) => {
            let inv = fq.inv(l).expect("nonzero leading coefficient");
            pscale(fq, a, &inv)
        }
    }
}

/// Monic gcd.
pub fn pgcd(fq: &Fq, a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = prem(fq, &x, &y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    make_monic(fq, &x)
}

/// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic.
pub fn pxgcd(fq: &Fq, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let one = Poly(vec![fq.one()]);
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (one.clone(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), one);
    while !r1.is_zero() {
        let (q, r) = pdivmod(fq, &r0, &r1).expect("nonzero divisor");
        let s = psub(fq, &s0, &pmul(fq, &q, &s1));
        let t = psub(fq, &t0, &pmul(fq, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.leading() {
        None => (Poly::zero(), Poly::zero(), Poly::zero()),
        Some(l) => {
            let inv = fq.inv(l).expect("nonzero");
            (
                pscale(fq, &r0, &inv),
                pscale(fq, &s0, &inv),
                pscale(fq, &t0, &inv),
            )
        }
    }
}

pub fn pderiv(fq: &Fq, a: &Poly) -> Poly {
    if a.0.len() < 2 {
        return Poly::zero();
    }
    let out = a.0[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| fq.scale(c, (i as u64 + 1) % fq.p()))
        .collect();
    normalize(fq, out)
}

pub fn peval(fq: &Fq, a: &Poly, x: &FqElem) -> FqElem {
    let mut acc = fq.zero();
    for c in a.0.iter().rev() {
        acc = fq.add(&fq.mul(&acc, x), c);
    }
    acc
}

/// base^exp mod m by square and multiply.
pub fn ppow_mod(fq: &Fq, base: &Poly, mut exp: u128, m: &Poly) -> Poly {
    let mut b = prem(fq, base, m).expect("nonzero modulus");
    let mut acc = Poly(vec![fq.one()]);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = prem(fq, &pmul(fq, &acc, &b), m).unwrap();
        }
        b = prem(fq, &pmul(fq, &b, &b), m).unwrap();
        exp >>= 1;
    }
    acc
}

/// x^(q^k) mod m, iterating the q-power map to keep exponents small.
pub fn x_qpow_mod(fq: &Fq, k: usize, m: &Poly) -> Poly {
    let q = fq.order();
    let mut h = ppow_mod(fq, &Poly::x(fq), q, m);
    for _ in 1..k {
        h = ppow_mod_poly(fq, &h, q, m);
    }
    if k == 0 {
        return prem(fq, &Poly::x(fq), m).unwrap();
    }
    h
}

fn ppow_mod_poly(fq: &Fq, base: &Poly, exp: u128, m: &Poly) -> Poly {
    ppow_mod(fq, base, exp, m)
}

/// Rabin irreducibility test for a monic polynomial.
pub fn is_irreducible(fq: &Fq, f: &Poly) -> bool {
    let n = match f.deg() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let x = Poly::x(fq);
    // x^{q^n} = x mod f
    let xqn = x_qpow_mod(fq, n, f);
    if psub(fq, &xqn, &prem(fq, &x, f).unwrap()) != Poly::zero() {
        return false;
    }
    let mut primes = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for t in primes {
        let h = psub(fq, &x_qpow_mod(fq, n / t, f), &x);
        if pgcd(fq, &h, f).deg() != Some(0) {
            return false;
        }
    }
    true
}

/// Coefficient-wise e-th power (used for Galois transport of polynomials).
pub fn pcoeff_pow(fq: &Fq, a: &Poly, exp: u128) -> Poly {
    normalize(fq, a.0.iter().map(|c| fq.pow(c, exp)).collect())
}
