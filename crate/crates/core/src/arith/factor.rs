//! Polynomial factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting, and Cantor-Zassenhaus equal-degree splitting.
//!
//! The equal-degree step is randomized internally but all public results are
//! returned in a canonical sorted order, so outputs are deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Fq, FqElem};
use super::poly::{
    make_monic, normalize, pdiv_exact, pderiv, pgcd, ppow_mod, prem, psub, x_qpow_mod, Poly,
};

/// Squarefree decomposition of a monic polynomial: pairwise coprime monic
/// squarefree parts with multiplicities, product reproducing the input.
pub fn squarefree_decomposition(fq: &Fq, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    sqfree_rec(fq, &make_monic(fq, f), 1, &mut out);
    out.sort_by(|a, b| a.0.encode(fq).cmp(&b.0.encode(fq)).then(a.1.cmp(&b.1)));
    merge_same(fq, out)
}

fn merge_same(fq: &Fq, parts: Vec<(Poly, usize)>) -> Vec<(Poly, usize)> {
    let mut merged: Vec<(Poly, usize)> = Vec::new();
    for (g, m) in parts {
        if let Some(last) = merged.last_mut() {
            if last.0 == g && last.1 == m {
                continue;
            }
        }
        merged.push((g, m));
    }
    let _ = fq;
    merged
}

fn sqfree_rec(fq: &Fq, f: &Poly, mult: usize, out: &mut Vec<(Poly, usize)>) {
    if f.deg() == Some(0) || f.is_zero() {
        return;
    }
    let df = pderiv(fq, f);
    if df.is_zero() {
        // f = g(x^p): take the p-th root coefficient-wise and recurse.
        let root = pth_root_poly(fq, f);
        sqfree_rec(fq, &root, mult * fq.p() as usize, out);
        return;
    }
    let c = pgcd(fq, f, &df);
    let mut w = pdiv_exact(fq, f, &c).expect("gcd divides");
    let mut c = c;
    let mut i = 1usize;
    while w.deg() != Some(0) {
        let y = pgcd(fq, &w, &c);
        let fac = pdiv_exact(fq, &w, &y).expect("gcd divides");
        if fac.deg() != Some(0) {
            out.push((fac, mult * i));
        }
        w = y;
        c = pdiv_exact(fq, &c, &w).expect("gcd divides");
        i += 1;
    }
    if c.deg() != Some(0) {
        sqfree_rec(fq, &c, mult, out);
    }
}

/// p-th root of a polynomial of the form g(x^p).
fn pth_root_poly(fq: &Fq, f: &Poly) -> Poly {
    let p = fq.p() as usize;
    let mut coeffs = Vec::new();
    for (i, c) in f.0.iter().enumerate() {
        if i % p == 0 {
            coeffs.push(fq.pth_root(c));
        } else {
            debug_assert!(fq.is_zero(c), "derivative zero forces p-divisible support");
        }
    }
    normalize(fq, coeffs)
}

/// Distinct-degree decomposition of a monic squarefree polynomial:
/// (product of all irreducible factors of degree d, d) pairs.
fn distinct_degree(fq: &Fq, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::x(fq);
    let mut d = 0usize;
    let mut h = prem(fq, &x, f).expect("nonzero modulus");
    while rest.deg().map(|n| n >= 1).unwrap_or(false) {
        d += 1;
        if rest.deg().unwrap() < 2 * d {
            // What remains is irreducible.
            out.push((rest.clone(), rest.deg().unwrap()));
            break;
        }
        h = ppow_mod(fq, &h, fq.order(), &rest);
        let g = pgcd(fq, &psub(fq, &h, &x), &rest);
        if g.deg() != Some(0) {
            out.push((g.clone(), d));
            rest = pdiv_exact(fq, &rest, &g).expect("gcd divides");
            h = prem(fq, &h, &rest).expect("nonzero");
        }
    }
    out
}

/// Split a monic squarefree product of degree-d irreducibles into the
/// irreducibles (Cantor-Zassenhaus).
fn equal_degree(fq: &Fq, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.deg().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let split = loop {
        let g = if fq.p() == 2 {
            // Trace map over F_2: sum of a^{2^i} for i < k*d where q = 2^k.
            let a = random_poly(fq, n, rng);
            let bits = fq.degree() * d;
            let mut acc = prem(fq, &a, f).unwrap();
            let mut t = acc.clone();
            for _ in 1..bits {
                t = ppow_mod(fq, &t, 2, f);
                acc = super::poly::padd(fq, &acc, &t);
            }
            pgcd(fq, &acc, f)
        } else {
            let a = random_poly(fq, n, rng);
            let e = (fq.order().pow(d as u32) - 1) / 2;
            let b = ppow_mod(fq, &a, e, f);
            let one = Poly(vec![fq.one()]);
            pgcd(fq, &psub(fq, &b, &one), f)
        };
        let dg = g.deg();
        if dg.map(|k| k > 0 && k < n).unwrap_or(false) {
            break g;
        }
    };
    let rest = pdiv_exact(fq, f, &split).expect("factor divides");
    let mut out = equal_degree(fq, &split, d, rng);
    out.extend(equal_degree(fq, &rest, d, rng));
    out
}

fn random_poly(fq: &Fq, deg_lt: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut coeffs = Vec::with_capacity(deg_lt);
    for _ in 0..deg_lt {
        let k = rng.gen_range(0..fq.order());
        coeffs.push(fq.decode(k));
    }
    normalize(fq, coeffs)
}

/// Full factorization: leading coefficient plus sorted monic irreducible
/// factors with multiplicities.
pub fn factorize(fq: &Fq, f: &Poly) -> (FqElem, Vec<(Poly, usize)>) {
    let lead = match f.leading() {
        None => return (fq.zero(), Vec::new()),
        Some(l) => l.clone(),
    };
    if f.deg() == Some(0) {
        return (lead, Vec::new());
    }
    let monic = make_monic(fq, f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut factors: Vec<(Poly, usize)> = Vec::new();
    for (sf, mult) in squarefree_decomposition(fq, &monic) {
        for (prod, d) in distinct_degree(fq, &sf) {
            for irr in equal_degree(fq, &prod, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| a.0.encode(fq).cmp(&b.0.encode(fq)))
    });
    (lead, factors)
}

/// Multiplicity of a monic irreducible g in f.
pub fn multiplicity(fq: &Fq, f: &Poly, g: &Poly) -> usize {
    let mut k = 0;
    let mut rest = f.clone();
    loop {
        match super::poly::pdivmod(fq, &rest, g) {
            Ok((q, r)) if r.is_zero() && !q.is_zero() => {
                k += 1;
                rest = q;
            }
            _ => return k,
        }
    }
}

/// All roots of a polynomial in the given field, sorted by element encoding.
pub fn roots_in_field(fq: &Fq, f: &Poly) -> Vec<FqElem> {
    if f.is_zero() || f.deg() == Some(0) {
        return Vec::new();
    }
    // Reduce to the squarefree part that splits into linear factors.
    let x = Poly::x(fq);
    let xq = x_qpow_mod(fq, 1, f);
    let lin = pgcd(fq, &psub(fq, &xq, &x), f);
    let mut roots = Vec::new();
    if lin.deg() == Some(0) {
        return roots;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_beef);
    for factor in equal_degree(fq, &lin, 1, &mut rng) {
        // factor = x + c, root = -c
        let c = factor.coeff(0, fq);
        roots.push(fq.neg(&c));
    }
    roots.sort_by_key(|r| r.encode(fq.p()));
    roots
}
