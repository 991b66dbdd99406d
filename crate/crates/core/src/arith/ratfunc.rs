//! Rational functions in one variable over a finite field, kept in lowest
//! terms with a monic denominator, plus differentials w dx on the projective
//! line.

use super::factor::{factorize, multiplicity};
use super::field::{Fq, FqElem};
use super::poly::{
    make_monic, padd, pderiv, pdiv_exact, pdivmod, peval, pmul, pneg, prem, pscale,
    psub, pxgcd, Poly,
};
use crate::error::ArithError;

/// num/den with gcd(num, den) = 1 and den monic; the zero function is 0/1.
/// The representation is canonical, so structural equality is equality.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn zero(fq: &Fq) -> RationalFunction {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::constant(fq.one(), fq),
        }
    }

    pub fn one(fq: &Fq) -> RationalFunction {
        RationalFunction::from_poly(fq, &Poly::constant(fq.one(), fq))
    }

    pub fn constant(fq: &Fq, c: &FqElem) -> RationalFunction {
        RationalFunction::from_poly(fq, &Poly::constant(c.clone(), fq))
    }

    pub fn x(fq: &Fq) -> RationalFunction {
        RationalFunction::from_poly(fq, &Poly::x(fq))
    }

    pub fn from_poly(fq: &Fq, p: &Poly) -> RationalFunction {
        RationalFunction {
            num: p.clone(),
            den: Poly::constant(fq.one(), fq),
        }
    }

    pub fn new(fq: &Fq, num: &Poly, den: &Poly) -> Result<RationalFunction, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero(fq));
        }
        let g = super::poly::pgcd(fq, num, den);
        let mut num = pdiv_exact(fq, num, &g)?;
        let mut den = pdiv_exact(fq, den, &g)?;
        // fold the denominator's leading coefficient into the numerator
        let lead = den.leading().unwrap().clone();
        let lead_inv = fq.inv(&lead)?;
        num = pscale(fq, &num, &lead_inv);
        den = make_monic(fq, &den);
        Ok(RationalFunction { num, den })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True for elements of the coefficient field, including zero.
    pub fn is_constant(&self) -> bool {
        self.den.deg() == Some(0) && self.num.deg().map_or(true, |d| d == 0)
    }

    pub fn constant_value(&self, fq: &Fq) -> Option<FqElem> {
        if self.is_constant() {
            Some(self.num.coeff(0, fq))
        } else {
            None
        }
    }

    pub fn encode(&self, fq: &Fq) -> (Vec<u128>, Vec<u128>) {
        (self.num.encode(fq), self.den.encode(fq))
    }
}

pub fn radd(fq: &Fq, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    let num = padd(
        fq,
        &pmul(fq, &a.num, &b.den),
        &pmul(fq, &b.num, &a.den),
    );
    let den = pmul(fq, &a.den, &b.den);
    RationalFunction::new(fq, &num, &den).unwrap()
}

pub fn rneg(fq: &Fq, a: &RationalFunction) -> RationalFunction {
    RationalFunction {
        num: pneg(fq, &a.num),
        den: a.den.clone(),
    }
}

pub fn rsub(fq: &Fq, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    radd(fq, a, &rneg(fq, b))
}

pub fn rmul(fq: &Fq, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
    let num = pmul(fq, &a.num, &b.num);
    let den = pmul(fq, &a.den, &b.den);
    RationalFunction::new(fq, &num, &den).unwrap()
}

pub fn rinv(fq: &Fq, a: &RationalFunction) -> Result<RationalFunction, ArithError> {
    if a.is_zero() {
        return Err(ArithError::DivisionByZero);
    }
    RationalFunction::new(fq, &a.den, &a.num)
}

pub fn rdiv(fq: &Fq, a: &RationalFunction, b: &RationalFunction) -> Result<RationalFunction, ArithError> {
    Ok(rmul(fq, a, &rinv(fq, b)?))
}

pub fn rpow(fq: &Fq, a: &RationalFunction, e: i64) -> Result<RationalFunction, ArithError> {
    let base = if e < 0 { rinv(fq, a)? } else { a.clone() };
    let mut acc = RationalFunction::one(fq);
    for _ in 0..e.unsigned_abs() {
        acc = rmul(fq, &acc, &base);
    }
    Ok(acc)
}

/// Derivative by the quotient rule.
pub fn rderiv(fq: &Fq, a: &RationalFunction) -> RationalFunction {
    let num = psub(
        fq,
        &pmul(fq, &pderiv(fq, &a.num), &a.den),
        &pmul(fq, &a.num, &pderiv(fq, &a.den)),
    );
    let den = pmul(fq, &a.den, &a.den);
    RationalFunction::new(fq, &num, &den).unwrap()
}

/// Logarithmic derivative f'/f.
pub fn rdlog(fq: &Fq, a: &RationalFunction) -> Result<RationalFunction, ArithError> {
    rdiv(fq, &rderiv(fq, a), a)
}

/// Evaluate at a coefficient-field point; None at a pole.
pub fn reval(fq: &Fq, a: &RationalFunction, x: &FqElem) -> Option<FqElem> {
    let d = peval(fq, &a.den, x);
    if fq.is_zero(&d) {
        return None;
    }
    let n = peval(fq, &a.num, x);
    Some(fq.mul(&n, &fq.inv(&d).unwrap()))
}

/// Split g = Q + R/D with deg R < deg D.
pub fn polynomial_part(fq: &Fq, a: &RationalFunction) -> (Poly, RationalFunction) {
    let (q, r) = pdivmod(fq, &a.num, &a.den).unwrap();
    (
        q,
        RationalFunction {
            num: r,
            den: a.den.clone(),
        },
    )
}

/// Vanishing order at infinity; None for the zero function.
pub fn order_at_infinity(a: &RationalFunction) -> Option<i64> {
    let n = a.num.deg()?;
    let d = a.den.deg().unwrap();
    Some(d as i64 - n as i64)
}

/// Vanishing order at the place cut out by the monic irreducible f;
/// None for the zero function.
pub fn order_at_poly(fq: &Fq, a: &RationalFunction, f: &Poly) -> Option<i64> {
    if a.is_zero() {
        return None;
    }
    let up = multiplicity(fq, &a.num, f) as i64;
    let down = multiplicity(fq, &a.den, f) as i64;
    Some(up - down)
}

/// Monic irreducible factors of the denominator, with pole orders.
pub fn pole_factors(fq: &Fq, a: &RationalFunction) -> Vec<(Poly, usize)> {
    factorize(fq, &a.den).1
}

/// Monic irreducible factors of the numerator, with vanishing orders.
pub fn zero_factors(fq: &Fq, a: &RationalFunction) -> Vec<(Poly, usize)> {
    factorize(fq, &a.num).1
}

fn pinv_mod(fq: &Fq, a: &Poly, m: &Poly) -> Poly {
    let (g, s, _) = pxgcd(fq, a, m);
    assert_eq!(g.deg(), Some(0), "inverse requires coprimality");
    let c = fq.inv(g.leading().unwrap()).unwrap();
    prem(fq, &pscale(fq, &s, &c), m).unwrap()
}

/// f-adic digits of the principal part of g at the place (f): returns
/// [a_{-M}, ..., a_{-1}] with deg a_i < deg f, where M is the pole order.
/// Empty when g has no pole at (f).
pub fn principal_digits(fq: &Fq, g: &RationalFunction, f: &Poly) -> Vec<Poly> {
    let m = multiplicity(fq, &g.den, f);
    if m == 0 {
        return Vec::new();
    }
    let mut fpow = Poly::constant(fq.one(), fq);
    for _ in 0..m {
        fpow = pmul(fq, &fpow, f);
    }
    let cof = pdiv_exact(fq, &g.den, &fpow).unwrap();
    let cof_inv = pinv_mod(fq, &cof, &fpow);
    let p = prem(fq, &pmul(fq, &g.num, &cof_inv), &fpow).unwrap();
    // f-adic expansion of p: successive remainders mod f
    let mut digits = Vec::with_capacity(m);
    let mut rest = p;
    for _ in 0..m {
        let (q, r) = pdivmod(fq, &rest, f).unwrap();
        digits.push(r);
        rest = q;
    }
    digits
}

/// A differential w dx on the projective line, represented by w.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential(pub RationalFunction);

impl Differential {
    pub fn of_function_derivative(fq: &Fq, g: &RationalFunction) -> Differential {
        Differential(rderiv(fq, g))
    }

    pub fn of_dlog(fq: &Fq, f: &RationalFunction) -> Result<Differential, ArithError> {
        Ok(Differential(rdlog(fq, f)?))
    }

    pub fn order_at_poly(&self, fq: &Fq, f: &Poly) -> Option<i64> {
        order_at_poly(fq, &self.0, f)
    }

    /// dx has a double pole at infinity.
    pub fn order_at_infinity(&self) -> Option<i64> {
        Some(order_at_infinity(&self.0)? - 2)
    }

    /// Degree-weighted sum of vanishing orders over all places (finite
    /// support plus infinity). On the projective line this is -2 for any
    /// nonzero differential.
    pub fn total_order(&self, fq: &Fq) -> Option<i64> {
        if self.0.is_zero() {
            return None;
        }
        let mut total = self.order_at_infinity().unwrap();
        for (f, e) in zero_factors(fq, &self.0) {
            total += (f.deg().unwrap() as i64) * e as i64;
        }
        for (f, e) in pole_factors(fq, &self.0) {
            total -= (f.deg().unwrap() as i64) * e as i64;
        }
        Some(total)
    }
}
