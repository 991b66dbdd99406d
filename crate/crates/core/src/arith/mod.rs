//! Arithmetic over finite fields: elements, polynomials, factoring,
//! rational functions, and places of the projective line.

pub mod ext;
pub mod factor;
pub mod field;
pub mod place;
pub mod poly;
pub mod ratfunc;

use serde::{Deserialize, Serialize};

use crate::error::ArithError;

/// The residue characteristic together with the valuation of p in the base
/// discrete valuation ring, normalized so a uniformizer has valuation 1.
/// Containing a primitive p-th root of unity forces (p - 1) | v(p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeContext {
    pub p: u64,
    pub vkp: u64,
}

impl PrimeContext {
    pub fn new(p: u64, vkp: u64) -> Result<PrimeContext, ArithError> {
        if !field::is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if vkp == 0 || vkp % (p - 1) != 0 {
            return Err(ArithError::BadRamification { p, vkp });
        }
        Ok(PrimeContext { p, vkp })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_context_validation() {
        assert!(PrimeContext::new(3, 2).is_ok());
        assert!(PrimeContext::new(3, 6).is_ok());
        assert!(PrimeContext::new(2, 1).is_ok());
        assert!(PrimeContext::new(5, 4).is_ok());
        assert_eq!(
            PrimeContext::new(5, 6),
            Err(ArithError::BadRamification { p: 5, vkp: 6 })
        );
        assert_eq!(PrimeContext::new(5, 0).unwrap_err(), ArithError::BadRamification { p: 5, vkp: 0 });
        assert_eq!(PrimeContext::new(4, 3).unwrap_err(), ArithError::NotPrime(4));
    }
}
