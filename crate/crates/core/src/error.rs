use thiserror::Error;

/// Errors from finite-field and polynomial arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("prime {0} too large (must fit in 31 bits)")]
    PrimeTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division is not exact")]
    InexactDivision,
    #[error("absolute ramification {vkp} is not a positive multiple of p - 1 for p = {p}")]
    BadRamification { p: u64, vkp: u64 },
}

/// Structural defects that make a datum unusable before axiom checking.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
    #[error("component index {0} out of range")]
    BadComponent(usize),
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    #[error("tree is disconnected")]
    Disconnected,
    #[error("tree has a cycle")]
    Cyclic,
}

/// A located failure during datum extraction or special-fiber assembly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {location}: {message}")]
pub struct RealizeError {
    pub location: String,
    pub message: String,
}

impl RealizeError {
    pub fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        RealizeError { location: location.into(), message: message.into() }
    }
}
