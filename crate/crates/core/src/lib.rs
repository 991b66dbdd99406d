//! Degeneration data for degree-p covers of semi-stable curves.
//!
//! The library models the combinatorics that governs how a cyclic cover of
//! degree p of a semi-stable curve degenerates: trees of projective lines
//! decorated with torsor types, conductors, residues and formal thicknesses,
//! subject to local and global compatibility constraints. On top of the
//! model it provides validation of the constraints, assembly of the special
//! fiber a datum describes, enumeration of data with bounded invariants, and
//! the action of the residue-field Galois group.

pub mod arith;
pub mod degdata;
pub mod error;
pub mod fiber;
pub mod fixtures;
pub mod galois;
pub mod json;
pub mod torsor;
pub mod validate;

pub use arith::PrimeContext;
