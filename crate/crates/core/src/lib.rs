//! Exact endo-module calculus over localizations of the integers.
//!
//! An endo-module is a chain of module maps `B_i -> B_{i+1}`. This crate
//! computes kernels, cokernels and differentials of such chains, their
//! derived chains and colimit filtrations, Adams-eigenvalue torsion bounds,
//! and the connective K-theory ring fixtures used to exercise them.

pub mod adams;
pub mod arith;
pub mod bounds;
pub mod chern;
pub mod cli;
pub mod endo;
pub mod error;
pub mod graded;
pub mod lattice;

pub use error::{Error, Result};
