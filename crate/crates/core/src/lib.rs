//! Exact and asymptotic enumeration of canonical k-noncrossing RNA pseudoknot
//! structures.
//!
//! A `<k, λ, σ>`-structure is a partial matching on `[n]` with no `k` mutually
//! crossing arcs, every arc of length at least `λ` and every maximal stack of
//! length at least `σ`. The crate provides:
//!
//! - [`diagram`]: diagrams, structural predicates, the core map and the
//!   brute-force oracles every formula is checked against;
//! - [`walks`]: k-noncrossing matching counts via lattice walks in the Weyl
//!   chamber;
//! - [`enumeration`]: the exact counting formulas (secondary structures,
//!   `<k,2,1>` and the `T* -> C* -> T^[4]_{k,σ}` inclusion-exclusion pipeline);
//! - [`series`]: an exact rational truncated power series engine and the
//!   generating functions built on it;
//! - [`asymptotics`]: dominant singularities and exponential growth rates in
//!   high precision;
//! - [`golden`]: the reference tables embedded for regression checks.

pub mod asymptotics;
pub mod combinat;
pub mod diagram;
pub mod enumeration;
mod error;
pub mod golden;
pub mod series;
pub mod walks;

pub use error::{Error, Result};

/// Exact nonnegative count.
pub type Count = num_bigint::BigUint;
