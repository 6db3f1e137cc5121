//! Multi-sorted Boolean relations and their quantified relational clones.
//!
//! The crate is `no_std` with `alloc`. It covers truth-table relations, the
//! GF(2) disjunctive form of key relations, the elementary operations,
//! arity-capped closure engines, canonical relations, bounded
//! polymorphism/invariant oracles and lattice builders.

#![no_std]

extern crate alloc;

pub mod canonical;
pub mod closure;
pub mod eo;
pub mod error;
pub mod galois;
pub mod gf2;
pub mod lattice;
pub mod reduction;
pub mod relation;
pub mod table;

pub use error::{Error, Result};
pub use gf2::{is_key, rref, to_disjunctive_form, AffineSystem, DisjunctiveForm, LinearEquation};
pub use relation::{BaseKind, Relation};
pub use table::Table;
