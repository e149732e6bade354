//! Finite loop algebra on explicit Cayley tables.
//!
//! The crate provides loop construction and validation, a small identity
//! language evaluated by exhaustive assignment, structural invariants
//! (nuclei, center, commutators, associators), autotopism search and
//! isotopy, enumeration of small loops, and mechanically checked theorems
//! about C-loops, LC- and RC-loops, Steiner loops, and Osborn loops.

pub mod enumerate;
pub mod error;
pub mod identity;
pub mod morphisms;
pub mod perm;
pub mod structure;
pub mod table;
pub mod theorems;

pub use error::{Axis, Error, Result};
pub use perm::{AutotopismTriple, Perm};
pub use table::{Element, LoopTable};
