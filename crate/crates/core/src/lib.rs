//! hopfforge: exact computational algebra for finite-dimensional Hopf
//! algebras over cyclotomic fields.
//!
//! The crate builds Hopf algebras from explicit structure constants over
//! Q(zeta_N), verifies every defining axiom by exhaustive exact arithmetic,
//! and computes coalgebra and algebra decompositions, Yetter-Drinfeld
//! module data, biproduct constructions, and Hopf-subalgebra lattices.
//! Because all arithmetic is exact, a passing verification is a finite
//! proof of the corresponding identity, not a numerical approximation.

pub mod algebra;
pub mod biproduct;
pub mod cyclotomic;
pub mod decompose;
pub mod error;
pub mod groups;
pub mod lattice;
pub mod linalg;
pub mod registry;
pub mod wedderburn;
pub mod yd;

pub use error::{HopfError, Result};
