//! Linear relations over an exact field as first-class values.
//!
//! A linear relation `R ⊆ K^m × K^n` generalizes both linear maps (through
//! their graphs) and subspaces (`m = 0`). This crate provides the relation
//! algebra (composition, products, opposite, lattice operations), the four
//! fundamental properties (total, deterministic, injective, surjective), the
//! cospan decomposition of a relation into invertible base changes around a
//! normal form of wires, the induced simultaneous decomposition of a matrix
//! pair, and a verification harness that checks the accompanying theorems.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod field;
pub mod matrix;
pub mod pair;
pub mod relation;
pub mod theorems;

pub use decompose::{cospan_decompose, CospanDecomposition, WireShape};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::Matrix;
pub use pair::{pair_decompose, PairDecomposition, SubspaceReport};
pub use relation::{LinearRelation, PropertyReport};
