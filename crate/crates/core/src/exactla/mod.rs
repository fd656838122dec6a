//! Exact linear algebra: field arithmetic, dense matrices, ranks and
//! echelon subspaces of matrix spaces.

pub mod matrix;
pub mod scalar;
pub mod subspace;

pub use matrix::{matrix_from_json, Matrix};
pub use scalar::{is_prime, Field, Rat, Scalar};
pub use subspace::{matrix_scan_order, span, Subspace};
