//! Exact computations with the solvable matrix Lie algebras generated by a
//! Jordan-type matrix `D(alpha, lambda)` and a block super-diagonal matrix
//! `E(S)`: their nilradicals, lower central series, nilpotency degrees,
//! minimal-rank tables, and the uniserial representations they carry.
//!
//! Everything is computed over `Q` or a prime field with exact arithmetic.

pub mod blockstruct;
pub mod error;
pub mod exactla;
pub mod nilradical;
pub mod reps;
pub mod theory;

pub use error::{Error, Result};
