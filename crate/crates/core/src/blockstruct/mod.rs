//! Block shapes, the matrices `D(alpha, lambda)` and `E(S)`, block
//! projections, the automorphism `phi`, and normalization of sequences.

pub mod group;
pub mod random;
pub mod seq;
pub mod shape;

pub use group::{normalize_seq, GroupElem, GroupJson, Normalization};
pub use random::{random_seq, Constraint, SeqSampler};
pub use seq::{block_project, build_d, build_e, BlockSeq, SeqJson};
pub use shape::{enumerate_shapes, Shape};

use crate::exactla::Matrix;
use crate::error::Result;

/// `phi(A) = -K A^T K^{-1}`.
pub fn phi_map(a: &Matrix) -> Result<Matrix> {
    a.phi()
}

pub fn canonical_seq(shape: &Shape, field: crate::exactla::Field) -> BlockSeq {
    BlockSeq::canonical(shape, field)
}
