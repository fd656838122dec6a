//! Seeded generation of block sequences.
//!
//! Every draw is keyed by `(seed, shape, constraint, field, index)` and fed
//! through a ChaCha stream, so sample `i` of a sweep is reproducible on its
//! own and independent of how many other samples were drawn.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::group::GroupElem;
use super::seq::BlockSeq;
use super::shape::Shape;
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    None,
    WeaklyNormalized,
    WeaklyNormalizedPhiInvariant,
    Normalized,
    NormalizedPhiInvariant,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::None => "none",
            Constraint::WeaklyNormalized => "weakly_normalized",
            Constraint::WeaklyNormalizedPhiInvariant => "weakly_normalized_phi_invariant",
            Constraint::Normalized => "normalized",
            Constraint::NormalizedPhiInvariant => "normalized_phi_invariant",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqSampler {
    pub seed: u64,
    pub entry_bound: i64,
    pub constraint: Constraint,
    pub field: Field,
}

impl SeqSampler {
    pub fn new(seed: u64, entry_bound: i64, constraint: Constraint, field: Field) -> Result<SeqSampler> {
        if entry_bound < 1 {
            return Err(Error::Input(format!("entry bound must be >= 1, got {entry_bound}")));
        }
        Ok(SeqSampler {
            seed,
            entry_bound,
            constraint,
            field,
        })
    }

    fn rng(&self, shape: &Shape, tag: &str, index: u64) -> ChaCha8Rng {
        let key = format!(
            "{}|{}|{}|{}|{}|{}",
            self.seed, shape.key(), self.constraint, self.field, tag, index
        );
        let digest: [u8; 32] = Sha256::digest(key.as_bytes()).into();
        ChaCha8Rng::from_seed(digest)
    }

    fn entry(&self, rng: &mut ChaCha8Rng) -> Scalar {
        self.field.from_i64(rng.gen_range(-self.entry_bound..=self.entry_bound))
    }

    fn nonzero_entry(&self, rng: &mut ChaCha8Rng) -> Scalar {
        loop {
            let v = self.entry(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// Sample number `index` for `shape`.
    pub fn sample(&self, shape: &Shape, index: u64) -> Result<BlockSeq> {
        let phi = matches!(
            self.constraint,
            Constraint::WeaklyNormalizedPhiInvariant | Constraint::NormalizedPhiInvariant
        );
        if phi && !shape.is_symmetric() {
            return Err(Error::Constraint(format!("no phi-invariant sequence on asymmetric shape {shape}")));
        }
        let mut rng = self.rng(shape, "seq", index);
        let field = self.field;
        let k = shape.k();
        let mut blocks: Vec<Matrix> = (0..k - 1)
            .map(|i| {
                let mut m = Matrix::zeros(shape.dim(i), shape.dim(i + 1), field);
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        m.set(r, c, self.entry(&mut rng));
                    }
                }
                m
            })
            .collect();

        if self.constraint == Constraint::None {
            for b in blocks.iter_mut() {
                let r = b.rows() - 1;
                b.set(r, 0, self.nonzero_entry(&mut rng));
            }
            return BlockSeq::new(shape.clone(), field, blocks);
        }

        for b in blocks.iter_mut() {
            let r = b.rows() - 1;
            b.set(r, 0, field.one());
        }
        // mirror: first column of S(i+1) read bottom-up is the last row of S(i)
        for i in 0..k.saturating_sub(2) {
            let mid = shape.dim(i + 1);
            let last: Vec<Scalar> = blocks[i].row(shape.dim(i) - 1).to_vec();
            for j in 0..mid {
                blocks[i + 1].set(mid - 1 - j, 0, last[j].clone());
            }
        }
        if matches!(self.constraint, Constraint::Normalized | Constraint::NormalizedPhiInvariant) {
            let d1 = shape.dim(0);
            for r in 0..d1 - 1 {
                blocks[0].set(r, 0, field.zero());
            }
            let last = &mut blocks[k - 2];
            let r = last.rows() - 1;
            for c in 1..last.cols() {
                last.set(r, c, field.zero());
            }
        }
        let seq = BlockSeq::new(shape.clone(), field, blocks)?;
        let seq = if phi { seq.phi_symmetrized()? } else { seq };
        debug_assert!(seq.is_weakly_normalized());
        Ok(seq)
    }

    /// A random element of `G(d)` with coefficients drawn like sequence entries.
    pub fn sample_group(&self, shape: &Shape, index: u64) -> GroupElem {
        let mut rng = self.rng(shape, "group", index);
        let polys = shape
            .dims()
            .iter()
            .map(|&n| {
                let mut p: Vec<Scalar> = (0..n).map(|_| self.entry(&mut rng)).collect();
                p[0] = self.nonzero_entry(&mut rng);
                p
            })
            .collect();
        GroupElem::new(shape.clone(), self.field, polys).expect("valid polynomials")
    }
}

/// Single draw (index 0) under `constraint`.
pub fn random_seq(shape: &Shape, field: Field, seed: u64, entry_bound: i64, constraint: Constraint) -> Result<BlockSeq> {
    SeqSampler::new(seed, entry_bound, constraint, field)?.sample(shape, 0)
}
