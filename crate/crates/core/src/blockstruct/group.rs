//! The normalization group `G(d)` and the normal form of block sequences.
//!
//! An element `P = P_1 + ... + P_k` has `P_i = sum_m c_{i,m} N_i^m` with `N_i`
//! the nilpotent upper Jordan block of size `d_i` and `c_{i,0} != 0`. Such `P`
//! commutes with every `D(alpha, lambda)` and acts on sequences by
//! `S(i) -> P_i S(i) P_{i+1}^{-1}`.
//!
//! Normalization solves for the coefficients one power of `N` at a time. The
//! entries of `P E(S) P^{-1}` on diagonal offset `m + 1` that enter the
//! normalization conditions depend on `c_{., m}` affinely once the lower
//! coefficients are fixed, so each level is a square linear system.

use serde::{Deserialize, Serialize};

use super::seq::BlockSeq;
use super::shape::Shape;
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    shape: Shape,
    field: Field,
    polys: Vec<Vec<Scalar>>,
}

impl GroupElem {
    pub fn new(shape: Shape, field: Field, polys: Vec<Vec<Scalar>>) -> Result<GroupElem> {
        if polys.len() != shape.k() {
            return Err(Error::Dimension(format!("{} polynomials for {} blocks", polys.len(), shape.k())));
        }
        for (i, p) in polys.iter().enumerate() {
            if p.len() != shape.dim(i) {
                return Err(Error::Dimension(format!(
                    "block {} needs {} coefficients, got {}",
                    i + 1,
                    shape.dim(i),
                    p.len()
                )));
            }
            if p.iter().any(|c| c.field() != field) {
                return Err(Error::FieldMismatch(format!("coefficients of block {} not in {field}", i + 1)));
            }
            if p[0].is_zero() {
                return Err(Error::Input(format!("block {} has zero constant term", i + 1)));
            }
        }
        Ok(GroupElem { shape, field, polys })
    }

    pub fn identity(shape: &Shape, field: Field) -> GroupElem {
        let polys = shape
            .dims()
            .iter()
            .map(|&n| {
                let mut p = vec![field.zero(); n];
                p[0] = field.one();
                p
            })
            .collect();
        GroupElem {
            shape: shape.clone(),
            field,
            polys,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn polys(&self) -> &[Vec<Scalar>] {
        &self.polys
    }

    pub fn is_identity(&self) -> bool {
        self.polys
            .iter()
            .all(|p| p[0].is_one() && p[1..].iter().all(Scalar::is_zero))
    }

    /// Equal up to a global nonzero scalar.
    pub fn is_scalar_multiple_of(&self, other: &GroupElem) -> bool {
        if self.shape != other.shape {
            return false;
        }
        let ratio = &self.polys[0][0] * &other.polys[0][0].inv().expect("unit");
        self.polys
            .iter()
            .flatten()
            .zip(other.polys.iter().flatten())
            .all(|(a, b)| *a == &ratio * b)
    }

    pub fn to_matrix(&self) -> Matrix {
        let d = self.shape.d();
        let mut m = Matrix::zeros(d, d, self.field);
        for (i, p) in self.polys.iter().enumerate() {
            m.set_submatrix(self.shape.offset(i), self.shape.offset(i), &toeplitz(p, self.field));
        }
        m
    }

    pub fn inverse(&self) -> GroupElem {
        GroupElem {
            shape: self.shape.clone(),
            field: self.field,
            polys: self.polys.iter().map(|p| poly_inverse(p)).collect(),
        }
    }

    /// The sequence `S'` with `E(S') = P E(S) P^{-1}`.
    pub fn conjugate(&self, seq: &BlockSeq) -> Result<BlockSeq> {
        if seq.shape() != &self.shape || seq.field() != self.field {
            return Err(Error::Dimension("group element and sequence disagree on shape or field".into()));
        }
        let blocks = conjugate_blocks(&self.polys, seq.blocks(), self.field);
        BlockSeq::new(self.shape.clone(), self.field, blocks)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson(
            self.polys
                .iter()
                .map(|p| p.iter().map(ToString::to_string).collect())
                .collect(),
        )
    }
}

/// Wire form of a [`GroupElem`]: one coefficient list per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson(pub Vec<Vec<String>>);

fn toeplitz(p: &[Scalar], field: Field) -> Matrix {
    let n = p.len();
    let mut m = Matrix::zeros(n, n, field);
    for r in 0..n {
        for s in r..n {
            m.set(r, s, p[s - r].clone());
        }
    }
    m
}

/// Coefficients of the inverse of `sum_m c_m N^m` modulo `N^len`.
fn poly_inverse(c: &[Scalar]) -> Vec<Scalar> {
    let q0 = c[0].inv().expect("nonzero constant term");
    let mut q = vec![q0.clone()];
    for m in 1..c.len() {
        let mut acc = c[0].field().zero();
        for t in 1..=m {
            acc = &acc + &(&c[t] * &q[m - t]);
        }
        q.push(-(&q0 * &acc));
    }
    q
}

fn conjugate_blocks(polys: &[Vec<Scalar>], blocks: &[Matrix], field: Field) -> Vec<Matrix> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let left = toeplitz(&polys[i], field);
            let right = toeplitz(&poly_inverse(&polys[i + 1]), field);
            left.mul(s).and_then(|x| x.mul(&right)).expect("conforming blocks")
        })
        .collect()
}

/// Result of [`normalize_seq`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    /// `P` with `E(normal) = P E(S) P^{-1}`, scaled so that `c_{1,0} = 1`.
    pub gauge: GroupElem,
    pub normal: BlockSeq,
    /// Number of coefficient levels solved after the corner level.
    pub levels: usize,
    /// Whether every level system had a unique solution.
    pub levels_unique: bool,
    /// Whether the global scalar freedom of `P` had to be fixed by hand.
    /// It always does: conjugation by `cP` equals conjugation by `P`.
    pub gauge_fixed: bool,
}

/// The unique normalized sequence `G(d)`-conjugate to `seq`, with the
/// conjugating element.
pub fn normalize_seq(seq: &BlockSeq) -> Result<Normalization> {
    seq.check_admissible()?;
    let shape = seq.shape();
    let field = seq.field();
    let k = shape.k();
    let mut c: Vec<Vec<Scalar>> = shape.dims().iter().map(|&n| vec![field.zero(); n]).collect();

    // level 0: corners become 1
    c[0][0] = field.one();
    for i in 0..k - 1 {
        let b = &seq.blocks()[i];
        c[i + 1][0] = &c[i][0] * b.get(b.rows() - 1, 0);
    }

    let max_d = *shape.dims().iter().max().expect("nonempty");
    let mut levels_unique = true;
    let mut levels = 0;
    for m in 1..max_d {
        let unknowns: Vec<usize> = (0..k).filter(|&i| shape.dim(i) > m).collect();
        let residuals = |c: &[Vec<Scalar>]| {
            let blocks = conjugate_blocks(c, seq.blocks(), field);
            BlockSeq::new_unchecked(shape.clone(), field, blocks)
                .expect("shape preserved")
                .condition_residuals(m + 1, false)
        };
        let r0 = residuals(&c);
        if r0.len() != unknowns.len() {
            return Err(Error::Internal(format!(
                "level {m}: {} conditions for {} unknowns",
                r0.len(),
                unknowns.len()
            )));
        }
        let mut a = Matrix::zeros(r0.len(), unknowns.len(), field);
        for (col, &u) in unknowns.iter().enumerate() {
            c[u][m] = field.one();
            let ru = residuals(&c);
            c[u][m] = field.zero();
            for (row, (x, y)) in ru.iter().zip(&r0).enumerate() {
                a.set(row, col, x - y);
            }
        }
        let rhs: Vec<Scalar> = r0.iter().map(|x| -x).collect();
        match a.solve(&rhs)? {
            Some((x, unique)) => {
                levels_unique &= unique;
                for (col, &u) in unknowns.iter().enumerate() {
                    c[u][m] = x[col].clone();
                }
            }
            None if field.characteristic() != 0 => {
                return Err(Error::Unsupported(format!(
                    "normalization level {m} has no solution over {field}"
                )));
            }
            None => {
                return Err(Error::Internal(format!("normalization level {m} is inconsistent")));
            }
        }
        levels += 1;
    }

    let gauge = GroupElem::new(shape.clone(), field, c)?;
    let normal = gauge.conjugate(seq)?;
    if !normal.is_normalized() {
        return Err(Error::Internal(format!(
            "normalization of a sequence on {shape} did not converge"
        )));
    }
    Ok(Normalization {
        gauge,
        normal,
        levels,
        levels_unique,
        gauge_fixed: true,
    })
}
