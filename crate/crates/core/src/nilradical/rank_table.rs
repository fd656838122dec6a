//! Minimal ranks `r_{i,j}` of the nonzero block projections `p_{i,j}(X)`,
//! `X` homogeneous in `h(0,0,C) = F D(0,0) + n(C)`.
//!
//! For canonical `C` the algebra is graded by diagonal offset, so the RREF
//! basis of `n(C)` is homogeneous and `p_{i,j}` of the degree `t` piece lives
//! on a single diagonal of the block. Rank is then the number of nonzero
//! entries, and the minimum becomes a minimum-weight codeword search.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{generate_nilradical, NilReport};
use crate::blockstruct::{block_project, BlockSeq, Shape};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Scalar};

/// Largest coordinate count searched exhaustively.
const MAX_SUPPORT_LEN: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    pub shape: Shape,
    pub field: Field,
    entries: BTreeMap<(usize, usize), usize>,
    witnesses: BTreeMap<(usize, usize), Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub i: usize,
    pub j: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTableJson {
    pub shape: Vec<usize>,
    pub field: String,
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    /// `r_{i,j}` for 1-based `i < j`.
    pub fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.entries.get(&(i, j)).copied()
    }

    pub fn r1k(&self) -> usize {
        self.entries[&(1, self.shape.k())]
    }

    /// A homogeneous element of `n(C)` whose `(i, j)` projection has rank
    /// `r_{i,j}` (absent when `r_{i,j} = 0`).
    pub fn witness(&self, i: usize, j: usize) -> Option<&Matrix> {
        self.witnesses.get(&(i, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn to_json(&self) -> RankTableJson {
        RankTableJson {
            shape: self.shape.dims().to_vec(),
            field: self.field.to_string(),
            entries: self.entries().map(|((i, j), rank)| RankEntry { i, j, rank }).collect(),
        }
    }
}

/// Smallest number of nonzero coordinates of a nonzero vector in the span
/// of `vectors`, with coefficients realising it. `None` if the span is zero.
pub fn min_support_weight(vectors: &[Vec<Scalar>], field: Field) -> Result<Option<(usize, Vec<Scalar>)>> {
    let Some(len) = vectors.first().map(Vec::len) else {
        return Ok(None);
    };
    if vectors.iter().any(|v| v.len() != len) {
        return Err(Error::Dimension("vectors of different lengths".into()));
    }
    let m = vectors.len();
    let Some(first_nonzero) = vectors.iter().position(|v| v.iter().any(|x| !x.is_zero())) else {
        return Ok(None);
    };
    if len > MAX_SUPPORT_LEN {
        return Err(Error::Unsupported(format!("support search over {len} coordinates")));
    }
    for w in 1..len {
        for mask in 0u32..(1u32 << len) {
            if mask.count_ones() as usize != w {
                continue;
            }
            let comp: Vec<usize> = (0..len).filter(|c| mask & (1 << c) == 0).collect();
            let mut a = Matrix::zeros(comp.len(), m, field);
            for (r, &c) in comp.iter().enumerate() {
                for (u, v) in vectors.iter().enumerate() {
                    a.set(r, u, v[c].clone());
                }
            }
            for coeffs in a.nullspace() {
                if !combine(vectors, &coeffs, len, field).iter().all(Scalar::is_zero) {
                    return Ok(Some((w, coeffs)));
                }
            }
        }
    }
    let mut coeffs = vec![field.zero(); m];
    coeffs[first_nonzero] = field.one();
    Ok(Some((len, coeffs)))
}

fn combine(vectors: &[Vec<Scalar>], coeffs: &[Scalar], len: usize, field: Field) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (v, a) in vectors.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = &*o + &(a * x);
            }
        }
    }
    out
}

/// Rank table of `h(0,0,C)` for the canonical sequence on `shape`.
pub fn rank_table(shape: &Shape, field: Field) -> Result<RankTable> {
    rank_table_of(&generate_nilradical(&BlockSeq::canonical(shape, field))?)
}

/// Rank table from an already computed report; the sequence must be canonical.
pub fn rank_table_of(report: &NilReport) -> Result<RankTable> {
    let shape = &report.shape;
    let field = report.field;
    if report.seq != BlockSeq::canonical(shape, field) {
        return Err(Error::Unsupported(
            "rank tables are only computed for the canonical sequence".into(),
        ));
    }
    // homogeneous basis, grouped by diagonal offset
    let mut by_offset: BTreeMap<usize, Vec<Matrix>> = BTreeMap::new();
    for b in report.basis_matrices() {
        let t = b.ddeg().expect("basis elements are nonzero");
        if b.diag_component(t) != b {
            return Err(Error::Internal(format!("basis element of n(C) on {shape} is not homogeneous")));
        }
        by_offset.entry(t as usize).or_default().push(b);
    }

    let k = shape.k();
    let mut entries = BTreeMap::new();
    let mut witnesses = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            let (oi, oj) = (shape.offset(i) as i64, shape.offset(j) as i64);
            let (di, dj) = (shape.dim(i) as i64, shape.dim(j) as i64);
            let mut best: Option<(usize, Matrix)> = None;
            for (&t, mats) in &by_offset {
                // rows r of the block with column r + oi + t - oj inside it
                let cells: Vec<(usize, usize)> = (0..di)
                    .filter_map(|r| {
                        let c = r + oi + t as i64 - oj;
                        (0..dj).contains(&c).then_some(((oi + r) as usize, (oj + c) as usize))
                    })
                    .collect();
                if cells.is_empty() {
                    continue;
                }
                let vectors: Vec<Vec<Scalar>> = mats
                    .iter()
                    .map(|m| cells.iter().map(|&(r, c)| m.get(r, c).clone()).collect())
                    .collect();
                if let Some((w, coeffs)) = min_support_weight(&vectors, field)? {
                    if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                        let mut x = Matrix::zeros(shape.d(), shape.d(), field);
                        for (m, a) in mats.iter().zip(&coeffs) {
                            if !a.is_zero() {
                                x = x.add(&m.scale(a))?;
                            }
                        }
                        best = Some((w, x));
                    }
                }
            }
            match best {
                Some((w, x)) => {
                    entries.insert((i + 1, j + 1), w);
                    witnesses.insert((i + 1, j + 1), x);
                }
                None => {
                    entries.insert((i + 1, j + 1), 0);
                }
            }
        }
    }
    Ok(RankTable {
        shape: shape.clone(),
        field,
        entries,
        witnesses,
    })
}

/// A random inhomogeneous element whose projection beats the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeFinding {
    pub i: usize,
    pub j: usize,
    pub sample: u64,
    pub rank: usize,
    pub table_rank: usize,
}

/// Draws random combinations of the basis of `n(C)` and reports every
/// nonzero block projection of rank below the homogeneous minimum.
pub fn inhomogeneous_probe(report: &NilReport, table: &RankTable, samples: u64, seed: u64) -> Result<Vec<ProbeFinding>> {
    let basis = report.basis_matrices();
    let field = report.field;
    let k = report.shape.k();
    let mut found = Vec::new();
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ s.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut x = Matrix::zeros(report.shape.d(), report.shape.d(), field);
        for b in &basis {
            // sparse combinations reach low-rank elements more often
            if rng.gen_bool(0.5) {
                x = x.add(&b.scale(&field.from_i64(rng.gen_range(-3..=3))))?;
            }
        }
        for i in 1..=k {
            for j in i + 1..=k {
                let p = block_project(&report.shape, &x, i, j)?;
                if p.is_zero() {
                    continue;
                }
                let rank = p.rank();
                let table_rank = table.get(i, j).expect("i < j");
                if rank < table_rank {
                    found.push(ProbeFinding { i, j, sample: s, rank, table_rank });
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn sh(s: &str) -> Shape {
        Shape::parse(s).unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn support_weight() {
        assert_eq!(min_support_weight(&[v(&[1, 1, 0]), v(&[1, 0, 0])], Q).unwrap().unwrap().0, 1);
        assert_eq!(min_support_weight(&[v(&[1, 1, 1]), v(&[1, 2, 3])], Q).unwrap().unwrap().0, 2);
        assert_eq!(min_support_weight(&[v(&[1, 1])], Q).unwrap().unwrap().0, 2);
        assert!(min_support_weight(&[v(&[0, 0])], Q).unwrap().is_none());
        assert!(min_support_weight(&[], Q).unwrap().is_none());
    }

    #[test]
    fn small_tables() {
        let t = rank_table(&sh("1,1,1"), Q).unwrap();
        assert_eq!((t.get(1, 2), t.get(2, 3), t.get(1, 3)), (Some(1), Some(1), Some(0)));
        let t = rank_table(&sh("1,2,1"), Q).unwrap();
        assert_eq!(t.r1k(), 1);
        let t = rank_table(&sh("2,1,2"), Q).unwrap();
        assert_eq!(t.r1k(), 2);
        let t = rank_table(&sh("1,3,1"), Q).unwrap();
        assert_eq!(t.r1k(), 0);
    }

    #[test]
    fn witnesses_realise_ranks() {
        for s in ["2,1,2", "2,3,2", "1,2,2,1", "3,1,3"] {
            let shape = sh(s);
            let report = generate_nilradical(&BlockSeq::canonical(&shape, Q)).unwrap();
            let t = rank_table_of(&report).unwrap();
            for ((i, j), r) in t.entries() {
                if r == 0 {
                    assert!(t.witness(i, j).is_none());
                    continue;
                }
                let w = t.witness(i, j).unwrap();
                assert!(report.basis.contains_matrix(w));
                assert_eq!(block_project(&shape, w, i, j).unwrap().rank(), r, "{s} ({i},{j})");
            }
        }
    }

    #[test]
    fn probe_finds_nothing_on_small_shapes() {
        for s in ["2,1,2", "2,2,2", "1,2,1,2"] {
            let report = generate_nilradical(&BlockSeq::canonical(&sh(s), Q)).unwrap();
            let t = rank_table_of(&report).unwrap();
            assert!(inhomogeneous_probe(&report, &t, 30, 5).unwrap().is_empty(), "{s}");
        }
    }

    #[test]
    fn non_canonical_rejected() {
        let mut seq = BlockSeq::canonical(&sh("2,2"), Q);
        seq.blocks_mut()[0].set(0, 0, Q.from_i64(1));
        let report = generate_nilradical(&seq).unwrap();
        assert!(matches!(rank_table_of(&report), Err(Error::Unsupported(_))));
    }
}
