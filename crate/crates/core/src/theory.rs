//! Closed-form predictions: nilpotency degrees, `r_{1,k}`, Witt dimensions
//! and the free-nilpotent classification. These are the oracles the
//! computed quantities are checked against.

use serde::{Deserialize, Serialize};

use crate::blockstruct::{normalize_seq, BlockSeq, Shape};
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::nilradical::{generate_nilradical, NilReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Generic,
    AllOnes,
    OddSymmetricPhiInvariant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreePrediction {
    pub shape: Shape,
    pub normalized_seq: BlockSeq,
    pub predicted_degree: usize,
    pub case_tag: CaseTag,
}

fn classify(shape: &Shape, normal_is_phi_invariant: bool) -> (usize, CaseTag) {
    let k = shape.k();
    if shape.is_all_ones() {
        (1, CaseTag::AllOnes)
    } else if shape.is_odd_symmetric_unit_ends() && normal_is_phi_invariant {
        (k - 2, CaseTag::OddSymmetricPhiInvariant)
    } else {
        (k - 1, CaseTag::Generic)
    }
}

/// Degree of `n(C)` for the canonical sequence.
pub fn predict_degree_canonical(shape: &Shape) -> DegreePrediction {
    let c = BlockSeq::canonical(shape, Field::Rational);
    let (predicted_degree, case_tag) = classify(shape, c.is_phi_invariant());
    DegreePrediction {
        shape: shape.clone(),
        normalized_seq: c,
        predicted_degree,
        case_tag,
    }
}

fn require_char_zero(field: Field, what: &str) -> Result<()> {
    match field {
        Field::Rational => Ok(()),
        Field::Prime(p) => Err(Error::Unsupported(format!(
            "{what} holds in characteristic 0 only; use the char-p sweep for Fp:{p}"
        ))),
    }
}

/// Degree of `n(S)` for an admissible `S` over `Q`, read off its normal form.
pub fn predict_degree(seq: &BlockSeq) -> Result<DegreePrediction> {
    require_char_zero(seq.field(), "the degree prediction")?;
    let normal = normalize_seq(seq)?.normal;
    let (predicted_degree, case_tag) = classify(seq.shape(), normal.is_phi_invariant());
    Ok(DegreePrediction {
        shape: seq.shape().clone(),
        normalized_seq: normal,
        predicted_degree,
        case_tag,
    })
}

/// `r_{1,k}` of the canonical sequence.
pub fn predict_r1k(shape: &Shape) -> usize {
    if shape.is_all_ones() || shape.is_odd_symmetric_unit_ends() {
        0
    } else if shape.is_odd_symmetric() {
        2
    } else {
        1
    }
}

/// `d_1 = d_k = 1`, odd-symmetric shape and a sequence whose normal form
/// is `phi`-invariant.
pub fn is_extreme_type(seq: &BlockSeq) -> Result<bool> {
    if !seq.shape().is_odd_symmetric_unit_ends() {
        return Ok(false);
    }
    if seq.is_normalized() {
        return Ok(seq.is_phi_invariant());
    }
    Ok(normalize_seq(seq)?.normal.is_phi_invariant())
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1, "mobius of 0");
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Dimension of the degree `m` component of the free Lie algebra on `g`
/// generators, `(1/m) sum_{s | m} mu(s) g^{m/s}`.
///
/// Panics if `g` or `m` is zero, or if `g^m` overflows `i128`.
pub fn witt_dim(g: u64, m: u32) -> u64 {
    assert!(g >= 1 && m >= 1, "witt_dim needs g >= 1 and m >= 1");
    let mut total: i128 = 0;
    for s in 1..=m {
        if !m.is_multiple_of(s) {
            continue;
        }
        let pow = (g as i128).checked_pow(m / s).expect("witt_dim overflow");
        total += mobius(s as u64) as i128 * pow;
    }
    debug_assert_eq!(total % m as i128, 0);
    u64::try_from(total / m as i128).expect("witt_dim overflow")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeVerdict {
    Free,
    NotFree,
}

/// Which entry of the free classification a shape falls under, with its
/// generator count and step count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeCase {
    pub case: u8,
    pub generators: usize,
    pub steps: usize,
}

/// The classification list: `n(S)` is free `N`-step nilpotent exactly for
/// these shapes (with the stated `phi`-invariance of the normal form).
pub fn predicted_free(shape: &Shape, normal_is_phi_invariant: bool) -> Option<FreeCase> {
    let d = shape.dims();
    let case = |case, generators, steps| Some(FreeCase { case, generators, steps });
    if shape.is_all_ones() {
        return case(1, 1, 1);
    }
    match *d {
        // abelian only when the middle block is odd
        [1, m, 1] if m % 2 == 1 && normal_is_phi_invariant => return case(2, m, 1),
        [a, 1, b] if a >= 2 && (a == b || a == b + 1) => return case(3, a, 2),
        [a, 1, b] if b >= 2 && b == a + 1 => return case(3, b, 2),
        [a, 2, b] if a == b => return case(3, a + 1, 2),
        [2, 1, 1, 2] | [2, 1, 2, 1] | [1, 2, 1, 2] => return case(4, 2, 3),
        [1, 2, 1, 2, 1] if normal_is_phi_invariant => return case(5, 2, 3),
        [2, 1, 2, 1, 2] => return case(6, 2, 4),
        _ => {}
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeProfile {
    pub shape: Shape,
    /// `max{d_i + d_{i+1} - 2}`, the top power of `ad D`.
    pub rho: usize,
    /// `max{d_i + d_{i+1} - 1}`, the generator count used for the comparison.
    pub rho_gen: usize,
    /// Nilpotency degree `N` of `n(S)`.
    pub steps: usize,
    pub lcs_quotient_dims: Vec<usize>,
    pub witt_dims: Vec<u64>,
    pub verdict: FreeVerdict,
    /// First `m` with `dim n^{m-1}/n^m != witt_dim(rho_gen, m)`.
    pub failing_degree: Option<usize>,
    pub predicted: Option<FreeCase>,
}

impl FreeProfile {
    pub fn predicted_verdict(&self) -> FreeVerdict {
        if self.predicted.is_some() {
            FreeVerdict::Free
        } else {
            FreeVerdict::NotFree
        }
    }

    pub fn agrees(&self) -> bool {
        self.verdict == self.predicted_verdict()
    }
}

/// Compares `n(S)` with the free nilpotent algebra of the same generator
/// count and step, and with the classification list.
pub fn free_check(seq: &BlockSeq) -> Result<FreeProfile> {
    require_char_zero(seq.field(), "the free classification")?;
    let report = generate_nilradical(seq)?;
    let phi = normalize_seq(seq)?.normal.is_phi_invariant();
    Ok(free_profile(&report, phi))
}

/// [`free_check`] on an already computed report; `normal_is_phi_invariant`
/// refers to the normal form of the report's sequence.
pub fn free_profile(report: &NilReport, normal_is_phi_invariant: bool) -> FreeProfile {
    let shape = &report.shape;
    let rho_gen = shape.generator_count();
    let quotients = report.lcs_quotient_dims();
    let witt: Vec<u64> = (1..=report.degree).map(|m| witt_dim(rho_gen as u64, m as u32)).collect();
    let failing_degree = quotients
        .iter()
        .zip(&witt)
        .position(|(&q, &w)| q as u64 != w)
        .map(|i| i + 1);
    FreeProfile {
        shape: shape.clone(),
        rho: shape.rho(),
        rho_gen,
        steps: report.degree,
        lcs_quotient_dims: quotients,
        witt_dims: witt,
        verdict: if failing_degree.is_none() { FreeVerdict::Free } else { FreeVerdict::NotFree },
        failing_degree,
        predicted: predicted_free(shape, normal_is_phi_invariant),
    }
}
