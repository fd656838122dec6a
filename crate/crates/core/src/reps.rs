//! Uniserial representations `R(x) = D(alpha, lambda)`,
//! `R(v_j) = (ad D(alpha, lambda) - lambda)^j E(S)` of the algebra spanned by
//! `x` and a free nilpotent ideal on `v_0, ..., v_{n-1}`, and the shape
//! lists that classify them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blockstruct::{build_d, normalize_seq, BlockSeq, SeqJson, Shape};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Scalar, Subspace};
use crate::nilradical::{closure, generate_nilradical};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSpec {
    pub n: usize,
    pub lambda: Scalar,
    pub alpha: Scalar,
    pub seq: BlockSeq,
    x_image: Matrix,
    v_images: Vec<Matrix>,
}

fn check_scalar(field: Field, s: &Scalar, name: &str) -> Result<()> {
    if s.field() != field {
        return Err(Error::FieldMismatch(format!("{name} is over {}, sequence over {field}", s.field())));
    }
    Ok(())
}

/// Largest generator count accepted; every image is stored explicitly.
pub const MAX_GENERATORS: usize = 4096;

/// Builds the representation and checks its defining relations.
///
/// Needs `max{d_i + d_{i+1}} <= n + 1` and an admissible sequence.
pub fn build_rep(n: usize, lambda: &Scalar, alpha: &Scalar, seq: &BlockSeq) -> Result<RepSpec> {
    seq.check_admissible()?;
    build_rep_unchecked(n, lambda, alpha, seq)
}

/// [`build_rep`] without the corner condition on the sequence.
pub fn build_rep_unchecked(n: usize, lambda: &Scalar, alpha: &Scalar, seq: &BlockSeq) -> Result<RepSpec> {
    let field = seq.field();
    check_scalar(field, lambda, "lambda")?;
    check_scalar(field, alpha, "alpha")?;
    if n == 0 || n > MAX_GENERATORS {
        return Err(Error::Input(format!("n must be in 1..={MAX_GENERATORS}, got {n}")));
    }
    let shape = seq.shape();
    if shape.max_adjacent_sum() > n + 1 {
        return Err(Error::Admissibility(format!(
            "shape {shape} has max d_i + d_(i+1) = {} > n + 1 = {}",
            shape.max_adjacent_sum(),
            n + 1
        )));
    }
    let x = build_d(shape, alpha, lambda);
    let step = |m: &Matrix| -> Matrix {
        x.bracket(m).expect("same size").sub(&m.scale(lambda)).expect("same size")
    };
    let mut v = vec![seq.to_matrix()];
    for _ in 1..n {
        let next = step(v.last().expect("nonempty"));
        v.push(next);
    }
    if !step(v.last().expect("nonempty")).is_zero() {
        return Err(Error::Internal(format!("(ad x - lambda)^{n} v_0 != 0 on {shape}")));
    }
    let rep = RepSpec {
        n,
        lambda: lambda.clone(),
        alpha: alpha.clone(),
        seq: seq.clone(),
        x_image: x,
        v_images: v,
    };
    if !rep.relations_hold() {
        return Err(Error::Internal("bracket relations fail".into()));
    }
    Ok(rep)
}

impl RepSpec {
    pub fn shape(&self) -> &Shape {
        self.seq.shape()
    }

    pub fn field(&self) -> Field {
        self.seq.field()
    }

    /// `R(x)`.
    pub fn x(&self) -> &Matrix {
        &self.x_image
    }

    /// `R(v_0), ..., R(v_{n-1})`.
    pub fn v(&self) -> &[Matrix] {
        &self.v_images
    }

    /// `[R(x), R(v_j)] = lambda R(v_j) + R(v_{j+1})`, with `R(v_n) = 0`.
    pub fn relations_hold(&self) -> bool {
        let x = &self.x_image;
        let d = self.shape().d();
        let zero = Matrix::zeros(d, d, self.field());
        (0..self.n).all(|j| {
            let next = self.v_images.get(j + 1).unwrap_or(&zero);
            let lhs = x.bracket(&self.v_images[j]).expect("same size");
            let rhs = self.v_images[j].scale(&self.lambda).add(next).expect("same size");
            lhs == rhs
        })
    }

    /// `(ad R(x) - lambda)^n R(v_0) = 0`.
    pub fn top_vanishes(&self) -> bool {
        let last = self.v_images.last().expect("n >= 1");
        last.scale(&self.lambda) == self.x_image.bracket(last).expect("same size")
    }

    /// Each `R(x)_{i,i+1}` or `R(v_0)_{i,i+1}` is nonzero, so the invariant
    /// flag `V_1 < V_2 < ...` is the only one.
    pub fn verify_uniserial(&self) -> bool {
        let d = self.shape().d();
        let v0 = &self.v_images[0];
        (0..d.saturating_sub(1)).all(|i| !self.x_image.get(i, i + 1).is_zero() || !v0.get(i, i + 1).is_zero())
    }

    /// Largest `l` for which the representation factors through the `l`-step
    /// quotient faithfully: the nilpotency degree of `n(S)`.
    pub fn quotient_level(&self) -> Result<usize> {
        if self.lambda.is_zero() {
            return Err(Error::Unsupported("quotient level needs lambda != 0".into()));
        }
        Ok(generate_nilradical(&self.seq)?.degree)
    }

    /// Span of the image: the algebra generated by `R(x)` and the `R(v_j)`.
    pub fn image_algebra(&self) -> Subspace {
        let mut gens = vec![self.x_image.clone()];
        gens.extend(self.v_images.iter().cloned());
        closure(&gens, self.shape().d(), self.field())
    }

    pub fn to_json(&self, with_images: bool) -> RepSpecJson {
        RepSpecJson {
            n: self.n,
            lambda: self.lambda.to_string(),
            alpha: self.alpha.to_string(),
            d: self.shape().dims().to_vec(),
            seq: self.seq.to_json(),
            images: with_images.then(|| RepImages {
                x: self.x_image.clone(),
                v: self.v_images.clone(),
            }),
        }
    }

    /// Rebuilds from JSON. Supplied images must agree with the recomputed ones.
    pub fn from_json(j: &RepSpecJson) -> Result<RepSpec> {
        let seq = BlockSeq::from_json(&j.seq)?;
        if j.d != seq.shape().dims() {
            return Err(Error::Input(format!("d = {:?} disagrees with the sequence shape {}", j.d, seq.shape())));
        }
        let field = seq.field();
        let lambda = Scalar::parse_in(&j.lambda, field)?;
        let alpha = Scalar::parse_in(&j.alpha, field)?;
        let rep = build_rep(j.n, &lambda, &alpha, &seq)?;
        if let Some(images) = &j.images {
            if images.x != rep.x_image || images.v != rep.v_images {
                return Err(Error::Input("stored images disagree with the recomputed ones".into()));
            }
        }
        Ok(rep)
    }

    pub fn from_json_str(s: &str) -> Result<RepSpec> {
        let j: RepSpecJson = serde_json::from_str(s).map_err(|e| Error::Input(format!("representation JSON: {e}")))?;
        RepSpec::from_json(&j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpecJson {
    pub n: usize,
    pub lambda: String,
    pub alpha: String,
    pub d: Vec<usize>,
    pub seq: SeqJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub images: Option<RepImages>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepImages {
    pub x: Matrix,
    pub v: Vec<Matrix>,
}

/// Whether two uniserial representations of the same algebra are
/// non-isomorphic, by comparing `(shape, alpha, normal form)`.
pub fn distinct_normal_forms(a: &RepSpec, b: &RepSpec) -> Result<bool> {
    for r in [a, b] {
        if r.lambda.is_zero() {
            return Err(Error::Unsupported("normal forms classify only for lambda != 0".into()));
        }
    }
    if a.n != b.n || a.lambda != b.lambda {
        return Err(Error::Input("representations of different algebras".into()));
    }
    if a.shape() != b.shape() || a.alpha != b.alpha {
        return Ok(true);
    }
    Ok(normalize_seq(&a.seq)?.normal != normalize_seq(&b.seq)?.normal)
}

/// Which normalized sequences a classification record stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqFamily {
    Any,
    PhiInvariant,
    NotPhiInvariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "ell")]
pub enum ClassMode {
    /// Uniserials of the full algebra.
    FreeAlg,
    /// Relatively faithful uniserials of the `l`-step quotient.
    EllStep(usize),
}

impl fmt::Display for ClassMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassMode::FreeAlg => f.write_str("free_alg"),
            ClassMode::EllStep(_) => f.write_str("ell_step"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub k: usize,
    pub shape: Shape,
    /// Quotient level reached by the sequences of `family`.
    pub ell: usize,
    pub extreme: bool,
    pub family: SeqFamily,
    pub mode: ClassMode,
}

impl ClassRecord {
    pub fn admissible_for(&self) -> &'static str {
        match self.mode {
            ClassMode::FreeAlg => "g_n_lambda",
            ClassMode::EllStep(_) => "g_n_lambda_ell",
        }
    }
}

/// Compositions of `total` with every adjacent sum at most `n + 1` and at
/// least one equal to it, in lexicographic order.
fn uniserial_shapes(n: usize, total: usize) -> Vec<Shape> {
    fn go(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Shape>) {
        if left == 0 {
            if cur.len() >= 2 && cur.windows(2).any(|w| w[0] + w[1] == n + 1) {
                out.push(Shape::new(cur.clone()).expect("positive parts"));
            }
            return;
        }
        for part in 1..=left.min(n) {
            if cur.last().is_some_and(|&p| p + part > n + 1) {
                continue;
            }
            cur.push(part);
            go(n, left - part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, total, &mut Vec::new(), &mut out);
    out
}

/// `(family, level, extreme)` options for normalized sequences on `shape`.
fn level_options(shape: &Shape) -> Vec<(SeqFamily, usize, bool)> {
    let k = shape.k();
    if shape.is_all_ones() {
        vec![(SeqFamily::Any, 1, false)]
    } else if shape.is_odd_symmetric_unit_ends() {
        vec![(SeqFamily::NotPhiInvariant, k - 1, false), (SeqFamily::PhiInvariant, k - 2, true)]
    } else {
        vec![(SeqFamily::Any, k - 1, false)]
    }
}

/// Classification records for uniserials of dimension `total` with `n`
/// generators.
///
/// In `FreeAlg` mode every shape appears, twice when the `phi`-invariant
/// sequences reach a different level. In `EllStep(l)` mode only the
/// families reaching level exactly `l` appear.
pub fn enumerate_shapes(n: usize, total: usize, mode: ClassMode) -> Result<Vec<ClassRecord>> {
    if n < 2 || total < 2 {
        return Err(Error::Input(format!("need n >= 2 and dimension >= 2, got n = {n}, dimension {total}")));
    }
    if let ClassMode::EllStep(0) = mode {
        return Err(Error::Input("ell must be at least 1".into()));
    }
    let mut out = Vec::new();
    for shape in uniserial_shapes(n, total) {
        for (family, ell, extreme) in level_options(&shape) {
            if let ClassMode::EllStep(l) = mode {
                if l != ell {
                    continue;
                }
            }
            out.push(ClassRecord {
                k: shape.k(),
                shape: shape.clone(),
                ell,
                extreme,
                family,
                mode,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockstruct::{random_seq, Constraint, SeqSampler};

    const Q: Field = Field::Rational;

    fn sh(s: &str) -> Shape {
        Shape::parse(s).unwrap()
    }

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i - 1, j - 1, Q)
    }

    #[test]
    fn worked_example() {
        let c = BlockSeq::canonical(&sh("1,2,1"), Q);
        let rep = build_rep(2, &Q.one(), &Q.zero(), &c).unwrap();
        let x = Matrix::from_i64_rows(Q, &[&[0, 0, 0, 0], &[0, -1, 1, 0], &[0, 0, -1, 0], &[0, 0, 0, -2]]);
        assert_eq!(rep.x(), &x);
        assert_eq!(rep.v()[0], e(4, 1, 2).add(&e(4, 3, 4)).unwrap());
        assert_eq!(rep.v()[1], e(4, 2, 4).sub(&e(4, 1, 3)).unwrap());
        assert!(rep.top_vanishes());
        assert!(rep.relations_hold());
        assert!(rep.verify_uniserial());
        assert_eq!(rep.quotient_level().unwrap(), 2);
    }

    #[test]
    fn n_condition() {
        let c = BlockSeq::canonical(&sh("1,1"), Q);
        assert!(build_rep(1, &Q.one(), &Q.zero(), &c).is_ok());
        let c = BlockSeq::canonical(&sh("1,2,1"), Q);
        assert!(matches!(build_rep(1, &Q.one(), &Q.zero(), &c), Err(Error::Admissibility(_))));
    }

    #[test]
    fn image_is_h() {
        for (s, n) in [("1,2,1", 2), ("2,2,1", 3), ("1,3,1", 3)] {
            let seq = random_seq(&sh(s), Q, 9, 3, Constraint::Normalized).unwrap();
            let alpha = Q.from_i64(2);
            let rep = build_rep(n, &Q.one(), &alpha, &seq).unwrap();
            let report = generate_nilradical(&seq).unwrap();
            let h = crate::nilradical::h_algebra(&report, &alpha, &Q.one());
            assert_eq!(rep.image_algebra(), h, "{s}");
        }
    }

    #[test]
    fn uniseriality() {
        let c = BlockSeq::canonical(&sh("2,2"), Q);
        let rep = build_rep(3, &Q.zero(), &Q.zero(), &c).unwrap();
        assert!(rep.verify_uniserial());
        let mut blocks = c.blocks().to_vec();
        blocks[0].set(1, 0, Q.zero());
        let broken = BlockSeq::new_unchecked(sh("2,2"), Q, blocks).unwrap();
        assert!(build_rep(3, &Q.one(), &Q.zero(), &broken).is_err());
        let rep = build_rep_unchecked(3, &Q.one(), &Q.zero(), &broken).unwrap();
        assert!(!rep.verify_uniserial());
    }

    #[test]
    fn quotient_levels() {
        let inv = random_seq(&sh("1,2,1,2,1"), Q, 2, 3, Constraint::NormalizedPhiInvariant).unwrap();
        let rep = build_rep(2, &Q.one(), &Q.zero(), &inv).unwrap();
        assert_eq!(rep.quotient_level().unwrap(), 3);
        let seq = random_seq(&sh("3,5,3,4"), Q, 2, 3, Constraint::Normalized).unwrap();
        let rep = build_rep(8, &Q.one(), &Q.zero(), &seq).unwrap();
        assert_eq!(rep.quotient_level().unwrap(), 3);
        let zero = build_rep(2, &Q.zero(), &Q.zero(), &inv).unwrap();
        assert!(zero.quotient_level().is_err());
    }

    /// Brute-force oracle: all compositions of `total`, filtered by the adjacent-sum condition.
    fn compositions(total: usize) -> Vec<Vec<usize>> {
        (0u32..1 << (total - 1))
            .map(|mask| {
                let mut parts = vec![1];
                for b in 0..total - 1 {
                    if mask & (1 << b) != 0 {
                        parts.push(1);
                    } else {
                        *parts.last_mut().unwrap() += 1;
                    }
                }
                parts
            })
            .collect()
    }

    #[test]
    fn shape_enumeration_matches_brute_force() {
        for n in 2..=4 {
            for total in 2..=9 {
                let mut expected: Vec<Vec<usize>> = compositions(total)
                    .into_iter()
                    .filter(|c| c.len() >= 2 && c.windows(2).map(|w| w[0] + w[1]).max() == Some(n + 1))
                    .collect();
                expected.sort();
                let got: Vec<Vec<usize>> = uniserial_shapes(n, total).iter().map(|s| s.dims().to_vec()).collect();
                assert_eq!(got, expected, "n={n} total={total}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        let recs = enumerate_shapes(2, 4, ClassMode::FreeAlg).unwrap();
        let shapes: Vec<String> = recs.iter().map(|r| r.shape.key()).collect();
        assert_eq!(shapes, vec!["1,1,2", "1,2,1", "2,1,1"]);
        let recs = enumerate_shapes(2, 4, ClassMode::EllStep(2)).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.k == 3 && !r.extreme));
        let recs = enumerate_shapes(2, 7, ClassMode::EllStep(3)).unwrap();
        let ext: Vec<&ClassRecord> = recs.iter().filter(|r| r.extreme).collect();
        assert!(ext.iter().any(|r| r.shape == sh("1,2,1,2,1")));
        assert!(ext.iter().all(|r| r.k == 5 && r.family == SeqFamily::PhiInvariant));
        assert!(recs.iter().filter(|r| !r.extreme).all(|r| r.k == 4));
        assert!(enumerate_shapes(1, 4, ClassMode::FreeAlg).is_err());
    }

    #[test]
    fn ell_even_has_no_extreme() {
        for total in 3..=9 {
            for r in enumerate_shapes(3, total, ClassMode::EllStep(2)).unwrap() {
                assert_eq!(r.k, 3);
                assert!(!r.extreme);
            }
        }
    }

    #[test]
    fn normal_form_comparison() {
        let shape = sh("1,3,1");
        let sampler = SeqSampler::new(5, 3, Constraint::Normalized, Q).unwrap();
        let s = sampler.sample(&shape, 0).unwrap();
        let a = build_rep(3, &Q.one(), &Q.zero(), &s).unwrap();
        let p = sampler.sample_group(&shape, 0);
        let b = build_rep(3, &Q.one(), &Q.zero(), &p.conjugate(&s).unwrap()).unwrap();
        assert!(!distinct_normal_forms(&a, &b).unwrap());
        let mut blocks = s.blocks().to_vec();
        let v = blocks[0].get(0, 1).clone();
        blocks[0].set(0, 1, &v + &Q.one());
        blocks[1].set(1, 0, &v + &Q.one());
        let t = BlockSeq::new(shape.clone(), Q, blocks).unwrap();
        assert!(t.is_normalized());
        let c = build_rep(3, &Q.one(), &Q.zero(), &t).unwrap();
        assert!(distinct_normal_forms(&a, &c).unwrap());
        let d = build_rep(3, &Q.one(), &Q.from_i64(5), &s).unwrap();
        assert!(distinct_normal_forms(&a, &d).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let seq = random_seq(&sh("2,1,2"), Q, 1, 3, Constraint::Normalized).unwrap();
        let rep = build_rep(2, &Q.one(), &Q.from_i64(-1), &seq).unwrap();
        for with_images in [false, true] {
            let s = serde_json::to_string(&rep.to_json(with_images)).unwrap();
            assert_eq!(RepSpec::from_json_str(&s).unwrap(), rep);
        }
        let mut j = rep.to_json(true);
        j.images.as_mut().unwrap().x = Matrix::zeros(5, 5, Q);
        assert!(matches!(RepSpec::from_json(&j), Err(Error::Input(_))));
    }
}
