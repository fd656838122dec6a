//! The nilpotent algebra `n(S)` generated by `E^{(l)}(S) = (ad D(0,0))^l E(S)`,
//! its lower central series and graded structure.

pub mod rank_table;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::blockstruct::{build_d, BlockSeq, Shape};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Scalar, Subspace};

pub use rank_table::{inhomogeneous_probe, rank_table, rank_table_of, min_support_weight, ProbeFinding, RankTable};

/// `(ad a)^power b`.
pub fn ad_power(a: &Matrix, b: &Matrix, power: usize) -> Result<Matrix> {
    let mut x = b.clone();
    for _ in 0..power {
        x = a.bracket(&x)?;
    }
    Ok(x)
}

/// `E^{(0)}(S), ..., E^{(rho)}(S)` with `rho = max{d_i + d_{i+1} - 2}`.
pub fn generators(seq: &BlockSeq) -> Vec<Matrix> {
    let shape = seq.shape();
    let field = seq.field();
    let d0 = build_d(shape, &field.zero(), &field.zero());
    let mut out = Vec::with_capacity(shape.rho() + 1);
    let mut x = seq.to_matrix();
    for l in 0..=shape.rho() {
        if l > 0 {
            x = d0.bracket(&x).expect("same size");
        }
        out.push(x.clone());
    }
    out
}

/// Span of the Lie algebra generated by `gens` inside `gl(d)`.
///
/// Right-normed brackets `[g_1, [g_2, ... g_m]]` span the generated algebra,
/// so only `[g, b]` with `g` a generator and `b` a newly added element are formed.
pub fn closure(gens: &[Matrix], d: usize, field: Field) -> Subspace {
    let mut sp = Subspace::for_matrices(d, field);
    let mut queue: Vec<Matrix> = Vec::new();
    for g in gens {
        if sp.insert_matrix(g) {
            queue.push(g.clone());
        }
    }
    while let Some(b) = queue.pop() {
        for g in gens {
            let c = g.bracket(&b).expect("same size");
            if sp.insert_matrix(&c) {
                queue.push(c);
            }
        }
    }
    sp
}

/// `span{[a, b] : a in left, b in right}`, into a subspace with `like`'s order.
fn bracket_span<'a>(left: impl Iterator<Item = &'a Matrix> + Clone, right: &[Matrix], like: &Subspace) -> Subspace {
    let mut out = like.empty_like();
    for b in right {
        for a in left.clone() {
            out.insert_matrix(&a.bracket(b).expect("same size"));
        }
    }
    out
}

/// Lower central series `n^0 = n`, `n^{i+1} = [X, n^i]` for an algebra `n`
/// generated by `gens`, ending with the zero subspace.
fn lcs_by_generators(basis: &Subspace, gens: &[Matrix]) -> Vec<Subspace> {
    let mut series = vec![basis.clone()];
    while series.last().expect("nonempty").dim() > 0 {
        let prev = series.last().expect("nonempty").basis_matrices();
        let next = bracket_span(gens.iter(), &prev, basis);
        if next.dim() >= series.last().expect("nonempty").dim() {
            // not nilpotent; stop rather than loop
            series.push(next);
            break;
        }
        series.push(next);
    }
    series
}

/// Lower central series of the subalgebra with basis `basis`, computed from
/// the definition `n^{i+1} = span [n, n^i]`.
///
/// Fails if `basis` is not closed under the bracket or does not contain
/// `generators`, or if the series stalls above zero.
pub fn lower_central_series(basis: &Subspace, generators: &[Matrix]) -> Result<Vec<Subspace>> {
    for g in generators {
        if !basis.contains_matrix(g) {
            return Err(Error::NotClosed("a generator lies outside the span".into()));
        }
    }
    let mats = basis.basis_matrices();
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            if !basis.contains_matrix(&a.bracket(b)?) {
                return Err(Error::NotClosed("bracket of two basis elements leaves the span".into()));
            }
        }
    }
    let mut series = vec![basis.clone()];
    loop {
        let last = series.last().expect("nonempty");
        if last.dim() == 0 {
            break;
        }
        let next = bracket_span(mats.iter(), &last.basis_matrices(), basis);
        if next.dim() == last.dim() {
            return Err(Error::Unsupported("lower central series stalls: algebra is not nilpotent".into()));
        }
        series.push(next);
    }
    Ok(series)
}

/// `min{m : n^m = 0}` from the series dimensions.
pub fn degree_from_dims(lcs_dims: &[usize]) -> usize {
    lcs_dims.iter().position(|&x| x == 0).unwrap_or(lcs_dims.len())
}

#[derive(Clone, Debug)]
pub struct NilReport {
    pub shape: Shape,
    pub seq: BlockSeq,
    pub field: Field,
    pub generators: Vec<Matrix>,
    /// `max{d_i + d_{i+1} - 2}`.
    pub rho: usize,
    /// Number of linearly independent generators (`rho + 1` in characteristic 0).
    pub independent_generators: usize,
    pub basis: Subspace,
    /// `n^0, n^1, ...`, ending with the zero subspace.
    pub lcs: Vec<Subspace>,
    pub lcs_dims: Vec<usize>,
    pub degree: usize,
    /// Number of basis elements per leading diagonal offset.
    pub graded_dims: BTreeMap<usize, usize>,
    /// Largest numerator/denominator bit length in the basis.
    pub max_bits: u64,
}

impl NilReport {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis_matrices(&self) -> Vec<Matrix> {
        self.basis.basis_matrices()
    }

    /// Dimensions of `n^{m-1} / n^m` for `m = 1..=degree`.
    pub fn lcs_quotient_dims(&self) -> Vec<usize> {
        self.lcs_dims.windows(2).map(|w| w[0] - w[1]).collect()
    }

    pub fn to_json(&self, with_basis: bool) -> NilReportJson {
        NilReportJson {
            shape: self.shape.dims().to_vec(),
            field: self.field.to_string(),
            rho: self.rho,
            generator_count: self.rho + 1,
            independent_generators: self.independent_generators,
            dim: self.dim(),
            degree: self.degree,
            lcs_dims: self.lcs_dims.clone(),
            graded_dims: self.graded_dims.clone(),
            max_bits: self.max_bits,
            basis: with_basis.then(|| self.basis_matrices()),
        }
    }
}

/// Wire form of a [`NilReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilReportJson {
    pub shape: Vec<usize>,
    pub field: String,
    pub rho: usize,
    pub generator_count: usize,
    pub independent_generators: usize,
    pub dim: usize,
    pub degree: usize,
    pub lcs_dims: Vec<usize>,
    pub graded_dims: BTreeMap<usize, usize>,
    pub max_bits: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basis: Option<Vec<Matrix>>,
}

/// Builds `n(S)` and its lower central series.
pub fn generate_nilradical(seq: &BlockSeq) -> Result<NilReport> {
    seq.check_admissible()?;
    let shape = seq.shape().clone();
    let field = seq.field();
    let gens = generators(seq);
    let independent_generators = crate::exactla::span(
        shape.d() * shape.d(),
        field,
        &gens.iter().map(|g| g.entries().to_vec()).collect::<Vec<_>>(),
    )
    .dim();
    let basis = closure(&gens, shape.d(), field);
    let lcs = lcs_by_generators(&basis, &gens);
    let lcs_dims: Vec<usize> = lcs.iter().map(Subspace::dim).collect();
    if *lcs_dims.last().expect("nonempty") != 0 {
        return Err(Error::Internal(format!("n(S) on {shape} is not nilpotent")));
    }
    let degree = degree_from_dims(&lcs_dims);
    let graded_dims = graded_dims_of(&basis, shape.d());
    let max_bits = basis.max_bits();
    Ok(NilReport {
        rho: shape.rho(),
        shape,
        seq: seq.clone(),
        field,
        generators: gens,
        independent_generators,
        basis,
        lcs,
        lcs_dims,
        degree,
        graded_dims,
        max_bits,
    })
}

fn graded_dims_of(basis: &Subspace, d: usize) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for &p in basis.pivots() {
        let (i, j) = (p / d, p % d);
        *out.entry(j.saturating_sub(i)).or_insert(0) += 1;
    }
    out
}

/// Dimension per diagonal degree: homogeneous components when `n(S)` is
/// graded (canonical `S`), otherwise the quotients of the diagonal-degree
/// filtration.
pub fn graded_dims(report: &NilReport) -> BTreeMap<usize, usize> {
    graded_dims_of(&report.basis, report.shape.d())
}

/// Dimension per block degree `j - i`, counted over basis elements that are
/// homogeneous for the block grading. Returns `None` if some basis element
/// is not.
pub fn block_graded_dims(report: &NilReport) -> Option<BTreeMap<usize, usize>> {
    let shape = &report.shape;
    let mut out = BTreeMap::new();
    for m in report.basis_matrices() {
        let mut deg = None;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m.get(i, j).is_zero() {
                    continue;
                }
                let b = shape.block_of(j) as i64 - shape.block_of(i) as i64;
                if *deg.get_or_insert(b) != b {
                    return None;
                }
            }
        }
        *out.entry(deg? as usize).or_insert(0) += 1;
    }
    Some(out)
}

/// `[h, h]` for `h = F D(alpha, lambda) + n(S)`.
pub fn derived_algebra(seq: &BlockSeq, alpha: &Scalar, lambda: &Scalar) -> Result<Subspace> {
    let report = generate_nilradical(seq)?;
    let d = build_d(seq.shape(), alpha, lambda);
    let mut h = report.basis_matrices();
    h.push(d);
    let mut out = report.basis.empty_like();
    for (i, a) in h.iter().enumerate() {
        for b in &h[i + 1..] {
            out.insert_matrix(&a.bracket(b)?);
        }
    }
    Ok(out)
}

/// The subspace `F D(alpha, lambda) + n(S)`.
pub fn h_algebra(report: &NilReport, alpha: &Scalar, lambda: &Scalar) -> Subspace {
    let mut h = report.basis.clone();
    h.insert_matrix(&build_d(&report.shape, alpha, lambda));
    h
}
