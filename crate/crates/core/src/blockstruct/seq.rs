use serde::{Deserialize, Serialize};

use super::shape::Shape;
use crate::error::{Error, Result};
use crate::exactla::{matrix_from_json, Field, Matrix, Scalar};

/// Inter-block matrices `S(1), ..., S(k-1)`, `S(i)` of size `d_i x d_{i+1}`.
///
/// Internally `blocks[i]` holds `S(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockSeq {
    shape: Shape,
    field: Field,
    blocks: Vec<Matrix>,
}

impl BlockSeq {
    /// Checks block sizes, the common field and admissibility
    /// (`S(i)_{d_i,1} != 0` for every `i`).
    pub fn new(shape: Shape, field: Field, blocks: Vec<Matrix>) -> Result<BlockSeq> {
        let seq = BlockSeq::new_unchecked(shape, field, blocks)?;
        seq.check_admissible()?;
        Ok(seq)
    }

    /// Like [`BlockSeq::new`] but skips the corner condition. Only block sizes
    /// and the field are checked.
    pub fn new_unchecked(shape: Shape, field: Field, blocks: Vec<Matrix>) -> Result<BlockSeq> {
        if blocks.len() + 1 != shape.k() {
            return Err(Error::Dimension(format!(
                "shape {shape} needs {} blocks, got {}",
                shape.k() - 1,
                blocks.len()
            )));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.rows() != shape.dim(i) || b.cols() != shape.dim(i + 1) {
                return Err(Error::Dimension(format!(
                    "S({}) is {}x{}, expected {}x{}",
                    i + 1,
                    b.rows(),
                    b.cols(),
                    shape.dim(i),
                    shape.dim(i + 1)
                )));
            }
            if b.field() != field {
                return Err(Error::FieldMismatch(format!("S({}) is over {}, expected {field}", i + 1, b.field())));
            }
        }
        Ok(BlockSeq { shape, field, blocks })
    }

    pub fn check_admissible(&self) -> Result<()> {
        let bad: Vec<String> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.get(b.rows() - 1, 0).is_zero())
            .map(|(i, b)| format!("S({})_{{{},1}} = 0", i + 1, b.rows()))
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Admissibility(bad.join(", ")))
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    /// The canonical sequence: each `C(i)` has a single 1 in its bottom-left corner.
    pub fn canonical(shape: &Shape, field: Field) -> BlockSeq {
        let blocks = (0..shape.k() - 1)
            .map(|i| {
                let (r, c) = (shape.dim(i), shape.dim(i + 1));
                let mut m = Matrix::zeros(r, c, field);
                m.set(r - 1, 0, field.one());
                m
            })
            .collect();
        BlockSeq {
            shape: shape.clone(),
            field,
            blocks,
        }
    }

    /// Reads the super-diagonal blocks of a `d x d` matrix.
    pub fn from_matrix(shape: &Shape, m: &Matrix) -> Result<BlockSeq> {
        if m.rows() != shape.d() || m.cols() != shape.d() {
            return Err(Error::Dimension(format!("matrix is {}x{}, shape {shape} needs d = {}", m.rows(), m.cols(), shape.d())));
        }
        let blocks = (0..shape.k() - 1)
            .map(|i| m.submatrix(shape.offset(i), shape.offset(i + 1), shape.dim(i), shape.dim(i + 1)))
            .collect();
        BlockSeq::new(shape.clone(), m.field(), blocks)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// `S(i)` with 1-based `i`.
    pub fn block(&self, i: usize) -> &Matrix {
        &self.blocks[i - 1]
    }

    pub fn blocks_mut(&mut self) -> &mut [Matrix] {
        &mut self.blocks
    }

    /// `E(S)`: `S(i)` in block position `(i, i+1)`, zero elsewhere.
    pub fn to_matrix(&self) -> Matrix {
        let d = self.shape.d();
        let mut e = Matrix::zeros(d, d, self.field);
        for (i, b) in self.blocks.iter().enumerate() {
            e.set_submatrix(self.shape.offset(i), self.shape.offset(i + 1), b);
        }
        e
    }

    /// Residuals of the normalization conditions whose entries sit at diagonal
    /// offset `t`. All vanish iff the conditions at that offset hold.
    ///
    /// Offset 1 carries the corner condition `S(i)_{d_i,1} = 1`. Offset `t >= 2`
    /// carries the mirror condition `S(i)_{d_i,t} = S(i+1)_{d_{i+1}+1-t,1}` and,
    /// unless `weak`, the edge conditions `S(1)_{d_1+1-t,1} = 0` and
    /// `S(k-1)_{d_{k-1},t} = 0`.
    pub fn condition_residuals(&self, t: usize, weak: bool) -> Vec<Scalar> {
        let k = self.shape.k();
        let one = self.field.one();
        let mut out = Vec::new();
        if t == 1 {
            for b in &self.blocks {
                out.push(b.get(b.rows() - 1, 0) - &one);
            }
            return out;
        }
        for i in 0..k.saturating_sub(2) {
            let (a, b) = (&self.blocks[i], &self.blocks[i + 1]);
            let mid = self.shape.dim(i + 1);
            if t <= mid {
                out.push(a.get(a.rows() - 1, t - 1) - b.get(mid - t, 0));
            }
        }
        if !weak {
            let first = &self.blocks[0];
            if t <= self.shape.dim(0) {
                out.push(first.get(self.shape.dim(0) - t, 0).clone());
            }
            let last = &self.blocks[k - 2];
            if t <= self.shape.dim(k - 1) {
                out.push(last.get(last.rows() - 1, t - 1).clone());
            }
        }
        out
    }

    fn satisfies(&self, weak: bool) -> bool {
        let max_t = *self.shape.dims().iter().max().expect("nonempty");
        (1..=max_t).all(|t| self.condition_residuals(t, weak).iter().all(Scalar::is_zero))
    }

    /// Corner, mirror and edge conditions.
    pub fn is_normalized(&self) -> bool {
        self.satisfies(false)
    }

    /// Corner and mirror conditions only.
    pub fn is_weakly_normalized(&self) -> bool {
        self.satisfies(true)
    }

    /// `phi(E(S)) = E(S)`; false for non-symmetric shapes.
    pub fn is_phi_invariant(&self) -> bool {
        if !self.shape.is_symmetric() {
            return false;
        }
        let e = self.to_matrix();
        e.phi().expect("square") == e
    }

    /// The `phi`-symmetrization `(E + phi(E)) / 2` as a sequence.
    pub fn phi_symmetrized(&self) -> Result<BlockSeq> {
        if !self.shape.is_symmetric() {
            return Err(Error::Constraint(format!("shape {} is not symmetric", self.shape)));
        }
        let half = self
            .field
            .from_i64(2)
            .inv()
            .ok_or_else(|| Error::Constraint("phi-symmetrization needs characteristic != 2".into()))?;
        let e = self.to_matrix();
        let sym = e.add(&e.phi()?)?.scale(&half);
        BlockSeq::from_matrix(&self.shape, &sym)
    }

    pub fn to_json(&self) -> SeqJson {
        SeqJson {
            d: self.shape.dims().to_vec(),
            blocks: self.blocks.iter().map(Matrix::to_string_rows).collect(),
            field: self.field.to_string(),
        }
    }

    pub fn from_json(j: &SeqJson) -> Result<BlockSeq> {
        let shape = Shape::new(j.d.clone())?;
        let field = Field::parse(&j.field)?;
        let blocks = j
            .blocks
            .iter()
            .map(|rows| {
                let v = serde_json::to_value(rows).map_err(|e| Error::Input(e.to_string()))?;
                matrix_from_json(&v, field)
            })
            .collect::<Result<Vec<_>>>()?;
        BlockSeq::new(shape, field, blocks)
    }

    /// Parses the `{"d": [...], "blocks": [...], "field": ...}` document.
    pub fn from_json_str(s: &str) -> Result<BlockSeq> {
        let j: SeqJson = serde_json::from_str(s).map_err(|e| Error::Input(format!("block sequence JSON: {e}")))?;
        BlockSeq::from_json(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn max_bits(&self) -> u64 {
        self.blocks.iter().map(Matrix::max_bits).max().unwrap_or(0)
    }
}

/// Wire form of a [`BlockSeq`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeqJson {
    pub d: Vec<usize>,
    pub blocks: Vec<Vec<Vec<String>>>,
    #[serde(default = "default_field")]
    pub field: String,
}

fn default_field() -> String {
    "Q".into()
}

impl Serialize for BlockSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlockSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BlockSeq, D::Error> {
        let j = SeqJson::deserialize(d)?;
        BlockSeq::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// `D(alpha, lambda) = J^{d_1}(alpha) + J^{d_2}(alpha - lambda) + ...` with upper
/// Jordan blocks.
pub fn build_d(shape: &Shape, alpha: &Scalar, lambda: &Scalar) -> Matrix {
    let field = alpha.field();
    let d = shape.d();
    let mut m = Matrix::zeros(d, d, field);
    let mut eig = alpha.clone();
    for i in 0..shape.k() {
        let o = shape.offset(i);
        for r in 0..shape.dim(i) {
            m.set(o + r, o + r, eig.clone());
            if r + 1 < shape.dim(i) {
                m.set(o + r, o + r + 1, field.one());
            }
        }
        eig = &eig - lambda;
    }
    m
}

/// `E(S)`.
pub fn build_e(seq: &BlockSeq) -> Result<Matrix> {
    seq.check_admissible()?;
    Ok(seq.to_matrix())
}

/// `p_{i,j}(a)`: the `(i, j)` block of `a`, 1-based block indices.
pub fn block_project(shape: &Shape, a: &Matrix, i: usize, j: usize) -> Result<Matrix> {
    let k = shape.k();
    if !(1..=k).contains(&i) || !(1..=k).contains(&j) {
        return Err(Error::Index(format!("block ({i},{j}) outside 1..={k}")));
    }
    if a.rows() != shape.d() || a.cols() != shape.d() {
        return Err(Error::Dimension(format!("matrix is {}x{}, shape {shape} needs d = {}", a.rows(), a.cols(), shape.d())));
    }
    Ok(a.submatrix(shape.offset(i - 1), shape.offset(j - 1), shape.dim(i - 1), shape.dim(j - 1)))
}
