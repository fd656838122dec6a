//! Dense matrices over a single exact field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// The matrix unit with a single 1 at (0-based) `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize, field: Field) -> Matrix {
        let mut m = Matrix::zeros(n, n, field);
        m.set(i, j, field.one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let field = rows
            .iter()
            .flatten()
            .next()
            .map(Scalar::field)
            .unwrap_or(Field::Rational);
        Matrix::from_rows_in(rows, c, field).inspect(|m| {
            debug_assert_eq!(m.rows, r);
        })
    }

    /// Builds from rows, requiring every entry to lie in `field`.
    pub fn from_rows_in(rows: Vec<Vec<Scalar>>, cols: usize, field: Field) -> Result<Matrix> {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch(format!("entry {x} is not in {field}")));
                }
                entries.push(x);
            }
        }
        Ok(Matrix {
            rows: r,
            cols,
            field,
            entries,
        })
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| field.from_i64(v)).collect()
            })
            .collect();
        Matrix::from_rows_in(data, cols, field).expect("consistent rows")
    }

    /// Reassembles an `n x n` matrix from its row-major vectorization.
    pub fn from_vector(n: usize, field: Field, v: Vec<Scalar>) -> Result<Matrix> {
        if v.len() != n * n {
            return Err(Error::Dimension(format!("vector of length {} is not {n}x{n}", v.len())));
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            field,
            entries: v,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_vector(self) -> Vec<Scalar> {
        self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|x| !x.is_zero()).count()
    }

    fn check_same_shape(&self, other: &Matrix, what: &str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{what}: {} vs {}", self.field, other.field)));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("mul: {} vs {}", self.field, other.field)));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "mul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// The commutator `ab - ba`.
    pub fn bracket(&self, other: &Matrix) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("bracket of non-square {}x{}", self.rows, self.cols)));
        }
        self.check_same_shape(other, "bracket")?;
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(ab.zip_with(&ba, |x, y| x - y))
    }

    /// `rows x cols` submatrix starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols, self.field);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Exact rank. Over Q rows are cleared of denominators and reduced by
    /// fraction-free (Bareiss) elimination over the integers.
    pub fn rank(&self) -> usize {
        match self.field {
            Field::Rational => bareiss_rank(self),
            Field::Prime(_) => self.rref().1.len(),
        }
    }

    /// Reduced row-echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pv = m.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * pv);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right null space `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![self.field.zero(); self.cols];
            x[free] = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -r.get(row, free);
            }
            basis.push(x);
        }
        basis
    }

    /// Solves `self * x = b`. Returns the solution with free variables set to
    /// zero and whether it is unique; `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<(Vec<Scalar>, bool)>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("rhs length {} vs {} rows", b.len(), self.rows)));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(Some((x, pivots.len() == self.cols)))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.field);
        aug.set_submatrix(0, 0, self);
        aug.set_submatrix(0, n, &Matrix::identity(n, self.field));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }

    /// Entries of diagonal offset `j - i = t`, everything else zeroed.
    pub fn diag_component(&self, t: i64) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols, self.field);
        for i in 0..self.rows {
            let j = i as i64 + t;
            if j >= 0 && (j as usize) < self.cols {
                out.set(i, j as usize, self.get(i, j as usize).clone());
            }
        }
        out
    }

    /// Smallest diagonal offset carrying a nonzero entry (`None` for zero).
    pub fn ddeg(&self) -> Option<i64> {
        let mut best: Option<i64> = None;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.get(i, j).is_zero() {
                    let t = j as i64 - i as i64;
                    best = Some(best.map_or(t, |b| b.min(t)));
                }
            }
        }
        best
    }

    /// `phi(A)_{i,j} = (-1)^{i-j+1} A_{d+1-j, d+1-i}`, equivalently `-K A^T K^{-1}`.
    pub fn phi(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("phi of a non-square matrix".into()));
        }
        let d = self.rows;
        let mut out = Matrix::zeros(d, d, self.field);
        for i in 0..d {
            for j in 0..d {
                let v = self.get(d - 1 - j, d - 1 - i);
                if v.is_zero() {
                    continue;
                }
                // i - j + 1 has the parity of the 1-based expression
                let odd = (i + 1 + j) % 2 == 1;
                out.set(i, j, if odd { -v } else { v.clone() });
            }
        }
        Ok(out)
    }

    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(Scalar::bits).max().unwrap_or(0)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

fn bareiss_rank(m: &Matrix) -> usize {
    let cols = m.cols;
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .filter_map(|x| x.as_rational())
                .fold(BigInt::one(), |acc, r| acc.lcm(&r.denom()));
            row.iter()
                .map(|x| {
                    let r = x.as_rational().expect("rational entry");
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .filter(|row: &Vec<BigInt>| row.iter().any(|x| !x.is_zero()))
        .collect();
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            for j in (c + 1)..cols {
                let v = &row[j] * &pivot_row[c] - &row[c] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Matrix, D::Error> {
        let rows: Vec<Vec<Scalar>> = Vec::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Parses a JSON array of arrays of scalar strings into a matrix over `field`.
pub fn matrix_from_json(value: &serde_json::Value, field: Field) -> Result<Matrix> {
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Input("matrix must be an array of rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    let mut cols = None;
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Input("matrix row must be an array".into()))?;
        let parsed = row
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => Scalar::parse_in(s, field),
                serde_json::Value::Number(n) if n.is_i64() => Ok(field.from_i64(n.as_i64().unwrap())),
                _ => Err(Error::Input(format!("matrix entry {x} is not a scalar string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let c = *cols.get_or_insert(parsed.len());
        if c != parsed.len() {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        out.push(parsed);
    }
    Matrix::from_rows_in(out, cols.unwrap_or(0), field)
}
