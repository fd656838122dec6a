//! Incremental reduced row-echelon subspaces.
//!
//! Coordinates are visited in a fixed scan order, and the pivot of a basis
//! row is its first nonzero coordinate in that order. For vectorized `d x d`
//! matrices the order runs through diagonal offsets `j - i` ascending and
//! rows ascending within an offset, so a subspace graded or filtered by
//! diagonal degree is echelonized compatibly with that filtration.

use std::collections::BTreeMap;

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    field: Field,
    /// Coordinate visited at each scan position.
    order: Vec<usize>,
    /// Scan position of each coordinate.
    rank_of: Vec<usize>,
    /// Basis rows sorted by pivot scan position.
    basis: Vec<Vec<Scalar>>,
    /// Pivot coordinate of each basis row.
    pivots: Vec<usize>,
}

impl Subspace {
    /// Zero subspace of `F^n` with the natural coordinate order.
    pub fn new(ambient_dim: usize, field: Field) -> Subspace {
        Subspace::with_order((0..ambient_dim).collect(), field)
    }

    /// Zero subspace of `gl(d)` (row-major vectorization) scanned by diagonal offset.
    pub fn for_matrices(d: usize, field: Field) -> Subspace {
        Subspace::with_order(matrix_scan_order(d), field)
    }

    fn with_order(order: Vec<usize>, field: Field) -> Subspace {
        let n = order.len();
        let mut rank_of = vec![0; n];
        for (pos, &c) in order.iter().enumerate() {
            rank_of[c] = pos;
        }
        Subspace {
            ambient_dim: n,
            field,
            order,
            rank_of,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// An empty subspace sharing this one's ambient space and scan order.
    pub fn empty_like(&self) -> Subspace {
        Subspace {
            basis: Vec::new(),
            pivots: Vec::new(),
            ..self.clone()
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Pivot coordinate to basis index.
    pub fn pivot_map(&self) -> BTreeMap<usize, usize> {
        self.pivots.iter().enumerate().map(|(i, &p)| (p, i)).collect()
    }

    /// Scan position of a coordinate.
    pub fn scan_position(&self, coord: usize) -> usize {
        self.rank_of[coord]
    }

    fn check(&self, v: &[Scalar]) {
        assert_eq!(v.len(), self.ambient_dim, "vector length does not match ambient dimension");
    }

    /// Reduces `v` against the basis in place; returns the pivot coordinate
    /// of the remainder, if it is nonzero.
    fn reduce(&self, v: &mut [Scalar]) -> Option<usize> {
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        self.order.iter().copied().find(|&c| !v[c].is_zero())
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.check(v);
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        self.check(v);
        let mut w = v.to_vec();
        let Some(p) = self.reduce(&mut w) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero pivot");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.basis.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&w) {
                if !r.is_zero() {
                    *x = &*x - &(&f * r);
                }
            }
        }
        let pos = self.rank_of[p];
        let at = self.pivots.partition_point(|&q| self.rank_of[q] < pos);
        self.basis.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    /// Functional form of [`Subspace::insert`].
    pub fn inserted(mut self, v: &[Scalar]) -> (Subspace, bool) {
        let grew = self.insert(v);
        (self, grew)
    }

    pub fn insert_matrix(&mut self, m: &Matrix) -> bool {
        self.insert(m.entries())
    }

    pub fn contains_matrix(&self, m: &Matrix) -> bool {
        self.contains(m.entries())
    }

    /// Basis rows reshaped as `d x d` matrices.
    pub fn basis_matrices(&self) -> Vec<Matrix> {
        let d = (self.ambient_dim as f64).sqrt().round() as usize;
        assert_eq!(d * d, self.ambient_dim, "ambient space is not a matrix space");
        self.basis
            .iter()
            .map(|v| Matrix::from_vector(d, self.field, v.clone()).expect("square"))
            .collect()
    }

    /// Whether every vector of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn max_bits(&self) -> u64 {
        self.basis.iter().flatten().map(Scalar::bits).max().unwrap_or(0)
    }
}

/// Row-major coordinates of `gl(d)` ordered by diagonal offset `j - i`
/// ascending (from `-(d-1)` to `d-1`), then by row.
pub fn matrix_scan_order(d: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(d * d);
    for t in -(d as i64 - 1)..=(d as i64 - 1) {
        for i in 0..d as i64 {
            let j = i + t;
            if (0..d as i64).contains(&j) {
                order.push((i * d as i64 + j) as usize);
            }
        }
    }
    order
}

/// Span of a list of vectors.
pub fn span(ambient_dim: usize, field: Field, vectors: &[Vec<Scalar>]) -> Subspace {
    let mut s = Subspace::new(ambient_dim, field);
    for v in vectors {
        s.insert(v);
    }
    s
}
