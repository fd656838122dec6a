use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block sizes `(d_1, ..., d_k)` with `k >= 2`, all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Shape {
    dims: Vec<usize>,
    /// `offsets[i]` is the 0-based row of the first entry of block `i`; the
    /// final element is the total size.
    offsets: Vec<usize>,
}

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Shape> {
        if dims.len() < 2 {
            return Err(Error::Input(format!("shape needs at least two blocks, got {dims:?}")));
        }
        if dims.contains(&0) {
            return Err(Error::Input(format!("block sizes must be positive: {dims:?}")));
        }
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &x in &dims {
            acc = acc
                .checked_add(x)
                .ok_or_else(|| Error::Input("shape too large".into()))?;
            offsets.push(acc);
        }
        Ok(Shape { dims, offsets })
    }

    /// Parses a comma separated list such as `1,2,1` (parentheses allowed).
    pub fn parse(s: &str) -> Result<Shape> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let dims = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Input(format!("bad block size `{}` in `{s}`", x.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Shape::new(dims)
    }

    pub fn all_ones(k: usize) -> Result<Shape> {
        Shape::new(vec![1; k])
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    /// Total size `d = d_1 + ... + d_k`.
    pub fn d(&self) -> usize {
        self.offsets[self.dims.len()]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Size of 0-based block `i`.
    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    /// First 0-based row/column of 0-based block `i`.
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets[..self.dims.len()]
    }

    /// 0-based block containing 0-based index `idx`.
    pub fn block_of(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    pub fn is_symmetric(&self) -> bool {
        self.dims.iter().eq(self.dims.iter().rev())
    }

    /// Symmetric, `k` odd and the middle block of odd size.
    pub fn is_odd_symmetric(&self) -> bool {
        let k = self.k();
        self.is_symmetric() && k % 2 == 1 && self.dims[k / 2] % 2 == 1
    }

    pub fn is_all_ones(&self) -> bool {
        self.dims.iter().all(|&x| x == 1)
    }

    /// Odd-symmetric with `d_1 = d_k = 1`.
    pub fn is_odd_symmetric_unit_ends(&self) -> bool {
        self.is_odd_symmetric() && self.dims[0] == 1
    }

    pub fn max_adjacent_sum(&self) -> usize {
        self.dims.windows(2).map(|w| w[0] + w[1]).max().expect("k >= 2")
    }

    /// `max{d_i + d_{i+1} - 2}`: the top power of `ad D(0,0)` applied to `E(S)`.
    pub fn rho(&self) -> usize {
        self.max_adjacent_sum() - 2
    }

    /// `max{d_i + d_{i+1} - 1}`: the number of generators `E^{(0)}, ..., E^{(rho)}`.
    pub fn generator_count(&self) -> usize {
        self.max_adjacent_sum() - 1
    }

    /// Comma separated key, e.g. `1,2,1`.
    pub fn key(&self) -> String {
        self.dims.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Shape> {
        Shape::parse(s)
    }
}

impl TryFrom<Vec<usize>> for Shape {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Shape> {
        Shape::new(v)
    }
}

impl From<Shape> for Vec<usize> {
    fn from(s: Shape) -> Vec<usize> {
        s.dims
    }
}

/// All shapes with `k` in `k_range`, block sizes in `1..=d_max`, total at most `dim_cap`,
/// in lexicographic order by `(k, dims)`.
pub fn enumerate_shapes(k_min: usize, k_max: usize, d_max: usize, dim_cap: usize) -> Vec<Shape> {
    fn rec(k: usize, d_max: usize, remaining: usize, cur: &mut Vec<usize>, out: &mut Vec<Shape>) {
        if cur.len() == k {
            out.push(Shape::new(cur.clone()).expect("valid"));
            return;
        }
        let left = k - cur.len() - 1;
        for x in 1..=d_max {
            if x + left > remaining {
                break;
            }
            cur.push(x);
            rec(k, d_max, remaining - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in k_min.max(2)..=k_max {
        rec(k, d_max, dim_cap, &mut Vec::new(), &mut out);
    }
    out
}
