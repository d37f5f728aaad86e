//! Neighborhood ranks and rank errors.
//!
//! The rank of `j` with respect to `i` is the position of `j` in the list of
//! all other points sorted by distance from `i`, starting at 1. Equal
//! distances are ordered by index, the lower index receiving the lower rank.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;

/// `n × n` neighborhood ranks. Row `i` holds the ranks of every point with
/// respect to point `i`; its off-diagonal entries are a permutation of
/// `1..=n-1` and the diagonal is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMatrix {
    n: usize,
    data: Vec<u32>,
}

impl RankMatrix {
    /// Validates that every row is a permutation of `1..=n-1` with a zero
    /// self-rank.
    pub fn new(n: usize, data: Vec<u32>) -> Result<Self> {
        if n < 2 || data.len() != n * n {
            return Err(Error::Mismatch(format!("{} entries for a {n}x{n} rank matrix", data.len())));
        }
        let mut seen = vec![false; n];
        for i in 0..n {
            seen.fill(false);
            for j in 0..n {
                let r = data[i * n + j] as usize;
                let ok = if i == j { r == 0 } else { (1..n).contains(&r) && !std::mem::replace(&mut seen[r], true) };
                if !ok {
                    return Err(Error::input(format!("row {i} is not a rank permutation (entry {j} = {r})")));
                }
            }
        }
        Ok(RankMatrix { n, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub(crate) fn check_same_size(&self, other: &RankMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Mismatch(format!("rank matrices of sizes {} and {}", self.n, other.n)));
        }
        Ok(())
    }
}

/// Indices other than `i`, ordered by `(distance, index)`.
pub(crate) fn sorted_neighbors(row: &[f64], i: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..row.len()).filter(|&j| j != i).collect();
    // Distances are finite, so partial_cmp never fails; it also treats -0.0
    // and 0.0 as equal, matching the tie rule.
    order.sort_unstable_by(|&a, &b| row[a].partial_cmp(&row[b]).unwrap().then(a.cmp(&b)));
    order
}

/// Ranks of all points with respect to every point.
pub fn rank_matrix(d: &DistanceMatrix) -> RankMatrix {
    let n = d.len();
    let mut data = vec![0u32; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
        for (pos, j) in sorted_neighbors(d.row(i), i).into_iter().enumerate() {
            out[j] = pos as u32 + 1;
        }
    });
    RankMatrix { n, data }
}

/// Absolute rank differences `|rho_ij - r_ij|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankErrorMatrix {
    n: usize,
    data: Vec<u32>,
}

impl RankErrorMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    pub fn max(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }
}

pub fn rank_errors(rho: &RankMatrix, r: &RankMatrix) -> Result<RankErrorMatrix> {
    rho.check_same_size(r)?;
    let data = rho.data.iter().zip(&r.data).map(|(&a, &b)| a.abs_diff(b)).collect();
    Ok(RankErrorMatrix { n: rho.n, data })
}
