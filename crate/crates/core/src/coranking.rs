//! The co-ranking matrix and derived pair statistics.
//!
//! All histograms here count ordered pairs `(i, j)` with `i != j`. Ranks run
//! from 1 to `n - 1`; storage is zero-based, so entry `(k, l)` lives at
//! `[(k - 1) * (n - 1) + (l - 1)]`.

use crate::error::{Error, Result};
use crate::ranking::RankMatrix;

/// `(n-1) × (n-1)` histogram of (high-dimensional rank, low-dimensional rank)
/// pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoRankingMatrix {
    n: usize,
    counts: Vec<u32>,
}

impl CoRankingMatrix {
    /// Number of points `n`; the matrix is `(n-1) × (n-1)`.
    pub fn points(&self) -> usize {
        self.n
    }

    /// Side length `n - 1`.
    pub fn size(&self) -> usize {
        self.n - 1
    }

    /// Count of pairs with high rank `k` and low rank `l` (both 1-based).
    #[inline]
    pub fn get(&self, k: usize, l: usize) -> u32 {
        self.counts[(k - 1) * (self.n - 1) + (l - 1)]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.counts
    }

    pub fn row_sum(&self, k: usize) -> u64 {
        (1..self.n).map(|l| self.get(k, l) as u64).sum()
    }

    pub fn col_sum(&self, l: usize) -> u64 {
        (1..self.n).map(|k| self.get(k, l) as u64).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Sum over the upper-left `K × K` block, the pairs that stay inside the
    /// K-neighborhood in both spaces.
    pub fn block_sum(&self, k_max: usize) -> u64 {
        (1..=k_max).flat_map(|k| (1..=k_max).map(move |l| (k, l))).map(|(k, l)| self.get(k, l) as u64).sum()
    }

    /// `S[K]` = block sum for every `K` in `1..=n-1` (index 0 holds `S[0] = 0`),
    /// in O(n²) total.
    pub fn cumulative_block_sums(&self) -> Vec<u64> {
        let size = self.size();
        let mut sums = vec![0u64; size + 1];
        for kk in 1..=size {
            // Grow the block by its new row and column.
            let row: u64 = (1..=kk).map(|l| self.get(kk, l) as u64).sum();
            let col: u64 = (1..kk).map(|k| self.get(k, kk) as u64).sum();
            sums[kk] = sums[kk - 1] + row + col;
        }
        sums
    }
}

pub fn coranking_matrix(rho: &RankMatrix, r: &RankMatrix) -> Result<CoRankingMatrix> {
    rho.check_same_size(r)?;
    let n = rho.len();
    let size = n - 1;
    let mut counts = vec![0u32; size * size];
    for (&k, &l) in rho.as_slice().iter().zip(r.as_slice()) {
        // Diagonal pairs carry rank 0 in both matrices.
        if k != 0 {
            counts[(k as usize - 1) * size + (l as usize - 1)] += 1;
        }
    }
    Ok(CoRankingMatrix { n, counts })
}

/// Partition of the co-ranking matrix around a neighborhood size `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockCounts {
    pub k: usize,
    /// `k = l <= K`.
    pub preserved: u64,
    /// `l < k <= K`.
    pub mild_intrusions: u64,
    /// `k < l <= K`.
    pub mild_extrusions: u64,
    /// `l <= K < k`.
    pub hard_intrusions: u64,
    /// `k <= K < l`.
    pub hard_extrusions: u64,
    /// `k, l > K` and `k != l`.
    pub outside: u64,
    /// `k = l > K`.
    pub outside_diagonal: u64,
}

impl BlockCounts {
    pub fn total(&self) -> u64 {
        self.preserved
            + self.mild_intrusions
            + self.mild_extrusions
            + self.hard_intrusions
            + self.hard_extrusions
            + self.outside
            + self.outside_diagonal
    }
}

pub fn block_counts(q: &CoRankingMatrix, k_cut: usize) -> Result<BlockCounts> {
    Error::check_range("K", k_cut, 1, q.size())?;
    let mut b = BlockCounts { k: k_cut, ..Default::default() };
    for k in 1..=q.size() {
        for l in 1..=q.size() {
            let c = q.get(k, l) as u64;
            let slot = match (k <= k_cut, l <= k_cut) {
                (true, true) if k == l => &mut b.preserved,
                (true, true) if l < k => &mut b.mild_intrusions,
                (true, true) => &mut b.mild_extrusions,
                (false, true) => &mut b.hard_intrusions,
                (true, false) => &mut b.hard_extrusions,
                (false, false) if k == l => &mut b.outside_diagonal,
                (false, false) => &mut b.outside,
            };
            *slot += c;
        }
    }
    Ok(b)
}

/// Histogram of pairs by smaller rank `m = min(rho, r)` and rank error
/// `e = |rho - r|`.
///
/// A pair is in the region of interest for cut-off `κ_s` exactly when its
/// smaller rank is at most `κ_s`, so prefix sums over this histogram give the
/// whole `(κ_s, κ_t)` quality grid in O(n²).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinErrHistogram {
    n: usize,
    counts: Vec<u32>,
}

impl MinErrHistogram {
    pub fn points(&self) -> usize {
        self.n
    }

    /// Number of `m` rows and of `e` columns, `n - 1`.
    pub fn size(&self) -> usize {
        self.n - 1
    }

    /// Pairs with smaller rank `m` (1-based) and error `e` (0-based).
    #[inline]
    pub fn get(&self, m: usize, e: usize) -> u32 {
        self.counts[(m - 1) * (self.n - 1) + e]
    }

    /// Counts for smaller rank `m`, indexed by error.
    pub fn row(&self, m: usize) -> &[u32] {
        let size = self.n - 1;
        &self.counts[(m - 1) * size..m * size]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

pub fn min_error_histogram(rho: &RankMatrix, r: &RankMatrix) -> Result<MinErrHistogram> {
    rho.check_same_size(r)?;
    let n = rho.len();
    let size = n - 1;
    let mut counts = vec![0u32; size * size];
    for (&a, &b) in rho.as_slice().iter().zip(r.as_slice()) {
        if a != 0 {
            let m = a.min(b) as usize;
            counts[(m - 1) * size + a.abs_diff(b) as usize] += 1;
        }
    }
    Ok(MinErrHistogram { n, counts })
}
