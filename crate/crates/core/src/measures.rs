//! Scalar and parametric quality measures.
//!
//! [`qnx_curve`] and [`lcmc_curve`] are the classical neighborhood-overlap
//! measures over all neighborhood sizes `K`. [`quality_map`] evaluates the
//! two-parameter measure that separates the region of interest (`κ_s`, the
//! rank-significance cut-off) from the size of rank errors that is tolerated
//! (`κ_t`, the error-tolerance cut-off).
//!
//! A pair `(i, j)` is significant for `κ_s` when `ρ_ij <= κ_s` or
//! `r_ij <= κ_s`, equivalently `min(ρ_ij, r_ij) <= κ_s`. It is tolerated when
//! `|ρ_ij - r_ij| < κ_t` ([`ToleranceComparison::Strict`]) or `<= κ_t`
//! ([`ToleranceComparison::Inclusive`]).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coranking::{min_error_histogram, CoRankingMatrix, MinErrHistogram};
use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;
use crate::ranking::{rank_matrix, RankMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Qnx,
    Lcmc,
}

/// Values indexed by neighborhood size `K` in `1..=n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityCurve {
    n: usize,
    kind: CurveKind,
    values: Vec<f64>,
}

impl QualityCurve {
    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn points(&self) -> usize {
        self.n
    }

    /// Value at neighborhood size `k` (1-based).
    pub fn at(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    /// Values for `K = 1..=n-1`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `Q_NX(K) = (1 / (K n)) Σ_{k<=K} Σ_{l<=K} Q_kl` for every `K`.
pub fn qnx_curve(q: &CoRankingMatrix) -> QualityCurve {
    let n = q.points();
    let sums = q.cumulative_block_sums();
    let values = (1..n).map(|k| sums[k] as f64 / (k * n) as f64).collect();
    QualityCurve { n, kind: CurveKind::Qnx, values }
}

/// `LCMC(K) = Q_NX(K) - K / (n - 1)`.
pub fn lcmc_curve(qnx: &QualityCurve) -> Result<QualityCurve> {
    expect_qnx(qnx)?;
    let n = qnx.n;
    let values = qnx.values.iter().enumerate().map(|(i, &v)| v - (i + 1) as f64 / (n - 1) as f64).collect();
    Ok(QualityCurve { n, kind: CurveKind::Lcmc, values })
}

fn expect_qnx(curve: &QualityCurve) -> Result<()> {
    if curve.kind != CurveKind::Qnx {
        return Err(Error::Mismatch("expected a Q_NX curve".into()));
    }
    Ok(())
}

/// Local/global split of a Q_NX curve at the LCMC maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSummary {
    /// Smallest `K` maximizing LCMC.
    pub k_max: usize,
    /// Mean of `Q_NX(K)` for `K = 1..=k_max`.
    pub q_local: f64,
    /// `Σ_{K=k_max}^{n-1} Q_NX(K) / (n - k_max)`; both averages include
    /// `k_max`.
    pub q_global: f64,
}

pub fn split_summary(qnx: &QualityCurve) -> Result<SplitSummary> {
    let lcmc = lcmc_curve(qnx)?;
    let mut k_max = 1;
    for (i, &v) in lcmc.values.iter().enumerate() {
        if v > lcmc.values[k_max - 1] {
            k_max = i + 1;
        }
    }
    let n = qnx.n;
    let q_local = qnx.values[..k_max].iter().sum::<f64>() / k_max as f64;
    let q_global = qnx.values[k_max - 1..].iter().sum::<f64>() / (n - k_max) as f64;
    Ok(SplitSummary { k_max, q_local, q_global })
}

/// Number of ordered pairs counted by the weighted form of `Q_NX(K)`:
/// `Σ_ij w_s(ρ_ij, r_ij, K) · w_t(ρ_ij, r_ij, K)`, where `w_s` is zero iff
/// both ranks exceed `K` and `w_t` is zero iff exactly one of them does.
pub fn weighted_pair_count(rho: &RankMatrix, r: &RankMatrix, k: usize) -> Result<u64> {
    rho.check_same_size(r)?;
    let n = rho.len();
    Error::check_range("K", k, 1, n - 1)?;
    let k = k as u32;
    let mut count = 0u64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (rho.get(i, j), r.get(i, j));
            let significance = !(a > k && b > k);
            let tolerance = !((a <= k && b > k) || (a > k && b <= k));
            count += u64::from(significance && tolerance);
        }
    }
    Ok(count)
}

/// `Q_NX(K)` evaluated pair by pair through the significance and tolerance
/// weights instead of the co-ranking matrix.
pub fn qnx_via_weights(rho: &RankMatrix, r: &RankMatrix, k: usize) -> Result<f64> {
    let count = weighted_pair_count(rho, r, k)?;
    Ok(count as f64 / (k * rho.len()) as f64)
}

/// Divisor used for the quality map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Divide by `κ_s · n`. Can exceed 1 because the region of interest
    /// holds up to `2 κ_s n` pairs.
    Raw,
    /// Divide by the number of significant pairs, so values lie in `[0, 1]`.
    #[default]
    Region,
}

/// How a rank error is compared with `κ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ToleranceComparison {
    /// Tolerated iff `error < κ_t`; `κ_t = 1` accepts only preserved ranks.
    #[default]
    Strict,
    /// Tolerated iff `error <= κ_t`.
    Inclusive,
}

impl ToleranceComparison {
    #[inline]
    pub fn accepts(self, error: u32, kappa_t: usize) -> bool {
        match self {
            ToleranceComparison::Strict => (error as usize) < kappa_t,
            ToleranceComparison::Inclusive => (error as usize) <= kappa_t,
        }
    }

    /// Number of leading error values `0, 1, ...` accepted at `kappa_t`.
    fn accepted_errors(self, kappa_t: usize) -> usize {
        match self {
            ToleranceComparison::Strict => kappa_t,
            ToleranceComparison::Inclusive => kappa_t + 1,
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Raw => "raw",
            Normalization::Region => "region",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Normalization::Raw),
            "region" => Ok(Normalization::Region),
            _ => Err(Error::input(format!("unknown normalization '{s}' (expected region or raw)"))),
        }
    }
}

impl fmt::Display for ToleranceComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ToleranceComparison::Strict => "strict",
            ToleranceComparison::Inclusive => "inclusive",
        })
    }
}

impl FromStr for ToleranceComparison {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(ToleranceComparison::Strict),
            "inclusive" => Ok(ToleranceComparison::Inclusive),
            _ => Err(Error::input(format!("unknown tolerance comparison '{s}' (expected strict or inclusive)"))),
        }
    }
}

/// Quality values on the `(κ_s, κ_t)` grid, both in `1..=n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityMap {
    n: usize,
    normalization: Normalization,
    tolerance: ToleranceComparison,
    values: Vec<f64>,
}

impl QualityMap {
    pub fn points(&self) -> usize {
        self.n
    }

    /// Side length `n - 1`.
    pub fn size(&self) -> usize {
        self.n - 1
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn tolerance(&self) -> ToleranceComparison {
        self.tolerance
    }

    #[inline]
    pub fn get(&self, kappa_s: usize, kappa_t: usize) -> f64 {
        self.values[(kappa_s - 1) * (self.n - 1) + (kappa_t - 1)]
    }

    /// Row-major values, rows indexed by `κ_s` and columns by `κ_t`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn check_compatible(&self, other: &QualityMap) -> Result<()> {
        if self.n != other.n || self.normalization != other.normalization || self.tolerance != other.tolerance {
            return Err(Error::Mismatch(format!(
                "quality maps differ: n {} / {}, normalization {} / {}, tolerance {} / {}",
                self.n, other.n, self.normalization, other.normalization, self.tolerance, other.tolerance
            )));
        }
        Ok(())
    }

    /// `self - baseline`, cell by cell.
    pub fn centered(&self, baseline: &QualityMap) -> Result<Vec<f64>> {
        self.check_compatible(baseline)?;
        Ok(self.values.iter().zip(&baseline.values).map(|(a, b)| a - b).collect())
    }
}

/// Significant and tolerated pair counts `C(κ_s, κ_t)` for the whole grid,
/// row-major, plus the region sizes `R(κ_s)`.
pub fn accepted_counts(h: &MinErrHistogram, tolerance: ToleranceComparison) -> (Vec<u64>, Vec<u64>) {
    let size = h.size();
    let mut counts = vec![0u64; size * size];
    let mut region = vec![0u64; size];
    // running[t] accumulates, over m <= κ_s, the pairs with error below the
    // t-th threshold.
    let mut running = vec![0u64; size];
    let mut total = 0u64;
    for m in 1..=size {
        let row = h.row(m);
        let mut prefix = 0u64;
        let mut next_error = 0usize;
        for kappa_t in 1..=size {
            let upto = tolerance.accepted_errors(kappa_t).min(size);
            while next_error < upto {
                prefix += row[next_error] as u64;
                next_error += 1;
            }
            running[kappa_t - 1] += prefix;
        }
        total += row.iter().map(|&c| c as u64).sum::<u64>();
        region[m - 1] = total;
        counts[(m - 1) * size..m * size].copy_from_slice(&running);
    }
    (counts, region)
}

/// The `(κ_s, κ_t)` quality grid from a min-rank/error histogram.
///
/// With [`Normalization::Raw`] the value is `C / (κ_s n)`; with
/// [`Normalization::Region`] it is `C / R(κ_s)`, where `C` counts
/// significant tolerated pairs and `R` all significant pairs.
pub fn quality_map(h: &MinErrHistogram, normalization: Normalization, tolerance: ToleranceComparison) -> QualityMap {
    let n = h.points();
    let size = h.size();
    let (counts, region) = accepted_counts(h, tolerance);
    let mut values = vec![0.0; size * size];
    for (ks, (row, &reg)) in values.chunks_exact_mut(size).zip(&region).enumerate() {
        let divisor = match normalization {
            Normalization::Raw => ((ks + 1) * n) as f64,
            Normalization::Region => reg as f64,
        };
        for (v, &c) in row.iter_mut().zip(&counts[ks * size..(ks + 1) * size]) {
            *v = c as f64 / divisor;
        }
    }
    QualityMap { n, normalization, tolerance, values }
}

/// Number and seed of random mappings averaged into a baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaselineSpec {
    pub samples: usize,
    pub seed: u64,
}

/// Mean quality map of random mappings.
///
/// Each sample reassigns the low-dimensional positions to data indices by a
/// uniformly random permutation, re-ranks the permuted low-dimensional
/// distances and evaluates [`quality_map`] against the fixed high-dimensional
/// ranks. Permutations come from a ChaCha8 stream seeded with `spec.seed`.
pub fn random_baseline(
    rho: &RankMatrix,
    low: &DistanceMatrix,
    spec: BaselineSpec,
    normalization: Normalization,
    tolerance: ToleranceComparison,
) -> Result<QualityMap> {
    if spec.samples == 0 {
        return Err(Error::input("baseline needs at least one sample"));
    }
    let n = rho.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let perms = (0..spec.samples).map(move |_| {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        p
    });
    baseline_over_permutations(rho, low, perms, normalization, tolerance)
}

/// Mean quality map over the given index permutations of the low-dimensional
/// positions. Samples are summed in iteration order.
pub fn baseline_over_permutations<I>(
    rho: &RankMatrix,
    low: &DistanceMatrix,
    perms: I,
    normalization: Normalization,
    tolerance: ToleranceComparison,
) -> Result<QualityMap>
where
    I: IntoIterator<Item = Vec<usize>>,
{
    let n = rho.len();
    if low.len() != n {
        return Err(Error::Mismatch(format!("{n} high-dimensional ranks but {} low-dimensional points", low.len())));
    }
    let size = n - 1;
    let mut sum = vec![0.0; size * size];
    let mut samples = 0usize;
    for perm in perms {
        let r = rank_matrix(&low.permuted(&perm)?);
        let map = quality_map(&min_error_histogram(rho, &r)?, normalization, tolerance);
        for (s, v) in sum.iter_mut().zip(&map.values) {
            *s += v;
        }
        samples += 1;
    }
    if samples == 0 {
        return Err(Error::input("baseline needs at least one sample"));
    }
    for s in &mut sum {
        *s /= samples as f64;
    }
    Ok(QualityMap { n, normalization, tolerance, values: sum })
}

/// Mean of `map` over the cells where it beats `baseline`; 0 if there are
/// none.
pub fn scalar_summary(map: &QualityMap, baseline: &QualityMap) -> Result<f64> {
    map.check_compatible(baseline)?;
    let (sum, count) = map
        .values
        .iter()
        .zip(&baseline.values)
        .filter(|(v, b)| *v - *b > 0.0)
        .fold((0.0, 0usize), |(s, c), (v, _)| (s + v, c + 1));
    Ok(if count == 0 { 0.0 } else { sum / count as f64 })
}
