//! Synthetic mappings with known structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::PointSet;

/// A high-dimensional point set and its low-dimensional counterpart, point
/// `i` of one corresponding to point `i` of the other.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingPair {
    pub high: PointSet,
    pub low: PointSet,
    pub description: String,
}

impl MappingPair {
    pub fn new(high: PointSet, low: PointSet, description: impl Into<String>) -> Result<Self> {
        if high.len() != low.len() {
            return Err(Error::Mismatch(format!("{} high-dimensional vs {} low-dimensional points", high.len(), low.len())));
        }
        Ok(MappingPair { high, low, description: description.into() })
    }
}

/// Equidistant points on a line mapped to the same positions with every
/// adjacent pair swapped: point `i` sits at `i` originally and at `i ^ 1`
/// after the mapping.
pub fn gen_swapped_row(n: usize) -> Result<MappingPair> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::input(format!("swapped row needs an even number of points >= 2, got {n}")));
    }
    let high = PointSet::new(n, 1, (0..n).map(|i| i as f64).collect())?;
    let low = swap_adjacent(&high)?;
    MappingPair::new(high, low, format!("row of {n} points with adjacent pairs swapped"))
}

/// Exchanges the positions of points `2k` and `2k + 1`.
pub fn swap_adjacent(points: &PointSet) -> Result<PointSet> {
    if !points.len().is_multiple_of(2) {
        return Err(Error::input("pairwise swap needs an even number of points"));
    }
    let rows: Vec<&[f64]> = (0..points.len()).map(|i| points.point(i ^ 1)).collect();
    PointSet::from_rows(&rows)
}

/// Arc length of the spiral `(t cos t, t sin t)` from 0 to `t`.
pub fn spiral_arc_length(t: f64) -> f64 {
    0.5 * (t * (1.0 + t * t).sqrt() + t.asinh())
}

/// Inverse of [`spiral_arc_length`] on `[lo, hi]`, by safeguarded Newton.
fn spiral_parameter(s: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut t = 0.5 * (lo + hi);
    for _ in 0..100 {
        let f = spiral_arc_length(t) - s;
        if f.abs() <= 1e-13 * s.abs().max(1.0) {
            break;
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let next = t - f / (1.0 + t * t).sqrt();
        t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwissRollParams {
    pub t_min: f64,
    pub t_max: f64,
    pub height: f64,
}

impl Default for SwissRollParams {
    fn default() -> Self {
        SwissRollParams { t_min: 1.5 * std::f64::consts::PI, t_max: 4.5 * std::f64::consts::PI, height: 21.0 }
    }
}

/// A swiss roll in R³ and its unrolled ground truth in R².
///
/// Samples are uniform on the surface: `t` is drawn uniformly in arc length
/// and `h` uniformly in `[0, height]`. The 3-D point is
/// `(t cos t, h, t sin t)` and the 2-D ground truth `(s(t), h)` with `s` the
/// spiral arc length.
pub fn gen_swiss_roll(n: usize, seed: u64, params: SwissRollParams) -> Result<MappingPair> {
    let SwissRollParams { t_min, t_max, height } = params;
    if n < 2 {
        return Err(Error::input(format!("need at least 2 points, got {n}")));
    }
    if !(t_min > 0.0 && t_max > t_min && t_max.is_finite() && height > 0.0 && height.is_finite()) {
        return Err(Error::input(format!(
            "invalid swiss roll range t in [{t_min}, {t_max}], height {height}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s_min, s_max) = (spiral_arc_length(t_min), spiral_arc_length(t_max));
    let mut high = Vec::with_capacity(3 * n);
    let mut low = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let s = rng.gen_range(s_min..s_max);
        let h = rng.gen_range(0.0..height);
        let t = spiral_parameter(s, t_min, t_max);
        high.extend_from_slice(&[t * t.cos(), h, t * t.sin()]);
        low.extend_from_slice(&[spiral_arc_length(t), h]);
    }
    MappingPair::new(
        PointSet::new(n, 3, high)?,
        PointSet::new(n, 2, low)?,
        format!("swiss roll, {n} points, seed {seed}"),
    )
}

/// Uniform points in `[0, 1)^dim`.
pub fn gen_random_points(n: usize, dim: usize, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    PointSet::new(n, dim, coords)
}
