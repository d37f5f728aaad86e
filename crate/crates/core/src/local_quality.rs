//! Per-point quality contributions and point colors.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::ToleranceComparison;
use crate::ranking::RankMatrix;

/// Quality contribution of every point for one `(κ_s, κ_t)` setting.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalQuality {
    pub values: Vec<f64>,
    pub kappa_s: usize,
    pub kappa_t: usize,
    pub tolerance: ToleranceComparison,
}

impl LocalQuality {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn accepted_pairs(
    rho: &RankMatrix,
    r: &RankMatrix,
    kappa_s: usize,
    kappa_t: usize,
    tolerance: ToleranceComparison,
) -> Result<(Vec<u64>, Vec<u64>)> {
    rho.check_same_size(r)?;
    let n = rho.len();
    Error::check_range("kappa_s", kappa_s, 1, n - 1)?;
    Error::check_range("kappa_t", kappa_t, 1, n - 1)?;
    let accept = |a: u32, b: u32| (a.min(b) as usize) <= kappa_s && tolerance.accepts(a.abs_diff(b), kappa_t);
    // Diagonal entries are (0, 0): significant and error-free, so they are
    // masked explicitly.
    let outgoing = (0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| j != i && accept(rho.get(i, j), r.get(i, j))).count() as u64)
        .collect();
    let incoming = (0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| j != i && accept(rho.get(j, i), r.get(j, i))).count() as u64)
        .collect();
    Ok((outgoing, incoming))
}

/// Symmetric per-point quality: for point `i`, the accepted pairs `(i, j)`
/// and `(j, i)` over all `j`, divided by `2 κ_s n`. The values add up to the
/// raw-normalized quality map entry at `(κ_s, κ_t)`.
pub fn pointwise_quality(
    rho: &RankMatrix,
    r: &RankMatrix,
    kappa_s: usize,
    kappa_t: usize,
    tolerance: ToleranceComparison,
) -> Result<LocalQuality> {
    let (outgoing, incoming) = accepted_pairs(rho, r, kappa_s, kappa_t, tolerance)?;
    let divisor = (2 * kappa_s * rho.len()) as f64;
    let values = outgoing.iter().zip(&incoming).map(|(a, b)| (a + b) as f64 / divisor).collect();
    Ok(LocalQuality { values, kappa_s, kappa_t, tolerance })
}

/// One-sided variant counting only the pairs `(i, j)`, divided by `κ_s n`.
///
/// A neighbor swap then shows up only at points whose own rank lists change,
/// not at the swapped points themselves; kept for comparison.
pub fn pointwise_quality_naive(
    rho: &RankMatrix,
    r: &RankMatrix,
    kappa_s: usize,
    kappa_t: usize,
    tolerance: ToleranceComparison,
) -> Result<LocalQuality> {
    let (outgoing, _) = accepted_pairs(rho, r, kappa_s, kappa_t, tolerance)?;
    let divisor = (kappa_s * rho.len()) as f64;
    let values = outgoing.iter().map(|&a| a as f64 / divisor).collect();
    Ok(LocalQuality { values, kappa_s, kappa_t, tolerance })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorScheme {
    Grayscale,
    /// Hue from red (worst) through yellow to green (best).
    #[default]
    RedGreen,
}

impl std::str::FromStr for ColorScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grayscale" => Ok(ColorScheme::Grayscale),
            "red_green" => Ok(ColorScheme::RedGreen),
            _ => Err(Error::input(format!("unknown color scheme '{s}' (expected red_green or grayscale)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

/// Colors for the min–max normalized values; a constant vector maps to the
/// top of the scale.
pub fn colorize(values: &[f64], scheme: ColorScheme) -> Vec<Rgb> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .map(|&x| {
            let v = if hi > lo { (x - lo) / (hi - lo) } else { 1.0 };
            match scheme {
                ColorScheme::Grayscale => {
                    let c = channel(v);
                    Rgb(c, c, c)
                }
                ColorScheme::RedGreen => hsv_to_rgb(120.0 * v),
            }
        })
        .collect()
}

fn channel(v: f64) -> u8 {
    (255.0 * v.clamp(0.0, 1.0)).round() as u8
}

/// Full saturation and value.
fn hsv_to_rgb(hue: f64) -> Rgb {
    let h = (hue.rem_euclid(360.0)) / 60.0;
    let x = 1.0 - ((h % 2.0) - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    Rgb(channel(r), channel(g), channel(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coranking::min_error_histogram;
    use crate::datasets::gen_random_points;
    use crate::geometry::{pairwise_distances, Metric, PointSet};
    use crate::measures::{quality_map, Normalization};
    use crate::ranking::rank_matrix;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ranks(p: &PointSet) -> RankMatrix {
        rank_matrix(&pairwise_distances(p, Metric::Euclidean).unwrap())
    }

    fn small_example() -> (RankMatrix, RankMatrix) {
        let a = PointSet::new(3, 1, vec![1.0, 2.0, 4.0]).unwrap();
        let b = PointSet::new(3, 1, vec![4.0, 2.0, 1.0]).unwrap();
        (ranks(&a), ranks(&b))
    }

    #[test]
    fn small_example_symmetric() {
        let (rho, r) = small_example();
        let q = pointwise_quality(&rho, &r, 2, 1, ToleranceComparison::Strict).unwrap();
        for (v, e) in q.values.iter().zip([0.25, 1.0 / 6.0, 0.25]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(q.sum(), 2.0 / 3.0, epsilon = 1e-12);

        // Every point loses quality relative to the perfect mapping.
        let perfect = pointwise_quality(&rho, &rho, 2, 1, ToleranceComparison::Strict).unwrap();
        assert!(q.values.iter().zip(&perfect.values).all(|(a, b)| a < b));
    }

    #[test]
    fn small_example_naive_blames_only_b() {
        let (rho, r) = small_example();
        let q = pointwise_quality_naive(&rho, &r, 2, 1, ToleranceComparison::Strict).unwrap();
        for (v, e) in q.values.iter().zip([1.0 / 3.0, 0.0, 1.0 / 3.0]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn perfect_mapping_values() {
        let rho = ranks(&gen_random_points(20, 3, 3).unwrap());
        for (ks, kt) in [(1, 1), (5, 2), (19, 19)] {
            let sym = pointwise_quality(&rho, &rho, ks, kt, ToleranceComparison::Strict).unwrap();
            assert_abs_diff_eq!(sym.sum(), 1.0, epsilon = 1e-12);
            let naive = pointwise_quality_naive(&rho, &rho, ks, kt, ToleranceComparison::Strict).unwrap();
            assert!(naive.values.iter().all(|&v| (v - 1.0 / 20.0).abs() < 1e-15));
        }
    }

    #[test]
    fn parameters_out_of_range() {
        let (rho, r) = small_example();
        assert!(pointwise_quality(&rho, &r, 0, 1, Default::default()).is_err());
        assert!(pointwise_quality(&rho, &r, 1, 3, Default::default()).is_err());
        assert!(pointwise_quality_naive(&rho, &r, 3, 1, Default::default()).is_err());
    }

    #[test]
    fn colors() {
        assert_eq!(colorize(&[0.3, 0.3], ColorScheme::RedGreen), vec![Rgb(0, 255, 0); 2]);
        assert_eq!(colorize(&[0.3, 0.3], ColorScheme::Grayscale), vec![Rgb(255, 255, 255); 2]);
        assert_eq!(
            colorize(&[0.0, 0.5, 1.0], ColorScheme::RedGreen),
            vec![Rgb(255, 0, 0), Rgb(255, 255, 0), Rgb(0, 255, 0)]
        );
        assert_eq!(
            colorize(&[2.0, 3.0, 4.0], ColorScheme::Grayscale),
            vec![Rgb(0, 0, 0), Rgb(128, 128, 128), Rgb(255, 255, 255)]
        );
        assert_eq!(colorize(&[0.0, 0.25, 1.0], ColorScheme::RedGreen)[1], Rgb(255, 128, 0));
        assert!(colorize(&[], ColorScheme::RedGreen).is_empty());
    }

    proptest! {
        #[test]
        fn sums_match_raw_map(n in 2usize..50, seed in any::<u64>(), a in 0.0f64..1.0, b in 0.0f64..1.0, inclusive in any::<bool>()) {
            let rho = ranks(&gen_random_points(n, 3, seed).unwrap());
            let r = ranks(&gen_random_points(n, 2, seed.wrapping_mul(31)).unwrap());
            let tol = if inclusive { ToleranceComparison::Inclusive } else { ToleranceComparison::Strict };
            let ks = 1 + ((n - 2) as f64 * a) as usize;
            let kt = 1 + ((n - 2) as f64 * b) as usize;
            let raw = quality_map(&min_error_histogram(&rho, &r).unwrap(), Normalization::Raw, tol).get(ks, kt);
            let sym = pointwise_quality(&rho, &r, ks, kt, tol).unwrap();
            let naive = pointwise_quality_naive(&rho, &r, ks, kt, tol).unwrap();
            prop_assert!(sym.values.iter().all(|&v| v >= 0.0));
            prop_assert!((sym.sum() - raw).abs() <= 1e-12);
            prop_assert!((naive.sum() - raw).abs() <= 1e-12);
        }

        #[test]
        fn relabeling_permutes_values(n in 3usize..30, seed in any::<u64>(), shift in 1usize..29) {
            let high = gen_random_points(n, 3, seed).unwrap();
            let low = gen_random_points(n, 2, seed ^ 1).unwrap();
            // Relabel by a cyclic shift of indices.
            let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
            let relabel = |p: &PointSet| {
                let rows: Vec<Vec<f64>> = perm.iter().map(|&i| p.point(i).to_vec()).collect();
                PointSet::from_rows(&rows).unwrap()
            };
            let base = pointwise_quality(&ranks(&high), &ranks(&low), 2.min(n - 1), 2.min(n - 1), Default::default()).unwrap();
            let moved = pointwise_quality(&ranks(&relabel(&high)), &ranks(&relabel(&low)), 2.min(n - 1), 2.min(n - 1), Default::default()).unwrap();
            for (new_index, &old_index) in perm.iter().enumerate() {
                prop_assert_eq!(moved.values[new_index], base.values[old_index]);
            }
        }
    }
}
