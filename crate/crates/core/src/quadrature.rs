//! Composite Simpson rule on uniform nodes.
//!
//! Sums run left to right in a fixed order so that results are
//! reproducible bit for bit.

use alloc::vec::Vec;

/// Weights `h/3·[1, 4, 2, 4, …, 2, 4, 1]` for an even number of intervals.
pub fn simpson_weights(intervals: usize, h: f64) -> Vec<f64> {
    assert!(
        intervals >= 2 && intervals.is_multiple_of(2),
        "Simpson needs an even interval count"
    );
    let third = h / 3.0;
    (0..=intervals)
        .map(|i| {
            if i == 0 || i == intervals {
                third
            } else if i % 2 == 1 {
                4.0 * third
            } else {
                2.0 * third
            }
        })
        .collect()
}

/// Simpson integral of `values` sampled every `h`. `values.len() - 1` must be even.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    simpson_strided(values, h, 1)
}

/// Simpson integral using every `stride`-th sample, i.e. step `stride·h`.
///
/// Used for the coarse half of a refinement check without resampling.
pub fn simpson_strided(values: &[f64], h: f64, stride: usize) -> f64 {
    assert!(stride >= 1);
    let intervals = (values.len() - 1) / stride;
    assert!(
        intervals >= 2 && intervals.is_multiple_of(2) && intervals * stride == values.len() - 1,
        "stride does not give an even interval count"
    );
    let mut ends = 0.0;
    let mut odd = 0.0;
    let mut even = 0.0;
    for j in 0..=intervals {
        let v = values[j * stride];
        if j == 0 || j == intervals {
            ends += v;
        } else if j % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    (ends + 4.0 * odd + 2.0 * even) * (stride as f64 * h) / 3.0
}

/// `Σ wᵢ·fᵢ` in index order.
pub fn weighted_sum(weights: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), values.len());
    weights
        .iter()
        .zip(values)
        .fold(0.0, |acc, (w, v)| acc + w * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_cubics() {
        let h = 0.25;
        let xs: Vec<f64> = (0..=8).map(|i| i as f64 * h).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x * x - 2.0 * x + 1.0).collect();
        // ∫₀² x³ - 2x + 1 dx = 4 - 4 + 2
        assert!((simpson(&ys, h) - 2.0).abs() < 1e-14);
        assert!((simpson_strided(&ys, h, 2) - 2.0).abs() < 1e-14);
        assert!((simpson_strided(&ys, h, 4) - 2.0).abs() < 1e-14);
        let w = simpson_weights(8, h);
        assert!((weighted_sum(&w, &ys) - simpson(&ys, h)).abs() < 1e-15);
    }

    #[test]
    #[should_panic]
    fn odd_interval_count_panics() {
        simpson(&[1.0, 2.0], 1.0);
    }
}
