//! Small goodness-of-fit helpers for the statistical checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson statistic of `observed` against `expected` counts.
pub fn chi_square(observed: &[f64], expected: &[f64]) -> f64 {
    assert_eq!(observed.len(), expected.len());
    observed
        .iter()
        .zip(expected)
        .filter(|(_, e)| **e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum()
}

/// Homogeneity statistic for two samples of equal size over the same bins.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> (f64, usize) {
    assert_eq!(a.len(), b.len());
    let mut stat = 0.0;
    let mut bins = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        if x + y == 0 {
            continue;
        }
        bins += 1;
        let d = x as f64 - y as f64;
        stat += d * d / (x + y) as f64;
    }
    (stat, bins.saturating_sub(1))
}

/// Critical value of the chi-square distribution at the given upper-tail level.
pub fn chi_square_critical(dof: usize, alpha: f64) -> f64 {
    if dof == 0 {
        return 0.0;
    }
    ChiSquared::new(dof as f64).expect("positive degrees of freedom").inverse_cdf(1.0 - alpha)
}

/// Upper-tail p-value of `stat` with `dof` degrees of freedom.
pub fn chi_square_p_value(stat: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(dof as f64).expect("positive degrees of freedom").cdf(stat)
}
