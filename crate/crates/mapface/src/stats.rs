//! Goodness-of-fit helpers for the sampler checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of observed counts against expected probabilities. Cells
/// with zero expected probability must have zero counts and are dropped.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0;
    for (&o, &p) in observed.iter().zip(probs) {
        if p == 0.0 {
            assert_eq!(o, 0, "count in a cell of probability zero");
            continue;
        }
        let e = p * total as f64;
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let dof = cells.max(2) - 1;
    let p_value = ChiSquared::new(dof as f64).map_or(f64::NAN, |d| d.sf(stat));
    ChiSquare {
        statistic: stat,
        dof,
        p_value,
    }
}

/// Two-sample test on a contingency table of two count vectors.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> ChiSquare {
    assert_eq!(a.len(), b.len());
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        for (o, n) in [(x as f64, na), (y as f64, nb)] {
            let e = col * n / (na + nb);
            stat += (o - e).powi(2) / e;
        }
        cells += 1;
    }
    let dof = cells.max(2) - 1;
    let p_value = ChiSquared::new(dof as f64).map_or(f64::NAN, |d| d.sf(stat));
    ChiSquare {
        statistic: stat,
        dof,
        p_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit() {
        let r = chi_square(&[50, 50], &[0.5, 0.5]);
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn known_statistic() {
        // (60−50)²/50 + (40−50)²/50 = 4, one degree of freedom
        let r = chi_square(&[60, 40], &[0.5, 0.5]);
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert!((r.p_value - 0.0455).abs() < 1e-3);
        let t = chi_square_two_sample(&[10, 20], &[10, 20]);
        assert_eq!(t.statistic, 0.0);
    }
}
