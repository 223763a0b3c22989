//! Goodness-of-fit checks for samples against an isotropic Gaussian.
//!
//! For an isotropic Gaussian with per-axis variance `σ²` the radius follows
//! a Rayleigh law and the angle is uniform, so the two marginals are tested
//! separately: a one-sample Kolmogorov–Smirnov statistic on the radii and a
//! χ² uniformity test on angular sectors.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// `P(R ≤ r)` for the radius of an isotropic Gaussian with per-axis
/// variance `sigma2`.
pub fn rayleigh_cdf(r: f64, sigma2: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        -(-r * r / (2.0 * sigma2)).exp_m1()
    }
}

/// Kolmogorov–Smirnov distance between the empirical law of `‖z‖` and the
/// Rayleigh law.
pub fn ks_radius(samples: &[Vec2], sigma2: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "variance must be positive, got {sigma2}"
        )));
    }
    let mut radii: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    radii.sort_unstable_by(f64::total_cmp);
    let n = radii.len() as f64;
    let d = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let f = rayleigh_cdf(r, sigma2);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(d)
}

/// Fraction of samples in the closed square `[-a, a]²`.
pub fn rect_frequency(samples: &[Vec2], a: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let inside = samples
        .iter()
        .filter(|z| z.x.abs() <= a && z.y.abs() <= a)
        .count();
    inside as f64 / samples.len() as f64
}

/// Pearson χ² statistic against equal cell probabilities.
///
/// `threshold` is the mean plus three standard deviations of the χ²
/// distribution with `dof` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub threshold: f64,
}

impl ChiSquare {
    pub fn passes(&self) -> bool {
        self.statistic <= self.threshold
    }
}

pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquare> {
    if counts.len() < 2 {
        return Err(Error::InvalidArgument("need at least two cells".into()));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("no counts".into()));
    }
    let expected = total as f64 / counts.len() as f64;
    let statistic = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dof = counts.len() - 1;
    Ok(ChiSquare {
        statistic,
        dof,
        threshold: dof as f64 + 3.0 * (2.0 * dof as f64).sqrt(),
    })
}

/// χ² test of angular uniformity over `sectors` equal sectors of the full
/// circle.
pub fn angular_chi2(samples: &[Vec2], sectors: usize) -> Result<ChiSquare> {
    if sectors < 2 {
        return Err(Error::InvalidArgument("need at least two sectors".into()));
    }
    let mut counts = vec![0u64; sectors];
    for z in samples {
        let a = z.arg().rem_euclid(TAU);
        let k = ((a / TAU) * sectors as f64) as usize;
        counts[k.min(sectors - 1)] += 1;
    }
    chi_square_uniform(&counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exact isotropic Gaussian samples from the inverse Rayleigh CDF and a
    /// uniform angle.
    fn rayleigh_samples(count: usize, sigma2: f64, seed: u64) -> Vec<Vec2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let u: f64 = rng.random();
                let r = (-2.0 * sigma2 * (1.0 - u).ln()).sqrt();
                let a = rng.random::<f64>() * TAU;
                Vec2::new(r * a.cos(), r * a.sin())
            })
            .collect()
    }

    #[test]
    fn exact_rayleigh_passes() {
        let s = rayleigh_samples(100_000, 0.5, 1);
        let d = ks_radius(&s, 0.5).unwrap();
        assert!(d <= 0.006, "{d}");
        assert!(angular_chi2(&s, 16).unwrap().passes());
    }

    #[test]
    fn wrong_variance_fails() {
        let s = rayleigh_samples(100_000, 0.5, 2);
        assert!(ks_radius(&s, 1.0).unwrap() > 0.1);
    }

    #[test]
    fn origin_only_is_maximal() {
        let s = vec![Vec2::ZERO; 50];
        assert_eq!(ks_radius(&s, 0.5).unwrap(), 1.0);
        assert!(ks_radius(&[], 0.5).is_err());
    }

    #[test]
    fn ks_two_points() {
        // Radii at the CDF quartiles 0.25 and 0.75 give D = 0.25.
        let r = |p: f64| (-2.0 * (1.0 - p).ln()).sqrt();
        let s = [Vec2::new(r(0.25), 0.0), Vec2::new(0.0, r(0.75))];
        assert!((ks_radius(&s, 1.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn chi_square_detects_bias() {
        let s: Vec<Vec2> = (0..1000)
            .map(|i| Vec2::new(1.0, (i % 3) as f64 * 0.01))
            .collect();
        assert!(!angular_chi2(&s, 16).unwrap().passes());
        let flat = chi_square_uniform(&[10, 10, 10, 10]).unwrap();
        assert_eq!(flat.statistic, 0.0);
        assert_eq!(flat.dof, 3);
    }

    #[test]
    fn rect_frequency_counts_closed_square() {
        let s = [
            Vec2::new(1.0, -1.0),
            Vec2::new(0.0, 1.5),
            Vec2::ZERO,
            Vec2::new(-2.0, 0.0),
        ];
        assert_eq!(rect_frequency(&s, 1.0), 0.5);
    }
}
