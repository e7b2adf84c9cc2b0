//! Deterministic summary statistics and the one-sample KS test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const PAIRWISE_BLOCK: usize = 32;

/// Sum in a fixed pairwise order, independent of how the data were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (xs.len() as f64 - 1.0)
}

/// Unbiased sample covariance.
pub fn covariance(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    pairwise_sum(&prods) / (xs.len() as f64 - 1.0)
}

/// Pearson correlation, `None` if either sample is constant.
pub fn correlation(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let vx = variance(xs);
    let vy = variance(ys);
    if !(vx > 0.0 && vy > 0.0) {
        return None;
    }
    Some(covariance(xs, ys) / (vx * vy).sqrt())
}

/// Standard error of the sample mean.
pub fn standard_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Two-sided normal tail probability of a z-score.
pub fn two_sided_p(z: f64) -> f64 {
    (2.0 * normal_cdf(-z.abs())).min(1.0)
}

/// P(K > λ) for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        // Theta-function form, fast for small λ.
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let cdf: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * pi2 / (8.0 * lambda * lambda)).exp()
            })
            .sum::<f64>()
            * (2.0 * std::f64::consts::PI).sqrt()
            / lambda;
        1.0 - cdf
    } else {
        2.0 * (1..=100)
            .map(|k| {
                let k = k as f64;
                let sign = if k as u64 % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * k * k * lambda * lambda).exp()
            })
            .sum::<f64>()
    };
    p.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// One-sample Kolmogorov-Smirnov test against N(0, v). The p-value uses the
/// asymptotic Kolmogorov law with Stephens' finite-sample scaling.
pub fn ks_test(samples: &[f64], v: f64) -> Result<KsResult> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Input(format!("KS reference variance must be positive, got {v}")));
    }
    if samples.is_empty() {
        return Err(Error::Input("KS test needs at least one sample".into()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Input("KS samples must be finite".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let sd = v.sqrt();
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal_cdf(x / sd);
            ((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max);
    let sqrt_n = n.sqrt();
    let p = kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    Ok(KsResult { statistic: d, p_value: p })
}

/// Bootstrap standard error of `stat` over resamples of `0..n`.
pub fn bootstrap_se(n: usize, resamples: usize, seed: u64, mut stat: impl FnMut(&[usize]) -> f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = vec![0usize; n];
    let values: Vec<f64> = (0..resamples)
        .map(|_| {
            for slot in idx.iter_mut() {
                *slot = rng.random_range(0..n);
            }
            stat(&idx)
        })
        .collect();
    variance(&values).sqrt()
}

/// Bootstrap standard error of the sample variance.
pub fn bootstrap_variance_se(xs: &[f64], resamples: usize, seed: u64) -> f64 {
    let mut buf = Vec::with_capacity(xs.len());
    bootstrap_se(xs.len(), resamples, seed, |idx| {
        buf.clear();
        buf.extend(idx.iter().map(|&i| xs[i]));
        variance(&buf)
    })
}

/// Bootstrap standard error of the sample covariance.
pub fn bootstrap_covariance_se(xs: &[f64], ys: &[f64], resamples: usize, seed: u64) -> f64 {
    let mut bx = Vec::with_capacity(xs.len());
    let mut by = Vec::with_capacity(ys.len());
    bootstrap_se(xs.len(), resamples, seed, |idx| {
        bx.clear();
        by.clear();
        bx.extend(idx.iter().map(|&i| xs[i]));
        by.extend(idx.iter().map(|&i| ys[i]));
        covariance(&bx, &by)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_symmetry() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.96) - 0.9750021048517795).abs() < 1e-12);
        assert!((normal_cdf(-1.0) + normal_cdf(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_single_sample_at_median() {
        let r = ks_test(&[0.0], 1.0).unwrap();
        assert_eq!(r.statistic, 0.5);
        assert!((0.0..=1.0).contains(&r.p_value));
        assert!(ks_test(&[0.0], 0.0).is_err());
        assert!(ks_test(&[], 1.0).is_err());
    }

    #[test]
    fn kolmogorov_branches_meet() {
        let a = kolmogorov_sf(1.18 - 1e-9);
        let b = kolmogorov_sf(1.18 + 1e-9);
        assert!((a - b).abs() < 1e-8);
        // Critical value at the 5% level.
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
    }

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
