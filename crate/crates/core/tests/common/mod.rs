//! Independent numerical oracles for the integration tests.
//!
//! Everything here works in physical space: Hermite polynomials from their
//! explicit power series, the OU semigroup through its Gaussian transition
//! kernel, and time integrals through third-party Gauss-Legendre rules. None
//! of it touches the eigen-expansion code under test.

#![allow(dead_code)]

use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use gauss_quad::legendre::GaussLegendre;
use superclt::{EigenIndex, SpectralFunction, SuperOUConfig};

pub fn cfg0() -> SuperOUConfig {
    SuperOUConfig::new(1, 1.0, 2.0, 2.0, 1.0, 1.0).unwrap()
}

/// φ^{(k)} of the one-dimensional model, i.e. φ_{k−1}.
pub fn phi(k: u32) -> SpectralFunction {
    SpectralFunction::basis_1d(k - 1)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// He_n(y)/√(n!) from the explicit sum n! Σ_m (−1)^m y^{n−2m} / (m!(n−2m)! 2^m).
pub fn hermite_series(n: u32, y: f64) -> f64 {
    let mut sum = 0.0;
    for m in 0..=n / 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * y.powi((n - 2 * m) as i32) / (factorial(m) * factorial(n - 2 * m) * 2f64.powi(m as i32));
    }
    sum * factorial(n) / factorial(n).sqrt()
}

/// Evaluates Σ a_n φ_n(x) with the series Hermite polynomials.
pub fn eval(cfg: &SuperOUConfig, f: &SpectralFunction, x: &[f64]) -> f64 {
    let s = cfg.stationary_std();
    f.terms()
        .map(|(idx, a)| {
            a * idx
                .orders()
                .iter()
                .zip(x)
                .map(|(&n, &xc)| hermite_series(n, xc / s))
                .product::<f64>()
        })
        .sum()
}

pub fn basis_eval(cfg: &SuperOUConfig, idx: &EigenIndex, x: &[f64]) -> f64 {
    eval(cfg, &SpectralFunction::basis(idx.clone()), x)
}

/// Gauss-Hermite expectations under Gaussians, tensorized over coordinates.
pub struct Oracle {
    gh: GaussHermite,
    gl: GaussLegendre,
}

impl Oracle {
    pub fn new(hermite_nodes: usize, legendre_nodes: usize) -> Self {
        Self {
            gh: GaussHermite::new(NonZeroUsize::new(hermite_nodes).unwrap()),
            gl: GaussLegendre::new(NonZeroUsize::new(legendre_nodes).unwrap()),
        }
    }

    fn pairs(&self) -> Vec<(f64, f64)> {
        (&self.gh).into_iter().map(|(x, w)| (*x, *w)).collect()
    }

    /// E[g(mean + sd·Z)] for Z standard normal in `dim` dimensions.
    pub fn gaussian(&self, mean: &[f64], sd: f64, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
        let pairs = self.pairs();
        let norm = std::f64::consts::PI.sqrt();
        match mean.len() {
            1 => pairs
                .iter()
                .map(|&(y, w)| w / norm * g(&[mean[0] + std::f64::consts::SQRT_2 * sd * y]))
                .sum(),
            2 => {
                let mut total = 0.0;
                for &(y1, w1) in &pairs {
                    for &(y2, w2) in &pairs {
                        let p = [
                            mean[0] + std::f64::consts::SQRT_2 * sd * y1,
                            mean[1] + std::f64::consts::SQRT_2 * sd * y2,
                        ];
                        total += w1 * w2 / (norm * norm) * g(&p);
                    }
                }
                total
            }
            d => panic!("dimension {d} unsupported"),
        }
    }

    /// ∫ g dm under the stationary law m = N(0, s² I).
    pub fn stationary(&self, cfg: &SuperOUConfig, g: impl FnMut(&[f64]) -> f64) -> f64 {
        let zero = vec![0.0; cfg.dimension()];
        self.gaussian(&zero, cfg.stationary_std(), g)
    }

    /// E[g(ξ_t) | ξ_0 = x] for the OU motion.
    pub fn ou(&self, cfg: &SuperOUConfig, x: &[f64], t: f64, g: impl FnMut(&[f64]) -> f64) -> f64 {
        let decay = (-cfg.drift_c() * t).exp();
        let mean: Vec<f64> = x.iter().map(|v| v * decay).collect();
        let sd = cfg.stationary_std() * (1.0 - (-2.0 * cfg.drift_c() * t).exp()).sqrt();
        self.gaussian(&mean, sd, g)
    }

    /// T_t f(x) = e^{αt} E_x[f(ξ_t)].
    pub fn semigroup(&self, cfg: &SuperOUConfig, f: &SpectralFunction, t: f64, x: &[f64]) -> f64 {
        (cfg.alpha() * t).exp() * self.ou(cfg, x, t, |y| eval(cfg, f, y))
    }

    /// ∫_a^b g(s) ds with `panels` equal panels.
    pub fn time(&self, a: f64, b: f64, panels: usize, mut g: impl FnMut(f64) -> f64) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + p as f64 * h;
                self.gl.integrate(lo, lo + h, &mut g)
            })
            .sum()
    }

    /// Cov_{δx}(⟨f,X_t⟩,⟨h,X_t⟩) = ∫_0^t T_s[A·T_{t−s}f·T_{t−s}h](x) ds with
    /// constant A, every semigroup evaluated through the OU kernel.
    #[allow(clippy::too_many_arguments)]
    pub fn covariance(&self, cfg: &SuperOUConfig, x: &[f64], f: &SpectralFunction, h: &SpectralFunction, t: f64, panels: usize) -> f64 {
        let a = cfg.a_constant();
        self.time(0.0, t, panels, |s| {
            let inner = |y: &[f64]| {
                a * self.semigroup(cfg, f, t - s, y) * self.semigroup(cfg, h, t - s, y)
            };
            (cfg.alpha() * s).exp() * self.ou(cfg, x, s, inner)
        })
    }

    /// σ(f,h) = ∫_0^∞ e^{λ_1 s} ∫ A·T_s f·T_s h dm ds, truncated at `horizon`.
    pub fn sigma_cov(&self, cfg: &SuperOUConfig, f: &SpectralFunction, h: &SpectralFunction, horizon: f64, panels: usize) -> f64 {
        let a = cfg.a_constant();
        self.time(0.0, horizon, panels, |s| {
            (cfg.lambda1() * s).exp()
                * self.stationary(cfg, |y| a * self.semigroup(cfg, f, s, y) * self.semigroup(cfg, h, s, y))
        })
    }
}
