//! Closed-form law of a single-type linear birth-death process.
//!
//! With per-particle birth rate `b` and death rate `d`, r = b − d, put
//! `G(u) = 1 + b·(e^{ru} − 1)/r` (→ 1 + b·u as r → 0). Then for one
//! ancestor and elapsed time `u`:
//!
//! * survival probability is `e^{ru} / G(u)`;
//! * conditioned on survival the population is geometric on {1, 2, …} with
//!   mean `G(u)`, i.e. `1 + Geom` with `G(u) − 1` expected extra particles;
//! * conditioned on survival to a fixed end time, the lineages with
//!   surviving descendants split at rate `b·p(remaining time)`, whose
//!   integrated hazard between remaining times `u₂ < u₁` is
//!   `ln(G(u₁)/G(u₂))`.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Gamma, Poisson};

/// Birth and death rates of one particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirthDeath {
    pub birth: f64,
    pub death: f64,
}

impl BirthDeath {
    pub fn new(birth: f64, death: f64) -> Self {
        debug_assert!(birth >= 0.0 && death >= 0.0);
        Self { birth, death }
    }

    /// Malthusian rate r = birth − death.
    pub fn growth(&self) -> f64 {
        self.birth - self.death
    }

    /// G(u) as defined in the module docs.
    pub fn g(&self, u: f64) -> f64 {
        let r = self.growth();
        if r == 0.0 {
            1.0 + self.birth * u
        } else {
            1.0 + self.birth * (r * u).exp_m1() / r
        }
    }

    /// Inverse of [`BirthDeath::g`] on [1, ∞).
    pub fn g_inv(&self, y: f64) -> f64 {
        debug_assert!(y >= 1.0);
        let r = self.growth();
        if r == 0.0 {
            (y - 1.0) / self.birth
        } else {
            (r * (y - 1.0) / self.birth).ln_1p() / r
        }
    }

    /// Probability that one particle has descendants after time `u`.
    pub fn survival(&self, u: f64) -> f64 {
        (self.growth() * u).exp() / self.g(u)
    }

    /// Extinction probability of one particle within time `u`.
    pub fn extinction(&self, u: f64) -> f64 {
        let r = self.growth();
        if r == 0.0 {
            return self.death * u / (1.0 + self.birth * u);
        }
        // d (e^{ru} − 1) / (b e^{ru} − d), written to avoid cancellation.
        let em1 = (r * u).exp_m1();
        self.death * em1 / (self.birth * em1 + r)
    }

    /// Remaining time of the next split of a surviving lineage, given it
    /// currently has `remaining` time to go, or `None` if it reaches the end
    /// without splitting.
    pub fn next_split<R: Rng + ?Sized>(&self, remaining: f64, rng: &mut R) -> Option<f64> {
        self.next_split_from(remaining, self.g(remaining), rng).map(|(at, _)| at)
    }

    /// [`BirthDeath::next_split`] with `g_remaining = G(remaining)` supplied;
    /// also returns G at the split time.
    pub fn next_split_from<R: Rng + ?Sized>(&self, remaining: f64, g_remaining: f64, rng: &mut R) -> Option<(f64, f64)> {
        // The integrated hazard ln(G(u)/G(at)) is Exp(1), so G(at) = G(u)·U.
        let target = g_remaining * rng.random::<f64>();
        if target <= 1.0 {
            None
        } else {
            Some((self.g_inv(target).min(remaining), target))
        }
    }

    /// Population after time `u` started from `count` particles.
    pub fn sample_count<R: Rng + ?Sized>(&self, count: u64, u: f64, rng: &mut R) -> u64 {
        if count == 0 || u <= 0.0 {
            return count;
        }
        let p = self.survival(u).clamp(0.0, 1.0);
        let survivors = Binomial::new(count, p).expect("valid binomial").sample(rng);
        if survivors == 0 {
            return 0;
        }
        let extra_mean = self.g(u) - 1.0;
        if extra_mean <= 0.0 {
            return survivors;
        }
        // Sum of `survivors` geometric excesses: a gamma-mixed Poisson.
        let lambda = Gamma::new(survivors as f64, extra_mean)
            .expect("valid gamma")
            .sample(rng);
        if lambda <= 0.0 {
            return survivors;
        }
        let extra: f64 = Poisson::new(lambda).expect("valid poisson").sample(rng);
        survivors + extra as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn g_inverse_round_trip() {
        for bd in [BirthDeath::new(3.0, 1.0), BirthDeath::new(1.0, 1.0), BirthDeath::new(1.0, 2.5)] {
            for u in [0.0, 0.01, 0.7, 3.0] {
                let y = bd.g(u);
                assert!((bd.g_inv(y) - u).abs() < 1e-12 * (1.0 + u), "{bd:?} {u}");
            }
        }
    }

    #[test]
    fn survival_and_extinction_are_complementary() {
        for bd in [BirthDeath::new(1001.0, 999.0), BirthDeath::new(2.0, 2.0), BirthDeath::new(0.5, 1.5)] {
            for u in [0.1, 1.0, 4.0] {
                let s = bd.survival(u) + bd.extinction(u);
                assert!((s - 1.0).abs() < 1e-12, "{bd:?} {u} {s}");
            }
        }
    }

    #[test]
    fn pure_death_never_splits() {
        let bd = BirthDeath::new(0.0, 1.0);
        assert_eq!(bd.g(5.0), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(bd.next_split(5.0, &mut rng).is_none());
    }

    #[test]
    fn count_mean_matches_exponential_growth() {
        let bd = BirthDeath::new(3.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let reps = 20_000;
        let u = 0.8;
        let mean = (0..reps).map(|_| bd.sample_count(5, u, &mut rng) as f64).sum::<f64>() / reps as f64;
        let expected = 5.0 * (2.0 * u).exp();
        // Var of one ancestor is (b+d)/r · e^{ru}(e^{ru} − 1).
        let var1 = 4.0 / 2.0 * (1.6f64).exp() * (1.6f64).exp_m1();
        let se = (5.0 * var1 / reps as f64).sqrt();
        assert!((mean - expected).abs() < 4.0 * se, "{mean} vs {expected} (se {se})");
    }
}
