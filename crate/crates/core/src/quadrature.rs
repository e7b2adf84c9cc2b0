//! Gaussian quadrature rules used across the crate.
//!
//! [`GaussHermite`] integrates against the standard normal law N(0, 1), so
//! the weights sum to one. [`GaussLegendre`] covers finite intervals and backs
//! the composite time integrator [`integrate_composite`].

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Node count used wherever a Gauss-Hermite rule is needed.
pub const HERMITE_NODES: usize = 64;

/// Gauss-Hermite rule for the standard normal weight.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds an `n`-point rule by Newton iteration on the orthonormal
    /// (physicists') Hermite recurrence, then rescales to the N(0, 1) weight.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
        let mut z_nodes = vec![0.0; n];
        let mut z_weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let pim4 = PI.powf(-0.25);
        let mut z = 0.0;
        for i in 0..m {
            // Initial guesses for the largest roots, then extrapolate inward.
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * z_nodes[0],
                3 => 1.91 * z - 0.91 * z_nodes[1],
                _ => 2.0 * z - z_nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            z_nodes[i] = z;
            z_nodes[n - 1 - i] = -z;
            z_weights[i] = 2.0 / (pp * pp);
            z_weights[n - 1 - i] = z_weights[i];
        }
        let sqrt_pi = PI.sqrt();
        let mut pairs: Vec<(f64, f64)> = z_nodes
            .iter()
            .zip(&z_weights)
            .map(|(&z, &w)| (z * std::f64::consts::SQRT_2, w / sqrt_pi))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self { nodes, weights }
    }

    /// Shared 64-node rule.
    pub fn standard() -> &'static GaussHermite {
        static RULE: OnceLock<GaussHermite> = OnceLock::new();
        RULE.get_or_init(|| GaussHermite::new(HERMITE_NODES))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// E[g(Z)] for Z ~ N(0, 1).
    pub fn expect<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = 1.0;
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
                }
                pp = nf * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Self { nodes, weights }
    }

    /// Integral of `g` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut g: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(mid + half * x))
            .sum::<f64>()
    }
}

/// Settings for [`integrate_composite`].
#[derive(Debug, Clone, Copy)]
pub struct CompositeRule {
    pub panels: usize,
    pub points_per_panel: usize,
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl Default for CompositeRule {
    fn default() -> Self {
        Self {
            panels: 200,
            points_per_panel: 5,
            rel_tol: 1e-9,
            max_doublings: 8,
        }
    }
}

/// Outcome of a composite integration.
#[derive(Debug, Clone, Copy)]
pub struct CompositeEstimate {
    pub value: f64,
    pub panels: usize,
    pub converged: bool,
}

fn composite_once<F: FnMut(f64) -> f64>(rule: &GaussLegendre, a: f64, b: f64, panels: usize, g: &mut F) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + h * p as f64;
            rule.integrate(lo, lo + h, &mut *g)
        })
        .sum()
}

/// Composite Gauss-Legendre integral over [a, b], doubling the panel count
/// until two successive estimates agree to `rel_tol`.
pub fn integrate_composite<F: FnMut(f64) -> f64>(a: f64, b: f64, settings: CompositeRule, mut g: F) -> CompositeEstimate {
    if b == a {
        return CompositeEstimate { value: 0.0, panels: 0, converged: true };
    }
    let rule = GaussLegendre::new(settings.points_per_panel);
    let mut panels = settings.panels.max(1);
    let mut prev = composite_once(&rule, a, b, panels, &mut g);
    for _ in 0..settings.max_doublings {
        panels *= 2;
        let next = composite_once(&rule, a, b, panels, &mut g);
        let scale = next.abs().max(f64::MIN_POSITIVE);
        if (next - prev).abs() <= settings.rel_tol * scale || next == prev {
            return CompositeEstimate { value: next, panels, converged: true };
        }
        prev = next;
    }
    CompositeEstimate { value: prev, panels, converged: false }
}
