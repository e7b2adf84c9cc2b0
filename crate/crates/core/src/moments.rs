//! Mean semigroup, finite-time second moments and limiting variance
//! constants, all evaluated exactly in the Hermite eigenbasis.
//!
//! Finite-time (co)variances come from
//! `Cov_{δx}(⟨f,X_t⟩, ⟨h,X_t⟩) = ∫_0^t T_s[A (T_{t-s}f)(T_{t-s}h)](x) ds`.
//! Expanding the product in the eigenbasis turns the integrand into a finite
//! sum of exponentials in `s`, each integrated in closed form. The same
//! integral is also available through composite Gauss-Legendre quadrature in
//! time ([`covariance_by_quadrature`]) so the two routes can check each other.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::InitialMeasure;
use crate::quadrature::{integrate_composite, CompositeEstimate, CompositeRule};
use crate::spectral::{
    check_point, classify, weighted_pair, EigenIndex, HermiteTable, Regime, SpectralFunction, SuperOUConfig,
};

/// Spectral expansion of the branching coefficient A(x).
#[derive(Debug, Clone, PartialEq)]
pub struct ACoefficient(SpectralFunction);

impl ACoefficient {
    /// The constant A = 2bβ of the quadratic model.
    pub fn from_model(cfg: &SuperOUConfig) -> Self {
        Self::constant(cfg.dimension(), cfg.a_constant())
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Self(SpectralFunction::from_terms([(EigenIndex::principal(dim), value)]))
    }

    /// A general A(x) given by a finite expansion.
    pub fn from_expansion(f: SpectralFunction) -> Self {
        Self(f)
    }

    pub fn expansion(&self) -> &SpectralFunction {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }
}

/// A limiting constant plus a flag set when the input was the zero function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitConstant {
    pub value: f64,
    pub zero_function: bool,
}

impl LimitConstant {
    fn of(value: f64) -> Self {
        Self { value, zero_function: false }
    }

    fn zero() -> Self {
        Self { value: 0.0, zero_function: true }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Input(format!("time must be finite and nonnegative, got {t}")));
    }
    Ok(())
}

/// T_t f, coefficient-wise multiplication by e^{-λ_k t}.
pub fn semigroup_apply(f: &SpectralFunction, t: f64, cfg: &SuperOUConfig) -> Result<SpectralFunction> {
    check_time(t)?;
    cfg.check_function(f)?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.map_coeffs(|i, v| v * (-cfg.lambda_of(i) * t).exp()))
}

/// ⟨T_t f, μ⟩ = E_μ⟨f, X_t⟩.
pub fn mean_functional(mu: &InitialMeasure, f: &SpectralFunction, t: f64, cfg: &SuperOUConfig) -> Result<f64> {
    mu.validate(cfg.dimension())?;
    let tf = semigroup_apply(f, t, cfg)?;
    mu.atoms
        .iter()
        .map(|a| Ok(a.mass * tf.eval(cfg, &a.point)?))
        .sum()
}

/// Var_{δx}⟨f, X_t⟩.
pub fn variance_functional(x: &[f64], f: &SpectralFunction, t: f64, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<f64> {
    covariance_functional(x, f, f, t, cfg, a)
}

/// ∫_0^t e^{-λ_n s} e^{-Λ (t-s)} ds without intermediate overflow.
fn exp_kernel_integral(big_lambda: f64, lambda_n: f64, t: f64) -> f64 {
    let kappa = big_lambda - lambda_n;
    if kappa == 0.0 {
        t * (-big_lambda * t).exp()
    } else if kappa > 0.0 {
        (-lambda_n * t).exp() * (-(-kappa * t).exp_m1()) / kappa
    } else {
        (-big_lambda * t).exp() * (kappa * t).exp_m1() / kappa
    }
}

fn check_product_degree(cfg: &SuperOUConfig, a: &ACoefficient, f: &SpectralFunction, h: &SpectralFunction) -> Result<u32> {
    let needed = a.degree() + f.degree() + h.degree();
    if needed > cfg.max_order() {
        return Err(Error::Truncation { needed, max_order: cfg.max_order() });
    }
    Ok(needed)
}

/// Cov_{δx}(⟨f,X_t⟩, ⟨h,X_t⟩) by exact exponential sums.
pub fn covariance_functional(
    x: &[f64],
    f: &SpectralFunction,
    h: &SpectralFunction,
    t: f64,
    cfg: &SuperOUConfig,
    a: &ACoefficient,
) -> Result<f64> {
    check_time(t)?;
    cfg.check_function(f)?;
    cfg.check_function(h)?;
    cfg.check_function(a.expansion())?;
    let needed = check_product_degree(cfg, a, f, h)?;
    check_point(cfg, x)?;
    let table = HermiteTable::new(cfg, needed, x);
    if f.is_zero() || h.is_zero() || t == 0.0 {
        return Ok(0.0);
    }
    // Group f⊗h by the total order of the pair; the time dependence of
    // (T_{t-s}f)(T_{t-s}h) only depends on λ_i + λ_j.
    let mut by_pair_order: BTreeMap<u32, SpectralFunction> = BTreeMap::new();
    for (i, ai) in f.terms() {
        let fi = SpectralFunction::from_terms([(i.clone(), ai)]);
        for (j, hj) in h.terms() {
            let hj_fn = SpectralFunction::from_terms([(j.clone(), hj)]);
            let p = fi.product(&hj_fn, cfg)?;
            let slot = by_pair_order.entry(i.order() + j.order()).or_default();
            *slot = slot.plus(&p);
        }
    }
    let mut total = 0.0;
    for (pair_order, p) in by_pair_order {
        let big_lambda = pair_order as f64 * cfg.drift_c() - 2.0 * cfg.alpha();
        let ap = a.expansion().product(&p, cfg)?;
        for (n, c) in ap.terms() {
            total += c * table.basis(n) * exp_kernel_integral(big_lambda, cfg.lambda_of(n), t);
        }
    }
    Ok(total)
}

/// The same covariance by composite Gauss-Legendre quadrature in time,
/// evaluating the integrand through [`semigroup_apply`] and Hermite products.
pub fn covariance_by_quadrature(
    x: &[f64],
    f: &SpectralFunction,
    h: &SpectralFunction,
    t: f64,
    cfg: &SuperOUConfig,
    a: &ACoefficient,
    rule: CompositeRule,
) -> Result<CompositeEstimate> {
    check_time(t)?;
    check_product_degree(cfg, a, f, h)?;
    let mut failure = None;
    let est = integrate_composite(0.0, t, rule, |s| {
        let value = (|| -> Result<f64> {
            let fs = semigroup_apply(f, t - s, cfg)?;
            let hs = semigroup_apply(h, t - s, cfg)?;
            let inner = a.expansion().product(&fs.product(&hs, cfg)?, cfg)?;
            semigroup_apply(&inner, s, cfg)?.eval(cfg, x)
        })();
        value.unwrap_or_else(|e| {
            failure.get_or_insert(e);
            0.0
        })
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(est),
    }
}

pub fn variance_by_quadrature(
    x: &[f64],
    f: &SpectralFunction,
    t: f64,
    cfg: &SuperOUConfig,
    a: &ACoefficient,
    rule: CompositeRule,
) -> Result<CompositeEstimate> {
    covariance_by_quadrature(x, f, f, t, cfg, a, rule)
}

/// Var_μ⟨f, X_t⟩ = ⟨Var_{δ·}⟨f, X_t⟩, μ⟩.
pub fn variance_under(mu: &InitialMeasure, f: &SpectralFunction, t: f64, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<f64> {
    mu.validate(cfg.dimension())?;
    mu.atoms
        .iter()
        .map(|at| Ok(at.mass * variance_functional(&at.point, f, t, cfg, a)?))
        .sum()
}

/// Exact covariance for the binary branching particle system with mass
/// unit 1/N that the simulator runs.
///
/// It equals the superprocess covariance plus
/// `(1/N)·[T_t(fh) − T_t f·T_t h + α ∫_0^t T_s[(T_{t-s}f)(T_{t-s}h)] ds]`.
pub fn particle_covariance_functional(
    x: &[f64],
    f: &SpectralFunction,
    h: &SpectralFunction,
    t: f64,
    cfg: &SuperOUConfig,
    scale_n: u64,
) -> Result<f64> {
    if scale_n == 0 {
        return Err(Error::Input("scale N must be positive".into()));
    }
    let a = ACoefficient::from_model(cfg);
    let limit = covariance_functional(x, f, h, t, cfg, &a)?;
    let unit = ACoefficient::constant(cfg.dimension(), 1.0);
    let branching = covariance_functional(x, f, h, t, cfg, &unit)?;
    let fh = f.product(h, cfg)?;
    let second = semigroup_apply(&fh, t, cfg)?.eval(cfg, x)?;
    let means = semigroup_apply(f, t, cfg)?.eval(cfg, x)? * semigroup_apply(h, t, cfg)?.eval(cfg, x)?;
    Ok(limit + (second - means + cfg.alpha() * branching) / scale_n as f64)
}

/// Particle-system variance under μ; see [`particle_covariance_functional`].
pub fn particle_variance_under(mu: &InitialMeasure, f: &SpectralFunction, t: f64, cfg: &SuperOUConfig, scale_n: u64) -> Result<f64> {
    mu.validate(cfg.dimension())?;
    mu.atoms
        .iter()
        .map(|at| Ok(at.mass * particle_covariance_functional(&at.point, f, f, t, cfg, scale_n)?))
        .sum()
}

fn require_regime(f: &SpectralFunction, cfg: &SuperOUConfig, wanted: Regime, what: &str) -> Result<bool> {
    cfg.check_function(f)?;
    let c = classify(f, cfg);
    match c.regime {
        Regime::Zero => Ok(false),
        r if r == wanted => Ok(true),
        r => Err(Error::Regime(format!("{what} needs a {wanted} function, got a {r} one"))),
    }
}

/// Σ a_i b_j ⟨A φ_i φ_j⟩ w(i, j).
fn bilinear(
    f1: &SpectralFunction,
    f2: &SpectralFunction,
    a: &ACoefficient,
    weight: impl Fn(&EigenIndex, &EigenIndex) -> f64,
) -> f64 {
    f1.terms()
        .flat_map(|(i, ai)| f2.terms().map(move |(j, bj)| (i, ai, j, bj)))
        .map(|(i, ai, j, bj)| ai * bj * weighted_pair(a.expansion(), i, j) * weight(i, j))
        .sum()
}

/// σ(f1, f2) = ∫_0^∞ e^{λ_1 s}⟨A (T_s f1)(T_s f2), φ_1⟩_m ds for small f1, f2.
pub fn sigma_cov(f1: &SpectralFunction, f2: &SpectralFunction, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitConstant> {
    let nz1 = require_regime(f1, cfg, Regime::Small, "sigma")?;
    let nz2 = require_regime(f2, cfg, Regime::Small, "sigma")?;
    if !(nz1 && nz2) {
        return Ok(LimitConstant::zero());
    }
    let l1 = cfg.lambda1();
    Ok(LimitConstant::of(bilinear(f1, f2, a, |i, j| {
        1.0 / (cfg.lambda_of(i) + cfg.lambda_of(j) - l1)
    })))
}

/// σ_f².
pub fn sigma2(f: &SpectralFunction, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitConstant> {
    sigma_cov(f, f, cfg, a)
}

/// ρ(h1, h2) = ⟨A h1 h2, φ_1⟩_m for critical h1, h2.
pub fn rho_cov(h1: &SpectralFunction, h2: &SpectralFunction, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitConstant> {
    let nz1 = require_regime(h1, cfg, Regime::Critical, "rho")?;
    let nz2 = require_regime(h2, cfg, Regime::Critical, "rho")?;
    if !(nz1 && nz2) {
        return Ok(LimitConstant::zero());
    }
    Ok(LimitConstant::of(bilinear(h1, h2, a, |_, _| 1.0)))
}

/// ρ_h².
pub fn rho2(h: &SpectralFunction, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitConstant> {
    rho_cov(h, h, cfg, a)
}

/// β(g1, g2) = ∫_0^∞ e^{-λ_1 s}⟨A (I_s g1)(I_s g2), φ_1⟩_m ds for large g1, g2.
pub fn beta_cov(g1: &SpectralFunction, g2: &SpectralFunction, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitConstant> {
    let nz1 = require_regime(g1, cfg, Regime::Large, "beta")?;
    let nz2 = require_regime(g2, cfg, Regime::Large, "beta")?;
    if !(nz1 && nz2) {
        return Ok(LimitConstant::zero());
    }
    let l1 = cfg.lambda1();
    Ok(LimitConstant::of(bilinear(g1, g2, a, |i, j| {
        1.0 / (l1 - cfg.lambda_of(i) - cfg.lambda_of(j))
    })))
}

/// β_g².
pub fn beta2(g: &SpectralFunction, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitConstant> {
    beta_cov(g, g, cfg, a)
}

/// η_f²(x) = ∫_0^∞ e^{2λ_γ s} T_s(A (f*)²)(x) ds, for f whose leading level
/// γ(f) satisfies 2λ_γ < λ_1.
pub fn eta2(f: &SpectralFunction, x: &[f64], cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitConstant> {
    cfg.check_function(f)?;
    let c = classify(f, cfg);
    check_point(cfg, x)?;
    let Some(gamma) = c.gamma.finite() else {
        return Ok(LimitConstant::zero());
    };
    let lead_order = gamma - 1;
    if cfg.class_of_order(lead_order) != crate::spectral::LevelClass::Large {
        return Err(Error::Regime(format!(
            "eta2 needs 2λ_γ < λ_1, but level γ = {gamma} is {}",
            cfg.class_of_order(lead_order)
        )));
    }
    let sq = c.leading.product(&c.leading, cfg)?;
    let needed = a.degree() + sq.degree();
    if needed > cfg.max_order() {
        return Err(Error::Truncation { needed, max_order: cfg.max_order() });
    }
    let expansion = a.expansion().product(&sq, cfg)?;
    let two_lg = 2.0 * cfg.lambda_of_order(lead_order);
    let table = HermiteTable::new(cfg, expansion.degree(), x);
    Ok(LimitConstant::of(
        expansion
            .terms()
            .map(|(n, v)| v * table.basis(n) / (cfg.lambda_of(n) - two_lg))
            .sum(),
    ))
}

/// How ⟨f, X_t⟩ must be normalized for a nondegenerate Gaussian limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide by √⟨φ_1, X_t⟩ (scale e^{-λ_1 t/2}).
    SqrtMass,
    /// Divide by √(t·⟨φ_1, X_t⟩).
    SqrtTimeMass,
}

/// Limit law of the normalized, martingale-corrected ⟨f, X_t⟩.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitLaw {
    pub normalization: Normalization,
    pub variance: f64,
    /// (k, j) labels of the H_∞^{k,j} corrections to subtract.
    pub corrections: Vec<(u32, u32)>,
    pub zero_function: bool,
}

/// Dispatch between the critical and the small-plus-large limits.
///
/// A nonzero critical part dominates and the limit is N(0, ρ²) under the
/// √t normalization; otherwise the limit is N(0, σ²_{small} + β²_{large}).
pub fn limit_decomposition(f: &SpectralFunction, cfg: &SuperOUConfig, a: &ACoefficient) -> Result<LimitLaw> {
    cfg.check_function(f)?;
    let c = classify(f, cfg);
    let corrections = c.large.indices().map(EigenIndex::label).collect();
    if c.regime == Regime::Zero {
        return Ok(LimitLaw {
            normalization: Normalization::SqrtMass,
            variance: 0.0,
            corrections,
            zero_function: true,
        });
    }
    if !c.critical.is_zero() {
        return Ok(LimitLaw {
            normalization: Normalization::SqrtTimeMass,
            variance: rho2(&c.critical, cfg, a)?.value,
            corrections,
            zero_function: false,
        });
    }
    let variance = sigma2(&c.small, cfg, a)?.value + beta2(&c.large, cfg, a)?.value;
    Ok(LimitLaw {
        normalization: Normalization::SqrtMass,
        variance,
        corrections,
        zero_function: false,
    })
}

/// u_t solving u' = β(a·u − b·u²) with u_0 = +∞, so that
/// P_μ(‖X_t‖ = 0) = e^{−u_t‖μ‖}. `t = ∞` gives the limit a/b.
pub fn extinction_rate(cfg: &SuperOUConfig, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Input(format!("extinction rate needs t > 0, got {t}")));
    }
    let limit = cfg.branch_a() / cfg.branch_b();
    if t.is_infinite() {
        return Ok(limit);
    }
    Ok(limit / -(-cfg.alpha() * t).exp_m1())
}

/// P_μ(‖X_t‖ > 0) for an initial measure of total mass `mass`.
pub fn survival_probability(cfg: &SuperOUConfig, mass: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(if mass > 0.0 { 1.0 } else { 0.0 });
    }
    Ok(-(-extinction_rate(cfg, t)? * mass).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg0() -> SuperOUConfig {
        SuperOUConfig::new(1, 1.0, 2.0, 2.0, 1.0, 1.0).unwrap()
    }

    fn phi(k: u32) -> SpectralFunction {
        SpectralFunction::basis_1d(k - 1)
    }

    fn a0() -> ACoefficient {
        ACoefficient::from_model(&cfg0())
    }

    #[test]
    fn semigroup_examples() {
        let cfg = cfg0();
        assert_eq!(semigroup_apply(&phi(3), 5.0, &cfg).unwrap(), phi(3));
        let f = phi(2).plus(&phi(4).scaled(-0.3));
        assert_eq!(semigroup_apply(&f, 0.0, &cfg).unwrap(), f);
        let g = semigroup_apply(&phi(1), 1.0, &cfg).unwrap();
        assert!((g.coeff(&EigenIndex::new(vec![0])) - 2f64.exp()).abs() < 1e-14);
        assert!(matches!(semigroup_apply(&f, -1.0, &cfg), Err(Error::Input(_))));
    }

    #[test]
    fn mean_examples() {
        let cfg = cfg0();
        let at = |x: f64| InitialMeasure::dirac(vec![x], 1.0);
        assert_eq!(mean_functional(&at(0.0), &phi(2), 1.0, &cfg).unwrap(), 0.0);
        assert!((mean_functional(&at(3.0), &phi(1), 1.0, &cfg).unwrap() - 2f64.exp()).abs() < 1e-14);
        assert!((mean_functional(&at(1.0), &phi(2), 1.0, &cfg).unwrap() - 1f64.exp()).abs() < 1e-14);
        let neg = InitialMeasure::dirac(vec![0.0], -1.0);
        assert!(matches!(mean_functional(&neg, &phi(1), 1.0, &cfg), Err(Error::Input(_))));
    }

    #[test]
    fn variance_trivial_cases() {
        let cfg = cfg0();
        let a = a0();
        assert_eq!(variance_functional(&[0.3], &SpectralFunction::zero(), 2.0, &cfg, &a).unwrap(), 0.0);
        assert_eq!(variance_functional(&[0.3], &phi(3), 0.0, &cfg, &a).unwrap(), 0.0);
        let expected = 1.5 * (1.0 - (-2f64).exp()) - 4.0 + 2f64.exp() - 1.0;
        let v = variance_functional(&[0.0], &phi(3), 1.0, &cfg, &a).unwrap();
        assert!((v - expected).abs() < 1e-12, "{v} vs {expected}");
    }

    #[test]
    fn variance_truncation_is_explicit() {
        let cfg = cfg0();
        assert!(variance_functional(&[0.0], &SpectralFunction::basis_1d(6), 1.0, &cfg, &a0()).is_ok());
        let err = variance_functional(&[0.0], &SpectralFunction::basis_1d(7), 1.0, &cfg, &a0()).unwrap_err();
        assert!(matches!(err, Error::Truncation { needed: 14, max_order: 12 }));
    }

    #[test]
    fn limit_constant_examples() {
        let cfg = cfg0();
        let a = a0();
        assert!((sigma2(&phi(3), &cfg, &a).unwrap().value - 1.0).abs() < 1e-14);
        assert!((sigma2(&phi(4), &cfg, &a).unwrap().value - 0.5).abs() < 1e-14);
        assert!((sigma2(&phi(3).plus(&phi(4)), &cfg, &a).unwrap().value - 1.5).abs() < 1e-14);
        assert_eq!(sigma_cov(&phi(3), &phi(4), &cfg, &a).unwrap().value, 0.0);
        assert!((sigma_cov(&phi(3), &phi(3).plus(&phi(4)), &cfg, &a).unwrap().value - 1.0).abs() < 1e-14);
        assert!((rho2(&phi(2), &cfg, &a).unwrap().value - 2.0).abs() < 1e-14);
        assert!((rho2(&phi(2).scaled(2.0), &cfg, &a).unwrap().value - 8.0).abs() < 1e-13);
        assert!((beta2(&phi(1), &cfg, &a).unwrap().value - 1.0).abs() < 1e-14);
        assert!((beta2(&phi(1).scaled(3.0), &cfg, &a).unwrap().value - 9.0).abs() < 1e-13);
        let z = beta2(&SpectralFunction::zero(), &cfg, &a).unwrap();
        assert!(z.zero_function && z.value == 0.0);
        assert!(matches!(sigma2(&phi(2), &cfg, &a), Err(Error::Regime(_))));
        assert!(matches!(rho2(&phi(3), &cfg, &a), Err(Error::Regime(_))));
        assert!(matches!(beta2(&phi(2), &cfg, &a), Err(Error::Regime(_))));
    }

    #[test]
    fn eta2_examples() {
        let cfg = cfg0();
        let a = a0();
        assert!((eta2(&phi(1), &[0.4], &cfg, &a).unwrap().value - 1.0).abs() < 1e-14);
        assert!(eta2(&SpectralFunction::zero(), &[0.0], &cfg, &a).unwrap().zero_function);
        let steep = SuperOUConfig::new(1, 1.0, 2.0, 4.0, 1.0, 1.0).unwrap();
        assert!((eta2(&phi(1), &[0.0], &steep, &a).unwrap().value - 0.5).abs() < 1e-14);
        assert!(matches!(eta2(&phi(3), &[0.0], &cfg, &a), Err(Error::Regime(_))));
    }

    #[test]
    fn decomposition_examples() {
        let cfg = cfg0();
        let a = a0();
        let small = limit_decomposition(&phi(3), &cfg, &a).unwrap();
        assert_eq!(small.normalization, Normalization::SqrtMass);
        assert!((small.variance - 1.0).abs() < 1e-14);
        assert!(small.corrections.is_empty());
        let crit = limit_decomposition(&phi(2).plus(&phi(3)), &cfg, &a).unwrap();
        assert_eq!(crit.normalization, Normalization::SqrtTimeMass);
        assert!((crit.variance - 2.0).abs() < 1e-14);
        assert!(crit.corrections.is_empty());
        let large = limit_decomposition(&phi(1).plus(&phi(3)), &cfg, &a).unwrap();
        assert!((large.variance - 2.0).abs() < 1e-14);
        assert_eq!(large.corrections, vec![(1, 1)]);
    }

    #[test]
    fn extinction_oracle_cfg0() {
        let cfg = cfg0();
        let u1 = extinction_rate(&cfg, 1.0).unwrap();
        assert!((u1 - 2.0 / (1.0 - (-2.0f64).exp())).abs() < 1e-14);
        assert!((survival_probability(&cfg, 1.0, 1.0).unwrap() - 0.90105).abs() < 1e-4);
        assert_eq!(extinction_rate(&cfg, f64::INFINITY).unwrap(), 2.0);
    }
}
