//! Eigenbasis of the super Ornstein-Uhlenbeck mean semigroup.
//!
//! For an OU motion with mean-reversion rate `c` and stationary variance
//! `s²`, the normalized Hermite products φ_n(x) = ∏ He_{n_i}(x_i/s)/√(n_i!)
//! form an orthonormal basis of L²(m), m = N(0, s² I). The mean semigroup
//! T_t = e^{αt}·P_t has T_t φ_n = e^{-λ(n) t} φ_n with λ(n) = |n|·c − α.
//!
//! Distinct eigenvalues are labelled λ_1 < λ_2 < … so level `k` collects the
//! multi-indices with |n| = k − 1. Inside a level the index `j` enumerates
//! those multi-indices in lexicographic order.

pub mod hermite;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{GaussHermite, HERMITE_NODES};

/// Default bound on the total Hermite order of any expansion.
pub const DEFAULT_MAX_ORDER: u32 = 12;

/// Model parameters of a super-OU process with quadratic branching.
///
/// Construction enforces supercriticality (`branch_a > 0`), so λ_1 = −βa < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SuperOUConfigFields", into = "SuperOUConfigFields")]
pub struct SuperOUConfig {
    dimension: u32,
    drift_c: f64,
    diffusion: f64,
    branch_a: f64,
    branch_b: f64,
    branch_rate: f64,
    max_order: u32,
}

/// Wire form of [`SuperOUConfig`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperOUConfigFields {
    pub dimension: u32,
    pub drift_c: f64,
    pub diffusion: f64,
    pub branch_a: f64,
    pub branch_b: f64,
    pub branch_rate: f64,
    #[serde(default = "default_max_order")]
    pub max_order: u32,
}

fn default_max_order() -> u32 {
    DEFAULT_MAX_ORDER
}

impl TryFrom<SuperOUConfigFields> for SuperOUConfig {
    type Error = Error;

    fn try_from(f: SuperOUConfigFields) -> Result<Self> {
        SuperOUConfig::new(f.dimension, f.drift_c, f.diffusion, f.branch_a, f.branch_b, f.branch_rate)?
            .with_max_order(f.max_order)
    }
}

impl From<SuperOUConfig> for SuperOUConfigFields {
    fn from(c: SuperOUConfig) -> Self {
        Self {
            dimension: c.dimension,
            drift_c: c.drift_c,
            diffusion: c.diffusion,
            branch_a: c.branch_a,
            branch_b: c.branch_b,
            branch_rate: c.branch_rate,
            max_order: c.max_order,
        }
    }
}

impl SuperOUConfig {
    pub fn new(
        dimension: u32,
        drift_c: f64,
        diffusion: f64,
        branch_a: f64,
        branch_b: f64,
        branch_rate: f64,
    ) -> Result<Self> {
        if !(1..=2).contains(&dimension) {
            return Err(Error::Config(format!("dimension must be 1 or 2, got {dimension}")));
        }
        let positive = [
            ("drift_c", drift_c),
            ("diffusion", diffusion),
            ("branch_b", branch_b),
            ("branch_rate", branch_rate),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !branch_a.is_finite() {
            return Err(Error::Config(format!("branch_a must be finite, got {branch_a}")));
        }
        if branch_a <= 0.0 {
            return Err(Error::Config(format!(
                "supercritical requires λ_1 < 0 (branch_a > 0), got branch_a = {branch_a}"
            )));
        }
        Ok(Self {
            dimension,
            drift_c,
            diffusion,
            branch_a,
            branch_b,
            branch_rate,
            max_order: DEFAULT_MAX_ORDER,
        })
    }

    pub fn with_max_order(mut self, max_order: u32) -> Result<Self> {
        if max_order == 0 || max_order > 200 {
            return Err(Error::Config(format!("max_order must be in 1..=200, got {max_order}")));
        }
        self.max_order = max_order;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension as usize
    }
    pub fn drift_c(&self) -> f64 {
        self.drift_c
    }
    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }
    pub fn branch_a(&self) -> f64 {
        self.branch_a
    }
    pub fn branch_b(&self) -> f64 {
        self.branch_b
    }
    pub fn branch_rate(&self) -> f64 {
        self.branch_rate
    }
    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// Per-coordinate variance s² of the stationary law m.
    pub fn stationary_variance(&self) -> f64 {
        self.diffusion / (2.0 * self.drift_c)
    }

    pub fn stationary_std(&self) -> f64 {
        self.stationary_variance().sqrt()
    }

    /// α = β·a
    pub fn alpha(&self) -> f64 {
        self.branch_rate * self.branch_a
    }

    /// A = β·2b, the constant branching second-moment coefficient.
    pub fn a_constant(&self) -> f64 {
        self.branch_rate * 2.0 * self.branch_b
    }

    /// λ_1 = −α.
    pub fn lambda1(&self) -> f64 {
        -self.alpha()
    }

    /// Largest admissible eigen-level.
    pub fn max_level(&self) -> u32 {
        self.max_order + 1
    }

    /// Eigenvalue of −L at total Hermite order `order`.
    pub fn lambda_of_order(&self, order: u32) -> f64 {
        order as f64 * self.drift_c - self.alpha()
    }

    pub fn lambda_of(&self, idx: &EigenIndex) -> f64 {
        self.lambda_of_order(idx.order())
    }

    /// Class of the eigenspace at total order `order`.
    pub fn class_of_order(&self, order: u32) -> LevelClass {
        // 2λ vs λ_1 reduces to 2·order·c vs α.
        let lhs = 2.0 * order as f64 * self.drift_c;
        let rhs = self.alpha();
        let tol = 1e-12 * lhs.abs().max(rhs.abs()).max(1.0);
        if (lhs - rhs).abs() <= tol {
            LevelClass::Critical
        } else if lhs < rhs {
            LevelClass::Large
        } else {
            LevelClass::Small
        }
    }

    pub fn class_of(&self, idx: &EigenIndex) -> LevelClass {
        self.class_of_order(idx.order())
    }

    /// Multi-indices with 2λ < λ_1, in level order.
    pub fn large_indices(&self) -> Vec<EigenIndex> {
        (0..=self.max_order)
            .take_while(|&o| self.class_of_order(o) == LevelClass::Large)
            .flat_map(|o| EigenIndex::of_order(self.dimension(), o))
            .collect()
    }

    /// Checks that `idx` has this dimension and lies within the truncation.
    pub fn check_index(&self, idx: &EigenIndex) -> Result<()> {
        if idx.dim() != self.dimension() {
            return Err(Error::IndexRange(format!(
                "index {idx} has dimension {}, model dimension is {}",
                idx.dim(),
                self.dimension
            )));
        }
        if idx.order() > self.max_order {
            return Err(Error::IndexRange(format!(
                "index {idx} has order {} beyond truncation {}",
                idx.order(),
                self.max_order
            )));
        }
        Ok(())
    }

    pub fn check_function(&self, f: &SpectralFunction) -> Result<()> {
        f.indices().try_for_each(|i| self.check_index(i))
    }
}

/// Position of a level relative to λ_1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelClass {
    /// 2λ_k < λ_1
    Large,
    /// 2λ_k = λ_1
    Critical,
    /// 2λ_k > λ_1
    Small,
}

impl fmt::Display for LevelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelClass::Large => "large",
            LevelClass::Critical => "critical",
            LevelClass::Small => "small",
        })
    }
}

/// Hermite multi-index n ∈ ℕ^d labelling one basis function.
///
/// Ordered by total order first, then lexicographically, which matches the
/// (k, j) labelling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EigenIndex(Vec<u32>);

impl EigenIndex {
    pub fn new(orders: impl Into<Vec<u32>>) -> Self {
        Self(orders.into())
    }

    /// The constant function φ_1 in dimension `dim`.
    pub fn principal(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn orders(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// |n| = n_1 + … + n_d.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Eigen-level k = |n| + 1.
    pub fn level(&self) -> u32 {
        self.order() + 1
    }

    /// All indices of total order `order`, lexicographically.
    pub fn of_order(dim: usize, order: u32) -> Vec<EigenIndex> {
        match dim {
            1 => vec![EigenIndex(vec![order])],
            2 => (0..=order).map(|i| EigenIndex(vec![i, order - i])).collect(),
            _ => {
                let mut out = Vec::new();
                let mut cur = vec![0; dim];
                fill_orders(&mut cur, 0, order, &mut out);
                out
            }
        }
    }

    /// The (k, j) label, both 1-based.
    pub fn label(&self) -> (u32, u32) {
        let k = self.level();
        let j = EigenIndex::of_order(self.dim(), self.order())
            .iter()
            .position(|i| i == self)
            .expect("index enumerates itself") as u32
            + 1;
        (k, j)
    }

    /// Inverse of [`EigenIndex::label`].
    pub fn from_label(dim: usize, k: u32, j: u32) -> Result<Self> {
        if k == 0 || j == 0 {
            return Err(Error::IndexRange(format!("labels are 1-based, got ({k}, {j})")));
        }
        EigenIndex::of_order(dim, k - 1)
            .into_iter()
            .nth(j as usize - 1)
            .ok_or_else(|| Error::IndexRange(format!("level {k} has no member {j} in dimension {dim}")))
    }
}

fn fill_orders(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<EigenIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(EigenIndex(cur.clone()));
        return;
    }
    for v in 0..=remaining {
        cur[pos] = v;
        fill_orders(cur, pos + 1, remaining - v, out);
    }
}

impl Ord for EigenIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for EigenIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EigenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// A finitely supported function Σ a_n φ_n in L²(m).
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "SpectralFunctionWire", into = "SpectralFunctionWire")]
pub struct SpectralFunction {
    coeffs: BTreeMap<EigenIndex, f64>,
}

/// One `{"n": [...], "value": ...}` entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntry {
    pub n: Vec<u32>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralFunctionWire {
    pub coeffs: Vec<CoeffEntry>,
}

impl From<SpectralFunctionWire> for SpectralFunction {
    fn from(w: SpectralFunctionWire) -> Self {
        SpectralFunction::from_entries(&w.coeffs)
    }
}

impl From<SpectralFunction> for SpectralFunctionWire {
    fn from(f: SpectralFunction) -> Self {
        SpectralFunctionWire { coeffs: f.entries() }
    }
}

impl SpectralFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single basis function φ_idx.
    pub fn basis(idx: EigenIndex) -> Self {
        Self::from_terms([(idx, 1.0)])
    }

    /// Shorthand for φ_n in one dimension.
    pub fn basis_1d(n: u32) -> Self {
        Self::basis(EigenIndex::new(vec![n]))
    }

    /// Sums repeated indices.
    pub fn from_terms(terms: impl IntoIterator<Item = (EigenIndex, f64)>) -> Self {
        let mut f = Self::zero();
        for (i, v) in terms {
            f.add_term(i, v);
        }
        f
    }

    pub fn from_entries(entries: &[CoeffEntry]) -> Self {
        Self::from_terms(entries.iter().map(|e| (EigenIndex::new(e.n.clone()), e.value)))
    }

    pub fn entries(&self) -> Vec<CoeffEntry> {
        self.coeffs
            .iter()
            .map(|(i, &v)| CoeffEntry { n: i.orders().to_vec(), value: v })
            .collect()
    }

    pub fn add_term(&mut self, idx: EigenIndex, value: f64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(idx) {
            Entry::Vacant(e) => {
                if value != 0.0 {
                    e.insert(value);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if *e.get() == 0.0 {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, idx: &EigenIndex) -> f64 {
        self.coeffs.get(idx).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EigenIndex, f64)> + '_ {
        self.coeffs.iter().map(|(i, &v)| (i, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = &EigenIndex> + '_ {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest total Hermite order present (0 for the zero function).
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(EigenIndex::order).max().unwrap_or(0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_terms(self.terms().map(|(i, v)| (i.clone(), v * factor)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, v) in other.terms() {
            out.add_term(i.clone(), v);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1.0))
    }

    /// Keeps the terms whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&EigenIndex) -> bool) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| keep(i))
                .map(|(i, &v)| (i.clone(), v))
                .collect(),
        }
    }

    /// Coefficient-wise map; terms mapped to zero are dropped.
    pub fn map_coeffs(&self, mut g: impl FnMut(&EigenIndex, f64) -> f64) -> Self {
        Self::from_terms(self.terms().map(|(i, v)| (i.clone(), g(i, v))))
    }

    /// Pointwise product, expanded exactly with Hermite linearization.
    ///
    /// Fails when the product's degree exceeds the configured truncation.
    pub fn product(&self, other: &Self, cfg: &SuperOUConfig) -> Result<Self> {
        cfg.check_function(self)?;
        cfg.check_function(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let needed = self.degree() + other.degree();
        if needed > cfg.max_order() {
            return Err(Error::Truncation { needed, max_order: cfg.max_order() });
        }
        let mut acc: BTreeMap<EigenIndex, f64> = BTreeMap::new();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                for (n, t) in basis_product(i, j) {
                    *acc.entry(n).or_insert(0.0) += a * b * t;
                }
            }
        }
        Ok(Self::from_terms(acc))
    }

    /// Evaluates at `x` (length = model dimension).
    pub fn eval(&self, cfg: &SuperOUConfig, x: &[f64]) -> Result<f64> {
        check_point(cfg, x)?;
        cfg.check_function(self)?;
        let table = HermiteTable::new(cfg, self.degree(), x);
        Ok(self.eval_with(&table))
    }

    /// Evaluates using precomputed Hermite values.
    pub fn eval_with(&self, table: &HermiteTable) -> f64 {
        self.terms().map(|(i, v)| v * table.basis(i)).sum()
    }
}

/// Expansion φ_i·φ_j = Σ_n c_n φ_n.
fn basis_product(i: &EigenIndex, j: &EigenIndex) -> Vec<(EigenIndex, f64)> {
    let mut out: Vec<(Vec<u32>, f64)> = vec![(Vec::with_capacity(i.dim()), 1.0)];
    for (&a, &b) in i.orders().iter().zip(j.orders()) {
        let lo = a.abs_diff(b);
        let hi = a + b;
        let mut next = Vec::with_capacity(out.len() * ((hi - lo) / 2 + 1) as usize);
        for (prefix, w) in &out {
            let mut c = lo;
            while c <= hi {
                let t = hermite::triple(a, b, c);
                let mut idx = prefix.clone();
                idx.push(c);
                next.push((idx, w * t));
                c += 2;
            }
        }
        out = next;
    }
    out.into_iter().map(|(v, w)| (EigenIndex(v), w)).collect()
}

pub(crate) fn check_point(cfg: &SuperOUConfig, x: &[f64]) -> Result<()> {
    if x.len() != cfg.dimension() {
        return Err(Error::Input(format!(
            "point has {} coordinates, model dimension is {}",
            x.len(),
            cfg.dimension()
        )));
    }
    if let Some(v) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::Input(format!("non-finite coordinate {v}")));
    }
    Ok(())
}

/// Normalized Hermite values at one point, per coordinate, up to some order.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    dim: usize,
    stride: usize,
    values: Vec<f64>,
}

impl HermiteTable {
    pub fn new(cfg: &SuperOUConfig, max_order: u32, x: &[f64]) -> Self {
        let mut t = Self::with_capacity(cfg.dimension(), max_order);
        t.fill(cfg.stationary_std(), x);
        t
    }

    pub fn with_capacity(dim: usize, max_order: u32) -> Self {
        let stride = max_order as usize + 1;
        Self { dim, stride, values: vec![0.0; dim * stride] }
    }

    /// Refills the table for a new point `x` with stationary std `s`.
    pub fn fill(&mut self, s: f64, x: &[f64]) {
        for (c, &xc) in x.iter().enumerate().take(self.dim) {
            let row = &mut self.values[c * self.stride..(c + 1) * self.stride];
            hermite::normalized_values(xc / s, row);
        }
    }

    pub fn basis(&self, idx: &EigenIndex) -> f64 {
        idx.orders()
            .iter()
            .enumerate()
            .map(|(c, &n)| self.values[c * self.stride + n as usize])
            .product()
    }
}

/// λ_k, the k-th smallest distinct eigenvalue of −L.
pub fn eigenvalue(cfg: &SuperOUConfig, k: u32) -> Result<f64> {
    if k == 0 || k > cfg.max_level() {
        return Err(Error::IndexRange(format!(
            "eigen-level {k} outside 1..={}",
            cfg.max_level()
        )));
    }
    Ok(cfg.lambda_of_order(k - 1))
}

/// n_k, the dimension of the k-th eigenspace.
pub fn multiplicity(cfg: &SuperOUConfig, k: u32) -> Result<usize> {
    eigenvalue(cfg, k)?;
    Ok(EigenIndex::of_order(cfg.dimension(), k - 1).len())
}

/// φ_idx(x).
pub fn eigenfunction_eval(cfg: &SuperOUConfig, idx: &EigenIndex, x: &[f64]) -> Result<f64> {
    cfg.check_index(idx)?;
    check_point(cfg, x)?;
    let s = cfg.stationary_std();
    Ok(idx
        .orders()
        .iter()
        .zip(x)
        .map(|(&n, &xc)| hermite::normalized(n, xc / s))
        .product())
}

/// ⟨f, g⟩_m by Parseval.
pub fn inner_product(f: &SpectralFunction, g: &SpectralFunction) -> f64 {
    let (small, large) = if f.len() <= g.len() { (f, g) } else { (g, f) };
    small.terms().map(|(i, v)| v * large.coeff(i)).sum()
}

/// ⟨φ_i1 φ_i2 φ_i3⟩_m.
pub fn triple_product(cfg: &SuperOUConfig, i1: &EigenIndex, i2: &EigenIndex, i3: &EigenIndex) -> Result<f64> {
    cfg.check_index(i1)?;
    cfg.check_index(i2)?;
    cfg.check_index(i3)?;
    Ok(triple_unchecked(i1, i2, i3))
}

pub(crate) fn triple_unchecked(i1: &EigenIndex, i2: &EigenIndex, i3: &EigenIndex) -> f64 {
    i1.orders()
        .iter()
        .zip(i2.orders())
        .zip(i3.orders())
        .map(|((&a, &b), &c)| hermite::triple(a, b, c))
        .product()
}

/// ⟨A φ_i φ_j⟩_m for an expansion A.
pub(crate) fn weighted_pair(a: &SpectralFunction, i: &EigenIndex, j: &EigenIndex) -> f64 {
    a.terms().map(|(m, am)| am * triple_unchecked(m, i, j)).sum()
}

/// Coefficients a_n = ⟨f, φ_n⟩_m for |n| ≤ `max_order`, by Gauss-Hermite
/// quadrature on a tensor grid.
pub fn project<F>(f: F, max_order: u32, cfg: &SuperOUConfig) -> Result<SpectralFunction>
where
    F: Fn(&[f64]) -> f64,
{
    if max_order > cfg.max_order() {
        return Err(Error::IndexRange(format!(
            "projection order {max_order} beyond truncation {}",
            cfg.max_order()
        )));
    }
    let nodes = HERMITE_NODES.max(max_order as usize + 1);
    let owned;
    let rule = if nodes == HERMITE_NODES {
        GaussHermite::standard()
    } else {
        owned = GaussHermite::new(nodes);
        &owned
    };
    let s = cfg.stationary_std();
    let dim = cfg.dimension();
    let indices: Vec<EigenIndex> = (0..=max_order).flat_map(|o| EigenIndex::of_order(dim, o)).collect();
    let mut acc = vec![0.0; indices.len()];
    let mut table = HermiteTable::with_capacity(dim, max_order);
    let mut point = vec![0.0; dim];
    let mut zs = vec![0.0; dim];
    let n = rule.len();
    let total = n.pow(dim as u32);
    for flat in 0..total {
        let mut rem = flat;
        let mut w = 1.0;
        for c in 0..dim {
            let k = rem % n;
            rem /= n;
            zs[c] = rule.nodes()[k];
            w *= rule.weights()[k];
            point[c] = s * zs[c];
        }
        let fx = f(&point);
        if !fx.is_finite() {
            return Err(Error::Input(format!("function is not finite at {point:?}")));
        }
        table.fill(s, &point);
        for (a, idx) in acc.iter_mut().zip(&indices) {
            *a += w * fx * table.basis(idx);
        }
    }
    // Quadrature leaves round-off residue on coefficients that vanish exactly.
    let scale = acc.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok(SpectralFunction::from_terms(
        indices
            .into_iter()
            .zip(acc)
            .filter(|(_, v)| v.abs() > 1e-13 * scale),
    ))
}

/// γ(f): the first eigen-level carrying a nonzero coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gamma {
    Finite(u32),
    /// γ of the zero function.
    Infinite,
}

impl Gamma {
    pub fn finite(self) -> Option<u32> {
        match self {
            Gamma::Finite(k) => Some(k),
            Gamma::Infinite => None,
        }
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Finite(k) => write!(f, "{k}"),
            Gamma::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Large,
    Critical,
    Small,
    Mixed,
    Zero,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Large => "large",
            Regime::Critical => "critical",
            Regime::Small => "small",
            Regime::Mixed => "mixed",
            Regime::Zero => "zero",
        })
    }
}

/// Split of f into its large (C_l), critical (C_c) and small (C_s) parts.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeClassification {
    pub gamma: Gamma,
    pub regime: Regime,
    /// Terms with 2λ_k < λ_1.
    pub large: SpectralFunction,
    /// Terms with 2λ_k = λ_1.
    pub critical: SpectralFunction,
    /// Terms with 2λ_k > λ_1.
    pub small: SpectralFunction,
    /// f*, the terms on level γ(f).
    pub leading: SpectralFunction,
}

pub fn classify(f: &SpectralFunction, cfg: &SuperOUConfig) -> RegimeClassification {
    let large = f.filter(|i| cfg.class_of(i) == LevelClass::Large);
    let critical = f.filter(|i| cfg.class_of(i) == LevelClass::Critical);
    let small = f.filter(|i| cfg.class_of(i) == LevelClass::Small);
    let gamma = f
        .indices()
        .map(EigenIndex::level)
        .min()
        .map_or(Gamma::Infinite, Gamma::Finite);
    let leading = match gamma {
        Gamma::Finite(k) => f.filter(|i| i.level() == k),
        Gamma::Infinite => SpectralFunction::zero(),
    };
    let nonzero = [!large.is_zero(), !critical.is_zero(), !small.is_zero()];
    let regime = match nonzero {
        [false, false, false] => Regime::Zero,
        [true, false, false] => Regime::Large,
        [false, true, false] => Regime::Critical,
        [false, false, true] => Regime::Small,
        _ => Regime::Mixed,
    };
    RegimeClassification { gamma, regime, large, critical, small, leading }
}
