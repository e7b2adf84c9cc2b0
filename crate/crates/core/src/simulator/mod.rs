//! Branching Ornstein-Uhlenbeck particle approximation of the superprocess.
//!
//! Particles carry mass 1/N, move as exact OU processes and branch at rate
//! R = 2bβN into 0 or 2 children with p₂ = 1/2 + a/(4bN). Two engines
//! produce the same law at checkpoint times:
//!
//! * [`Engine::Event`] replays every branching event (Gillespie);
//! * [`Engine::Reduced`] samples, between consecutive checkpoints, only the
//!   lineages that are still alive at the next checkpoint. Conditioned on
//!   survival a lineage splits into two surviving lineages with a known
//!   time-inhomogeneous hazard (see [`birth_death`]), so the work is
//!   proportional to the population rather than to the number of events.
//!
//! When the only large-regime index is φ_1 the horizon estimate needs just
//! the particle count at T, which is sampled exactly from the count at the
//! last checkpoint without materializing positions.

pub mod birth_death;
mod engines;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ReplicaFailure, Result};
use crate::measure::InitialMeasure;
use crate::spectral::{EigenIndex, HermiteTable, SpectralFunction, SuperOUConfig};

pub use birth_death::BirthDeath;

pub const DEFAULT_POPULATION_CAP: usize = 10_000_000;

/// Half-lives of the slowest correction mode added after the last
/// checkpoint when no horizon is given.
pub const DEFAULT_HORIZON_HALF_LIVES: f64 = 2.5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Every branching event is simulated.
    Event,
    /// Only lineages alive at the next checkpoint are sampled.
    #[default]
    Reduced,
}

fn default_cap() -> usize {
    DEFAULT_POPULATION_CAP
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

/// What to simulate: scale, start, observation times and replica count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimPlan {
    pub scale_n: u64,
    pub initial_measure: InitialMeasure,
    pub checkpoints: Vec<f64>,
    /// Horizon T for the martingale limits; derived from the model if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    pub replicas: u64,
    pub master_seed: u64,
    #[serde(default = "default_cap")]
    pub population_cap: usize,
    #[serde(default)]
    pub engine: Engine,
    /// Added to p₂. Only meant for checking that the verification harness
    /// notices a wrong offspring law.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub offspring_bias: f64,
}

impl SimPlan {
    pub fn new(scale_n: u64, initial_measure: InitialMeasure, checkpoints: Vec<f64>, replicas: u64, master_seed: u64) -> Self {
        Self {
            scale_n,
            initial_measure,
            checkpoints,
            horizon: None,
            replicas,
            master_seed,
            population_cap: DEFAULT_POPULATION_CAP,
            engine: Engine::default(),
            offspring_bias: 0.0,
        }
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = Some(horizon);
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn last_checkpoint(&self) -> f64 {
        self.checkpoints.last().copied().unwrap_or(0.0)
    }

    /// The configured horizon, or the last checkpoint plus
    /// [`DEFAULT_HORIZON_HALF_LIVES`] half-lives of the slowest decaying
    /// martingale error e^{(2λ_k − λ_1)T}.
    pub fn horizon(&self, cfg: &SuperOUConfig) -> f64 {
        if let Some(t) = self.horizon {
            return t;
        }
        let rate = cfg
            .large_indices()
            .iter()
            .map(|idx| cfg.lambda1() - 2.0 * cfg.lambda_of(idx))
            .fold(f64::INFINITY, f64::min);
        self.last_checkpoint() + DEFAULT_HORIZON_HALF_LIVES * std::f64::consts::LN_2 / rate
    }

    /// p₂ = 1/2 + a/(4bN), plus the configured bias.
    pub fn offspring_probability(&self, cfg: &SuperOUConfig) -> f64 {
        0.5 + cfg.branch_a() / (4.0 * cfg.branch_b() * self.scale_n as f64) + self.offspring_bias
    }

    /// Per-particle branching rate 2bβN.
    pub fn branching_rate(&self, cfg: &SuperOUConfig) -> f64 {
        2.0 * cfg.branch_b() * cfg.branch_rate() * self.scale_n as f64
    }

    /// Birth (split into two) and death rates of one particle.
    pub fn birth_death(&self, cfg: &SuperOUConfig) -> BirthDeath {
        let rate = self.branching_rate(cfg);
        let p2 = self.offspring_probability(cfg);
        BirthDeath::new(rate * p2, rate * (1.0 - p2))
    }

    /// True when the horizon only needs the total mass.
    fn mass_only_horizon(cfg: &SuperOUConfig) -> bool {
        let large = cfg.large_indices();
        large.len() == 1 && large[0] == EigenIndex::principal(cfg.dimension())
    }

    pub fn validate(&self, cfg: &SuperOUConfig) -> Result<()> {
        if self.scale_n == 0 {
            return Err(Error::Config("scale_n must be positive".into()));
        }
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be positive".into()));
        }
        if self.population_cap == 0 {
            return Err(Error::Config("population_cap must be positive".into()));
        }
        if !self.offspring_bias.is_finite() {
            return Err(Error::Config("offspring_bias must be finite".into()));
        }
        self.initial_measure.validate(cfg.dimension())?;
        let p2 = self.offspring_probability(cfg);
        if !(0.0..=1.0).contains(&p2) {
            let a = cfg.branch_a();
            let b = cfg.branch_b();
            // 1/2 + a/(4bN) + bias ∈ [0, 1]  ⇔  N ≥ |a| / (4b·(1/2 ∓ bias)).
            let room = if a >= 0.0 { 0.5 - self.offspring_bias } else { 0.5 + self.offspring_bias };
            let minimal = if room > 0.0 {
                format!("{}", (a.abs() / (4.0 * b * room)).ceil().max(1.0) as u64)
            } else {
                "none".to_string()
            };
            return Err(Error::Config(format!(
                "offspring probability p2 = {p2} is outside [0, 1] for scale_n = {}; minimal admissible scale_n is {minimal}",
                self.scale_n
            )));
        }
        let mut prev = -f64::INFINITY;
        for &t in &self.checkpoints {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Config(format!("checkpoint {t} must be finite and nonnegative")));
            }
            if t <= prev {
                return Err(Error::Config("checkpoints must be strictly increasing".into()));
            }
            prev = t;
        }
        let horizon = self.horizon(cfg);
        if !(horizon.is_finite() && horizon >= self.last_checkpoint()) {
            return Err(Error::Config(format!(
                "horizon {horizon} must be finite and not before the last checkpoint {}",
                self.last_checkpoint()
            )));
        }
        let materialized = if Self::mass_only_horizon(cfg) { self.last_checkpoint() } else { horizon };
        let initial: f64 = self
            .initial_measure
            .atoms
            .iter()
            .map(|a| (a.mass * self.scale_n as f64).round())
            .sum();
        let growth = self.birth_death(cfg).growth();
        let peak = initial * (growth.max(0.0) * materialized).exp();
        if peak > self.population_cap as f64 {
            return Err(Error::Config(format!(
                "expected peak population {peak:.0} exceeds population_cap {}",
                self.population_cap
            )));
        }
        Ok(())
    }
}

/// A particle configuration at one time.
#[derive(Debug, Clone)]
pub struct PopulationState {
    pub clock: f64,
    pub dim: usize,
    /// Flattened coordinates, `dim` per particle.
    pub positions: Vec<f64>,
    pub mass_unit: f64,
    pub rng: ChaCha8Rng,
}

impl PopulationState {
    pub fn len(&self) -> usize {
        self.positions.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn particle(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn particles(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.positions.chunks_exact(self.dim)
    }

    pub fn total_mass(&self) -> f64 {
        self.mass_unit * self.len() as f64
    }
}

/// Random source for replica `replica_id`: the ChaCha stream selected by the
/// replica id under the master seed; its word position is the draw counter.
pub fn replica_rng(master_seed: u64, replica_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replica_id);
    rng
}

/// Places round(w·N) particles at every atom (x, w).
pub fn init(plan: &SimPlan, cfg: &SuperOUConfig, rng: ChaCha8Rng) -> Result<PopulationState> {
    plan.validate(cfg)?;
    let dim = cfg.dimension();
    let mut positions = Vec::new();
    for atom in &plan.initial_measure.atoms {
        let count = (atom.mass * plan.scale_n as f64).round() as usize;
        for _ in 0..count {
            positions.extend_from_slice(&atom.point);
        }
    }
    Ok(PopulationState {
        clock: 0.0,
        dim,
        positions,
        mass_unit: 1.0 / plan.scale_n as f64,
        rng,
    })
}

/// Mean factor e^{−c·dt} and standard deviation s·√(1 − e^{−2c·dt}) of the
/// OU transition over `dt`.
pub fn ou_transition(cfg: &SuperOUConfig, dt: f64) -> (f64, f64) {
    let c = cfg.drift_c();
    let decay = (-c * dt).exp();
    let sd = cfg.stationary_std() * (-(-2.0 * c * dt).exp_m1()).sqrt();
    (decay, sd)
}

/// Exact OU transition from `x` over `dt`.
pub fn ou_step<R: rand::Rng + ?Sized>(cfg: &SuperOUConfig, x: &[f64], dt: f64, rng: &mut R) -> Vec<f64> {
    let mut out = x.to_vec();
    let (decay, sd) = ou_transition(cfg, dt);
    ou_move(&mut out, decay, sd, rng);
    out
}

#[inline]
fn ou_move<R: rand::Rng + ?Sized>(x: &mut [f64], decay: f64, sd: f64, rng: &mut R) {
    for v in x {
        let z: f64 = StandardNormal.sample(rng);
        *v = *v * decay + sd * z;
    }
}

/// Evolves `state` to `t_target` with the engine selected in `plan`.
pub fn advance_to(state: &mut PopulationState, t_target: f64, cfg: &SuperOUConfig, plan: &SimPlan) -> Result<()> {
    if t_target.is_nan() || t_target < state.clock {
        return Err(Error::Input(format!("cannot advance from t = {} back to {t_target}", state.clock)));
    }
    if state.is_empty() || t_target == state.clock {
        state.clock = t_target;
        return Ok(());
    }
    match plan.engine {
        Engine::Event => engines::advance_event(state, t_target, cfg, plan),
        Engine::Reduced => engines::advance_reduced(state, t_target, cfg, plan),
    }
}

/// ⟨f, X⟩ = mass_unit · Σ f(position).
pub fn measure(state: &PopulationState, f: &SpectralFunction, cfg: &SuperOUConfig) -> f64 {
    measure_many(state, std::slice::from_ref(f), cfg)[0]
}

/// ⟨f, X⟩ for several functions in one pass over the particles.
pub fn measure_many(state: &PopulationState, fs: &[SpectralFunction], cfg: &SuperOUConfig) -> Vec<f64> {
    let mut sums = vec![0.0; fs.len()];
    if state.is_empty() || fs.is_empty() {
        return sums;
    }
    let order = fs.iter().map(SpectralFunction::degree).max().unwrap_or(0);
    let s = cfg.stationary_std();
    let mut table = HermiteTable::with_capacity(state.dim, order);
    for x in state.particles() {
        table.fill(s, x);
        for (acc, f) in sums.iter_mut().zip(fs) {
            *acc += f.eval_with(&table);
        }
    }
    sums.iter().map(|v| v * state.mass_unit).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub t: f64,
    pub survived: bool,
    pub total_mass: f64,
    /// ⟨f, X_t⟩ per registered function.
    pub readouts: Vec<f64>,
    /// e^{λ_k t}⟨φ_j^{(k)}, X_t⟩ per large-regime index.
    pub martingales: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonRecord {
    pub t: f64,
    pub survived: bool,
    /// e^{λ_1 T}⟨φ_1, X_T⟩
    pub w_inf_hat: f64,
    /// e^{λ_k T}⟨φ_j^{(k)}, X_T⟩ per large-regime index.
    pub h_inf_hat: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaRecord {
    pub replica_id: u64,
    pub checkpoints: Vec<CheckpointRecord>,
    pub horizon: HorizonRecord,
}

fn martingale_values(state: &PopulationState, large: &[SpectralFunction], rates: &[f64], t: f64, cfg: &SuperOUConfig) -> Vec<f64> {
    measure_many(state, large, cfg)
        .into_iter()
        .zip(rates)
        .map(|(v, lam)| (lam * t).exp() * v)
        .collect()
}

/// Runs one replica through every checkpoint and to the horizon. The result
/// depends only on `(plan.master_seed, replica_id)`.
pub fn run_replica(plan: &SimPlan, cfg: &SuperOUConfig, functions: &[SpectralFunction], replica_id: u64) -> Result<ReplicaRecord> {
    let mut state = init(plan, cfg, replica_rng(plan.master_seed, replica_id))?;
    let large_idx = cfg.large_indices();
    let large: Vec<SpectralFunction> = large_idx.iter().cloned().map(SpectralFunction::basis).collect();
    let rates: Vec<f64> = large_idx.iter().map(|i| cfg.lambda_of(i)).collect();

    let mut checkpoints = Vec::with_capacity(plan.checkpoints.len());
    for &t in &plan.checkpoints {
        advance_to(&mut state, t, cfg, plan)?;
        checkpoints.push(CheckpointRecord {
            t,
            survived: !state.is_empty(),
            total_mass: state.total_mass(),
            readouts: measure_many(&state, functions, cfg),
            martingales: martingale_values(&state, &large, &rates, t, cfg),
        });
    }

    let horizon = plan.horizon(cfg);
    let lambda1 = cfg.lambda1();
    let record = if SimPlan::mass_only_horizon(cfg) {
        let bd = plan.birth_death(cfg);
        let count = bd.sample_count(state.len() as u64, horizon - state.clock, &mut state.rng);
        let w = (lambda1 * horizon).exp() * state.mass_unit * count as f64;
        HorizonRecord { t: horizon, survived: count > 0, w_inf_hat: w, h_inf_hat: vec![w] }
    } else {
        advance_to(&mut state, horizon, cfg, plan)?;
        let h = martingale_values(&state, &large, &rates, horizon, cfg);
        HorizonRecord {
            t: horizon,
            survived: !state.is_empty(),
            w_inf_hat: h[0],
            h_inf_hat: h,
        }
    };
    Ok(ReplicaRecord { replica_id, checkpoints, horizon: record })
}

/// A registered test function.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFunction {
    pub name: String,
    pub function: SpectralFunction,
}

impl NamedFunction {
    pub fn new(name: impl Into<String>, function: SpectralFunction) -> Self {
        Self { name: name.into(), function }
    }
}

/// All replicas of one plan, ordered by replica id.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub plan: SimPlan,
    pub cfg: SuperOUConfig,
    pub functions: Vec<NamedFunction>,
    pub large_indices: Vec<EigenIndex>,
    pub records: Vec<ReplicaRecord>,
}

impl Ensemble {
    pub fn function_position(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|f| f.name == name)
    }

    pub fn checkpoint_position(&self, t: f64) -> Option<usize> {
        self.plan.checkpoints.iter().position(|&c| c == t)
    }

    pub fn horizon(&self) -> f64 {
        self.plan.horizon(&self.cfg)
    }
}

/// Runs all replicas on the global rayon pool.
pub fn run_ensemble(plan: &SimPlan, cfg: &SuperOUConfig, functions: &[NamedFunction]) -> Result<Ensemble> {
    run_replicas(plan, cfg, functions)
}

/// Runs all replicas on a dedicated pool of `threads` workers. The output
/// does not depend on `threads`.
pub fn run_ensemble_with_threads(plan: &SimPlan, cfg: &SuperOUConfig, functions: &[NamedFunction], threads: usize) -> Result<Ensemble> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {threads} worker threads: {e}")))?;
    pool.install(|| run_replicas(plan, cfg, functions))
}

fn run_replicas(plan: &SimPlan, cfg: &SuperOUConfig, functions: &[NamedFunction]) -> Result<Ensemble> {
    plan.validate(cfg)?;
    for f in functions {
        cfg.check_function(&f.function)?;
    }
    let fns: Vec<SpectralFunction> = functions.iter().map(|f| f.function.clone()).collect();
    let results: Vec<Result<ReplicaRecord>> = (0..plan.replicas)
        .into_par_iter()
        .map(|id| run_replica(plan, cfg, &fns, id))
        .collect();
    let mut records = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (id, r) in results.into_iter().enumerate() {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(ReplicaFailure { replica_id: id as u64, message: e.to_string() }),
        }
    }
    if !failures.is_empty() {
        return Err(Error::Replicas(failures));
    }
    Ok(Ensemble {
        plan: plan.clone(),
        cfg: *cfg,
        functions: functions.to_vec(),
        large_indices: cfg.large_indices(),
        records,
    })
}
