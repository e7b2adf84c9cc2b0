mod common;

use common::{cfg0, phi};
use superclt::cltlab::stats::{bootstrap_variance_se, mean, standard_error, variance};
use superclt::moments::{mean_functional, particle_variance_under};
use superclt::simulator::{
    advance_to, init, ou_step, replica_rng, run_ensemble, run_ensemble_with_threads, run_replica, Engine, Ensemble,
    NamedFunction, SimPlan,
};
use superclt::{Error, InitialMeasure};

fn functions() -> Vec<NamedFunction> {
    (1..=4).map(|k| NamedFunction::new(format!("phi{k}"), phi(k))).collect()
}

fn column(ens: &Ensemble, checkpoint: usize, function: usize) -> Vec<f64> {
    ens.records.iter().map(|r| r.checkpoints[checkpoint].readouts[function]).collect()
}

/// Per-particle extinction probability of the birth-death chain by time t.
fn extinction_by(birth: f64, death: f64, t: f64) -> f64 {
    let e = ((birth - death) * t).exp();
    death * (e - 1.0) / (birth * e - death)
}

fn check_engine(engine: Engine, seed: u64) {
    let cfg = cfg0();
    let mu = InitialMeasure::dirac(vec![0.0], 1.0);
    let plan = SimPlan::new(50, mu.clone(), vec![1.0], 6000, seed).with_horizon(1.0).with_engine(engine);
    let ens = run_ensemble(&plan, &cfg, &functions()).unwrap();
    for k in 1..=3 {
        let xs = column(&ens, 0, (k - 1) as usize);
        let m = mean_functional(&mu, &phi(k), 1.0, &cfg).unwrap();
        let se = standard_error(&xs);
        assert!((mean(&xs) - m).abs() < 4.0 * se, "{engine:?} mean phi{k}: {} vs {m} (se {se})", mean(&xs));
        let v = particle_variance_under(&mu, &phi(k), 1.0, &cfg, 50).unwrap();
        let vse = bootstrap_variance_se(&xs, 200, 11);
        assert!((variance(&xs) - v).abs() < 4.0 * vse, "{engine:?} var phi{k}: {} vs {v} (se {vse})", variance(&xs));
    }
}

#[test]
fn event_engine_matches_particle_moments() {
    check_engine(Engine::Event, 101);
}

#[test]
fn reduced_engine_matches_particle_moments() {
    check_engine(Engine::Reduced, 202);
}

#[test]
fn survival_matches_birth_death_law() {
    let cfg = cfg0();
    let plan = SimPlan::new(200, InitialMeasure::dirac(vec![0.0], 1.0), vec![1.0], 4000, 9).with_horizon(1.0);
    let ens = run_ensemble(&plan, &cfg, &[]).unwrap();
    let alive: Vec<f64> = ens.records.iter().map(|r| f64::from(u8::from(r.checkpoints[0].survived))).collect();
    let bd = plan.birth_death(&cfg);
    let want = 1.0 - extinction_by(bd.birth, bd.death, 1.0).powi(200);
    let se = (want * (1.0 - want) / alive.len() as f64).sqrt();
    assert!((mean(&alive) - want).abs() < 3.0 * se, "{} vs {want}", mean(&alive));
    assert!((want - 0.90104).abs() < 2e-3, "finite-N survival {want}");
}

#[test]
fn extinct_replicas_read_zero() {
    let cfg = cfg0();
    let plan = SimPlan::new(20, InitialMeasure::dirac(vec![0.0], 1.0), vec![0.5, 1.0], 500, 3).with_horizon(2.0);
    let ens = run_ensemble(&plan, &cfg, &functions()).unwrap();
    let mut extinct = 0;
    for r in &ens.records {
        for c in &r.checkpoints {
            if !c.survived {
                extinct += 1;
                assert!(c.readouts.iter().all(|&v| v == 0.0));
                assert_eq!(c.total_mass, 0.0);
            }
        }
        if !r.checkpoints[0].survived {
            assert!(!r.checkpoints[1].survived && !r.horizon.survived);
            assert_eq!(r.horizon.w_inf_hat, 0.0);
        }
    }
    assert!(extinct > 0);
}

#[test]
fn horizon_martingale_has_initial_mean() {
    let cfg = cfg0();
    let plan = SimPlan::new(100, InitialMeasure::dirac(vec![0.3], 1.0), vec![1.0], 4000, 5).with_horizon(6.0);
    let ens = run_ensemble(&plan, &cfg, &[]).unwrap();
    let w: Vec<f64> = ens.records.iter().map(|r| r.horizon.w_inf_hat).collect();
    assert!((mean(&w) - 1.0).abs() < 4.0 * standard_error(&w), "{}", mean(&w));
    assert!(ens.records.iter().all(|r| r.horizon.h_inf_hat == vec![r.horizon.w_inf_hat]));
}

#[test]
fn ensembles_are_reproducible_and_thread_invariant() {
    let cfg = cfg0();
    let plan = SimPlan::new(100, InitialMeasure::dirac(vec![0.0], 1.0), vec![0.5, 1.0], 40, 77);
    let one = run_ensemble_with_threads(&plan, &cfg, &functions(), 1).unwrap();
    let three = run_ensemble_with_threads(&plan, &cfg, &functions(), 3).unwrap();
    let again = run_ensemble(&plan, &cfg, &functions()).unwrap();
    assert_eq!(one.records, three.records);
    assert_eq!(one.records, again.records);
    let other = run_ensemble(&SimPlan { master_seed: 78, ..plan.clone() }, &cfg, &functions()).unwrap();
    assert_ne!(one.records, other.records);
}

#[test]
fn single_replica_ensemble_is_replica_zero() {
    let cfg = cfg0();
    let plan = SimPlan::new(100, InitialMeasure::dirac(vec![0.0], 1.0), vec![1.0], 1, 4);
    let ens = run_ensemble(&plan, &cfg, &functions()).unwrap();
    let fns: Vec<_> = functions().into_iter().map(|f| f.function).collect();
    assert_eq!(ens.records[0], run_replica(&plan, &cfg, &fns, 0).unwrap());
}

#[test]
fn replicas_do_not_depend_on_ensemble_size() {
    let cfg = cfg0();
    let small = SimPlan::new(100, InitialMeasure::dirac(vec![0.0], 1.0), vec![1.0], 5, 12);
    let large = SimPlan { replicas: 12, ..small.clone() };
    let a = run_ensemble(&small, &cfg, &functions()).unwrap();
    let b = run_ensemble(&large, &cfg, &functions()).unwrap();
    assert_eq!(a.records[..], b.records[..5]);
}

#[test]
fn population_cap_breach_is_a_resource_error() {
    let cfg = cfg0();
    let plan = SimPlan { population_cap: 150, ..SimPlan::new(100, InitialMeasure::dirac(vec![0.0], 1.0), vec![5.0], 1, 0) };
    for engine in [Engine::Event, Engine::Reduced] {
        let plan = plan.clone().with_engine(engine);
        let mut state = init(&SimPlan { population_cap: 10_000_000, ..plan.clone() }, &cfg, replica_rng(0, 0)).unwrap();
        let err = advance_to(&mut state, 5.0, &cfg, &plan).unwrap_err();
        assert!(err.is_resource(), "{err}");
        match err {
            Error::PopulationCap { population, cap, clock, partial } => {
                assert!(population > cap && cap == 150);
                assert!(clock <= 5.0 && partial.clock <= clock);
            }
            other => panic!("unexpected {other}"),
        }
    }
}

#[test]
fn expected_peak_over_cap_is_rejected_up_front() {
    let cfg = cfg0();
    let plan = SimPlan { population_cap: 1000, ..SimPlan::new(100, InitialMeasure::dirac(vec![0.0], 1.0), vec![5.0], 1, 0) };
    assert!(matches!(run_ensemble(&plan, &cfg, &[]), Err(Error::Config(_))));
}

#[test]
fn ou_step_has_exact_transition_moments() {
    let cfg = cfg0();
    let mut rng = replica_rng(1, 0);
    let (x0, dt) = (1.5, 0.4);
    let ys: Vec<f64> = (0..200_000).map(|_| ou_step(&cfg, &[x0], dt, &mut rng)[0]).collect();
    let m = x0 * (-dt).exp();
    let v = 1.0 - (-2.0 * dt).exp();
    assert!((mean(&ys) - m).abs() < 4.0 * (v / ys.len() as f64).sqrt());
    assert!((variance(&ys) / v - 1.0).abs() < 0.02);
}
