use rand::Rng;
use rand_distr::Exp1;

use super::{ou_move, ou_transition, PopulationState, SimPlan};
use crate::error::{Error, Result};
use crate::spectral::SuperOUConfig;

fn cap_error(state: PopulationState, cap: usize) -> Error {
    Error::PopulationCap {
        population: state.len(),
        cap,
        clock: state.clock,
        partial: Box::new(state),
    }
}

/// Gillespie simulation of every branching event. Positions are updated
/// lazily: each particle remembers when it last moved.
pub(super) fn advance_event(state: &mut PopulationState, t_target: f64, cfg: &SuperOUConfig, plan: &SimPlan) -> Result<()> {
    let dim = state.dim;
    let rate = plan.branching_rate(cfg);
    let p2 = plan.offspring_probability(cfg);
    let cap = plan.population_cap;
    let mut stamps = vec![state.clock; state.len()];
    let mut now = state.clock;

    fn catch_up(state: &mut PopulationState, cfg: &SuperOUConfig, stamps: &mut [f64], i: usize, now: f64) {
        let dt = now - stamps[i];
        if dt > 0.0 {
            let (decay, sd) = ou_transition(cfg, dt);
            let dim = state.dim;
            let PopulationState { positions, rng, .. } = state;
            ou_move(&mut positions[i * dim..(i + 1) * dim], decay, sd, rng);
            stamps[i] = now;
        }
    }

    loop {
        let n = stamps.len();
        if n == 0 {
            break;
        }
        let wait: f64 = state.rng.sample::<f64, _>(Exp1) / (rate * n as f64);
        if now + wait >= t_target {
            break;
        }
        now += wait;
        let i = state.rng.random_range(0..n);
        if state.rng.random::<f64>() < p2 {
            catch_up(state, cfg, &mut stamps, i, now);
            state.positions.extend_from_within(i * dim..(i + 1) * dim);
            stamps.push(now);
            if stamps.len() > cap {
                for j in 0..stamps.len() {
                    catch_up(state, cfg, &mut stamps, j, now);
                }
                state.clock = now;
                return Err(cap_error(state.clone(), cap));
            }
        } else {
            let last = n - 1;
            if i != last {
                state.positions.copy_within(last * dim..(last + 1) * dim, i * dim);
            }
            state.positions.truncate(last * dim);
            stamps.swap_remove(i);
        }
    }
    for j in 0..stamps.len() {
        catch_up(state, cfg, &mut stamps, j, t_target);
    }
    state.clock = t_target;
    Ok(())
}

/// Samples the particles alive at `t_target` through their reduced
/// genealogy: each current particle survives with probability p(u), and a
/// surviving lineage splits into two surviving lineages at the hazard
/// implied by the birth-death law. On a cap breach the state is left as it
/// was before the call.
pub(super) fn advance_reduced(state: &mut PopulationState, t_target: f64, cfg: &SuperOUConfig, plan: &SimPlan) -> Result<()> {
    let dim = state.dim;
    let cap = plan.population_cap;
    let bd = plan.birth_death(cfg);
    let span = t_target - state.clock;
    let survive = bd.survival(span);
    let mut rng = state.rng.clone();
    let mut next = Vec::with_capacity(state.positions.len());
    let g_span = bd.g(span);
    let mut stack: Vec<([f64; 2], f64, f64)> = Vec::new();

    for x in state.positions.chunks_exact(dim) {
        if rng.random::<f64>() >= survive {
            continue;
        }
        let mut p = [0.0; 2];
        p[..dim].copy_from_slice(x);
        stack.push((p, span, g_span));
        while let Some((mut p, remaining, g)) = stack.pop() {
            match bd.next_split_from(remaining, g, &mut rng) {
                None => {
                    let (decay, sd) = ou_transition(cfg, remaining);
                    ou_move(&mut p[..dim], decay, sd, &mut rng);
                    next.extend_from_slice(&p[..dim]);
                    if next.len() / dim > cap {
                        return Err(Error::PopulationCap {
                            population: next.len() / dim,
                            cap,
                            clock: t_target,
                            partial: Box::new(state.clone()),
                        });
                    }
                }
                Some((at, g_at)) => {
                    let (decay, sd) = ou_transition(cfg, remaining - at);
                    ou_move(&mut p[..dim], decay, sd, &mut rng);
                    stack.push((p, at, g_at));
                    stack.push((p, at, g_at));
                }
            }
        }
    }
    state.positions = next;
    state.rng = rng;
    state.clock = t_target;
    Ok(())
}
