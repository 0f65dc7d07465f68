//! Grover search where the start state is only available as copies.
//!
//! The iterate is `G = -R_s R_T` with `R_T = 1 - 2 P_T` exact and
//! `R_s = e^{-i pi |s><s|}` simulated from copies of `|s><s|`. Rounds follow a
//! randomized schedule: round `i` applies `j` iterates, `j` uniform below
//! `ceil(m_i)`, with `m` growing by 6/5 per round up to `1/sqrt(w)`.

use std::f64::consts::PI;

use super::Protocol;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, PureState, VALIDATION_TOL};
use crate::lmr::{lmr_simulate, LmrConfig};
use crate::rng::StreamRng;

pub const GROWTH: f64 = 1.2;

#[derive(Clone, Debug, PartialEq)]
pub struct GroverTask {
    target_projector: ComplexMatrix,
    pub w: f64,
    pub epsilon_fail: f64,
    pub state_budget_delta: f64,
}

impl GroverTask {
    pub fn new(target_projector: ComplexMatrix, w: f64, epsilon_fail: f64, state_budget_delta: f64) -> Result<Self> {
        target_projector.require_hermitian(VALIDATION_TOL)?;
        let idem = (&target_projector * &target_projector).max_abs_diff(&target_projector);
        if idem > VALIDATION_TOL {
            return Err(Error::invalid(format!("target is not a projector (P^2 - P = {idem:e})")));
        }
        if !(w > 0.0 && w <= 1.0) {
            return Err(Error::invalid(format!("w = {w} outside (0, 1]")));
        }
        if !(epsilon_fail > 0.0 && epsilon_fail < 1.0) {
            return Err(Error::invalid("epsilon_fail must lie in (0, 1)"));
        }
        if !(state_budget_delta > 0.0 && state_budget_delta <= 1.0) {
            return Err(Error::invalid("state_budget_delta must lie in (0, 1]"));
        }
        Ok(Self { target_projector, w, epsilon_fail, state_budget_delta })
    }

    pub fn target_projector(&self) -> &ComplexMatrix {
        &self.target_projector
    }

    /// Iterate caps `ceil(m_i)` for each round.
    pub fn schedule(&self) -> Vec<u64> {
        let cap = 1.0 / self.w.sqrt();
        let mut m: f64 = 1.0;
        let mut rounds = Vec::new();
        while m < cap {
            rounds.push(m.ceil() as u64);
            m *= GROWTH;
        }
        // Once m reaches the cap each round succeeds with probability >= 1/4.
        let tail = ((1.0 / self.epsilon_fail).ln() / (4.0f64 / 3.0).ln()).ceil() as usize;
        rounds.extend(std::iter::repeat(cap.ceil() as u64).take(tail.max(1)));
        rounds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchVerdict {
    Found,
    NotFound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverOutcome {
    pub verdict: SearchVerdict,
    pub rounds: usize,
    pub iterates: u64,
    /// Copies of `|s><s|` consumed: one fresh start state per round plus the reflections.
    pub copies: u64,
}

/// Probability of hitting the target after `j` iterates, for `j = 0..=max_j`.
/// Returns the table and copies per reflection.
pub fn hit_probabilities(
    task: &GroverTask,
    start: &PureState,
    protocol: Protocol,
    max_j: u64,
) -> Result<(Vec<f64>, u64)> {
    let d = start.dim();
    if task.target_projector.rows() != d {
        return Err(Error::DimensionMismatch { expected: d, found: task.target_projector.rows() });
    }
    let reflect_t = ComplexMatrix::identity(d) - task.target_projector.scale_real(2.0);
    let reflect_s = ComplexMatrix::identity(d) - start.projector().scale_real(2.0);
    let rho_s = start.to_density();
    let config = LmrConfig::new(PI, task.state_budget_delta)?;
    let mut state = rho_s.clone();
    let mut table = Vec::with_capacity(max_j as usize + 1);
    let hit = |s: &DensityMatrix| s.expectation(&task.target_projector).re.clamp(0.0, 1.0);
    table.push(hit(&state));
    let mut per_reflection = 0;
    for _ in 0..max_j {
        let after_t = DensityMatrix::from_channel_output(state.matrix().conjugate_by(&reflect_t))?;
        state = match protocol {
            Protocol::Ideal => DensityMatrix::from_channel_output(after_t.matrix().conjugate_by(&reflect_s))?,
            Protocol::Lmr => {
                let (out, n) = lmr_simulate(&after_t, &rho_s, &config)?;
                per_reflection = n;
                out
            }
        };
        table.push(hit(&state));
    }
    Ok((table, per_reflection))
}

/// One seeded search run.
pub fn sample_grover(task: &GroverTask, start: &PureState, protocol: Protocol, seed: u64) -> Result<GroverOutcome> {
    let schedule = task.schedule();
    let max_j = schedule.iter().max().copied().unwrap_or(1);
    let (table, per_reflection) = hit_probabilities(task, start, protocol, max_j)?;
    Ok(run_schedule(&schedule, &table, per_reflection, &mut StreamRng::new(seed)))
}

/// Plays the schedule against a precomputed hit table.
pub fn run_schedule(schedule: &[u64], table: &[f64], per_reflection: u64, rng: &mut StreamRng) -> GroverOutcome {
    let mut iterates = 0;
    let mut copies = 0;
    for (round, &cap) in schedule.iter().enumerate() {
        let j = rng.below(cap);
        iterates += j;
        copies += 1 + j * per_reflection;
        if rng.bernoulli(table[j as usize]) {
            return GroverOutcome { verdict: SearchVerdict::Found, rounds: round + 1, iterates, copies };
        }
    }
    GroverOutcome { verdict: SearchVerdict::NotFound, rounds: schedule.len(), iterates, copies }
}
