//! Orthogonality test from the commutator Hamiltonian.
//!
//! With padded states `|a> = |psi1>|0>` and `|b> = |psi2>|+>`, the generator
//! `H = i[|a><a|, |b><b|]` rotates `|a>` by angle `theta = sqrt(mu (1 - mu))`
//! per unit time, `mu = |<a|b>|^2 = |<psi1|psi2>|^2 / 2`. It vanishes exactly
//! when the inputs are orthogonal. A Hadamard test on `|a>` with controlled
//! `e^{-iHm}` gives outcome `1` with probability `(1 - cos(theta m)) / 2`; the
//! levels `m = 1, 2, 4, ...` run until `m theta_min >= pi/4`, so some level
//! fires with probability at least `(1 - cos(pi/4)) / 2` under overlap.

use std::f64::consts::FRAC_PI_4;

use super::Protocol;
use crate::error::{Error, Result};
use crate::experiment::run_trials;
use crate::gadgets::{simulate_pairs, BlockPair, HermitianPolynomial, PairSource, PolynomialTerm};
use crate::linalg::tensor::{kron, partial_trace};
use crate::linalg::{herm_exp, paulis, DensityMatrix, PureState};
use crate::lmr::{controlled, LmrConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Orthogonal,
    Overlapping,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrthogonalityConfig {
    /// Promise: `|<psi1|psi2>|^2` is 0 or at least `w`.
    pub w: f64,
    pub eps_fail: f64,
    pub protocol: Protocol,
    /// Hadamard-test shots per level per repetition.
    pub shots: u64,
    /// A level fires when its fraction of `1` outcomes reaches this value.
    pub threshold: f64,
    /// Simulation error target per level.
    pub delta: f64,
}

impl OrthogonalityConfig {
    pub const DEFAULT_SHOTS: u64 = 64;
    pub const DEFAULT_THRESHOLD: f64 = 0.073;
    pub const DEFAULT_DELTA: f64 = 0.05;
    /// Repetitions are `ceil(ln(1 / eps_fail) / VOTE_RATE)`, made odd.
    pub const VOTE_RATE: f64 = 0.32;

    pub fn new(w: f64, eps_fail: f64, protocol: Protocol) -> Result<Self> {
        let c = Self {
            w,
            eps_fail,
            protocol,
            shots: Self::DEFAULT_SHOTS,
            threshold: Self::DEFAULT_THRESHOLD,
            delta: Self::DEFAULT_DELTA,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w > 0.0 && self.w <= 1.0) {
            return Err(Error::invalid(format!("w = {} outside (0, 1]", self.w)));
        }
        if !(self.eps_fail > 0.0 && self.eps_fail < 1.0) {
            return Err(Error::invalid("eps_fail must lie in (0, 1)"));
        }
        if self.shots == 0 || !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::invalid("need positive shots and a threshold in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::invalid("delta must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Smallest rotation angle allowed by the promise.
    pub fn theta_min(&self) -> f64 {
        let mu = self.w / 2.0;
        (mu * (1.0 - mu)).sqrt()
    }

    /// Levels `m = 2^0 .. 2^K` with `2^K theta_min >= pi/4`.
    pub fn levels(&self) -> Vec<f64> {
        let k = (FRAC_PI_4 / self.theta_min()).log2().ceil().max(0.0) as u32;
        (0..=k).map(|j| f64::from(1u32 << j)).collect()
    }

    pub fn repetitions(&self) -> usize {
        let r = ((1.0 / self.eps_fail).ln() / Self::VOTE_RATE).ceil().max(1.0) as usize;
        r | 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityOutcome {
    pub verdict: Verdict,
    pub overlapping_votes: usize,
    pub repetitions: usize,
    /// Probability of outcome `1` at each level.
    pub fire_probabilities: Vec<f64>,
    pub copies: u64,
}

/// Padded pair `(|psi1>|0>, |psi2>|+>)`.
pub fn padded_states(psi1: &PureState, psi2: &PureState) -> Result<(DensityMatrix, DensityMatrix)> {
    if psi1.dim() != psi2.dim() {
        return Err(Error::DimensionMismatch { expected: psi1.dim(), found: psi2.dim() });
    }
    let a = psi1.tensor(&PureState::basis(2, 0)).to_density();
    let b = psi2.tensor(&PureState::plus()).to_density();
    Ok((a, b))
}

/// `i[P_a, P_b]` as a one-term polynomial: `r = "12"`, `phi = pi/2`, `c = 2`.
pub fn commutator_polynomial() -> HermitianPolynomial {
    let term = PolynomialTerm::parse("12", std::f64::consts::FRAC_PI_2, 2.0).expect("valid term");
    HermitianPolynomial::new(2, vec![term]).expect("valid polynomial")
}

/// Decides orthogonal vs overlapping by majority vote.
pub fn orthogonality_test(
    psi1: &PureState,
    psi2: &PureState,
    config: &OrthogonalityConfig,
    seed: u64,
) -> Result<OrthogonalityOutcome> {
    config.validate()?;
    let (a, b) = padded_states(psi1, psi2)?;
    let poly = commutator_polynomial();
    let states = [a.clone(), b];
    let dim = a.dim();
    let start = DensityMatrix::new(kron(&PureState::plus().projector(), a.matrix()))?;
    let mut fire = Vec::new();
    let mut steps_per_rep = 0;
    for m in config.levels() {
        let out = match config.protocol {
            Protocol::Ideal => {
                let h = crate::gadgets::polynomial_matrix(&poly, &states)?;
                let u = controlled(&herm_exp(&h, m)?);
                DensityMatrix::from_channel_output(start.matrix().conjugate_by(&u))?
            }
            Protocol::Lmr => {
                let pair: BlockPair = poly.term_pair(0, &states)?.controlled();
                let lmr = LmrConfig::new(m, config.delta)?;
                let (out, n) = simulate_pairs(&start, PairSource::Exact(pair), poly.norm(), &lmr)?;
                steps_per_rep += n;
                out
            }
        };
        let anc = partial_trace(out.matrix(), &[2, dim], 1)?;
        let x = anc.matmul(&paulis::x()).trace().re;
        fire.push((0.5 * (1.0 - x)).clamp(0.0, 1.0));
    }
    let reps = config.repetitions();
    let votes = run_trials(seed, reps, |_, rng| {
        fire.iter().any(|&p| {
            let ones = rng.binomial(config.shots, p);
            ones as f64 >= config.threshold * config.shots as f64
        })
    });
    let overlapping_votes = votes.iter().filter(|&&v| v).count();
    let verdict = if 2 * overlapping_votes > reps { Verdict::Overlapping } else { Verdict::Orthogonal };
    // Each step consumes one copy of each padded state through the gadget.
    let copies = 2 * steps_per_rep * config.shots * reps as u64;
    Ok(OrthogonalityOutcome {
        verdict,
        overlapping_votes,
        repetitions: reps,
        fire_probabilities: fire,
        copies,
    })
}
