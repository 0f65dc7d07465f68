//! Iterative single-ancilla phase estimation on `U = e^{-i rho}`.
//!
//! Level `k` applies controlled-`U^m`, `m = 2^k`, to `|+> (x) |v>` and reads
//! both quadratures of the ancilla: `<X> = cos(m lambda)`, `<Y> = -sin(m lambda)`.
//! The level angle `m lambda mod 2 pi` is lifted onto the branch closest to the
//! running estimate.

use std::f64::consts::{PI, TAU};

use super::Protocol;
use crate::error::{Error, Result};
use crate::linalg::tensor::{kron, partial_trace};
use crate::linalg::{paulis, ComplexMatrix, DensityMatrix, PureState};
use crate::lmr::{controlled_lmr_simulate, ideal_controlled_conjugation, LmrConfig};
use crate::rng::StreamRng;

/// Which eigenvector the data register holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenTarget {
    /// The `i`-th eigenvector, eigenvalues sorted in decreasing order.
    Eigenvector(usize),
    /// Every eigenvector in turn, one estimate each.
    All,
    /// `samples` runs, each on an eigenvector drawn from the spectrum of `rho`
    /// (the statistics of preparing the data register in `rho` itself).
    Spectrum { samples: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseEstimationConfig {
    pub precision: f64,
    pub protocol: Protocol,
    /// Per-use simulation error is `error_fraction * precision` (per unit time).
    pub error_fraction: f64,
    /// Shots per quadrature at the finest level; level `k` of `K` gets `base_shots * (K - k + 1)`.
    pub base_shots: u64,
    pub budget_constant: f64,
}

impl PhaseEstimationConfig {
    pub const DEFAULT_ERROR_FRACTION: f64 = 0.25;
    pub const DEFAULT_BASE_SHOTS: u64 = 24;

    pub fn new(precision: f64, protocol: Protocol) -> Result<Self> {
        let config = Self {
            precision,
            protocol,
            error_fraction: Self::DEFAULT_ERROR_FRACTION,
            base_shots: Self::DEFAULT_BASE_SHOTS,
            budget_constant: LmrConfig::DEFAULT_BUDGET_CONSTANT,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.precision > 0.0 && self.precision < 0.5) {
            return Err(Error::invalid(format!("precision {} outside (0, 1/2)", self.precision)));
        }
        if !(self.error_fraction > 0.0 && self.error_fraction <= 0.5) {
            return Err(Error::invalid("error fraction must lie in (0, 1/2]"));
        }
        if self.base_shots == 0 {
            return Err(Error::invalid("base shots must be positive"));
        }
        Ok(())
    }

    /// `K = ceil(log2(1 / precision))`.
    pub fn top_level(&self) -> u32 {
        (1.0 / self.precision).log2().ceil().max(0.0) as u32
    }

    pub fn shots(&self, level: u32) -> u64 {
        self.base_shots * u64::from(self.top_level() - level + 1)
    }
}

/// Result of [`phase_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseEstimation {
    /// Eigenvalue estimates of `rho` (the eigenphase of `U` is minus these).
    pub estimates: Vec<f64>,
    /// Which eigenvector (decreasing order) each estimate came from.
    pub targets: Vec<usize>,
    /// Partial-swap steps in one pass through all levels.
    pub steps_per_pass: u64,
    /// Copies of `rho` consumed: steps times shots, summed over all runs.
    pub copies: u64,
}

/// Reduced ancilla after controlled-`U^m` on `|+> (x) |v>`, and its step count.
fn level_ancilla(
    rho: &DensityMatrix,
    v: &PureState,
    m: f64,
    config: &PhaseEstimationConfig,
) -> Result<(ComplexMatrix, u64)> {
    let joint = DensityMatrix::new(kron(&PureState::plus().projector(), &v.projector()))?;
    let (out, n) = match config.protocol {
        Protocol::Ideal => (ideal_controlled_conjugation(rho.matrix(), m, &joint)?, 0),
        Protocol::Lmr => {
            let delta = (m * config.error_fraction * config.precision).min(1.0);
            let lmr = LmrConfig::new(m, delta)?.with_budget_constant(config.budget_constant)?;
            controlled_lmr_simulate(&joint, rho, &lmr)?
        }
    };
    Ok((partial_trace(out.matrix(), &[2, rho.dim()], 1)?, n))
}

/// `+-1` average of `shots` measurements with `P(+1) = (1 + expectation) / 2`.
fn sampled_expectation(expectation: f64, shots: u64, rng: &mut StreamRng) -> f64 {
    let p = (0.5 * (1.0 + expectation)).clamp(0.0, 1.0);
    2.0 * rng.binomial(shots, p) as f64 / shots as f64 - 1.0
}

/// Quadratures per level for one eigenvector: `(<X>, <Y>)` and total steps.
fn level_quadratures(
    rho: &DensityMatrix,
    v: &PureState,
    config: &PhaseEstimationConfig,
) -> Result<(Vec<(f64, f64)>, u64, u64)> {
    let mut quads = Vec::new();
    let mut steps = 0;
    let mut copies = 0;
    for k in 0..=config.top_level() {
        let (anc, n) = level_ancilla(rho, v, f64::from(1u32 << k), config)?;
        let x = anc.matmul(&paulis::x()).trace().re;
        let y = anc.matmul(&paulis::y()).trace().re;
        quads.push((x, y));
        steps += n;
        copies += n * 2 * config.shots(k);
    }
    Ok((quads, steps, copies))
}

fn stitch(quads: &[(f64, f64)], config: &PhaseEstimationConfig, rng: &mut StreamRng) -> f64 {
    let mut estimate = 0.0;
    for (k, &(x, y)) in quads.iter().enumerate() {
        let shots = config.shots(k as u32);
        let xs = sampled_expectation(x, shots, rng);
        let ys = sampled_expectation(y, shots, rng);
        let angle = (-ys).atan2(xs).rem_euclid(TAU);
        let m = f64::from(1u32 << k);
        if k == 0 {
            estimate = if angle > PI + 0.5 { angle - TAU } else { angle };
            continue;
        }
        let j = ((estimate * m - angle) / TAU).round();
        estimate = (angle + TAU * j) / m;
    }
    estimate
}

/// Eigenvectors of `rho` with eigenvalues, decreasing.
fn spectrum(rho: &DensityMatrix) -> Vec<(f64, PureState)> {
    let (values, vectors) = rho.matrix().eigh();
    let mut pairs: Vec<_> = values
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, PureState::normalized(vectors.column(i)).expect("unit eigenvector")))
        .collect();
    pairs.reverse();
    pairs
}

/// Estimates eigenvalues of `rho` to `config.precision`.
pub fn phase_estimate(
    rho: &DensityMatrix,
    config: &PhaseEstimationConfig,
    target: EigenTarget,
    seed: u64,
) -> Result<PhaseEstimation> {
    config.validate()?;
    let spec = spectrum(rho);
    let mut rng = StreamRng::new(seed);
    let targets: Vec<usize> = match target {
        EigenTarget::Eigenvector(i) => {
            if i >= spec.len() {
                return Err(Error::invalid(format!("eigenvector {i} out of range")));
            }
            vec![i]
        }
        EigenTarget::All => (0..spec.len()).collect(),
        EigenTarget::Spectrum { samples } => {
            let weights: Vec<f64> = spec.iter().map(|(l, _)| l.max(0.0)).collect();
            (0..samples).map(|_| rng.weighted_index(&weights)).collect()
        }
    };
    let mut cache: Vec<Option<(Vec<(f64, f64)>, u64, u64)>> = vec![None; spec.len()];
    let mut estimates = Vec::with_capacity(targets.len());
    let mut steps_per_pass = 0;
    let mut copies = 0;
    for (run, &i) in targets.iter().enumerate() {
        if cache[i].is_none() {
            cache[i] = Some(level_quadratures(rho, &spec[i].1, config)?);
        }
        let (quads, steps, c) = cache[i].as_ref().expect("filled");
        steps_per_pass = *steps;
        copies += c;
        let mut sub = rng.substream(run as u64);
        estimates.push(stitch(quads, config, &mut sub));
    }
    Ok(PhaseEstimation { estimates, targets, steps_per_pass, copies })
}
