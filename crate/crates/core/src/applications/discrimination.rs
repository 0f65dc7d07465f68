use std::f64::consts::FRAC_PI_2;

use statrs::distribution::{Binomial, Discrete};

use super::Protocol;
use crate::error::{Error, Result};
use crate::experiment::{run_trials, success_rate};
use crate::linalg::{DensityMatrix, PureState, C64};
use crate::lmr::{ideal_conjugation, lmr_simulate, LmrConfig};

/// Hidden state `rho(x)` or `rho(x + epsilon)`, with `rho(x) = x|0><0| + (1-x)|1><1|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscriminationTask {
    pub x: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub trials: usize,
    pub seed: u64,
}

impl DiscriminationTask {
    /// Accepts `0 < epsilon <= 1/2` with both candidate states valid. `eta` is
    /// only recorded; [`DiscriminationTask::in_margin_regime`] reports whether
    /// `epsilon < eta < 1/2` and `x` in `(eta, 1 - eta)` hold.
    pub fn new(x: f64, epsilon: f64, eta: f64, trials: usize, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::invalid(format!("epsilon = {epsilon} outside (0, 1/2]")));
        }
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&(x + epsilon)) {
            return Err(Error::invalid("x and x + epsilon must lie in [0, 1]"));
        }
        if !(0.0..=0.5).contains(&eta) {
            return Err(Error::invalid(format!("eta = {eta} outside [0, 1/2]")));
        }
        if trials == 0 {
            return Err(Error::invalid("trials must be positive"));
        }
        Ok(Self { x, epsilon, eta, trials, seed })
    }

    pub fn in_margin_regime(&self) -> bool {
        self.epsilon < self.eta && self.eta < 0.5 && self.x > self.eta && self.x < 1.0 - self.eta
    }

    /// `t = pi / (2 epsilon)`: the two evolutions differ by a relative phase of `pi`.
    pub fn evolution_time(&self) -> f64 {
        FRAC_PI_2 / self.epsilon
    }

    pub fn candidates(&self) -> [DensityMatrix; 2] {
        [
            DensityMatrix::qubit_mixture(self.x).expect("validated"),
            DensityMatrix::qubit_mixture(self.x + self.epsilon).expect("validated"),
        ]
    }

    /// Measurement vector for the "first candidate" outcome: `e^{-i a Z}|+>`
    /// with `a = (x - 1/2) t`. At `x = 1/2` this is the X basis.
    fn measurement_vector(&self) -> PureState {
        let a = (self.x - 0.5) * self.evolution_time();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![C64::from_polar(s, -a), C64::from_polar(s, a)]).expect("unit norm")
    }
}

/// Result of [`discriminate`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminationOutcome {
    pub success_rate: f64,
    pub successes: usize,
    pub trials: usize,
    /// Probability of guessing right given each hidden candidate.
    pub correct_probabilities: [f64; 2],
    /// Copies consumed per trial (0 for the ideal protocol).
    pub copies_per_trial: u64,
}

/// Evolves `|+>` under the hidden state for `t = pi / (2 epsilon)`, measures,
/// guesses. The hidden state is drawn fairly per trial; outcomes are sampled
/// from exact Born probabilities. `budget.t` is replaced by the evolution time.
pub fn discriminate(
    task: &DiscriminationTask,
    protocol: Protocol,
    budget: &LmrConfig,
) -> Result<DiscriminationOutcome> {
    let t = task.evolution_time();
    let config = budget.with_time(t)?;
    let plus = PureState::plus().to_density();
    let probe = task.measurement_vector();
    let mut correct = [0.0; 2];
    let mut copies = 0;
    for (h, rho) in task.candidates().iter().enumerate() {
        let out = match protocol {
            Protocol::Ideal => ideal_conjugation(rho.matrix(), t, &plus)?,
            Protocol::Lmr => {
                let (out, n) = lmr_simulate(&plus, rho, &config)?;
                copies = n;
                out
            }
        };
        let p_first = out.fidelity_with_pure(&probe).clamp(0.0, 1.0);
        correct[h] = if h == 0 { p_first } else { 1.0 - p_first };
    }
    let outcomes = run_trials(task.seed, task.trials, |_, rng| {
        let hidden = usize::from(rng.bernoulli(0.5));
        rng.bernoulli(correct[hidden])
    });
    let successes = outcomes.iter().filter(|&&b| b).count();
    Ok(DiscriminationOutcome {
        success_rate: success_rate(&outcomes),
        successes,
        trials: task.trials,
        correct_probabilities: correct,
        copies_per_trial: copies,
    })
}

/// Total-variation distance between `Binomial(n, x)` and `Binomial(n, x + eps)`.
pub fn binomial_tv(n: u64, x: f64, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || eps < 0.0 || x + eps > 1.0 {
        return Err(Error::invalid("need 0 <= x <= x + eps <= 1"));
    }
    let a = Binomial::new(x, n).map_err(|e| Error::invalid(e.to_string()))?;
    let b = Binomial::new(x + eps, n).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(0.5 * (0..=n).map(|k| (a.pmf(k) - b.pmf(k)).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> LmrConfig {
        LmrConfig::new(1.0, 1.0 / 3.0).unwrap()
    }

    #[test]
    fn task_validation() {
        assert!(DiscriminationTask::new(0.5, 0.5, 0.5, 10, 0).is_ok());
        assert!(DiscriminationTask::new(0.6, 0.5, 0.5, 10, 0).is_err());
        assert!(DiscriminationTask::new(0.5, 0.0, 0.4, 10, 0).is_err());
        assert!(DiscriminationTask::new(0.5, 0.1, 0.4, 0, 0).is_err());
        assert!(DiscriminationTask::new(0.3, 0.1, 0.2, 1, 0).unwrap().in_margin_regime());
        assert!(!DiscriminationTask::new(0.5, 0.5, 0.5, 1, 0).unwrap().in_margin_regime());
    }

    #[test]
    fn ideal_is_deterministic_at_quarter_turn() {
        for (x, eps) in [(0.5, 0.5), (0.3, 0.1), (0.15, 0.05)] {
            let task = DiscriminationTask::new(x, eps, 0.5, 200, 1).unwrap();
            let out = discriminate(&task, Protocol::Ideal, &budget()).unwrap();
            assert_eq!(out.success_rate, 1.0, "x = {x}, eps = {eps}");
            assert!(out.correct_probabilities.iter().all(|p| *p > 1.0 - 1e-12));
        }
    }

    #[test]
    fn lmr_meets_two_thirds() {
        let task = DiscriminationTask::new(0.5, 0.5, 0.5, 1000, 2).unwrap();
        let out = discriminate(&task, Protocol::Lmr, &budget()).unwrap();
        assert!(out.success_rate >= 2.0 / 3.0);
        assert_eq!(out.copies_per_trial, (4.0 * std::f64::consts::PI.powi(2) * 3.0).ceil() as u64);
    }

    #[test]
    fn single_copy_cannot_resolve_small_gap() {
        let task = DiscriminationTask::new(0.4, 0.01, 0.5, 1000, 3).unwrap();
        let one = budget().with_steps(1).unwrap();
        let out = discriminate(&task, Protocol::Lmr, &one).unwrap();
        assert!(out.success_rate <= 0.6);
    }

    #[test]
    fn binomial_tv_cases() {
        assert!((binomial_tv(1, 0.5, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(binomial_tv(20, 0.3, 0.0).unwrap(), 0.0);
        let v: Vec<f64> = [100, 200, 400].iter().map(|&n| binomial_tv(n, 0.5, 0.05).unwrap()).collect();
        assert!(v[0] > 1.0 / 3.0 && v[0] < 1.0);
        assert!(v[0] < v[1] && v[1] < v[2]);
        assert!(binomial_tv(5, 0.9, 0.2).is_err());
    }
}
