//! Experiments and algorithms built on the simulation primitives.

mod addition;
mod discrimination;
mod grover;
mod orthogonality;
mod phase_estimation;
mod tomography;

use serde::{Deserialize, Serialize};

pub use addition::{add_states, overlap_angle, superposition_target, DEGENERATE_TOL};
pub use discrimination::{binomial_tv, discriminate, DiscriminationOutcome, DiscriminationTask};
pub use grover::{
    hit_probabilities, run_schedule, sample_grover, GroverOutcome, GroverTask, SearchVerdict, GROWTH,
};
pub use orthogonality::{
    commutator_polynomial, orthogonality_test, padded_states, OrthogonalityConfig, OrthogonalityOutcome,
    Verdict,
};
pub use phase_estimation::{phase_estimate, EigenTarget, PhaseEstimation, PhaseEstimationConfig};
pub use tomography::{compare_budgets, tomography_bound, BudgetRow};

/// Exact target unitary, or the copy-consuming simulation of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Ideal,
    Lmr,
}

impl std::str::FromStr for Protocol {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "ideal" => Ok(Self::Ideal),
            "lmr" => Ok(Self::Lmr),
            other => Err(crate::Error::Parse(format!("unknown protocol {other:?}"))),
        }
    }
}
