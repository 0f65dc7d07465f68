//! Sample-based Hamiltonian simulation.

pub mod applications;
pub mod error;
pub mod experiment;
pub mod gadgets;
pub mod linalg;
pub mod lmr;
pub mod rng;
pub mod stats;
pub mod universal;

pub use error::{Error, Result};
pub use experiment::ExperimentReport;
pub use linalg::{ComplexMatrix, DensityMatrix, PureState};
