//! Exact dense complex linear algebra; every protocol is checked against this layer.

mod distance;
mod expm;
mod matrix;
pub mod random;
mod state;
pub mod tensor;

pub use distance::{hermitian_trace_distance, trace_distance, unitary_diamond_distance};
pub use expm::{hadamard_series, herm_exp};
pub use matrix::{paulis, ComplexMatrix, C64, I, ONE, ZERO};
pub use random::random_state;
pub use state::{
    DensityMatrix, PureState, StateJson, HERMITIAN_TOL, PSD_TOL, TRACE_TOL, VALIDATION_TOL,
};
pub use tensor::{cyclic_shift, kron, partial_trace, swap_operator};
