//! Universal computation from nearest-neighbour exchange pulses and streams of
//! `|0>` / `|+>` resource qubits.

mod circuit;
mod euler;
mod machine;

pub use circuit::{
    cnot_construction, cnot_construction_defect, run_circuit, Circuit, CircuitRun, CostReport, CzAngles, Gate,
    CZ_ANGLES,
};
pub use euler::{euler_decompose, normalize_angle, signed_angle, x_rotation, z_rotation, EulerAngles, UNITARY_TOL};
pub use machine::{Axis, ChainMachine, Pulse, ResourceCounter, RotationRequest, Site, MAX_QUBITS};
