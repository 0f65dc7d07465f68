//! Circuits of single-qubit unitaries and CNOTs compiled onto the chain machine.
//!
//! A CNOT is `(1 (x) H) CZ (1 (x) H)` with
//! `CZ ~ (Z_{pi/2} (x) Z_{3pi/2}) W (Z_pi (x) 1) W`, `W = exp(-i pi/8 H_01)`
//! the square-root-of-swap pulse, control at position 0 and target at 1.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::euler::{euler_decompose, z_rotation};
use super::machine::{Axis, ChainMachine, ResourceCounter, RotationRequest, Site};
use crate::error::{Error, Result};
use crate::linalg::tensor::kron_all;
use crate::linalg::{paulis, swap_operator, ComplexMatrix, DensityMatrix, C64, I, ONE, ZERO};

/// Z-rotation angles of the CZ construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CzAngles {
    /// On the control, between the two pulses.
    pub middle: f64,
    /// On the control, after the second pulse.
    pub control: f64,
    /// On the target, after the second pulse.
    pub target: f64,
}

pub const CZ_ANGLES: CzAngles = CzAngles { middle: PI, control: FRAC_PI_2, target: 3.0 * FRAC_PI_2 };

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Unitary { q: usize, matrix: ComplexMatrix },
    Cnot { c: usize, t: usize },
}

impl Gate {
    fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Unitary { q, .. } => vec![*q],
            Gate::Cnot { c, t } => vec![*c, *t],
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Gate::Unitary { q, matrix } => {
                let rows: Vec<Vec<[f64; 2]>> = (0..2)
                    .map(|i| (0..2).map(|j| [matrix.get(i, j).re, matrix.get(i, j).im]).collect())
                    .collect();
                json!({"gate": "u", "q": q, "matrix": rows})
            }
            Gate::Cnot { c, t } => json!({"gate": "cnot", "c": c, "t": t}),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        let index = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("gate needs integer field {key:?}")))
        };
        match v.get("gate").and_then(Value::as_str) {
            Some("u") => {
                let rows = v
                    .get("matrix")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("gate \"u\" needs a matrix".into()))?;
                let mut entries = Vec::new();
                for row in rows {
                    let row = row.as_array().ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
                    if row.len() != 2 || rows.len() != 2 {
                        return Err(Error::Parse("single-qubit matrix must be 2x2".into()));
                    }
                    for e in row {
                        entries.push(parse_entry(e)?);
                    }
                }
                let matrix = ComplexMatrix::from_row_major(2, 2, &entries)?;
                Ok(Gate::Unitary { q: index("q")?, matrix })
            }
            Some("cnot") => Ok(Gate::Cnot { c: index("c")?, t: index("t")? }),
            other => Err(Error::Parse(format!("unknown gate {other:?}"))),
        }
    }
}

/// A number, or `[re, im]`.
fn parse_entry(v: &Value) -> Result<C64> {
    if let Some(x) = v.as_f64() {
        return Ok(C64::new(x, 0.0));
    }
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(Error::Parse("complex entries are [re, im] numbers".into())),
        },
        _ => Err(Error::Parse(format!("bad matrix entry {v}"))),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    /// `H` on qubit 0, then `CNOT(0, 1)`.
    pub fn bell() -> Self {
        Self::hadamard_cnot_blocks(1)
    }

    /// `blocks` repetitions of `[H q0, CNOT(0, 1)]`.
    pub fn hadamard_cnot_blocks(blocks: usize) -> Self {
        let gates = (0..blocks)
            .flat_map(|_| [Gate::Unitary { q: 0, matrix: paulis::hadamard() }, Gate::Cnot { c: 0, t: 1 }])
            .collect();
        Self { gates }
    }

    pub fn single_qubit_gates(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Unitary { .. })).count()
    }

    pub fn cnots(&self) -> usize {
        self.gates.len() - self.single_qubit_gates()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let list = v.as_array().ok_or_else(|| Error::Parse("circuit must be a JSON list".into()))?;
        Ok(Self { gates: list.iter().map(Gate::from_json).collect::<Result<_>>()? })
    }

    pub fn to_json_string(&self) -> String {
        Value::Array(self.gates.iter().map(Gate::to_json).collect()).to_string()
    }

    /// Checks indices and unitarity against an `n`-qubit register.
    pub fn validate(&self, n: usize) -> Result<()> {
        for gate in &self.gates {
            for q in gate.qubits() {
                if q >= n {
                    return Err(Error::invalid(format!("qubit {q} out of range for {n} qubits")));
                }
            }
            match gate {
                Gate::Cnot { c, t } if c == t => {
                    return Err(Error::invalid("CNOT control and target coincide"));
                }
                Gate::Unitary { matrix, .. } => matrix.require_unitary(super::euler::UNITARY_TOL)?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Exact `n`-qubit unitary, qubit 0 most significant.
    pub fn unitary(&self, n: usize) -> Result<ComplexMatrix> {
        self.validate(n)?;
        let dim = 1 << n;
        Ok(self.gates.iter().fold(ComplexMatrix::identity(dim), |acc, gate| {
            let g = match gate {
                Gate::Unitary { q, matrix } => embed_single(n, *q, matrix),
                Gate::Cnot { c, t } => cnot_matrix(n, *c, *t),
            };
            &g * &acc
        }))
    }

    /// Output of the exact circuit on `input`.
    pub fn ideal_output(&self, n: usize, input: &DensityMatrix) -> Result<DensityMatrix> {
        let u = self.unitary(n)?;
        if input.dim() != u.rows() {
            return Err(Error::DimensionMismatch { expected: u.rows(), found: input.dim() });
        }
        DensityMatrix::from_channel_output(input.matrix().conjugate_by(&u))
    }
}

fn embed_single(n: usize, q: usize, u: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    kron_all((0..n).map(|k| if k == q { u } else { &id }))
}

fn cnot_matrix(n: usize, c: usize, t: usize) -> ComplexMatrix {
    let dim = 1 << n;
    let (cb, tb) = (1 << (n - 1 - c), 1 << (n - 1 - t));
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        let image = if j & cb != 0 { j ^ tb } else { j };
        if i == image {
            ONE
        } else {
            ZERO
        }
    })
}

/// `exp(-i pi/8 (2S - 1))` on two qubits.
fn sqrt_swap_pulse() -> ComplexMatrix {
    let t = FRAC_PI_8;
    (ComplexMatrix::identity(4).scale_real((2.0 * t).cos()) - swap_operator(2).scale(I * (2.0 * t).sin()))
        .scale(C64::from_polar(1.0, t))
}

/// The CNOT built from the pulse sequence, as an exact 4x4 matrix.
pub fn cnot_construction() -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let h = paulis::hadamard();
    let w = sqrt_swap_pulse();
    let pre = kron_all([&id, &h]);
    let mid = kron_all([&z_rotation(CZ_ANGLES.middle), &id]);
    let post = kron_all([&z_rotation(CZ_ANGLES.control), &(&h * &z_rotation(CZ_ANGLES.target))]);
    &(&(&(&post * &w) * &mid) * &w) * &pre
}

/// `max |construction - e^{i g} CNOT|` at the best phase `g`.
pub fn cnot_construction_defect() -> f64 {
    let built = cnot_construction();
    let target = cnot_matrix(2, 0, 1);
    let overlap = target.adjoint().matmul(&built).trace();
    built.max_abs_diff(&target.scale(overlap / overlap.norm()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub n_qubits: usize,
    pub single_qubit_gates: usize,
    pub cnots: usize,
    pub per_gate_delta: f64,
    pub exchange_pulses: usize,
    pub swaps: usize,
    pub rotations: usize,
    pub resources: ResourceCounter,
    pub resource_total: u64,
    /// `N (M + M')^2`.
    pub predicted_shape: f64,
    pub cz_angles: CzAngles,
}

#[derive(Clone, Debug)]
pub struct CircuitRun {
    /// Data qubits in logical order.
    pub state: DensityMatrix,
    pub cost: CostReport,
}

struct Tally {
    swaps: usize,
    rotations: usize,
}

fn single_qubit(machine: &mut ChainMachine, q: usize, u: &ComplexMatrix, delta: f64, tally: &mut Tally) -> Result<()> {
    tally.swaps += machine.route(q, 0)?;
    let e = euler_decompose(u)?;
    for (axis, angle) in [(Axis::X, e.xi), (Axis::Z, e.theta), (Axis::X, e.phi)] {
        if angle != 0.0 {
            machine.resource_rotation(&RotationRequest::new(q, axis, angle, delta / 3.0)?)?;
            tally.rotations += 1;
        }
    }
    Ok(())
}

fn cnot(machine: &mut ChainMachine, c: usize, t: usize, delta: f64, tally: &mut Tally) -> Result<()> {
    let part = delta / 4.0;
    let h = paulis::hadamard();
    single_qubit(machine, t, &h, part, tally)?;
    tally.swaps += machine.route(c, 0)?;
    tally.swaps += machine.route(t, 1)?;
    machine.exchange_evolution(Site::Chain(0), Site::Chain(1), FRAC_PI_8)?;
    machine.resource_rotation(&RotationRequest::new(c, Axis::Z, CZ_ANGLES.middle, part)?)?;
    tally.rotations += 1;
    machine.exchange_evolution(Site::Chain(0), Site::Chain(1), FRAC_PI_8)?;
    single_qubit(machine, c, &z_rotation(CZ_ANGLES.control), part, tally)?;
    single_qubit(machine, t, &(&h * &z_rotation(CZ_ANGLES.target)), part, tally)
}

/// Compiles and runs `circuit`. Every gate gets error budget `per_gate_delta`,
/// split evenly over its rotations.
pub fn run_circuit(machine: &mut ChainMachine, circuit: &Circuit, per_gate_delta: f64) -> Result<CircuitRun> {
    let n = machine.n_qubits();
    circuit.validate(n)?;
    if !(per_gate_delta > 0.0 && per_gate_delta <= 1.0) {
        return Err(Error::invalid(format!("per_gate_delta = {per_gate_delta} outside (0, 1]")));
    }
    let pulses_before = machine.exchange_pulses();
    let resources_before = machine.resources();
    let mut tally = Tally { swaps: 0, rotations: 0 };
    for gate in &circuit.gates {
        match gate {
            Gate::Unitary { q, matrix } => single_qubit(machine, *q, matrix, per_gate_delta, &mut tally)?,
            Gate::Cnot { c, t } => cnot(machine, *c, *t, per_gate_delta, &mut tally)?,
        }
    }
    let after = machine.resources();
    let resources = ResourceCounter {
        zeros: after.zeros - resources_before.zeros,
        pluses: after.pluses - resources_before.pluses,
    };
    let gates = circuit.gates.len() as f64;
    let cost = CostReport {
        n_qubits: n,
        single_qubit_gates: circuit.single_qubit_gates(),
        cnots: circuit.cnots(),
        per_gate_delta,
        exchange_pulses: machine.exchange_pulses() - pulses_before,
        swaps: tally.swaps,
        rotations: tally.rotations,
        resources,
        resource_total: resources.total(),
        predicted_shape: n as f64 * gates * gates,
        cz_angles: CZ_ANGLES,
    };
    Ok(CircuitRun { state: machine.data_state()?, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{trace_distance, PureState};

    #[test]
    fn cnot_construction_is_exact() {
        assert!(cnot_construction_defect() < 1e-10, "{}", cnot_construction_defect());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"[{"gate":"u","q":0,"matrix":[[0,1],[1,0]]},{"gate":"cnot","c":0,"t":1},
            {"gate":"u","q":1,"matrix":[[[1,0],[0,0]],[[0,0],[0,1]]]}]"#;
        let c = Circuit::from_json_str(text).unwrap();
        assert_eq!(c.single_qubit_gates(), 2);
        assert_eq!(c.cnots(), 1);
        assert_eq!(Circuit::from_json_str(&c.to_json_string()).unwrap(), c);
        assert!(Circuit::from_json_str(r#"[{"gate":"toffoli"}]"#).is_err());
        assert!(Circuit::from_json_str(r#"[{"gate":"u","q":0,"matrix":[[1]]}]"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(Circuit::new(vec![Gate::Cnot { c: 0, t: 0 }]).validate(2).is_err());
        assert!(Circuit::new(vec![Gate::Cnot { c: 0, t: 2 }]).validate(2).is_err());
        let bad = Gate::Unitary { q: 0, matrix: ComplexMatrix::real_diagonal(&[1.0, 2.0]) };
        assert!(Circuit::new(vec![bad]).validate(1).is_err());
    }

    #[test]
    fn empty_circuit_is_free() {
        let mut m = ChainMachine::new(2).unwrap();
        let run = run_circuit(&mut m, &Circuit::default(), 0.01).unwrap();
        assert!(run.state.matrix().max_abs_diff(DensityMatrix::basis(4, 0).matrix()) < 1e-15);
        assert_eq!(run.cost.exchange_pulses, 0);
        assert_eq!(run.cost.resource_total, 0);
    }

    #[test]
    fn single_x_gate() {
        let mut m = ChainMachine::new(1).unwrap();
        let circuit = Circuit::new(vec![Gate::Unitary { q: 0, matrix: paulis::x() }]);
        let run = run_circuit(&mut m, &circuit, 0.01).unwrap();
        assert!(run.state.fidelity_with_pure(&PureState::basis(2, 1)) >= 0.99);
    }

    #[test]
    fn bell_pair() {
        let mut m = ChainMachine::new(2).unwrap();
        let run = run_circuit(&mut m, &Circuit::bell(), 0.002).unwrap();
        let phi_plus = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(run.state.fidelity_with_pure(&phi_plus) >= 0.98);
        assert_eq!(run.cost.cnots, 1);
        assert!(run.cost.resource_total > 0);
    }

    #[test]
    fn error_within_budget_sum_on_three_qubits() {
        let mut rng = crate::rng::StreamRng::new(21);
        let u = crate::linalg::random::haar_unitary(2, &mut rng);
        let circuit = Circuit::new(vec![
            Gate::Unitary { q: 2, matrix: u },
            Gate::Cnot { c: 2, t: 0 },
            Gate::Unitary { q: 1, matrix: paulis::hadamard() },
            Gate::Cnot { c: 1, t: 2 },
        ]);
        let delta = 0.02;
        let input = DensityMatrix::basis(8, 0);
        let mut m = ChainMachine::with_state(3, &input).unwrap();
        let run = run_circuit(&mut m, &circuit, delta).unwrap();
        let ideal = circuit.ideal_output(3, &input).unwrap();
        let d = trace_distance(&run.state, &ideal).unwrap();
        assert!(d <= delta * circuit.gates.len() as f64, "{d}");
        assert!(run.cost.swaps > 0);
    }

    #[test]
    fn cnot_on_basis_states() {
        for k in 0..4 {
            let input = DensityMatrix::basis(4, k);
            let mut m = ChainMachine::with_state(2, &input).unwrap();
            let circuit = Circuit::new(vec![Gate::Cnot { c: 1, t: 0 }]);
            let run = run_circuit(&mut m, &circuit, 0.01).unwrap();
            let ideal = circuit.ideal_output(2, &input).unwrap();
            assert!(trace_distance(&run.state, &ideal).unwrap() <= 0.01);
        }
    }
}
