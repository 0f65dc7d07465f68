//! A chain of data qubits `q_0 .. q_{N-1}` with a resource qubit `q_*` hanging
//! off position 0. The only operations are exchange pulses between neighbours
//! and loading `q_*` with a fresh `|0>` or `|+>`.
//!
//! Registers of the joint state are ordered `(q_*, position 0, ..., position N-1)`.

use serde::{Deserialize, Serialize};

use super::euler::{normalize_angle, signed_angle};
use crate::error::{Error, Result};
use crate::linalg::tensor::{kron, kron_all, trace_first};
use crate::linalg::{swap_operator, ComplexMatrix, DensityMatrix, PureState, I};
use crate::lmr::LmrConfig;

/// A site of the connectivity graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Site {
    Resource,
    Chain(usize),
}

impl Site {
    fn register(self) -> usize {
        match self {
            Site::Resource => 0,
            Site::Chain(p) => p + 1,
        }
    }
}

/// Rotation axis, i.e. which resource state is consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    X,
}

impl Axis {
    /// `|0>` for Z, `|+>` for X.
    pub fn resource_state(self) -> PureState {
        match self {
            Axis::Z => PureState::basis(2, 0),
            Axis::X => PureState::plus(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Pulse {
    /// `exp(-i t H_ab)`; `swap` marks full swaps used for routing.
    Exchange { a: Site, b: Site, t: f64, swap: bool },
    Load { axis: Axis },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCounter {
    pub zeros: u64,
    pub pluses: u64,
}

impl ResourceCounter {
    pub fn total(&self) -> u64 {
        self.zeros + self.pluses
    }

    fn add(&mut self, axis: Axis, n: u64) {
        match axis {
            Axis::Z => self.zeros += n,
            Axis::X => self.pluses += n,
        }
    }
}

/// `exp(-i angle P)` on `qubit`, `P` the projector onto the axis resource state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationRequest {
    pub qubit: usize,
    pub axis: Axis,
    angle: f64,
    pub delta: f64,
}

impl RotationRequest {
    pub fn new(qubit: usize, axis: Axis, angle: f64, delta: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::invalid(format!("delta = {delta} outside (0, 1]")));
        }
        Ok(Self { qubit, axis, angle: normalize_angle(angle), delta })
    }

    /// In `[0, 2 pi)`.
    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The ideal single-qubit unitary.
    pub fn unitary(&self) -> ComplexMatrix {
        match self.axis {
            Axis::Z => super::euler::z_rotation(self.angle),
            Axis::X => super::euler::x_rotation(self.angle),
        }
    }
}

/// Dense simulation limit.
pub const MAX_QUBITS: usize = 10;

#[derive(Clone, Debug)]
pub struct ChainMachine {
    n_qubits: usize,
    state: DensityMatrix,
    gate_log: Vec<Pulse>,
    resources: ResourceCounter,
    /// `position[q]` is the chain position of logical qubit `q`.
    position: Vec<usize>,
    /// Accumulated phase of the applied unitaries relative to their partial-swap parts.
    global_phase: f64,
    depolarize: f64,
}

impl ChainMachine {
    /// All qubits, including `q_*`, in `|0>`.
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        Self::with_state(n_qubits, &DensityMatrix::basis(1 << n_qubits, 0))
    }

    /// Data qubits in `data` (logical order, `q_0` most significant), `q_*` in `|0>`.
    pub fn with_state(n_qubits: usize, data: &DensityMatrix) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if data.dim() != 1 << n_qubits {
            return Err(Error::DimensionMismatch { expected: 1 << n_qubits, found: data.dim() });
        }
        let state = DensityMatrix::new(kron(&DensityMatrix::basis(2, 0).into_matrix(), data.matrix()))?;
        Ok(Self {
            n_qubits,
            state,
            gate_log: Vec::new(),
            resources: ResourceCounter::default(),
            position: (0..n_qubits).collect(),
            global_phase: 0.0,
            depolarize: 0.0,
        })
    }

    /// Loads `(1 - p)|r><r| + p 1/2` instead of the pure resource.
    pub fn with_depolarize(mut self, p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::invalid(format!("depolarize p = {p} outside [0, 1)")));
        }
        self.depolarize = p;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Joint state on `(q_*, position 0, ..., position N-1)`.
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn gate_log(&self) -> &[Pulse] {
        &self.gate_log
    }

    pub fn resources(&self) -> ResourceCounter {
        self.resources
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn depolarize(&self) -> f64 {
        self.depolarize
    }

    pub fn position_of(&self, qubit: usize) -> Result<usize> {
        self.position
            .get(qubit)
            .copied()
            .ok_or_else(|| Error::invalid(format!("qubit {qubit} out of range for {} qubits", self.n_qubits)))
    }

    pub fn qubit_at(&self, position: usize) -> Option<usize> {
        self.position.iter().position(|&p| p == position)
    }

    /// Number of exchange pulses in the log.
    pub fn exchange_pulses(&self) -> usize {
        self.gate_log.iter().filter(|p| matches!(p, Pulse::Exchange { .. })).count()
    }

    /// Data qubits in logical order, `q_*` traced out.
    pub fn data_state(&self) -> Result<DensityMatrix> {
        let chain = trace_first(self.state.matrix(), 2)?;
        let n = self.n_qubits;
        let to_physical = |logical: usize| {
            (0..n).fold(0usize, |acc, q| {
                let bit = (logical >> (n - 1 - q)) & 1;
                acc | bit << (n - 1 - self.position[q])
            })
        };
        let dim = 1 << n;
        let reordered =
            ComplexMatrix::from_fn(dim, dim, |i, j| chain.get(to_physical(i), to_physical(j)));
        DensityMatrix::from_channel_output(reordered)
    }

    /// Reduced state of one logical qubit.
    pub fn qubit_state(&self, qubit: usize) -> Result<DensityMatrix> {
        let data = self.data_state()?;
        let n = self.n_qubits;
        self.position_of(qubit)?;
        let m = ComplexMatrix::from_fn(2, 2, |a, b| {
            (0..1usize << n)
                .filter(|k| (k >> (n - 1 - qubit)) & 1 == 0)
                .map(|k| {
                    let i = k | a << (n - 1 - qubit);
                    let j = k | b << (n - 1 - qubit);
                    data.matrix().get(i, j)
                })
                .sum()
        });
        DensityMatrix::from_channel_output(m)
    }

    fn check_site(&self, site: Site) -> Result<()> {
        match site {
            Site::Chain(p) if p >= self.n_qubits => {
                Err(Error::invalid(format!("chain position {p} out of range for {} qubits", self.n_qubits)))
            }
            _ => Ok(()),
        }
    }

    /// `exp(-i t H)` on two adjacent registers, as an operator on the joint state.
    fn exchange_unitary(&self, a: Site, b: Site, t: f64) -> Result<ComplexMatrix> {
        self.check_site(a)?;
        self.check_site(b)?;
        let (ra, rb) = (a.register(), b.register());
        let low = ra.min(rb);
        if ra.abs_diff(rb) != 1 {
            return Err(Error::invalid(format!("sites {a:?} and {b:?} are not adjacent in the chain")));
        }
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        // H = 2S - 1 on the pair, so exp(-i t H) = e^{it} exp(-2it S).
        let pair = ComplexMatrix::identity(4).scale_real((2.0 * t).cos())
            - swap_operator(2).scale(I * (2.0 * t).sin());
        let left = ComplexMatrix::identity(1 << low);
        let right = ComplexMatrix::identity(1 << (self.n_qubits - 1 - low));
        Ok(kron_all([&left, &pair, &right]))
    }

    /// Applies `exp(-i t H_ab)`; `a` and `b` must be neighbours.
    pub fn exchange_evolution(&mut self, a: Site, b: Site, t: f64) -> Result<()> {
        self.pulse(a, b, t, false)
    }

    fn pulse(&mut self, a: Site, b: Site, t: f64, swap: bool) -> Result<()> {
        let u = self.exchange_unitary(a, b, t)?;
        self.state = DensityMatrix::from_channel_output(self.state.matrix().conjugate_by(&u))?;
        self.global_phase += t;
        self.gate_log.push(Pulse::Exchange { a, b, t, swap });
        Ok(())
    }

    /// Moves `qubit` to `to_position` by full swaps with its neighbours.
    /// Returns the number of swaps.
    pub fn route(&mut self, qubit: usize, to_position: usize) -> Result<usize> {
        let from = self.position_of(qubit)?;
        self.check_site(Site::Chain(to_position))?;
        let mut p = from;
        while p != to_position {
            let next = if to_position > p { p + 1 } else { p - 1 };
            self.pulse(Site::Chain(p), Site::Chain(next), std::f64::consts::FRAC_PI_4, true)?;
            let other = self.qubit_at(next).expect("every position is occupied");
            self.position[other] = p;
            self.position[qubit] = next;
            p = next;
        }
        Ok(from.abs_diff(to_position))
    }

    fn resource_matrix(&self, axis: Axis) -> ComplexMatrix {
        let pure = axis.resource_state().projector();
        let p = self.depolarize;
        pure.scale_real(1.0 - p) + ComplexMatrix::identity(2).scale_real(p / 2.0)
    }

    /// Synthesizes `exp(-i angle P)` on the qubit at position 0 from resource
    /// copies: each step loads `q_*` and runs an exchange pulse on `(q_*, q_0)`.
    /// Returns the number of resources consumed.
    pub fn resource_rotation(&mut self, req: &RotationRequest) -> Result<u64> {
        let at = self.position_of(req.qubit)?;
        if at != 0 {
            return Err(Error::invalid(format!(
                "qubit {} sits at chain position {at}, rotations need position 0",
                req.qubit
            )));
        }
        // A depolarized copy generates (1 - p) P up to a phase, so run longer.
        let time = signed_angle(req.angle) / (1.0 - self.depolarize);
        let n = LmrConfig::new(time, req.delta)?.steps();
        let pulse_t = time / n as f64 / 2.0;
        let u = self.exchange_unitary(Site::Resource, Site::Chain(0), pulse_t)?;
        let resource = self.resource_matrix(req.axis);
        let mut state = self.state.matrix().clone();
        self.gate_log.reserve(2 * n as usize);
        for _ in 0..n {
            state = kron(&resource, &trace_first(&state, 2)?).conjugate_by(&u);
            self.gate_log.push(Pulse::Load { axis: req.axis });
            self.gate_log.push(Pulse::Exchange { a: Site::Resource, b: Site::Chain(0), t: pulse_t, swap: false });
        }
        self.global_phase += pulse_t * n as f64;
        self.state = DensityMatrix::from_channel_output(state)?;
        self.resources.add(req.axis, n);
        Ok(n)
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::invalid(format!("need 1..={MAX_QUBITS} data qubits, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_distance;

    fn basis_machine(n: usize, k: usize) -> ChainMachine {
        ChainMachine::with_state(n, &DensityMatrix::basis(1 << n, k)).unwrap()
    }

    #[test]
    fn quarter_exchange_swaps() {
        let mut m = basis_machine(2, 0b01);
        m.exchange_evolution(Site::Chain(0), Site::Chain(1), std::f64::consts::FRAC_PI_4).unwrap();
        assert!(m.data_state().unwrap().matrix().max_abs_diff(DensityMatrix::basis(4, 0b10).matrix()) < 1e-14);
    }

    #[test]
    fn zero_time_is_identity() {
        let mut m = basis_machine(2, 0b01);
        let before = m.state().clone();
        m.exchange_evolution(Site::Resource, Site::Chain(0), 0.0).unwrap();
        assert!(m.state().matrix().max_abs_diff(before.matrix()) < 1e-15);
    }

    #[test]
    fn two_eighth_pulses_make_a_swap() {
        let data = crate::linalg::random::random_state_with(4, 2, &mut crate::rng::StreamRng::new(3));
        let mut a = ChainMachine::with_state(2, &data).unwrap();
        let mut b = a.clone();
        let q = std::f64::consts::FRAC_PI_8;
        a.exchange_evolution(Site::Chain(0), Site::Chain(1), q).unwrap();
        a.exchange_evolution(Site::Chain(0), Site::Chain(1), q).unwrap();
        b.exchange_evolution(Site::Chain(0), Site::Chain(1), 2.0 * q).unwrap();
        assert!(a.state().matrix().max_abs_diff(b.state().matrix()) < 1e-14);
        assert!((a.global_phase() - b.global_phase()).abs() < 1e-15);
    }

    #[test]
    fn non_adjacent_rejected() {
        let mut m = basis_machine(3, 0);
        assert!(m.exchange_evolution(Site::Chain(0), Site::Chain(2), 0.1).is_err());
        assert!(m.exchange_evolution(Site::Resource, Site::Chain(1), 0.1).is_err());
        assert!(m.exchange_evolution(Site::Chain(2), Site::Chain(3), 0.1).is_err());
    }

    #[test]
    fn routing_counts_and_round_trip() {
        let data = crate::linalg::random::random_state_with(16, 3, &mut crate::rng::StreamRng::new(5));
        let mut m = ChainMachine::with_state(4, &data).unwrap();
        assert_eq!(m.route(2, 2).unwrap(), 0);
        assert_eq!(m.route(3, 0).unwrap(), 3);
        assert_eq!(m.position_of(3).unwrap(), 0);
        assert_eq!(m.position_of(0).unwrap(), 1);
        // Logical content is unchanged by routing.
        assert!(m.data_state().unwrap().matrix().max_abs_diff(data.matrix()) < 1e-12);
        assert_eq!(m.route(3, 3).unwrap(), 3);
        assert_eq!(m.position, vec![0, 1, 2, 3]);
        let joint = kron(&DensityMatrix::basis(2, 0).into_matrix(), data.matrix());
        assert!(m.state().matrix().max_abs_diff(&joint) < 1e-10);
        assert_eq!(m.exchange_pulses(), 6);
    }

    #[test]
    fn zero_angle_consumes_one_resource() {
        let mut m = basis_machine(1, 1);
        let req = RotationRequest::new(0, Axis::Z, 0.0, 0.1).unwrap();
        assert_eq!(m.resource_rotation(&req).unwrap(), 1);
        assert_eq!(m.resources().zeros, 1);
        assert!(m.data_state().unwrap().matrix().max_abs_diff(DensityMatrix::basis(2, 1).matrix()) < 1e-14);
    }

    #[test]
    fn z_pi_flips_plus() {
        let delta = 0.01;
        let mut m = ChainMachine::with_state(1, &PureState::plus().to_density()).unwrap();
        m.resource_rotation(&RotationRequest::new(0, Axis::Z, std::f64::consts::PI, delta).unwrap()).unwrap();
        let d = trace_distance(&m.data_state().unwrap(), &PureState::minus().to_density()).unwrap();
        assert!(d <= delta, "{d}");
    }

    #[test]
    fn x_pi_flips_zero() {
        let delta = 0.01;
        let mut m = basis_machine(1, 0);
        m.resource_rotation(&RotationRequest::new(0, Axis::X, std::f64::consts::PI, delta).unwrap()).unwrap();
        let d = trace_distance(&m.data_state().unwrap(), &DensityMatrix::basis(2, 1)).unwrap();
        assert!(d <= delta, "{d}");
        assert_eq!(m.resources().pluses, LmrConfig::new(std::f64::consts::PI, delta).unwrap().steps());
    }

    #[test]
    fn rotation_requires_position_zero() {
        let mut m = basis_machine(2, 0);
        let req = RotationRequest::new(1, Axis::Z, 1.0, 0.1).unwrap();
        assert!(m.resource_rotation(&req).is_err());
        m.route(1, 0).unwrap();
        assert!(m.resource_rotation(&req).is_ok());
    }

    #[test]
    fn log_holds_only_loads_and_adjacent_exchanges() {
        let mut m = basis_machine(3, 0);
        m.route(2, 0).unwrap();
        m.resource_rotation(&RotationRequest::new(2, Axis::X, 1.0, 0.1).unwrap()).unwrap();
        for p in m.gate_log() {
            if let Pulse::Exchange { a, b, .. } = p {
                assert_eq!(a.register().abs_diff(b.register()), 1);
            }
        }
        let loads = m.gate_log().iter().filter(|p| matches!(p, Pulse::Load { .. })).count() as u64;
        assert_eq!(loads, m.resources().total());
    }

    #[test]
    fn depolarized_resources_still_converge() {
        let target = {
            let u = super::super::euler::x_rotation(1.0);
            DensityMatrix::new(DensityMatrix::basis(2, 0).matrix().conjugate_by(&u)).unwrap()
        };
        for delta in [0.05, 0.01] {
            let mut m = basis_machine(1, 0).with_depolarize(0.05).unwrap();
            m.resource_rotation(&RotationRequest::new(0, Axis::X, 1.0, delta).unwrap()).unwrap();
            let d = trace_distance(&m.data_state().unwrap(), &target).unwrap();
            assert!(d <= delta, "{delta}: {d}");
        }
    }

    #[test]
    fn angle_normalized() {
        let r = RotationRequest::new(0, Axis::Z, -1.0, 0.1).unwrap();
        assert!((r.angle() - (std::f64::consts::TAU - 1.0)).abs() < 1e-15);
    }
}
