//! Ancilla-controlled cyclic-shift gadgets. The circuit: ancilla in
//! `a|0> + b|1>` with `a = 1/sqrt 2`, `b = e^{-i phi}/sqrt 2`; controlled shift
//! on `rho_1 (x) ... (x) rho_k`; trace all but the first register; Hadamard on
//! the ancilla; dephase it. The diagonal blocks are the output pair.

use super::block::BlockPair;
use crate::error::{Error, Result};
use crate::linalg::tensor::{cyclic_shift, from_qubit_blocks, kron, kron_all, partial_trace, qubit_block};
use crate::linalg::{paulis, ComplexMatrix, DensityMatrix, PureState, C64};

fn ancilla(phi: f64) -> PureState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![C64::new(s, 0.0), C64::from_polar(s, -phi)]).expect("unit norm")
}

/// `sum_{ab} |a><b| (x) Tr_{2..k} block_ab` on the ancilla plus first register.
fn trace_tail(joint: &ComplexMatrix, d: usize, k: usize) -> Result<ComplexMatrix> {
    let tail = d.pow((k - 1) as u32);
    let mut blocks = Vec::with_capacity(4);
    for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let b = qubit_block(joint, r, c);
        blocks.push(if tail == 1 { b } else { partial_trace(&b, &[d, tail], 1)? });
    }
    Ok(from_qubit_blocks([[&blocks[0], &blocks[1]], [&blocks[2], &blocks[3]]]))
}

/// Runs the circuit on `states` (all of one dimension, `k >= 2`).
fn run_circuit(states: &[&DensityMatrix], phi: f64) -> Result<BlockPair> {
    let k = states.len();
    let d = states[0].dim();
    if let Some(bad) = states.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: bad.dim() });
    }
    if !phi.is_finite() {
        return Err(Error::NonFinite);
    }
    let shift = cyclic_shift(k, d);
    let u = crate::lmr::controlled(&shift);
    let product = kron_all(states.iter().map(|s| s.matrix()));
    let joint = kron(&ancilla(phi).projector(), &product).conjugate_by(&u);
    let reduced = trace_tail(&joint, d, k)?;
    let h = kron(&paulis::hadamard(), &ComplexMatrix::identity(d));
    let rotated = reduced.conjugate_by(&h);
    BlockPair::new(qubit_block(&rotated, 0, 0), qubit_block(&rotated, 1, 1))
}

/// Two-state gadget: `plus - minus = (e^{i phi} rho1 rho2 + e^{-i phi} rho2 rho1) / 2`.
pub fn commutator_gadget(rho1: &DensityMatrix, rho2: &DensityMatrix, phi: f64) -> Result<BlockPair> {
    run_circuit(&[rho1, rho2], phi)
}

/// `k`-state gadget: `plus - minus = (e^{i phi} rho_1...rho_k + h.c.) / 2`.
///
/// For `k = 1` only `phi = 0` is accepted and returns `plus = rho_1`.
pub fn polynomial_gadget(states: &[&DensityMatrix], phi: f64) -> Result<BlockPair> {
    match states {
        [] => Err(Error::invalid("polynomial gadget needs at least one state")),
        [rho] => {
            if phi != 0.0 {
                return Err(Error::invalid(
                    "single-state gadget is only defined for phi = 0; route degree-1 terms through a linear combination",
                ));
            }
            Ok(BlockPair::unsigned(rho))
        }
        _ => run_circuit(states, phi),
    }
}

/// `(e^{i phi} A_1...A_k + e^{-i phi} A_k...A_1) / 2` by direct multiplication.
pub fn product_term(states: &[&ComplexMatrix], phi: f64) -> Result<ComplexMatrix> {
    let first = states.first().ok_or_else(|| Error::invalid("empty product"))?;
    let d = first.square_dim()?;
    let mut forward = ComplexMatrix::identity(d);
    let mut backward = ComplexMatrix::identity(d);
    for s in states {
        if s.rows() != d || !s.is_square() {
            return Err(Error::DimensionMismatch { expected: d, found: s.rows() });
        }
        forward = &forward * *s;
        backward = *s * &backward;
    }
    let z = C64::from_polar(0.5, phi);
    Ok(forward.scale(z) + backward.scale(z.conj()))
}
