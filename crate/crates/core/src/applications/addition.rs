use std::f64::consts::FRAC_PI_2;

use super::Protocol;
use crate::error::{Error, Result};
use crate::gadgets::{polynomial_matrix, simulate_polynomial, HermitianPolynomial, Mode, PolynomialTerm};
use crate::linalg::{DensityMatrix, PureState, C64};
use crate::lmr::{ideal_conjugation, LmrConfig};

/// Angle tolerance for the degenerate cases `Delta in {0, pi/2}`.
pub const DEGENERATE_TOL: f64 = 1e-8;

/// `Delta = arccos |<psi1|psi2>|`.
pub fn overlap_angle(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    if psi1.dim() != psi2.dim() {
        return Err(Error::DimensionMismatch { expected: psi1.dim(), found: psi2.dim() });
    }
    Ok(psi1.inner(psi2).norm().clamp(0.0, 1.0).acos())
}

/// `(sin(Delta - chi)|psi1> + e^{i phi} sin(chi)|psi2>) / sin(Delta)` where
/// `e^{i phi} = <psi2|psi1> / |<psi2|psi1>|`.
pub fn superposition_target(psi1: &PureState, psi2: &PureState, chi: f64) -> Result<PureState> {
    let delta = overlap_angle(psi1, psi2)?;
    check_angle(delta)?;
    let ov = psi2.inner(psi1);
    let phase = ov / ov.norm();
    let a = (delta - chi).sin() / delta.sin();
    let b = phase * (chi.sin() / delta.sin());
    let amps: Vec<C64> = psi1
        .amplitudes()
        .iter()
        .zip(psi2.amplitudes())
        .map(|(x, y)| x * a + y * b)
        .collect();
    PureState::normalized(amps)
}

fn check_angle(delta: f64) -> Result<()> {
    if delta < DEGENERATE_TOL || (delta - FRAC_PI_2).abs() < DEGENERATE_TOL {
        return Err(Error::invalid(
            "states are parallel or orthogonal; the commutator vanishes",
        ));
    }
    Ok(())
}

/// Rotates `|psi1>` toward `|psi2>` by angle `chi` within their span by
/// evolving under `i[|psi2><psi2|, |psi1><psi1|]` for `t = chi / (cos D sin D)`.
/// `budget.t` is replaced by that time.
pub fn add_states(
    psi1: &PureState,
    psi2: &PureState,
    chi: f64,
    protocol: Protocol,
    budget: &LmrConfig,
) -> Result<DensityMatrix> {
    let delta = overlap_angle(psi1, psi2)?;
    check_angle(delta)?;
    if !chi.is_finite() {
        return Err(Error::NonFinite);
    }
    let t = chi / (delta.cos() * delta.sin());
    let term = PolynomialTerm::new(vec![1, 0], FRAC_PI_2, 2.0)?;
    let poly = HermitianPolynomial::new(2, vec![term])?;
    let states = [psi1.to_density(), psi2.to_density()];
    let sigma = states[0].clone();
    match protocol {
        Protocol::Ideal => ideal_conjugation(&polynomial_matrix(&poly, &states)?, t, &sigma),
        Protocol::Lmr => {
            let config = budget.with_time(t)?;
            Ok(simulate_polynomial(&sigma, &poly, &states, &config, Mode::Exact, 0)?.state)
        }
    }
}
