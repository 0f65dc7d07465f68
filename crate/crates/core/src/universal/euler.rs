use std::f64::consts::{PI, TAU};

use crate::error::Result;
use crate::linalg::{paulis, ComplexMatrix, C64, I, ONE, ZERO};

/// Unitaries are accepted within this defect.
pub const UNITARY_TOL: f64 = 1e-10;
const DEGENERATE: f64 = 1e-11;

/// `Z_theta = exp(-i theta |0><0|) = diag(e^{-i theta}, 1)`.
pub fn z_rotation(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[C64::from_polar(1.0, -theta), ONE])
}

/// `X_phi = exp(-i phi |+><+|) = H Z_phi H`.
pub fn x_rotation(phi: f64) -> ComplexMatrix {
    z_rotation(phi).conjugate_by(&paulis::hadamard())
}

/// Angle reduced to `[0, 2 pi)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if TAU - r < 1e-12 {
        0.0
    } else {
        r
    }
}

/// Representative of an angle in `(-pi, pi]`.
pub fn signed_angle(a: f64) -> f64 {
    let r = normalize_angle(a);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// `X_phi Z_theta X_xi = e^{i global_phase} u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub xi: f64,
    pub global_phase: f64,
}

impl EulerAngles {
    pub fn product(&self) -> ComplexMatrix {
        &(&x_rotation(self.phi) * &z_rotation(self.theta)) * &x_rotation(self.xi)
    }

    /// `max |X_phi Z_theta X_xi - e^{i gamma} u|`.
    pub fn reconstruction_error(&self, u: &ComplexMatrix) -> f64 {
        self.product().max_abs_diff(&u.scale(C64::from_polar(1.0, self.global_phase)))
    }
}

fn circular(a: f64) -> f64 {
    signed_angle(a).abs()
}

/// Splits a 2x2 unitary into `X_phi Z_theta X_xi` up to phase. All angles lie
/// in `[0, 2 pi)`; of the two solutions the one with `xi` nearest zero is
/// returned, so X-rotations come back as `(phi, 0, 0)`.
pub fn euler_decompose(u: &ComplexMatrix) -> Result<EulerAngles> {
    if u.square_dim()? != 2 {
        return Err(crate::Error::DimensionMismatch { expected: 2, found: u.rows() });
    }
    u.require_unitary(UNITARY_TOL)?;
    // H u H is proportional to R_z(phi) R_x(theta) R_z(xi).
    let v = u.conjugate_by(&paulis::hadamard());
    let det = v.get(0, 0) * v.get(1, 1) - v.get(0, 1) * v.get(1, 0);
    let v = v.scale(ONE / det.sqrt());
    let (v00, v10) = (v.get(0, 0), v.get(1, 0));
    let half = v10.norm().atan2(v00.norm());
    let theta = 2.0 * half;
    let (mut a, mut c) = if half.sin() < DEGENERATE {
        (-2.0 * v00.arg(), 0.0)
    } else if half.cos() < DEGENERATE {
        (2.0 * (I * v10).arg(), 0.0)
    } else {
        let sum = -2.0 * v00.arg();
        let diff = 2.0 * (I * v10).arg();
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    a = normalize_angle(a);
    c = normalize_angle(c);
    let first = (a, normalize_angle(theta), c);
    let second = (normalize_angle(a + PI), normalize_angle(TAU - theta), normalize_angle(c + PI));
    let key = |(p, _, x): (f64, f64, f64)| (circular(x), circular(p));
    let (phi, theta, xi) = if key(second) < key(first) { second } else { first };
    let mut angles = EulerAngles { phi, theta, xi, global_phase: 0.0 };
    let overlap = u.adjoint().matmul(&angles.product()).trace();
    angles.global_phase = if overlap.norm() > 0.0 { overlap.arg() } else { ZERO.arg() };
    Ok(angles)
}
