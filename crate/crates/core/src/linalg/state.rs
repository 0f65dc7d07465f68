use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted before a state is declared non-PSD.
pub const PSD_TOL: f64 = 1e-10;
/// Validation tolerance for Hermitian/unitary operator inputs.
pub const VALIDATION_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` as a density matrix without modifying it.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.square_dim()?;
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = matrix.hermiticity_defect();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace {:.3e}{:+.3e}i differs from 1",
                tr.re, tr.im
            )));
        }
        let min_eig = matrix.eigvalsh().first().copied().unwrap_or(0.0);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Re-validates the output of a trace-preserving channel: removes the
    /// anti-Hermitian roundoff, clips eigenvalues in `[-PSD_TOL, 0)` to zero and
    /// renormalizes a trace within `VALIDATION_TOL` of one.
    pub fn from_channel_output(matrix: ComplexMatrix) -> Result<Self> {
        matrix.square_dim()?;
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = matrix.hermiticity_defect();
        if herm > VALIDATION_TOL {
            return Err(Error::InvalidDensity(format!(
                "channel output not Hermitian (defect {herm:e})"
            )));
        }
        let mut m = matrix.hermitian_part();
        let (values, vectors) = m.eigh();
        if values[0] < -PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "channel output has eigenvalue {:e}",
                values[0]
            )));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidDensity(format!(
                "channel output trace {tr:e} differs from 1"
            )));
        }
        if values[0] < 0.0 {
            let clipped: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
            m = ComplexMatrix::real_diagonal(&clipped).conjugate_by(&vectors);
        }
        let tr = m.trace().re;
        Self::new(m.scale_real(1.0 / tr))
    }

    /// The maximally mixed state `1/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::real_diagonal(probs))
    }

    /// `|k><k|` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        PureState::basis(dim, k).to_density()
    }

    /// `rho(x) = x|0><0| + (1-x)|1><1|`.
    pub fn qubit_mixture(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::invalid(format!("x = {x} outside [0, 1]")));
        }
        Self::diagonal(&[x, 1.0 - x])
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with_pure(&self, psi: &PureState) -> f64 {
        let v = self.matrix.apply(psi.amplitudes());
        psi.amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    }

    /// Expectation value `Tr(rho O)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        (&self.matrix * op).trace()
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            dim: self.dim(),
            entries: self
                .matrix
                .to_row_major()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
        }
    }

    pub fn from_json(json: &StateJson) -> Result<Self> {
        let entries: Vec<C64> = json.entries.iter().map(|p| C64::new(p[0], p[1])).collect();
        Self::new(ComplexMatrix::from_row_major(json.dim, json.dim, &entries)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("state serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: StateJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Wire format of a state: `{"dim": d, "entries": [[re, im], ...]}` in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty amplitude vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState("cannot normalize zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Self { amplitudes }
    }

    /// `|+> = (|0> + |1>)/sqrt(2)`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: vec![C64::new(h, 0.0), C64::new(h, 0.0)],
        }
    }

    /// `|-> = (|0> - |1>)/sqrt(2)`.
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: vec![C64::new(h, 0.0), C64::new(-h, 0.0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        PureState { amplitudes }
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
        }
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
