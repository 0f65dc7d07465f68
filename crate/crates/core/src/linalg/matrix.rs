use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix, the carrier for operators, unitaries and states.
///
/// Entries are always finite; every constructor that accepts external data
/// checks this.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Builds a matrix from nested rows of real/imaginary pairs. Panics on ragged input;
    /// intended for literals in code and tests.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self(DMatrix::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO }))
    }

    pub fn real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        }))
    }

    /// |a><b| for column vectors a, b.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self(DMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj()))
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Side length of a square matrix, or an error.
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] = value;
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let (r, c) = (self.rows(), self.cols());
        (0..r * c).map(|k| self.0[(k / c, k % c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `u * self * u^dag`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        Self(&a.0 * &b.0 - &b.0 * &a.0)
    }

    /// `{a, b} = ab + ba`.
    pub fn anticommutator(a: &Self, b: &Self) -> Self {
        Self(&a.0 * &b.0 + &b.0 * &a.0)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let x = DVector::from_column_slice(v);
        (&self.0 * x).iter().copied().collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Entrywise maximum modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise maximum modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Operator (spectral) norm via singular values.
    pub fn operator_norm(&self) -> f64 {
        self.0
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// Schatten-1 norm via singular values.
    pub fn trace_norm(&self) -> f64 {
        self.0.clone().svd(false, false).singular_values.iter().sum()
    }

    /// max |M - M^dag| entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// max |U^dag U - 1| entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = Self(self.0.adjoint() * &self.0);
        prod.max_abs_diff(&Self::identity(self.rows()))
    }

    /// `(M + M^dag) / 2`, removing anti-Hermitian roundoff.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        self.square_dim()?;
        let deviation = self.hermiticity_defect();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn require_unitary(&self, tol: f64) -> Result<()> {
        self.square_dim()?;
        let deviation = self.unitarity_defect();
        if deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(())
    }

    /// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues and
    /// the unitary whose columns are the matching eigenvectors.
    pub fn eigh(&self) -> (Vec<f64>, ComplexMatrix) {
        let eig = self.hermitian_part().0.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.rows();
        let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        (values, Self(vectors))
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn eigvalsh(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .hermitian_part()
            .0
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Eigenvalues of a general square matrix via complex Schur form.
    pub fn eigenvalues(&self) -> Vec<C64> {
        let schur = self.0.clone().schur();
        let (_, t) = schur.unpack();
        (0..t.nrows()).map(|i| t[(i, i)]).collect()
    }

    /// Entries of column `j`.
    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 + rhs.0)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 - rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix(self.0 * rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Common single-qubit operators.
pub mod paulis {
    use super::*;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    pub fn hadamard() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_row_major_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::from_row_major(2, 2, &[ONE; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        let nan = C64::new(f64::NAN, 0.0);
        assert_eq!(
            ComplexMatrix::from_row_major(1, 1, &[nan]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn row_major_round_trip() {
        let entries: Vec<C64> = (0..6).map(|k| C64::new(k as f64, -(k as f64))).collect();
        let m = ComplexMatrix::from_row_major(2, 3, &entries).unwrap();
        assert_eq!(m.get(1, 0), entries[3]);
        assert_eq!(m.to_row_major(), entries);
    }

    #[test]
    fn eigh_reconstructs() {
        let m = paulis::y().scale_real(0.3) + paulis::z().scale_real(0.7);
        let (vals, vecs) = m.eigh();
        assert!(vals[0] < vals[1]);
        let d = ComplexMatrix::real_diagonal(&vals);
        let back = d.conjugate_by(&vecs);
        assert!(back.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn general_eigenvalues_of_diagonal_unitary() {
        let u = ComplexMatrix::diagonal(&[C64::from_polar(1.0, 0.4), C64::from_polar(1.0, -2.0)]);
        let mut ev = u.eigenvalues();
        ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        assert!((ev[0] - C64::from_polar(1.0, -2.0)).norm() < 1e-14);
        assert!((ev[1] - C64::from_polar(1.0, 0.4)).norm() < 1e-14);
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (paulis::x(), paulis::y(), paulis::z());
        assert!((&x * &y).max_abs_diff(&z.scale(I)) < 1e-15);
        assert!(ComplexMatrix::anticommutator(&x, &z).max_abs() < 1e-15);
        assert!(ComplexMatrix::commutator(&x, &x).max_abs() < 1e-15);
    }
}
