use super::matrix::{ComplexMatrix, C64};
use super::state::VALIDATION_TOL;
use crate::error::{Error, Result};

/// `exp(-i h t)` for Hermitian `h`, via eigendecomposition.
pub fn herm_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    h.require_hermitian(VALIDATION_TOL)?;
    if !h.is_finite() || !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let (values, vectors) = h.eigh();
    let phases: Vec<C64> = values
        .iter()
        .map(|&lambda| C64::from_polar(1.0, -lambda * t))
        .collect();
    Ok(ComplexMatrix::diagonal(&phases).conjugate_by(&vectors))
}

/// Truncated adjoint series `sum_{n <= order} [a, b]_n / n!` with
/// `[a, b]_0 = b` and `[a, b]_n = [a, [a, b]_{n-1}]`; converges to `e^a b e^-a`.
pub fn hadamard_series(a: &ComplexMatrix, b: &ComplexMatrix, order: usize) -> Result<ComplexMatrix> {
    let n = a.square_dim()?;
    let m = b.square_dim()?;
    if n != m {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m,
        });
    }
    let mut term = b.clone();
    let mut sum = b.clone();
    for k in 1..=order {
        term = ComplexMatrix::commutator(a, &term).scale_real(1.0 / k as f64);
        sum += &term;
    }
    Ok(sum)
}
