//! Tensor-product plumbing: Kronecker products, partial traces and register
//! permutations.

use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Standard Kronecker product `a (x) b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a.get(i / br, j / bc) * b.get(i % br, j % bc)
    })
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Traces out subsystem `which` of a square matrix on `dims[0] (x) dims[1] (x) ...`.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], which: usize) -> Result<ComplexMatrix> {
    let n = m.square_dim()?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::invalid("subsystem dimensions must be positive"));
    }
    let total: usize = dims.iter().product();
    if total != n {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: n,
        });
    }
    if which >= dims.len() {
        return Err(Error::invalid(format!(
            "subsystem {which} out of range for {} subsystems",
            dims.len()
        )));
    }
    let left: usize = dims[..which].iter().product();
    let mid = dims[which];
    let right: usize = dims[which + 1..].iter().product();
    let out_dim = left * right;
    Ok(ComplexMatrix::from_fn(out_dim, out_dim, |i, j| {
        let (il, ir) = (i / right, i % right);
        let (jl, jr) = (j / right, j % right);
        (0..mid)
            .map(|k| m.get((il * mid + k) * right + ir, (jl * mid + k) * right + jr))
            .sum()
    }))
}

/// Trace over the leading factor of dimension `first` (the `A` register of `A (x) B`).
pub fn trace_first(m: &ComplexMatrix, first: usize) -> Result<ComplexMatrix> {
    let n = m.square_dim()?;
    if first == 0 || n % first != 0 {
        return Err(Error::DimensionMismatch {
            expected: first,
            found: n,
        });
    }
    partial_trace(m, &[first, n / first], 0)
}

/// Trace over the trailing factor of dimension `last`.
pub fn trace_last(m: &ComplexMatrix, last: usize) -> Result<ComplexMatrix> {
    let n = m.square_dim()?;
    if last == 0 || n % last != 0 {
        return Err(Error::DimensionMismatch {
            expected: last,
            found: n,
        });
    }
    partial_trace(m, &[n / last, last], 1)
}

/// `op (x) 1_rest`, embedding an operator on the leading register.
pub fn embed_first(op: &ComplexMatrix, rest: usize) -> ComplexMatrix {
    if rest == 1 {
        return op.clone();
    }
    kron(op, &ComplexMatrix::identity(rest))
}

/// Permutation matrix of `S_k` on `k` registers of dimension `d`:
/// `|j_1 j_2 ... j_k> -> |j_k j_1 ... j_{k-1}>`.
pub fn cyclic_shift(k: usize, d: usize) -> ComplexMatrix {
    assert!(k >= 2 && d >= 1, "cyclic_shift needs k >= 2 and d >= 1");
    let n = d.pow(k as u32);
    let mut m = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        let digits = to_digits(col, k, d);
        let mut shifted = Vec::with_capacity(k);
        shifted.push(digits[k - 1]);
        shifted.extend_from_slice(&digits[..k - 1]);
        m.set(from_digits(&shifted, d), col, ONE);
    }
    m
}

/// Swap of two `d`-dimensional registers, `S|i,j> = |j,i>`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    cyclic_shift(2, d)
}

/// Swap of registers `a` and `b` inside a register list with the given dims.
pub fn swap_registers(dims: &[usize], a: usize, b: usize) -> ComplexMatrix {
    assert_eq!(dims[a], dims[b], "swapped registers must share a dimension");
    let n: usize = dims.iter().product();
    let mut m = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        let mut digits = to_mixed_digits(col, dims);
        digits.swap(a, b);
        m.set(from_mixed_digits(&digits, dims), col, ONE);
    }
    m
}

fn to_digits(mut x: usize, k: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = x % d;
        x /= d;
    }
    out
}

fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

fn to_mixed_digits(mut x: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = x % d;
        x /= d;
    }
    out
}

fn from_mixed_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// `|0><0| (x) a + |1><1| (x) b` as a block-diagonal matrix.
pub fn block_diag(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    assert_eq!(b.rows(), n);
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i / n, j / n) {
        (0, 0) => a.get(i, j),
        (1, 1) => b.get(i - n, j - n),
        _ => ZERO,
    })
}

/// Block `(r, c)` of a matrix on `C^2 (x) C^n`.
pub fn qubit_block(m: &ComplexMatrix, r: usize, c: usize) -> ComplexMatrix {
    let n = m.rows() / 2;
    ComplexMatrix::from_fn(n, n, |i, j| m.get(r * n + i, c * n + j))
}

/// Reassembles a matrix on `C^2 (x) C^n` from its four blocks.
pub fn from_qubit_blocks(blocks: [[&ComplexMatrix; 2]; 2]) -> ComplexMatrix {
    let n = blocks[0][0].rows();
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| blocks[i / n][j / n].get(i % n, j % n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{paulis, C64};
    use crate::linalg::state::{DensityMatrix, PureState};

    #[test]
    fn kron_identity_and_diagonal() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let zi = kron(&paulis::z(), &i2);
        assert_eq!(zi, ComplexMatrix::real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_xx_flips_both_qubits() {
        let xx = kron(&paulis::x(), &paulis::x());
        let out = xx.apply(PureState::basis(4, 0).amplitudes());
        assert_eq!(out, PureState::basis(4, 3).amplitudes());
    }

    #[test]
    fn partial_trace_of_product_state() {
        let rho = DensityMatrix::qubit_mixture(0.3).unwrap();
        let sigma = ComplexMatrix::real_diagonal(&[0.2, 0.3, 0.1]);
        let joint = kron(rho.matrix(), &sigma);
        let tr2 = partial_trace(&joint, &[2, 3], 1).unwrap();
        assert!(tr2.max_abs_diff(&rho.matrix().scale_real(0.6)) < 1e-15);
        let zero = DensityMatrix::basis(2, 0);
        let joint = kron(zero.matrix(), &sigma);
        assert!(partial_trace(&joint, &[2, 3], 0).unwrap().max_abs_diff(&sigma) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap().to_density();
        let reduced = partial_trace(bell.matrix(), &[2, 2], 1).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(reduced.max_abs_diff(mixed.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, &[2, 3], 0),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(partial_trace(&m, &[2, 2], 2).is_err());
        assert!(partial_trace(&ComplexMatrix::zeros(2, 3), &[2], 0).is_err());
    }

    #[test]
    fn swap_operator_rows() {
        let s = swap_operator(2);
        let expected = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(s, expected);
    }

    #[test]
    fn swap_is_hermitian_involution() {
        for d in 1..=4 {
            let s = swap_operator(d);
            assert_eq!(s.adjoint(), s);
            assert_eq!(&s * &s, ComplexMatrix::identity(d * d));
            for i in 0..d {
                for j in 0..d {
                    let ket = PureState::basis(d, i).tensor(&PureState::basis(d, j));
                    let swapped = PureState::basis(d, j).tensor(&PureState::basis(d, i));
                    assert_eq!(s.apply(ket.amplitudes()), swapped.amplitudes());
                }
            }
        }
    }

    #[test]
    fn three_cycle_moves_last_register_first() {
        let s3 = cyclic_shift(3, 2);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    let input = 4 * a + 2 * b + c;
                    let output = 4 * c + 2 * a + b;
                    assert_eq!(s3.apply(PureState::basis(8, input).amplitudes()),
                        PureState::basis(8, output).amplitudes());
                }
            }
        }
        assert!(s3.unitarity_defect() < 1e-15);
    }

    #[test]
    fn swap_registers_matches_swap_operator() {
        assert_eq!(swap_registers(&[3, 3], 0, 1), swap_operator(3));
        // swapping the outer registers of three commutes with the middle one
        let s = swap_registers(&[2, 3, 2], 0, 2);
        let ket = PureState::basis(12, 1 * 6 + 2 * 2);
        let out = s.apply(ket.amplitudes());
        assert_eq!(out, PureState::basis(12, 2 * 2 + 1).amplitudes());
    }

    #[test]
    fn qubit_blocks_round_trip() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(i as f64, j as f64));
        let blocks = [
            [qubit_block(&m, 0, 0), qubit_block(&m, 0, 1)],
            [qubit_block(&m, 1, 0), qubit_block(&m, 1, 1)],
        ];
        let back = from_qubit_blocks([[&blocks[0][0], &blocks[0][1]], [&blocks[1][0], &blocks[1][1]]]);
        assert_eq!(back, m);
    }
}
