//! Seeded random inputs: Haar states, mixed states of chosen rank, unitaries.

use super::matrix::{ComplexMatrix, C64};
use super::state::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::rng::StreamRng;

fn gaussian_vector(n: usize, rng: &mut StreamRng) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.normal(), rng.normal())).collect()
}

/// Haar-random pure state.
pub fn haar_state(dim: usize, rng: &mut StreamRng) -> PureState {
    loop {
        if let Ok(psi) = PureState::normalized(gaussian_vector(dim, rng)) {
            return psi;
        }
    }
}

/// Rank-`rank` density matrix obtained by tracing the `rank`-dimensional factor
/// off a Haar-random pure state on `dim * rank`. Deterministic in `seed`.
pub fn random_state(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    if rank == 0 || rank > dim {
        return Err(Error::invalid(format!("rank {rank} outside [1, {dim}]")));
    }
    let mut rng = StreamRng::new(seed);
    Ok(random_state_with(dim, rank, &mut rng))
}

/// As [`random_state`], drawing from an existing stream.
pub fn random_state_with(dim: usize, rank: usize, rng: &mut StreamRng) -> DensityMatrix {
    let psi = haar_state(dim * rank, rng);
    let a = psi.amplitudes();
    // psi_{i,k} with i the system index and k the purifying index.
    let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
        (0..rank).map(|k| a[i * rank + k] * a[j * rank + k].conj()).sum()
    });
    DensityMatrix::from_channel_output(m).expect("partial trace of a pure state is a state")
}

/// Haar-random unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn haar_unitary(dim: usize, rng: &mut StreamRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = gaussian_vector(dim, rng);
        for c in &cols {
            let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random Hermitian matrix with entries of order `scale`.
pub fn random_hermitian(dim: usize, scale: f64, rng: &mut StreamRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| C64::new(rng.normal(), rng.normal()));
    (&g + &g.adjoint()).scale_real(0.5 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_is_pure() {
        for seed in 0..5 {
            let rho = random_state(2, 1, seed).unwrap();
            assert!((rho.purity() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn full_rank_state_is_valid() {
        let rho = random_state(4, 4, 9).unwrap();
        let eig = rho.matrix().eigvalsh();
        assert!(eig[0] > 0.0);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn same_seed_is_bit_identical() {
        assert_eq!(random_state(3, 2, 42).unwrap(), random_state(3, 2, 42).unwrap());
        assert_ne!(random_state(3, 2, 42).unwrap(), random_state(3, 2, 43).unwrap());
    }

    #[test]
    fn rank_out_of_range_rejected() {
        assert!(random_state(2, 3, 0).is_err());
        assert!(random_state(2, 0, 0).is_err());
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = StreamRng::new(4);
        for d in 1..6 {
            assert!(haar_unitary(d, &mut rng).unitarity_defect() < 1e-12);
        }
    }
}
