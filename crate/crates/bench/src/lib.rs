//! Shared fixtures for the criterion benches.

use dmexp_core::linalg::random::{haar_state, random_state_with};
use dmexp_core::rng::StreamRng;
use dmexp_core::DensityMatrix;

/// A mixed target and a rank-one generator of dimension `dim`.
pub fn state_pair(dim: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    let mut rng = StreamRng::new(seed);
    let sigma = random_state_with(dim, dim, &mut rng);
    let rho = haar_state(dim, &mut rng).to_density();
    (sigma, rho)
}

/// `k` random pure states of dimension `dim`.
pub fn pure_states(k: usize, dim: usize, seed: u64) -> Vec<DensityMatrix> {
    let mut rng = StreamRng::new(seed);
    (0..k).map(|_| haar_state(dim, &mut rng).to_density()).collect()
}
