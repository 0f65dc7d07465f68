use crate::error::{Error, Result};
use crate::linalg::tensor::{kron, partial_trace, swap_registers};
use crate::linalg::{ComplexMatrix, DensityMatrix, I, VALIDATION_TOL};
use crate::lmr::PartialSwapKernel;
use crate::rng::StreamRng;

/// Ancilla-flagged pair `|0><0| (x) plus + |1><1| (x) minus` with effective
/// Hamiltonian `plus - minus`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPair {
    plus: ComplexMatrix,
    minus: ComplexMatrix,
}

fn require_psd_block(m: &ComplexMatrix, name: &str) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let herm = m.hermiticity_defect();
    if herm > VALIDATION_TOL {
        return Err(Error::InvalidState(format!("{name} block not Hermitian (defect {herm:e})")));
    }
    let min = m.eigvalsh().first().copied().unwrap_or(0.0);
    if min < -VALIDATION_TOL {
        return Err(Error::InvalidState(format!("{name} block has eigenvalue {min:e}")));
    }
    Ok(())
}

impl BlockPair {
    pub fn new(plus: ComplexMatrix, minus: ComplexMatrix) -> Result<Self> {
        let d = plus.square_dim()?;
        let e = minus.square_dim()?;
        if d != e {
            return Err(Error::DimensionMismatch { expected: d, found: e });
        }
        require_psd_block(&plus, "plus")?;
        require_psd_block(&minus, "minus")?;
        let total = plus.trace().re + minus.trace().re;
        if (total - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidState(format!("block traces sum to {total}, not 1")));
        }
        Ok(Self {
            plus: plus.hermitian_part(),
            minus: minus.hermitian_part(),
        })
    }

    /// `plus = rho`, `minus = 0`.
    pub fn unsigned(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        Self {
            plus: rho.matrix().clone(),
            minus: ComplexMatrix::zeros(d, d),
        }
    }

    /// The whole state on one side: `rho` in `plus` when `positive`, else in `minus`.
    pub fn flagged(rho: &DensityMatrix, positive: bool) -> Self {
        let pair = Self::unsigned(rho);
        if positive {
            pair
        } else {
            Self {
                plus: pair.minus,
                minus: pair.plus,
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.plus.rows()
    }

    pub fn plus(&self) -> &ComplexMatrix {
        &self.plus
    }

    pub fn minus(&self) -> &ComplexMatrix {
        &self.minus
    }

    /// `plus - minus`.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        &self.plus - &self.minus
    }

    /// The flagged state as a density matrix on `C (x) A`.
    pub fn joint(&self) -> Result<DensityMatrix> {
        let d = self.dim();
        let z = ComplexMatrix::zeros(d, d);
        DensityMatrix::new(crate::linalg::tensor::from_qubit_blocks([
            [&self.plus, &z],
            [&z, &self.minus],
        ]))
    }

    /// `|1><1| (x) plus` and `|1><1| (x) minus`: the pair whose Hamiltonian is
    /// `|1><1| (x) (plus - minus)`, i.e. the controlled version.
    pub fn controlled(&self) -> Self {
        let one = DensityMatrix::basis(2, 1);
        Self {
            plus: kron(one.matrix(), &self.plus),
            minus: kron(one.matrix(), &self.minus),
        }
    }

    /// Convex combination `sum_i w_i pair_i`; weights must be a distribution.
    pub fn mixture(weights: &[f64], pairs: &[BlockPair]) -> Result<Self> {
        if weights.len() != pairs.len() || pairs.is_empty() {
            return Err(Error::invalid("mixture needs one weight per pair"));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("mixture weights must be a probability distribution"));
        }
        let d = pairs[0].dim();
        let mut plus = ComplexMatrix::zeros(d, d);
        let mut minus = ComplexMatrix::zeros(d, d);
        for (w, p) in weights.iter().zip(pairs) {
            if p.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
            }
            plus += &p.plus.scale_real(*w);
            minus += &p.minus.scale_real(*w);
        }
        Self::new(plus, minus)
    }
}

/// Signed partial swap `e^{-iS' d}`, `S' = |0><0| (x) S - |1><1| (x) S`, in closed
/// form: the plus block evolves forward, the minus block backward.
#[derive(Clone, Debug)]
pub struct SignedKernel {
    plus: PartialSwapKernel,
    minus: PartialSwapKernel,
}

impl SignedKernel {
    pub fn new(pair: &BlockPair, target_dim: usize) -> Result<Self> {
        Ok(Self {
            plus: PartialSwapKernel::new(pair.plus(), target_dim)?,
            minus: PartialSwapKernel::new(pair.minus(), target_dim)?,
        })
    }

    pub fn apply(&self, sigma: &ComplexMatrix, delta: f64) -> ComplexMatrix {
        self.plus.apply(sigma, delta) + self.minus.apply(sigma, -delta)
    }
}

/// One signed step: `e^{-iS' delta}` on `pair (x) sigma`, ancilla and fresh register traced out.
pub fn signed_lmr_step(sigma: &DensityMatrix, pair: &BlockPair, delta_step: f64) -> Result<DensityMatrix> {
    if !delta_step.is_finite() {
        return Err(Error::NonFinite);
    }
    let kernel = SignedKernel::new(pair, sigma.dim())?;
    DensityMatrix::from_channel_output(kernel.apply(sigma.matrix(), delta_step))
}

/// Literal evaluation of [`signed_lmr_step`] on `sigma (x) C (x) F`.
pub fn signed_lmr_step_explicit(
    sigma: &DensityMatrix,
    pair: &BlockPair,
    delta_step: f64,
) -> Result<DensityMatrix> {
    let da = pair.dim();
    if da == 0 || sigma.dim() % da != 0 {
        return Err(Error::DimensionMismatch { expected: da, found: sigma.dim() });
    }
    let db = sigma.dim() / da;
    // registers: A, B, C (ancilla), F (fresh)
    let dims = [da, db, 2, da];
    let s = swap_registers(&dims, 0, 3);
    let zc = crate::linalg::paulis::z();
    let sz = &kron(&ComplexMatrix::identity(da * db), &kron(&zc, &ComplexMatrix::identity(da))) * &s;
    let n = sz.rows();
    let u = ComplexMatrix::identity(n).scale_real(delta_step.cos()) - sz.scale(I * delta_step.sin());
    let joint = kron(sigma.matrix(), pair.joint()?.matrix());
    let out = partial_trace(&joint.conjugate_by(&u), &[da * db, 2 * da], 1)?;
    DensityMatrix::from_channel_output(out)
}

/// Linear combination `H = sum_j c_j rho_j` encoded as flagged pairs.
#[derive(Clone, Debug)]
pub struct LinearCombination {
    states: Vec<DensityMatrix>,
    coeffs: Vec<f64>,
    norm: f64,
}

impl LinearCombination {
    pub fn new(states: Vec<DensityMatrix>, coeffs: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != coeffs.len() {
            return Err(Error::invalid("need one coefficient per state"));
        }
        let d = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: bad.dim() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = coeffs.iter().map(|c| c.abs()).sum();
        if norm <= 0.0 {
            return Err(Error::invalid("coefficients are all zero"));
        }
        Ok(Self { states, coeffs, norm })
    }

    /// `c = sum_j |c_j|`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        let d = self.dim();
        self.states
            .iter()
            .zip(&self.coeffs)
            .fold(ComplexMatrix::zeros(d, d), |acc, (s, c)| acc + s.matrix().scale_real(*c))
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.abs() / self.norm).collect()
    }

    /// The mixture pair: `plus - minus = H / c`.
    pub fn exact_pair(&self) -> BlockPair {
        let d = self.dim();
        let mut plus = ComplexMatrix::zeros(d, d);
        let mut minus = ComplexMatrix::zeros(d, d);
        for (s, c) in self.states.iter().zip(&self.coeffs) {
            let w = s.matrix().scale_real(c.abs() / self.norm);
            if *c > 0.0 {
                plus += &w;
            } else {
                minus += &w;
            }
        }
        BlockPair { plus, minus }
    }

    /// Draws `j ~ |c_j| / c`; returns `j` and its pure-sign pair.
    pub fn sample_pair(&self, rng: &mut StreamRng) -> (usize, BlockPair) {
        let j = rng.weighted_index(&self.probabilities());
        (j, BlockPair::flagged(&self.states[j], self.coeffs[j] >= 0.0))
    }

    /// Endless stream of sampled pairs.
    pub fn sampled_pairs(&self, seed: u64) -> impl Iterator<Item = BlockPair> + '_ {
        let mut rng = StreamRng::new(seed);
        std::iter::repeat_with(move || self.sample_pair(&mut rng).1)
    }
}

/// How stochastic constructions pick their per-step pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// The mixture over all choices.
    Exact,
    /// One seeded draw per step.
    Sampled,
}

/// Either the exact mixture pair or a seeded stream of sampled pairs.
pub enum PairSource<'a> {
    Exact(BlockPair),
    Sampled(Box<dyn Iterator<Item = BlockPair> + 'a>),
}

/// Flagged pair for `H = sum_j c_j rho_j` (normalized by `c = sum |c_j|`).
pub fn mix_linear_combination<'a>(
    combination: &'a LinearCombination,
    mode: Mode,
    seed: u64,
) -> PairSource<'a> {
    match mode {
        Mode::Exact => PairSource::Exact(combination.exact_pair()),
        Mode::Sampled => PairSource::Sampled(Box::new(combination.sampled_pairs(seed))),
    }
}

/// Evolves `sigma` under `c H'` for time `t`, where `H' = plus - minus` of the
/// pairs drawn from `source`: `n = budget(c t)` signed steps of size `c t / n`.
pub fn simulate_pairs(
    sigma: &DensityMatrix,
    source: PairSource<'_>,
    scale: f64,
    config: &crate::lmr::LmrConfig,
) -> Result<(DensityMatrix, u64)> {
    let scaled = config.with_time(scale * config.t)?;
    let n = scaled.steps();
    let delta = scaled.t / n as f64;
    let out = match source {
        PairSource::Exact(pair) => {
            let kernel = SignedKernel::new(&pair, sigma.dim())?;
            (0..n).fold(sigma.matrix().clone(), |s, _| kernel.apply(&s, delta))
        }
        PairSource::Sampled(mut pairs) => {
            let mut state = sigma.matrix().clone();
            for _ in 0..n {
                let pair = pairs.next().ok_or_else(|| Error::invalid("pair stream ended"))?;
                state = SignedKernel::new(&pair, sigma.dim())?.apply(&state, delta);
            }
            state
        }
    };
    Ok((DensityMatrix::from_channel_output(out)?, n))
}
