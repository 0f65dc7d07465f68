//! The partial-swap protocol: one copy of `rho` per step, each step a partial
//! swap `exp(-i S delta)` between the target register and the fresh copy,
//! followed by discarding the copy.

use crate::error::{Error, Result};
use crate::linalg::tensor::{
    embed_first, from_qubit_blocks, kron, kron_all, partial_trace, qubit_block, swap_registers,
    trace_first,
};
use crate::linalg::{herm_exp, ComplexMatrix, DensityMatrix, C64, I, VALIDATION_TOL};

/// Evolution time, error target and copy budget for one simulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LmrConfig {
    pub t: f64,
    pub delta: f64,
    pub budget_constant: f64,
    pub n_override: Option<u64>,
}

impl LmrConfig {
    pub const DEFAULT_BUDGET_CONSTANT: f64 = 4.0;

    pub fn new(t: f64, delta: f64) -> Result<Self> {
        let config = Self {
            t,
            delta,
            budget_constant: Self::DEFAULT_BUDGET_CONSTANT,
            n_override: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_budget_constant(mut self, constant: f64) -> Result<Self> {
        self.budget_constant = constant;
        self.validate()?;
        Ok(self)
    }

    /// Fixes the number of steps, bypassing the budget formula.
    pub fn with_steps(mut self, n: u64) -> Result<Self> {
        self.n_override = Some(n);
        self.validate()?;
        Ok(self)
    }

    /// Same budget parameters, different evolution time.
    pub fn with_time(mut self, t: f64) -> Result<Self> {
        self.t = t;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() {
            return Err(Error::invalid("evolution time must be finite"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::invalid(format!("delta = {} outside (0, 1]", self.delta)));
        }
        if !(self.budget_constant > 0.0 && self.budget_constant.is_finite()) {
            return Err(Error::invalid("budget constant must be positive"));
        }
        if self.n_override == Some(0) {
            return Err(Error::invalid("step override must be positive"));
        }
        Ok(())
    }

    pub fn steps(&self) -> u64 {
        sample_budget(self)
    }

    pub fn step_size(&self) -> f64 {
        self.t / self.steps() as f64
    }
}

/// Number of copies consumed: the override if set, else
/// `ceil(budget_constant * t^2 / delta)`, at least 1.
pub fn sample_budget(config: &LmrConfig) -> u64 {
    if let Some(n) = config.n_override {
        return n;
    }
    let n = (config.budget_constant * config.t * config.t / config.delta).ceil();
    (n as u64).max(1)
}

fn require_factor(total: usize, factor: usize) -> Result<usize> {
    if factor == 0 || total % factor != 0 {
        return Err(Error::DimensionMismatch {
            expected: factor,
            found: total,
        });
    }
    Ok(total / factor)
}

/// `exp(-i h t) sigma exp(i h t)`, with `h` acting on the leading factor of `sigma`.
pub fn ideal_conjugation(h: &ComplexMatrix, t: f64, sigma: &DensityMatrix) -> Result<DensityMatrix> {
    let dim_a = h.square_dim()?;
    let dim_b = require_factor(sigma.dim(), dim_a)?;
    let u = embed_first(&herm_exp(h, t)?, dim_b);
    DensityMatrix::from_channel_output(sigma.matrix().conjugate_by(&u))
}

/// Closed form of one partial-swap step for a (possibly sub-normalized) generator:
///
/// `Tr_F[e^{-iS d}(sigma (x) g)e^{iS d}] = cos^2 d Tr(g) sigma - i sin d cos d [g (x) 1, sigma] + sin^2 d g (x) Tr_A sigma`.
///
/// `sigma` may be any square operator on `A (x) B`; the map is linear in it.
#[derive(Clone, Debug)]
pub struct PartialSwapKernel {
    generator: ComplexMatrix,
    extended: ComplexMatrix,
    generator_trace: C64,
    dim_a: usize,
    dim_b: usize,
}

impl PartialSwapKernel {
    pub fn new(generator: &ComplexMatrix, target_dim: usize) -> Result<Self> {
        let dim_a = generator.square_dim()?;
        let dim_b = require_factor(target_dim, dim_a)?;
        Ok(Self {
            generator: generator.clone(),
            extended: embed_first(generator, dim_b),
            generator_trace: generator.trace(),
            dim_a,
            dim_b,
        })
    }

    pub fn target_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn apply(&self, sigma: &ComplexMatrix, delta: f64) -> ComplexMatrix {
        let (s, c) = delta.sin_cos();
        let mut out = sigma.scale(self.generator_trace * (c * c));
        let comm = ComplexMatrix::commutator(&self.extended, sigma);
        out += &comm.scale(-I * (s * c));
        let marginal = if self.dim_a == self.target_dim() {
            self.generator.scale(sigma.trace())
        } else {
            kron(&self.generator, &trace_first(sigma, self.dim_a).expect("dims checked"))
        };
        out += &marginal.scale_real(s * s);
        out
    }

    /// `X -> cos d X - i sin d (g (x) 1) X`: the action on a block that is
    /// multiplied by the partial swap on the left only.
    pub fn apply_left(&self, block: &ComplexMatrix, delta: f64) -> ComplexMatrix {
        let (s, c) = delta.sin_cos();
        block.scale(self.generator_trace * c) - (&self.extended * block).scale(I * s)
    }

    /// `X -> cos d X + i sin d X (g (x) 1)`.
    pub fn apply_right(&self, block: &ComplexMatrix, delta: f64) -> ComplexMatrix {
        let (s, c) = delta.sin_cos();
        block.scale(self.generator_trace * c) + (block * &self.extended).scale(I * s)
    }
}

/// One step of the protocol, `sigma` on `A (x) B` and `rho` on `A`, via the closed form.
///
/// Any finite `delta_step` is accepted: `exp(-iS d) = cos d - i sin d S` holds for all `d`.
pub fn lmr_step(sigma: &DensityMatrix, rho: &DensityMatrix, delta_step: f64) -> Result<DensityMatrix> {
    if !delta_step.is_finite() {
        return Err(Error::NonFinite);
    }
    let kernel = PartialSwapKernel::new(rho.matrix(), sigma.dim())?;
    DensityMatrix::from_channel_output(kernel.apply(sigma.matrix(), delta_step))
}

/// The partial swap `cos d 1 - i sin d S` on registers `(A, B, F)` with `S` swapping `A` and `F`.
fn partial_swap_abf(dim_a: usize, dim_b: usize, delta: f64) -> ComplexMatrix {
    let s = swap_registers(&[dim_a, dim_b, dim_a], 0, 2);
    let n = s.rows();
    ComplexMatrix::identity(n).scale_real(delta.cos()) - s.scale(I * delta.sin())
}

/// One step evaluated literally: tensor in the fresh copy, conjugate by the
/// partial swap, trace the copy out. Used to cross-check [`lmr_step`].
pub fn lmr_step_explicit(
    sigma: &DensityMatrix,
    rho: &DensityMatrix,
    delta_step: f64,
) -> Result<DensityMatrix> {
    let dim_a = rho.dim();
    let dim_b = require_factor(sigma.dim(), dim_a)?;
    let joint = kron(sigma.matrix(), rho.matrix());
    let u = partial_swap_abf(dim_a, dim_b, delta_step);
    let out = partial_trace(&joint.conjugate_by(&u), &[dim_a * dim_b, dim_a], 1)?;
    DensityMatrix::from_channel_output(out)
}

/// Runs `n = sample_budget(config)` steps with `delta = t / n`. Returns the
/// final state and the number of copies consumed.
pub fn lmr_simulate(
    sigma: &DensityMatrix,
    rho: &DensityMatrix,
    config: &LmrConfig,
) -> Result<(DensityMatrix, u64)> {
    config.validate()?;
    let kernel = PartialSwapKernel::new(rho.matrix(), sigma.dim())?;
    let n = config.steps();
    let delta = config.t / n as f64;
    let out = (0..n).fold(sigma.matrix().clone(), |state, _| kernel.apply(&state, delta));
    Ok((DensityMatrix::from_channel_output(out)?, n))
}

/// `|0><0| (x) 1 + |1><1| (x) u`.
pub fn controlled(u: &ComplexMatrix) -> ComplexMatrix {
    let n = u.rows();
    let id = ComplexMatrix::identity(n);
    let zero = ComplexMatrix::zeros(n, n);
    from_qubit_blocks([[&id, &zero], [&zero, u]])
}

/// Closed form of the controlled step on an operator over `C (x) A (x) B`.
pub(crate) fn controlled_kernel_apply(
    kernel: &PartialSwapKernel,
    joint: &ComplexMatrix,
    delta: f64,
) -> ComplexMatrix {
    let b00 = qubit_block(joint, 0, 0);
    let b01 = kernel.apply_right(&qubit_block(joint, 0, 1), delta);
    let b10 = kernel.apply_left(&qubit_block(joint, 1, 0), delta);
    let b11 = kernel.apply(&qubit_block(joint, 1, 1), delta);
    from_qubit_blocks([[&b00, &b01], [&b10, &b11]])
}

fn controlled_dims(joint: &DensityMatrix, rho: &DensityMatrix) -> Result<usize> {
    let data = require_factor(joint.dim(), 2)?;
    require_factor(data, rho.dim())?;
    Ok(data)
}

/// One controlled partial-swap step: `|0><0| (x) 1 + |1><1| (x) exp(-i S delta)` on
/// `joint (x) rho`, then the fresh copy is discarded. The control is one qubit.
pub fn controlled_lmr_step(
    joint: &DensityMatrix,
    rho: &DensityMatrix,
    delta_step: f64,
) -> Result<DensityMatrix> {
    let data = controlled_dims(joint, rho)?;
    let kernel = PartialSwapKernel::new(rho.matrix(), data)?;
    DensityMatrix::from_channel_output(controlled_kernel_apply(&kernel, joint.matrix(), delta_step))
}

/// Literal tensor-network evaluation of [`controlled_lmr_step`].
pub fn controlled_lmr_step_explicit(
    joint: &DensityMatrix,
    rho: &DensityMatrix,
    delta_step: f64,
) -> Result<DensityMatrix> {
    let data = controlled_dims(joint, rho)?;
    let dim_a = rho.dim();
    let dim_b = data / dim_a;
    let u = controlled(&partial_swap_abf(dim_a, dim_b, delta_step));
    let full = kron_all([joint.matrix(), rho.matrix()]);
    let out = partial_trace(&full.conjugate_by(&u), &[2 * data, dim_a], 1)?;
    DensityMatrix::from_channel_output(out)
}

/// Controlled evolution `|0><0| (x) 1 + |1><1| (x) exp(-i rho t)` built from
/// `sample_budget(config)` controlled partial swaps.
pub fn controlled_lmr_simulate(
    joint: &DensityMatrix,
    rho: &DensityMatrix,
    config: &LmrConfig,
) -> Result<(DensityMatrix, u64)> {
    config.validate()?;
    let data = controlled_dims(joint, rho)?;
    let kernel = PartialSwapKernel::new(rho.matrix(), data)?;
    let n = config.steps();
    let delta = config.t / n as f64;
    let out = (0..n).fold(joint.matrix().clone(), |state, _| {
        controlled_kernel_apply(&kernel, &state, delta)
    });
    Ok((DensityMatrix::from_channel_output(out)?, n))
}

/// The exact controlled unitary target of [`controlled_lmr_simulate`].
pub fn ideal_controlled_conjugation(
    rho: &ComplexMatrix,
    t: f64,
    joint: &DensityMatrix,
) -> Result<DensityMatrix> {
    let dim_a = rho.square_dim()?;
    let data = require_factor(joint.dim(), 2)?;
    let dim_b = require_factor(data, dim_a)?;
    let u = controlled(&embed_first(&herm_exp(rho, t)?, dim_b));
    u.require_unitary(VALIDATION_TOL)?;
    DensityMatrix::from_channel_output(joint.matrix().conjugate_by(&u))
}
