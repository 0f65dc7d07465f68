//! Generalized partial-swap constructions: signed blocks, linear combinations,
//! commutator and polynomial gadgets, and the Jordan-Lie rewriter.

mod block;
mod gadget;
mod jordan_lie;
mod polynomial;

pub use block::{
    mix_linear_combination, signed_lmr_step, signed_lmr_step_explicit, simulate_pairs, BlockPair,
    LinearCombination, Mode, PairSource, SignedKernel,
};
pub use gadget::{commutator_gadget, polynomial_gadget, product_term};
pub use jordan_lie::{eval_jordan_lie, jordan_lie_expand, monomial_plus_adjoint, JordanLieExpr};
pub use polynomial::{
    format_indices, parse_indices, polynomial_matrix, simulate_polynomial, HermitianPolynomial,
    PolynomialRun, PolynomialTerm, MAX_STATES,
};
