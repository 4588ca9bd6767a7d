//! Françoise decomposition for the A3 family: polynomial reduction to the
//! `y dx, x y dx, x^2 y dx` basis, the log-extended exterior reduction and the
//! recursion producing the first nonvanishing generating function.

mod decompose;

pub use decompose::{decompose, decompose_ext, fold_beta, lambda_matrix, Decomposition, ExtDecomposition};
mod ext;

pub use ext::{reduce_ext, ExtReduction};
mod chain;

pub use chain::{
    c_independence, check_q_shape, check_theorem_shape, coeffs_f64, exterior_step, francoise_chain, theorem_shape,
    zero_bound, ChainResult, ChainStep, GeneratingFn, DEFAULT_K_MAX,
};
mod family;

pub use family::{combine, m1_kernel, monomial_forms};
