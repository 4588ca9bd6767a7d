//! The triangle `f = x (y^2 - (x-3)^2)`: the chain in the ring extended by
//! `L = ln((3-x-y)/(3-x+y))`, the moment basis, and the Fuchsian equation of
//! the third Melnikov function.

mod chain;
mod fuchs;
mod genfn;
mod moments;
pub mod oval;

pub use chain::{d4_chain, paper_perturbation, D4Chain};
pub use fuchs::{d4_fuchs_ode, d4_fuchs_ode_from_system, d4_local_exponents, d4_pq, d4_system_matrix, FuchsOde, LocalExponents, Point};
pub use genfn::D4GenFn;
pub use moments::{d4_reduce_moments, moment_relation, Moment, MomentExpr};
pub use oval::{MomentCombo, OvalIntegral};
