//! Floating-point oracles: oval quadrature, the return-map shooting oracle,
//! zero counting and the checks on the multivalued primitive.

mod ode;
mod oval;
mod phi;
mod quad;
mod sample;
mod shoot;
mod zeros;

pub use ode::{d4_ode_residual, fit_star_asymptotics, StarAsymptotics};
pub use oval::{
    a3_basis, annulus_center, check_level, d4_basis, integrate_form, trace_oval, Frame, Integrand, Oval, SIGMA_MARGIN,
};
pub use phi::{phi_check, phi_closed_form, phi_closed_form_grad, PhiReport};
pub use quad::{gk15, integrate, Tol};
pub use sample::{compare, sample_basis, BasisSample, MelnikovSample, Symbolic};
pub use shoot::{check_eps_grid, default_t_grid, shooting_oracle, ShootingPoint, DEFAULT_EPS, ORACLE_MARGIN};
pub use zeros::{count_zeros, sign_changes, ZeroCount};
