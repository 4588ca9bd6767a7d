//! Exact arithmetic: rationals, univariate and weighted polynomials, one-forms
//! and the log-extended ring.

mod ext;
mod form;
mod hamiltonian;
pub mod linalg;
mod poly;
mod rational;
mod ratfunc;
mod upoly;

pub use ext::{dvar_numerator, ExtElem, ExtForm};
pub use form::OneForm;
pub use hamiltonian::{Annulus, Hamiltonian};
pub use poly::{Mono, WeightedPoly};
pub use rational::{fmt_rational, int, parse_rational, rat, to_f64, Rational};
pub use ratfunc::RatFunc;
pub use upoly::{upoly_content, Laurent, UPoly};
