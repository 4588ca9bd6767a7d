//! Exact higher-order Melnikov functions for polynomial perturbations of the
//! A3 family (eight-loop, double-heteroclinic, global-center) and of the D4
//! Hamiltonian triangle, with independent floating-point oracles.
//!
//! The crate is `no_std` and only needs `alloc`. Everything in [`algebra`],
//! [`reduction`] and [`triangle`] is exact rational arithmetic; floats live in
//! [`numerics`] and [`monodromy`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod fmath;
pub mod monodromy;
pub mod numerics;
pub mod reduction;
pub mod triangle;

pub use error::{Error, ErrorKind, Result};
