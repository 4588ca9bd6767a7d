use alloc::string::String;
use alloc::vec::Vec;

use super::oval::{a3_basis, d4_basis, trace_oval};
use super::quad::Tol;
use super::shoot::{shooting_oracle, ShootingPoint};
use crate::algebra::{Annulus, Hamiltonian, OneForm};
use crate::error::Result;
use crate::fmath::abs;
use crate::reduction::GeneratingFn;
use crate::triangle::D4GenFn;

/// A first nonvanishing generating function from either engine.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbolic {
    A3(GeneratingFn),
    D4(D4GenFn),
}

impl Symbolic {
    pub fn k(&self) -> u32 {
        match self {
            Symbolic::A3(g) => g.k,
            Symbolic::D4(_) => 3,
        }
    }

    pub fn hamiltonian(&self) -> Hamiltonian {
        match self {
            Symbolic::A3(g) => g.hamiltonian,
            Symbolic::D4(_) => Hamiltonian::D4Triangle,
        }
    }

    pub fn annulus(&self) -> Annulus {
        match self {
            Symbolic::A3(g) => g.annulus,
            Symbolic::D4(_) => Annulus::Center,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Symbolic::A3(g) => g.is_zero(),
            Symbolic::D4(g) => g.is_zero(),
        }
    }

    /// Value at `t` from quadrature of the basis integrals.
    pub fn eval(&self, t: f64, tol: Tol) -> Result<f64> {
        let oval = trace_oval(self.hamiltonian(), t, self.annulus())?;
        Ok(match self {
            Symbolic::A3(g) => g.eval(t, a3_basis(&oval, tol)?),
            Symbolic::D4(g) => {
                let [m1, i0, star] = d4_basis(&oval, tol)?;
                g.eval(t, m1, i0, star)
            }
        })
    }
}

/// Basis-integral values sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSample {
    pub t: f64,
    pub names: [&'static str; 3],
    pub values: [f64; 3],
}

pub fn sample_basis(ham: Hamiltonian, annulus: Annulus, ts: &[f64], tol: Tol) -> Result<Vec<BasisSample>> {
    ts.iter()
        .map(|&t| {
            let oval = trace_oval(ham, t, annulus)?;
            Ok(if ham == Hamiltonian::D4Triangle {
                BasisSample {
                    t,
                    names: ["I_-1", "I0", "I_*"],
                    values: d4_basis(&oval, tol)?,
                }
            } else {
                BasisSample {
                    t,
                    names: ["I0", "I1", "I2"],
                    values: a3_basis(&oval, tol)?,
                }
            })
        })
        .collect()
}

/// Symbolic and shooting values of `M_k` on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MelnikovSample {
    pub k: u32,
    pub t: Vec<f64>,
    pub symbolic: Vec<f64>,
    pub shooting: Vec<f64>,
    pub fitted_k: Vec<u32>,
    pub fit_residual: Vec<f64>,
    pub points: Vec<ShootingPoint>,
}

impl MelnikovSample {
    pub fn k_agrees(&self) -> bool {
        self.fitted_k.iter().all(|k| *k == self.k)
    }

    pub fn max_rel_err(&self) -> f64 {
        self.symbolic
            .iter()
            .zip(&self.shooting)
            .map(|(s, n)| abs(s - n) / abs(*s).max(1e-300))
            .fold(0.0, f64::max)
    }

    /// Rows `(t, value, source)` in grid order, symbolic first.
    pub fn rows(&self) -> Vec<(f64, f64, &'static str)> {
        let mut out = Vec::new();
        for (i, t) in self.t.iter().enumerate() {
            out.push((*t, self.symbolic[i], "symbolic"));
            out.push((*t, self.shooting[i], "shooting"));
        }
        out
    }

    pub fn summary(&self) -> String {
        alloc::format!(
            "k = {} (fitted {:?}), max relative deviation {:.3e}",
            self.k,
            self.fitted_k,
            self.max_rel_err()
        )
    }
}

pub fn compare(sym: &Symbolic, w: &OneForm, t_grid: &[f64], eps_grid: &[f64]) -> Result<MelnikovSample> {
    let points = shooting_oracle(sym.hamiltonian(), w, sym.annulus(), t_grid, eps_grid)?;
    let symbolic = t_grid.iter().map(|&t| sym.eval(t, Tol::DEFAULT)).collect::<Result<Vec<_>>>()?;
    Ok(MelnikovSample {
        k: sym.k(),
        t: t_grid.to_vec(),
        symbolic,
        shooting: points.iter().map(|p| p.value).collect(),
        fitted_k: points.iter().map(|p| p.k).collect(),
        fit_residual: points.iter().map(|p| p.residual).collect(),
        points,
    })
}
