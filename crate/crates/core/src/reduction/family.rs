use alloc::vec::Vec;

use num_traits::Zero;

use super::decompose::decompose;
use crate::algebra::linalg::kernel;
use crate::algebra::{Annulus, Hamiltonian, OneForm, Rational, WeightedPoly};
use crate::error::Result;

/// `x^i y^j dx` and `x^i y^j dy` for `1 <= i + j <= n` (constants in the
/// coefficients only add exact forms or `dx`, `dy`).
pub fn monomial_forms(n: u32) -> Vec<OneForm> {
    let mut out = Vec::new();
    for d in 0..=n {
        for i in 0..=d {
            let p = WeightedPoly::term(Rational::from_integer(1.into()), i, d - i, 0);
            out.push(OneForm::dx(p.clone()));
            out.push(OneForm::dy(p));
        }
    }
    out
}

pub fn combine(basis: &[OneForm], coeffs: &[Rational]) -> OneForm {
    basis
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .fold(OneForm::zero(), |acc, (w, c)| acc.add(&w.scale(c)))
}

/// Basis of the combinations of `basis` whose first generating function
/// vanishes identically on the annulus.
pub fn m1_kernel(ham: Hamiltonian, annulus: Annulus, basis: &[OneForm]) -> Result<Vec<OneForm>> {
    let with_beta = !ham.uses_phi(annulus);
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    let mut len = 0;
    for w in basis {
        let d = decompose(w, ham)?;
        let mut col = Vec::new();
        let polys = if with_beta { alloc::vec![d.alpha, d.beta, d.gamma] } else { alloc::vec![d.alpha, d.gamma] };
        for p in polys {
            let mut c: Vec<Rational> = p.coeffs().to_vec();
            c.resize(16, Rational::zero());
            col.extend(c);
        }
        len = col.len();
        cols.push(col);
    }
    let rows: Vec<Vec<Rational>> = (0..len).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    Ok(kernel(&rows, basis.len()).iter().map(|v| combine(basis, v)).collect())
}
