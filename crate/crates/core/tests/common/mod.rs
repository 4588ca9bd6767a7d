#![allow(dead_code)]

use melnikov_core::algebra::{int, Annulus, Hamiltonian, OneForm, Rational};
use melnikov_core::reduction::{combine, m1_kernel, monomial_forms};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// The annulus without the (*) property for each A3 variant.
pub fn phi_annulus(ham: Hamiltonian) -> Annulus {
    if ham == Hamiltonian::EightLoop {
        Annulus::Exterior
    } else {
        Annulus::Center
    }
}

fn small(rng: &mut StdRng) -> Rational {
    int(rng.random_range(-3..=3))
}

/// Random integer combination of the monomial forms of degree `<= n`, with
/// a nonzero top-degree part.
pub fn random_form(rng: &mut StdRng, n: u32) -> OneForm {
    let basis = monomial_forms(n);
    loop {
        let c: Vec<Rational> = basis.iter().map(|_| small(rng)).collect();
        let w = combine(&basis, &c);
        if w.weighted_degree() == Some(n) {
            return w;
        }
    }
}

/// Random member of the degree-`n` forms whose `M_1` vanishes.
pub fn random_kernel_form(rng: &mut StdRng, ham: Hamiltonian, annulus: Annulus, n: u32) -> OneForm {
    let ker = m1_kernel(ham, annulus, &monomial_forms(n)).unwrap();
    loop {
        let c: Vec<Rational> = ker.iter().map(|_| small(rng)).collect();
        let w = combine(&ker, &c);
        if !w.is_zero() {
            return w;
        }
    }
}
