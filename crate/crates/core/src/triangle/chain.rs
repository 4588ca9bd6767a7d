use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::linalg::solve_any;
use crate::algebra::{dvar_numerator, int, ExtElem, ExtForm, Hamiltonian, Mono, OneForm, RatFunc, Rational, UPoly, WeightedPoly};
use crate::error::{Error, Result};

use super::genfn::D4GenFn;
use super::oval::{form_terms, minus_q_dq, oval_moments, MomentCombo};

const TRI: Hamiltonian = Hamiltonian::D4Triangle;

/// The chain `w = dQ1 + q1 df`, `q1 w = dQ2 + q2 df` and the third Melnikov
/// function `M3 = oint q2 w`. `f` is written `H` inside the numerators.
#[derive(Clone, Debug)]
pub struct D4Chain {
    /// Coefficient `c` in `w = c f dL + dQ0 + q0 df`.
    pub c: Rational,
    pub big_q1: ExtElem,
    pub q1: ExtElem,
    /// `Q2 = big_q2 + q2_ln_x * ln x`.
    pub big_q2: ExtElem,
    pub q2_ln_x: Rational,
    pub q2: ExtElem,
    pub m3: D4GenFn,
}

impl D4Chain {
    /// True when `M3` vanishes too (within the quadratic class this means the
    /// perturbation is integrable to third order).
    pub fn integrable(&self) -> bool {
        self.m3.is_zero()
    }
}

/// `(y^2 - (x-3)^2) dx = f dln x`.
fn omega_ln_x() -> OneForm {
    OneForm::dx(WeightedPoly::from_terms(&[(1, 0, 2, 0), (-1, 2, 0, 0), (6, 1, 0, 0), (-9, 0, 0, 0)]))
}

fn monomials(max_deg: u32, min_deg: u32, skip: impl Fn(u32, u32) -> bool) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for d in min_deg..=max_deg {
        for i in 0..=d {
            let (x, y) = (i, d - i);
            if !skip(x, y) {
                v.push((x, y));
            }
        }
    }
    v
}

fn mono(x: u32, y: u32) -> WeightedPoly {
    WeightedPoly::term(Rational::one(), x, y, 0)
}

/// Solves `target = sum_k u_k basis_k` for the coefficient vector `u`.
fn solve_forms(target: &OneForm, basis: &[OneForm]) -> Option<Vec<Rational>> {
    let mut keys: BTreeSet<(u8, Mono)> = BTreeSet::new();
    let mut collect = |w: &OneForm| {
        for (m, _) in w.a().terms() {
            keys.insert((0, *m));
        }
        for (m, _) in w.b().terms() {
            keys.insert((1, *m));
        }
    };
    collect(target);
    basis.iter().for_each(&mut collect);
    let comp = |w: &OneForm, k: &(u8, Mono)| if k.0 == 0 { w.a().coeff(k.1) } else { w.b().coeff(k.1) };
    let rows: Vec<Vec<Rational>> = keys.iter().map(|k| basis.iter().map(|b| comp(b, k)).collect()).collect();
    let rhs: Vec<Rational> = keys.iter().map(|k| comp(target, k)).collect();
    solve_any(&rows, &rhs, basis.len())
}

fn expanded(w: &OneForm) -> OneForm {
    w.map(|p| TRI.expand(p))
}

fn combo_text(m: &MomentCombo) -> String {
    m.to_text()
}

fn t_poly(r: &RatFunc) -> Option<UPoly> {
    let tr = r.mul(&RatFunc::from_poly(UPoly::var()));
    (tr.den() == &UPoly::one()).then(|| tr.num().clone())
}

/// Runs the chain for a quadratic perturbation `w` of the triangle.
pub fn d4_chain(w: &OneForm) -> Result<D4Chain> {
    if !w.a().is_h_free() || !w.b().is_h_free() {
        return Err(Error::Unsupported(String::from("the perturbation must be a polynomial form in x, y")));
    }
    if w.weighted_degree().unwrap_or(0) > 2 {
        return Err(Error::Unsupported(String::from("the triangle engine handles quadratic perturbations only")));
    }
    // w = c f dL + c' f dln x + dQ0 + q0 df, with Q0 free of x y^2 and constants
    let q0_monos = monomials(3, 1, |x, y| x >= 1 && y >= 2);
    let mut basis = alloc::vec![dvar_numerator(TRI), omega_ln_x(), TRI.dh()];
    basis.extend(q0_monos.iter().map(|&(x, y)| TRI.d(&mono(x, y))));
    let Some(u) = solve_forms(w, &basis) else {
        let m1 = oval_moments(&form_terms(w))?;
        if m1.is_zero() {
            return Err(Error::Unsupported(String::from("M1 vanishes but w is outside the L-type class")));
        }
        return Err(Error::LowerOrderNonzero(format!("M1 = {}", combo_text(&m1))));
    };
    if !u[1].is_zero() {
        return Err(Error::Unsupported(String::from("w needs the ln x generator in the first step")));
    }
    let c = u[0].clone();
    let q0 = u[2].clone();
    let mut big_q0 = WeightedPoly::zero();
    for (k, &(x, y)) in q0_monos.iter().enumerate() {
        big_q0.add_term(Mono::new(x, y, 0), u[3 + k].clone());
    }

    let mut big_q1 = ExtElem::term(1, 0, WeightedPoly::h().scale(&c));
    big_q1.add_term(0, 0, big_q0.clone());
    let mut q1 = ExtElem::term(1, 0, WeightedPoly::constant(-c.clone()));
    q1.add_term(0, 0, WeightedPoly::constant(q0.clone()));

    let m2 = oval_moments(&minus_q_dq(&big_q1, &q1))?;
    if !m2.is_zero() {
        return Err(Error::LowerOrderNonzero(format!("M2 = {}", combo_text(&m2))));
    }

    // q1 w = d(q1 Q1 + c^2 f L^2 / 2) + (q1^2 - c^2 L^2 / 2) df + c Q0 f dL / f,
    // and c Q0 (f dL) = f dA + kappa f dln x + B df
    let psi = expanded(&dvar_numerator(TRI).mul_poly(&big_q0).scale(&c));
    let (big_a, kappa, big_b) = if psi.is_zero() {
        (WeightedPoly::zero(), Rational::zero(), WeightedPoly::zero())
    } else {
        let deg = psi.weighted_degree().unwrap_or(0).max(2) - 2;
        let a_monos = monomials(deg, 1, |_, _| false);
        let b_monos = monomials(deg, 0, |x, y| x >= 1 && y >= 2);
        let f = TRI.poly();
        let mut basis: Vec<OneForm> = a_monos.iter().map(|&(x, y)| TRI.d(&mono(x, y)).mul_poly(&f)).collect();
        basis.push(omega_ln_x());
        basis.extend(b_monos.iter().map(|&(x, y)| TRI.dh().mul_poly(&mono(x, y))));
        let u = solve_forms(&psi, &basis).ok_or_else(|| {
            Error::ShapeViolation(String::from("f-pole part of q2 is not of the form B/f"))
        })?;
        let mut a = WeightedPoly::zero();
        let mut b = WeightedPoly::zero();
        for (k, &(x, y)) in a_monos.iter().enumerate() {
            a.add_term(Mono::new(x, y, 0), u[k].clone());
        }
        for (k, &(x, y)) in b_monos.iter().enumerate() {
            b.add_term(Mono::new(x, y, 0), u[a_monos.len() + 1 + k].clone());
        }
        (a, u[a_monos.len()].clone(), b)
    };
    let half_c2 = &c * &c / int(2);
    let q2 = q1.mul(&q1).add(&ExtElem::term(2, 0, WeightedPoly::constant(-half_c2.clone())));
    let q2 = q2.add(&ExtElem::term(0, 1, big_b)).normalize(TRI);
    let big_q2 = q1
        .mul(&big_q1)
        .add(&ExtElem::term(2, 0, WeightedPoly::h().scale(&half_c2)))
        .add(&ExtElem::from_poly(big_a))
        .normalize(TRI);

    check_identity(&big_q1, &q1, &ExtForm::from_form(w.clone()))?;
    let mut rhs2 = ExtForm::product(&q1, w);
    rhs2.add_term(0, 1, omega_ln_x().scale(&-kappa.clone()));
    check_identity(&big_q2, &q2, &rhs2)?;
    if q1.var_degree().unwrap_or(0) > 1 || q1.pole_order() > 0 || q2.var_degree().unwrap_or(0) > 2 || q2.pole_order() > 1 {
        return Err(Error::ShapeViolation(String::from("L or f pole beyond q1 = aL + b, q2 = aL^2 + bL + c + B/f")));
    }

    // M3 may not depend on the constant in L -> L + kappa
    for m in 1..=3u32 {
        let mut terms = Vec::new();
        for i in 0..=m {
            terms.extend(minus_q_dq(&big_q1.shift_coeff(i), &q2.shift_coeff(m - i)));
        }
        let r = oval_moments(&terms)?;
        if !r.is_zero() {
            return Err(Error::ShapeViolation(format!("M3 depends on the L constant at order {m}: {}", combo_text(&r))));
        }
    }

    let m3 = oval_moments(&minus_q_dq(&big_q1, &q2))?;
    let shape = || Error::ShapeViolation(format!("M3 outside the displayed pattern: {}", combo_text(&m3)));
    let ab = t_poly(&m3.i0).ok_or_else(shape)?;
    let g = t_poly(&m3.i2).ok_or_else(shape)?;
    let d = t_poly(&m3.star).ok_or_else(shape)?;
    if ab.degree().unwrap_or(0) > 1 || g.degree().unwrap_or(0) > 0 || d.degree().unwrap_or(0) > 0 {
        return Err(shape());
    }
    let gf = D4GenFn::from_abgd(ab.coeff(0), ab.coeff(1), g.coeff(0), d.coeff(0));
    Ok(D4Chain { c, big_q1, q1, big_q2, q2_ln_x: kappa, q2, m3: gf })
}

/// `dQ + q df == rhs` in the ring extended by `L`.
fn check_identity(big_q: &ExtElem, q: &ExtElem, rhs: &ExtForm) -> Result<()> {
    let lhs = big_q.d(TRI).add(&ExtForm::product(q, &TRI.dh()));
    if lhs.same_as(rhs, TRI) {
        Ok(())
    } else {
        Err(Error::ShapeViolation(String::from("chain identity dQ + q df failed")))
    }
}

/// The worked perturbation `-(2 - x + x^2/2) dy`.
pub fn paper_perturbation() -> OneForm {
    OneForm::parse("-2 dy + x dy - 1/2 x^2 dy").expect("literal form")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn ext(pairs: &[(u32, u32, &[(i64, i64, u32, u32, u32)])]) -> ExtElem {
        let mut e = ExtElem::zero();
        for &(j, p, ts) in pairs {
            let mut n = WeightedPoly::zero();
            for &(a, b, x, y, h) in ts {
                n.add_term(Mono::new(x, y, h), rat(a, b));
            }
            e.add_term(j, p, n);
        }
        e.normalize(TRI)
    }

    #[test]
    fn paper_chain() {
        let ch = d4_chain(&paper_perturbation()).unwrap();
        let q1 = ext(&[(1, 0, &[(-1, 6, 0, 0, 0)])]);
        assert!(ch.q1.same_as(&q1, TRI));
        let big_q1 = ext(&[(1, 0, &[(1, 6, 0, 0, 1)]), (0, 0, &[(-1, 6, 2, 1, 0), (-2, 1, 0, 1, 0)])]);
        assert!(ch.big_q1.same_as(&big_q1, TRI));
        let q2 = ext(&[(2, 0, &[(1, 72, 0, 0, 0)]), (0, 1, &[(1, 36, 3, 0, 0), (-1, 12, 2, 0, 0), (1, 3, 1, 0, 0), (-1, 1, 0, 0, 0)])]);
        assert!(ch.q2.same_as(&q2, TRI), "{}", ch.q2.to_text_with("L", "f"));
        assert_eq!(ch.m3, D4GenFn::new(rat(-3, 32), int(0), int(0), int(1)));
    }

    #[test]
    fn exact_perturbation_is_integrable() {
        let w = TRI.d(&WeightedPoly::from_terms(&[(3, 2, 1, 0), (1, 0, 2, 0)]));
        let ch = d4_chain(&w).unwrap();
        assert!(ch.integrable());
        assert!(ch.q1.is_zero());
    }

    #[test]
    fn nonzero_m1_is_reported() {
        let w = OneForm::parse("y dx").unwrap();
        assert!(matches!(d4_chain(&w), Err(Error::LowerOrderNonzero(_))));
    }
}
