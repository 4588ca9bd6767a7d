use alloc::collections::BTreeMap;

use num_traits::One;

use super::decompose::decompose;
use crate::algebra::{int, rat, ExtElem, ExtForm, Hamiltonian, Laurent, Mono, OneForm, Rational, WeightedPoly};
use crate::algebra::dvar_numerator;
use crate::error::Result;

/// Result of reducing `sum phi^j H^{-p} w_{j,p}`:
/// `dQ + q dH + sum_j phi^j (a_j(H) y dx + b_j(H) x^2 y dx)`.
#[derive(Clone, Debug, Default)]
pub struct ExtReduction {
    pub exact: ExtElem,
    pub q: ExtElem,
    /// `j -> (a_j, b_j)`, Laurent in `H`; zero entries are omitted.
    pub residual: BTreeMap<u32, (Laurent, Laurent)>,
}

impl ExtReduction {
    pub fn residual_at(&self, j: u32) -> (Laurent, Laurent) {
        self.residual.get(&j).cloned().unwrap_or_default()
    }

    /// Reassembles `dQ + q dH + residual` as an extended form.
    pub fn reconstruct(&self, ham: Hamiltonian) -> ExtForm {
        let mut r = self.exact.d(ham);
        r = r.add(&ExtForm::product(&self.q, &ham.dh()));
        for (&j, (a, b)) in &self.residual {
            for (l, k) in [(a, 0u32), (b, 2)] {
                for (e, c) in l.terms() {
                    let w = OneForm::sigma(k).scale(c);
                    push_form(&mut r, j, e, w);
                }
            }
        }
        r
    }
}

/// `H^e` with `e` possibly negative goes to the numerator or to the pole.
fn push_elem(t: &mut ExtElem, j: u32, e: i32, n: WeightedPoly) {
    if e >= 0 {
        t.add_term(j, 0, n.mul_mono(Mono::new(0, 0, e as u32)));
    } else {
        t.add_term(j, (-e) as u32, n);
    }
}

fn push_form(t: &mut ExtForm, j: u32, e: i32, w: OneForm) {
    if e >= 0 {
        let h = WeightedPoly::term(Rational::one(), 0, 0, e as u32);
        t.add_term(j, 0, w.mul_poly(&h));
    } else {
        t.add_term(j, (-e) as u32, w);
    }
}

struct Reducer {
    ham: Hamiltonian,
    s: Rational,
    e: Rational,
    theta: OneForm,
    out: ExtReduction,
    work: BTreeMap<u32, ExtForm>,
}

impl Reducer {
    fn form(&mut self, j: u32, e: i32, w: OneForm) {
        push_form(self.work.entry(j).or_default(), j, e, w);
    }

    /// Adds `kappa phi^l H^e F dphi`, rewritten monomial by monomial.
    fn dphi(&mut self, kappa: &Rational, l: u32, e: i32, f: &WeightedPoly) {
        for (m, c) in f.terms() {
            self.dphi_mono(&(kappa * c), l, e, *m);
        }
    }

    fn dphi_mono(&mut self, c: &Rational, l: u32, e: i32, m: Mono) {
        let mono = |x: u32, y: u32| WeightedPoly::term(Rational::one(), x, y, 0);
        let (s, ee) = (self.s.clone(), self.e.clone());
        if m.h > 0 {
            // H dphi = theta
            let w = self.theta.mul_poly(&mono(m.x, m.y)).scale(c);
            self.form(l, e + m.h as i32 - 1, w);
        } else if m.y > 0 {
            // y dphi = x dx - (x^2+e)/(4H) dH
            self.form(l, e, OneForm::dx(mono(m.x + 1, m.y - 1)).scale(c));
            let x2e = &mono(m.x + 2, m.y - 1) + &mono(m.x, m.y - 1).scale(&ee);
            push_elem(&mut self.out.q, l, e - 1, x2e.scale(&(c * rat(-1, 4))));
        } else if m.x >= 2 {
            // x^2 dphi = s y/(2H) dH - s dy - e dphi
            push_elem(&mut self.out.q, l, e - 1, mono(m.x - 2, 1).scale(&(c * &s * rat(1, 2))));
            self.form(l, e, OneForm::dy(mono(m.x - 2, 0)).scale(&-(c * &s)));
            self.dphi_mono(&-(c * &ee), l, e, Mono::new(m.x - 2, 0, 0));
        } else if m.x == 1 {
            let w = self.theta.mul_poly(&mono(1, 0)).scale(c);
            self.form(l, e - 1, w);
        } else {
            // c H^e phi^l dphi = d(c H^e phi^{l+1}/(l+1)) - c e H^{e-1} phi^{l+1}/(l+1) dH
            let k = c / int(l as i64 + 1);
            push_elem(&mut self.out.exact, l + 1, e, WeightedPoly::constant(k.clone()));
            push_elem(&mut self.out.q, l + 1, e - 1, WeightedPoly::constant(-&k * int(e as i64)));
        }
    }

    /// `phi^j H^{-p} w` for a polynomial form `w`.
    fn level_term(&mut self, j: u32, p: u32, w: &OneForm) -> Result<()> {
        let d = decompose(w, self.ham)?;
        let e = -(p as i32);
        let jr = int(j as i64);
        // phi^j H^e dF = d(phi^j H^e F) - j phi^{j-1} H^e F dphi - e phi^j H^{e-1} F dH
        push_elem(&mut self.out.exact, j, e, d.exact.clone());
        push_elem(&mut self.out.q, j, e - 1, d.exact.scale(&-int(e as i64)));
        if j > 0 {
            self.dphi(&-jr.clone(), j - 1, e, &d.exact);
        }
        push_elem(&mut self.out.q, j, e, d.g);
        let entry = self.out.residual.entry(j).or_default();
        entry.0.add_assign(&Laurent::from_poly_shifted(&d.alpha, e));
        entry.1.add_assign(&Laurent::from_poly_shifted(&d.gamma, e));
        let g0 = self.ham.g0()?;
        for (m, c) in d.beta.coeffs().iter().enumerate() {
            let ex = m as i32 + e;
            // c H^ex sigma_1 = c H^ex dG0 + c H^{ex+1} dphi
            push_elem(&mut self.out.exact, j, ex, g0.scale(c));
            push_elem(&mut self.out.q, j, ex - 1, g0.scale(&(-c * int(ex as i64))));
            if j > 0 {
                self.dphi(&(-c * &jr), j - 1, ex, &g0);
            }
            let k = c / int(j as i64 + 1);
            push_elem(&mut self.out.exact, j + 1, ex + 1, WeightedPoly::constant(k.clone()));
            push_elem(&mut self.out.q, j + 1, ex, WeightedPoly::constant(-&k * int(ex as i64 + 1)));
        }
        Ok(())
    }
}

/// Reduces an extended form over an A3 Hamiltonian, highest generator power
/// first.
pub fn reduce_ext(form: &ExtForm, ham: Hamiltonian) -> Result<ExtReduction> {
    let (s, e) = ham.require_a3()?;
    let mut r = Reducer {
        ham,
        s: int(s),
        e: int(e),
        theta: dvar_numerator(ham),
        out: ExtReduction::default(),
        work: BTreeMap::new(),
    };
    for (&(j, p), w) in form.terms() {
        r.work.entry(j).or_default().add_term(j, p, w.clone());
    }
    while let Some((&j, _)) = r.work.iter().next_back() {
        let level = r.work.remove(&j).unwrap_or_default();
        for (&(_, p), w) in level.terms() {
            r.level_term(j, p, w)?;
        }
    }
    r.out.residual.retain(|_, (a, b)| !(a.is_zero() && b.is_zero()));
    r.out.exact = r.out.exact.normalize(ham);
    r.out.q = r.out.q.normalize(ham);
    Ok(r.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::WeightedPoly;

    fn check(ham: Hamiltonian, f: &ExtForm) -> ExtReduction {
        let r = reduce_ext(f, ham).unwrap();
        assert!(r.reconstruct(ham).same_as(f, ham), "reconstruction failed");
        r
    }

    #[test]
    fn polynomial_forms_fold_beta() {
        for ham in Hamiltonian::A3 {
            let r = check(ham, &ExtForm::from_form(OneForm::parse("x*y dx + y^3 dx + x^3*y^2 dy").unwrap()));
            assert!(r.residual.keys().all(|&j| j == 0));
        }
    }

    #[test]
    fn phi_times_forms_reconstruct() {
        for ham in Hamiltonian::A3 {
            for w in ["x*y dx", "y^3 dx", "x^2*y dy + x dx", "x^3*y^2 dx - 2 y dy", "x*y^4 dy"] {
                let w = OneForm::parse(w).unwrap();
                for l in 1..=3 {
                    let mut f = ExtForm::zero();
                    f.add_term(l, 0, w.clone());
                    f.add_term(l - 1, 1, w.mul_poly(&WeightedPoly::x()));
                    check(ham, &f);
                }
            }
        }
    }
}
