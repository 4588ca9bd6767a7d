use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use super::form::OneForm;
use super::hamiltonian::Hamiltonian;
use super::poly::WeightedPoly;
use super::rational::{rat, Rational};

/// Polynomial numerator `theta` with `d(phi) = theta / H`; for the triangle
/// the generator is `L` and the denominator is `f`.
pub fn dvar_numerator(ham: Hamiltonian) -> OneForm {
    match ham.a3_params() {
        Some((_, e)) => OneForm::new(
            WeightedPoly::term(rat(1, 2), 1, 1, 0),
            &WeightedPoly::term(rat(-1, 4), 2, 0, 0) + &WeightedPoly::constant(rat(-e, 4)),
        ),
        None => OneForm::new(
            WeightedPoly::from_terms(&[(2, 1, 1, 0)]),
            WeightedPoly::from_terms(&[(6, 1, 0, 0), (-2, 2, 0, 0)]),
        ),
    }
}

/// Element of the log-extended ring: `sum phi^j H^{-p} N_{j,p}(x, y, H)`.
/// Entries are keyed by `(j, p)`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ExtElem {
    terms: BTreeMap<(u32, u32), WeightedPoly>,
}

impl ExtElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_poly(p: WeightedPoly) -> Self {
        Self::term(0, 0, p)
    }

    /// The generator itself (`phi`, or `L` for the triangle).
    pub fn var() -> Self {
        Self::term(1, 0, WeightedPoly::one())
    }

    pub fn term(j: u32, p: u32, n: WeightedPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(j, p, n);
        e
    }

    pub fn add_term(&mut self, j: u32, p: u32, n: WeightedPoly) {
        if n.is_zero() {
            return;
        }
        let slot = self.terms.entry((j, p)).or_default();
        *slot = &*slot + &n;
        if slot.is_zero() {
            self.terms.remove(&(j, p));
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32), &WeightedPoly)> {
        self.terms.iter()
    }

    pub fn get(&self, j: u32, p: u32) -> Option<&WeightedPoly> {
        self.terms.get(&(j, p))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn pole_order(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Polynomial part when no generator and no pole appears.
    pub fn as_poly(&self) -> Option<WeightedPoly> {
        match self.terms.len() {
            0 => Some(WeightedPoly::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, o: &ExtElem) -> ExtElem {
        let mut r = self.clone();
        for (&(j, p), n) in &o.terms {
            r.add_term(j, p, n.clone());
        }
        r
    }

    pub fn neg(&self) -> ExtElem {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &ExtElem) -> ExtElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> ExtElem {
        let mut r = Self::zero();
        for (&(j, p), n) in &self.terms {
            r.add_term(j, p, n.scale(c));
        }
        r
    }

    pub fn mul_poly(&self, q: &WeightedPoly) -> ExtElem {
        let mut r = Self::zero();
        for (&(j, p), n) in &self.terms {
            r.add_term(j, p, n * q);
        }
        r
    }

    pub fn mul(&self, o: &ExtElem) -> ExtElem {
        let mut r = Self::zero();
        for (&(j1, p1), n1) in &self.terms {
            for (&(j2, p2), n2) in &o.terms {
                r.add_term(j1 + j2, p1 + p2, n1 * n2);
            }
        }
        r
    }

    /// Canonical numerators with every `H` factor cancelled against the pole.
    pub fn normalize(&self, ham: Hamiltonian) -> ExtElem {
        let mut r = Self::zero();
        for (&(j, p), n) in &self.terms {
            let (p2, n2) = cancel_h(ham.canonical(n), p);
            r.add_term(j, p2, n2);
        }
        let mut out = Self::zero();
        for (&(j, p), n) in &r.terms {
            let (p2, n2) = cancel_h(ham.canonical(n), p);
            out.add_term(j, p2, n2);
        }
        out
    }

    pub fn same_as(&self, o: &ExtElem, ham: Hamiltonian) -> bool {
        self.sub(o).normalize(ham).is_zero()
    }

    /// Substitutes `var -> var + c` and returns the coefficient of `c^m`.
    pub fn shift_coeff(&self, m: u32) -> ExtElem {
        let mut r = Self::zero();
        for (&(j, p), n) in &self.terms {
            if j >= m {
                r.add_term(j - m, p, n.scale(&binom(j, m)));
            }
        }
        r
    }

    /// Exterior derivative in the extended ring.
    pub fn d(&self, ham: Hamiltonian) -> ExtForm {
        let theta = dvar_numerator(ham);
        let dh = ham.dh();
        let mut r = ExtForm::zero();
        for (&(j, p), n) in &self.terms {
            r.add_term(j, p, ham.d(n));
            if j > 0 {
                r.add_term(j - 1, p + 1, theta.mul_poly(n).scale(&Rational::from_integer(j.into())));
            }
            if p > 0 {
                r.add_term(j, p + 1, dh.mul_poly(n).scale(&-Rational::from_integer(p.into())));
            }
        }
        r
    }

    pub fn eval_f64(&self, x: f64, y: f64, h: f64, var: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(j, p), n)| crate::fmath::powi(var, j as i32) * n.eval_f64(x, y, h) / crate::fmath::powi(h, p as i32))
            .sum()
    }

    /// Text form with the given names for the generator and for `H`, terms in
    /// descending `(j, p)` order.
    pub fn to_text_with(&self, var: &str, hname: &str) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(j, p), n)| {
                let mut s = format!("({})", n.to_text().replace('H', hname));
                match j {
                    0 => {}
                    1 => s = format!("{var}*{s}"),
                    _ => s = format!("{var}^{j}*{s}"),
                }
                match p {
                    0 => {}
                    1 => s.push_str(&format!("/{hname}")),
                    _ => s.push_str(&format!("/{hname}^{p}")),
                }
                s
            })
            .collect();
        parts.join(" + ")
    }

    pub fn to_text(&self) -> String {
        self.to_text_with("phi", "H")
    }
}

fn cancel_h(mut n: WeightedPoly, mut p: u32) -> (u32, WeightedPoly) {
    while p > 0 {
        match n.div_h(1) {
            Some(q) => {
                n = q;
                p -= 1;
            }
            None => break,
        }
    }
    (p, n)
}

pub(crate) fn binom(n: u32, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * Rational::from_integer((n - i).into()) / Rational::from_integer((i + 1).into());
    }
    acc
}

/// `sum phi^j H^{-p} omega_{j,p}` with polynomial one-forms `omega`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ExtForm {
    terms: BTreeMap<(u32, u32), OneForm>,
}

impl ExtForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_form(w: OneForm) -> Self {
        let mut r = Self::zero();
        r.add_term(0, 0, w);
        r
    }

    pub fn add_term(&mut self, j: u32, p: u32, w: OneForm) {
        if w.is_zero() {
            return;
        }
        let slot = self.terms.entry((j, p)).or_default();
        *slot = slot.add(&w);
        if slot.is_zero() {
            self.terms.remove(&(j, p));
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32), &OneForm)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &ExtForm) -> ExtForm {
        let mut r = self.clone();
        for (&(j, p), w) in &o.terms {
            r.add_term(j, p, w.clone());
        }
        r
    }

    pub fn sub(&self, o: &ExtForm) -> ExtForm {
        let mut r = self.clone();
        for (&(j, p), w) in &o.terms {
            r.add_term(j, p, w.scale(&-Rational::one()));
        }
        r
    }

    /// `q * w` for a ring element `q` and a polynomial form `w`.
    pub fn product(q: &ExtElem, w: &OneForm) -> ExtForm {
        let mut r = Self::zero();
        for (&(j, p), n) in q.terms() {
            r.add_term(j, p, w.mul_poly(n));
        }
        r
    }

    pub fn normalize(&self, ham: Hamiltonian) -> ExtForm {
        let mut r = Self::zero();
        for (&(j, p), w) in &self.terms {
            let mut a = ham.canonical(w.a());
            let mut b = ham.canonical(w.b());
            let mut p = p;
            while p > 0 {
                match (a.div_h(1), b.div_h(1)) {
                    (Some(a2), Some(b2)) => {
                        a = a2;
                        b = b2;
                        p -= 1;
                    }
                    _ => break,
                }
            }
            r.add_term(j, p, OneForm::new(a, b));
        }
        r
    }

    /// Equality after clearing poles: per generator power, multiply through
    /// by `H^pmax`, expand `H` and compare.
    pub fn same_as(&self, o: &ExtForm, ham: Hamiltonian) -> bool {
        let diff = self.sub(o);
        let mut by_j: BTreeMap<u32, Vec<(u32, &OneForm)>> = BTreeMap::new();
        for (&(j, p), w) in &diff.terms {
            by_j.entry(j).or_default().push((p, w));
        }
        let hp = ham.poly();
        by_j.values().all(|ws| {
            let pmax = ws.iter().map(|(p, _)| *p).max().unwrap_or(0);
            let mut acc = OneForm::zero();
            for (p, w) in ws {
                acc = acc.add(&w.mul_poly(&hp.pow(pmax - p)));
            }
            ham.expand(acc.a()).is_zero() && ham.expand(acc.b()).is_zero()
        })
    }

    pub fn to_text_with(&self, var: &str, hname: &str) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(j, p), w)| {
                let mut s = format!("[{}]", w.to_text().replace('H', hname));
                if j > 0 {
                    s = format!("{var}^{j}*{s}");
                }
                if p > 0 {
                    s.push_str(&format!("/{hname}^{p}"));
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_h_against_pole() {
        let ham = Hamiltonian::EightLoop;
        let e = ExtElem::term(0, 2, ham.poly().mul_mono(super::super::poly::Mono::new(1, 0, 0)));
        let n = e.normalize(ham);
        assert_eq!(n, ExtElem::term(0, 1, WeightedPoly::x()));
    }

    #[test]
    fn shift_coefficients_are_binomial() {
        let e = ExtElem::term(3, 0, WeightedPoly::one());
        assert_eq!(e.shift_coeff(1), ExtElem::term(2, 0, WeightedPoly::constant(rat(3, 1))));
        assert_eq!(e.shift_coeff(3), ExtElem::from_poly(WeightedPoly::one()));
        assert!(e.shift_coeff(4).is_zero());
    }

    #[test]
    fn dphi_is_closed_form_identity() {
        // d(phi * H) = H dphi + phi dH = theta + phi dH
        let ham = Hamiltonian::EightLoop;
        let e = ExtElem::term(1, 0, WeightedPoly::h());
        let mut expect = ExtForm::from_form(dvar_numerator(ham));
        expect.add_term(1, 0, ham.dh());
        assert!(e.d(ham).same_as(&expect, ham));
    }
}
