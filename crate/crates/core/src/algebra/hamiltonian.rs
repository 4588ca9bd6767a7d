use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::form::OneForm;
use super::poly::{Mono, WeightedPoly};
use super::rational::{int, rat, Rational};
use crate::error::{Error, Result};

/// The four Hamiltonians the crate knows how to reduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hamiltonian {
    /// `H = y^2/2 + (x^2-1)^2/4`
    EightLoop,
    /// `H = y^2/2 - (x^2-1)^2/4`
    DoubleHeteroclinic,
    /// `H = y^2/2 + (x^2+1)^2/4`
    GlobalCenter,
    /// `f = x [y^2 - (x-3)^2]`
    D4Triangle,
}

/// Period annuli. `Center` is the annulus around the unique center of the
/// double-heteroclinic, global-center and triangle Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Annulus {
    InteriorRight,
    InteriorLeft,
    Exterior,
    Center,
}

impl Annulus {
    pub fn slug(self) -> &'static str {
        match self {
            Annulus::InteriorRight => "interior",
            Annulus::InteriorLeft => "interior-left",
            Annulus::Exterior => "exterior",
            Annulus::Center => "center",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Some(match s {
            "interior" | "interior-right" => Annulus::InteriorRight,
            "interior-left" => Annulus::InteriorLeft,
            "exterior" => Annulus::Exterior,
            "center" => Annulus::Center,
            _ => return None,
        })
    }
}

impl Hamiltonian {
    pub const ALL: [Hamiltonian; 4] = [
        Hamiltonian::EightLoop,
        Hamiltonian::DoubleHeteroclinic,
        Hamiltonian::GlobalCenter,
        Hamiltonian::D4Triangle,
    ];

    pub const A3: [Hamiltonian; 3] = [
        Hamiltonian::EightLoop,
        Hamiltonian::DoubleHeteroclinic,
        Hamiltonian::GlobalCenter,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Hamiltonian::EightLoop => "eight-loop",
            Hamiltonian::DoubleHeteroclinic => "double-heteroclinic",
            Hamiltonian::GlobalCenter => "global-center",
            Hamiltonian::D4Triangle => "d4-triangle",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|h| h.slug() == s)
    }

    /// `(s, e)` with `H = y^2/2 + s (x^2 + e)^2 / 4` for the A3 family.
    pub fn a3_params(self) -> Option<(i64, i64)> {
        match self {
            Hamiltonian::EightLoop => Some((1, -1)),
            Hamiltonian::DoubleHeteroclinic => Some((-1, -1)),
            Hamiltonian::GlobalCenter => Some((1, 1)),
            Hamiltonian::D4Triangle => None,
        }
    }

    pub fn is_a3(self) -> bool {
        self.a3_params().is_some()
    }

    pub fn require_a3(self) -> Result<(i64, i64)> {
        self.a3_params().ok_or(Error::NotA3(self.slug()))
    }

    /// The defining polynomial in `x`, `y` (no formal `H`).
    pub fn poly(self) -> WeightedPoly {
        match self.a3_params() {
            Some((s, e)) => {
                let mut p = WeightedPoly::zero();
                p.add_term(Mono::new(0, 2, 0), rat(1, 2));
                p.add_term(Mono::new(4, 0, 0), rat(s, 4));
                p.add_term(Mono::new(2, 0, 0), rat(2 * s * e, 4));
                p.add_term(Mono::ONE, rat(s, 4));
                p
            }
            None => WeightedPoly::from_terms(&[(1, 1, 2, 0), (-1, 3, 0, 0), (6, 2, 0, 0), (-9, 1, 0, 0)]),
        }
    }

    pub fn grad(self) -> (WeightedPoly, WeightedPoly) {
        let p = self.poly();
        (p.dx_formal(), p.dy_formal())
    }

    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self.a3_params() {
            Some((s, e)) => {
                let u = x * x + e as f64;
                0.5 * y * y + s as f64 * u * u / 4.0
            }
            None => x * (y * y - (x - 3.0) * (x - 3.0)),
        }
    }

    pub fn grad_f64(self, x: f64, y: f64) -> (f64, f64) {
        match self.a3_params() {
            Some((s, e)) => (s as f64 * x * (x * x + e as f64), y),
            None => (y * y - (x - 3.0) * (x - 3.0) - 2.0 * x * (x - 3.0), 2.0 * x * y),
        }
    }

    /// Finite critical values.
    pub fn critical_values(self) -> Vec<Rational> {
        match self {
            Hamiltonian::EightLoop => vec![Rational::zero(), rat(1, 4)],
            Hamiltonian::DoubleHeteroclinic => vec![rat(-1, 4), Rational::zero()],
            Hamiltonian::GlobalCenter => vec![rat(1, 4)],
            Hamiltonian::D4Triangle => vec![int(-4), Rational::zero()],
        }
    }

    pub fn annuli(self) -> &'static [Annulus] {
        match self {
            Hamiltonian::EightLoop => &[Annulus::InteriorRight, Annulus::InteriorLeft, Annulus::Exterior],
            _ => &[Annulus::Center],
        }
    }

    pub fn check_annulus(self, a: Annulus) -> Result<()> {
        if self.annuli().contains(&a) {
            Ok(())
        } else {
            Err(Error::BadAnnulus {
                hamiltonian: self.slug(),
                annulus: a.slug(),
            })
        }
    }

    /// The interval of levels filled by the annulus; `high` may be infinite.
    pub fn sigma(self, a: Annulus) -> Result<(f64, f64)> {
        self.check_annulus(a)?;
        Ok(match (self, a) {
            (Hamiltonian::EightLoop, Annulus::Exterior) => (0.25, f64::INFINITY),
            (Hamiltonian::EightLoop, _) => (0.0, 0.25),
            (Hamiltonian::DoubleHeteroclinic, _) => (-0.25, 0.0),
            (Hamiltonian::GlobalCenter, _) => (0.25, f64::INFINITY),
            (Hamiltonian::D4Triangle, _) => (-4.0, 0.0),
        })
    }

    /// Whether the annulus lacks the (*) property and needs the multivalued
    /// primitive: the ovals are symmetric under `x -> -x` so `I_1` vanishes.
    pub fn uses_phi(self, a: Annulus) -> bool {
        self.is_a3() && !matches!(a, Annulus::InteriorRight | Annulus::InteriorLeft)
    }

    /// Orientation of the oval family relative to the flow `x' = H_y,
    /// y' = -H_x`: `+1` keeps it (clockwise), `-1` reverses it.
    pub fn orientation(self) -> f64 {
        if self.is_a3() {
            1.0
        } else {
            -1.0
        }
    }

    /// Leading monomial and its replacement for the canonical rewrite:
    /// `x^4` for A3, `x y^2` for the triangle.
    fn rewrite_rule(self) -> (Mono, WeightedPoly) {
        match self.a3_params() {
            Some((s, e)) => {
                let mut r = WeightedPoly::zero();
                r.add_term(Mono::new(0, 0, 1), int(4 * s));
                r.add_term(Mono::new(0, 2, 0), int(-2 * s));
                r.add_term(Mono::new(2, 0, 0), int(-2 * e));
                r.add_term(Mono::ONE, int(-1));
                (Mono::new(4, 0, 0), r)
            }
            None => (
                Mono::new(1, 2, 0),
                WeightedPoly::from_terms(&[(1, 0, 0, 1), (1, 3, 0, 0), (-6, 2, 0, 0), (9, 1, 0, 0)]),
            ),
        }
    }

    /// Unique representative of `p` modulo `H = H(x, y)`: no monomial is
    /// divisible by the rule's leading monomial.
    pub fn canonical(self, p: &WeightedPoly) -> WeightedPoly {
        let (lead, rep) = self.rewrite_rule();
        let divisible = |m: &Mono| m.x >= lead.x && m.y >= lead.y;
        let mut cur = p.clone();
        loop {
            let hit = cur.terms().rev().find(|(m, _)| divisible(m)).map(|(m, c)| (*m, c.clone()));
            let Some((m, c)) = hit else { return cur };
            cur.add_term(m, -c.clone());
            let q = Mono::new(m.x - lead.x, m.y - lead.y, m.h);
            for (rm, rc) in rep.mul_mono(q).terms() {
                cur.add_term(*rm, rc * &c);
            }
        }
    }

    /// Normal form with every `x` exponent at most 3 (A3 family only).
    pub fn normal_form(self, p: &WeightedPoly) -> Result<WeightedPoly> {
        if !self.is_a3() {
            return Err(Error::UnsupportedNormalForm(self.slug()));
        }
        Ok(self.canonical(p))
    }

    /// Substitutes the concrete Hamiltonian for the symbol `H`.
    pub fn expand(self, p: &WeightedPoly) -> WeightedPoly {
        p.substitute_h(&self.poly())
    }

    /// Equality as functions on the plane.
    pub fn same_function(self, a: &WeightedPoly, b: &WeightedPoly) -> bool {
        self.expand(&(a - b)).is_zero()
    }

    /// Exterior derivative; `H` stays formal in the coefficients and is
    /// differentiated through `dH = H_x dx + H_y dy`.
    pub fn d(self, g: &WeightedPoly) -> OneForm {
        let (hx, hy) = self.grad();
        let gh = g.dh_formal();
        OneForm::new(&g.dx_formal() + &(&gh * &hx), &g.dy_formal() + &(&gh * &hy))
    }

    pub fn dh(self) -> OneForm {
        let (hx, hy) = self.grad();
        OneForm::new(hx, hy)
    }

    /// Scalar `c` with `dH ^ w = c dx ^ dy`.
    pub fn wedge_with_dh(self, w: &OneForm) -> WeightedPoly {
        let (hx, hy) = self.grad();
        &(&hx * w.b()) - &(&hy * w.a())
    }

    /// `G0 = (x^2 + e) y / 4`, the exact part in `x y dx = dG0 + H dphi`.
    pub fn g0(self) -> Result<WeightedPoly> {
        let (_, e) = self.require_a3()?;
        let mut g = WeightedPoly::zero();
        g.add_term(Mono::new(2, 1, 0), rat(1, 4));
        g.add_term(Mono::new(0, 1, 0), rat(e, 4));
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ts: &[(i64, u32, u32, u32)]) -> WeightedPoly {
        WeightedPoly::from_terms(ts)
    }

    #[test]
    fn x4_rewrite_eight_loop() {
        let h = Hamiltonian::EightLoop;
        let nf = h.normal_form(&p(&[(1, 4, 0, 0)])).unwrap();
        assert_eq!(nf, p(&[(4, 0, 0, 1), (-2, 0, 2, 0), (2, 2, 0, 0), (-1, 0, 0, 0)]));
        let x3 = p(&[(1, 3, 0, 0)]);
        assert_eq!(h.normal_form(&x3).unwrap(), x3);
        assert!(Hamiltonian::D4Triangle.normal_form(&x3).is_err());
    }

    #[test]
    fn x5y2_normal_form() {
        let h = Hamiltonian::EightLoop;
        let input = p(&[(1, 5, 2, 0)]);
        let nf = h.normal_form(&input).unwrap();
        // x*(4H - 2y^2 + 2x^2 - 1)*y^2 expanded
        let oracle = &p(&[(4, 0, 0, 1), (-2, 0, 2, 0), (2, 2, 0, 0), (-1, 0, 0, 0)]) * &p(&[(1, 1, 2, 0)]);
        assert_eq!(nf, oracle);
        assert!(nf.max_x() <= 3);
        for k in 0..10 {
            let (x, y) = (0.3 + 0.17 * k as f64, -1.1 + 0.29 * k as f64);
            let hv = h.eval(x, y);
            let a = input.eval_f64(x, y, hv);
            let b = nf.eval_f64(x, y, hv);
            assert!((a - b).abs() < 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn derivative_examples() {
        let h = Hamiltonian::EightLoop;
        let g = &p(&[(1, 2, 1, 0), (-1, 0, 1, 0)]).scale(&rat(1, 4));
        let dg = h.d(g);
        assert_eq!(dg.a(), &p(&[(1, 1, 1, 0)]).scale(&rat(1, 2)));
        assert_eq!(dg.b(), &p(&[(1, 2, 0, 0), (-1, 0, 0, 0)]).scale(&rat(1, 4)));
        assert!(h.d(&WeightedPoly::constant(int(7))).is_zero());
        let d2 = h.d(&p(&[(1, 2, 2, 0)]));
        assert_eq!(d2.a(), &p(&[(2, 1, 2, 0)]));
        assert_eq!(d2.b(), &p(&[(2, 2, 1, 0)]));
    }

    #[test]
    fn wedge_examples() {
        let h = Hamiltonian::EightLoop;
        assert!(h.wedge_with_dh(&h.dh()).is_zero());
        let ydx = OneForm::dx(p(&[(1, 0, 1, 0)]));
        assert_eq!(h.wedge_with_dh(&ydx), p(&[(-1, 0, 2, 0)]));
        let xdy = OneForm::dy(p(&[(1, 1, 0, 0)]));
        assert_eq!(h.wedge_with_dh(&xdy), p(&[(1, 4, 0, 0), (-1, 2, 0, 0)]));
    }

    #[test]
    fn d4_canonical_rewrites_xy2() {
        let h = Hamiltonian::D4Triangle;
        let c = h.canonical(&h.poly());
        assert_eq!(c, WeightedPoly::h());
        let q = p(&[(1, 2, 3, 0), (1, 0, 4, 0)]);
        let cq = h.canonical(&q);
        assert!(cq.terms().all(|(m, _)| m.x == 0 || m.y <= 1));
        assert!(h.same_function(&q, &cq));
    }
}
