use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{fmt_coeff_sign, int, to_f64, Rational};
use super::upoly::UPoly;

/// Monomial `x^x * y^y * H^h`. The derived order is lexicographic in
/// `(h, x, y)`, which is also the canonical printing order (descending).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub h: u32,
    pub x: u32,
    pub y: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { h: 0, x: 0, y: 0 };

    pub fn new(x: u32, y: u32, h: u32) -> Self {
        Self { h, x, y }
    }

    /// Weight one for `x`, `y` and two for `H`.
    pub fn weight(&self) -> u32 {
        self.x + self.y + 2 * self.h
    }

    fn mul(self, o: Mono) -> Mono {
        Mono {
            h: self.h + o.h,
            x: self.x + o.x,
            y: self.y + o.y,
        }
    }
}

/// Exact polynomial in `x`, `y` and the formal symbol `H`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WeightedPoly {
    terms: BTreeMap<Mono, Rational>,
}

impl WeightedPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, 0, 0)
    }

    pub fn term(c: Rational, x: u32, y: u32, h: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::new(x, y, h), c);
        p
    }

    /// Integer-coefficient shorthand: `(c, x, y, h)` tuples.
    pub fn from_terms(ts: &[(i64, u32, u32, u32)]) -> Self {
        let mut p = Self::zero();
        for &(c, x, y, h) in ts {
            p.add_term(Mono::new(x, y, h), int(c));
        }
        p
    }

    pub fn x() -> Self {
        Self::term(Rational::one(), 1, 0, 0)
    }

    pub fn y() -> Self {
        Self::term(Rational::one(), 0, 1, 0)
    }

    pub fn h() -> Self {
        Self::term(Rational::one(), 0, 0, 1)
    }

    /// Polynomial in `H` alone.
    pub fn from_h_poly(p: &UPoly) -> Self {
        let mut r = Self::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            r.add_term(Mono::new(0, 0, k as u32), c.clone());
        }
        r
    }

    pub fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Mono) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::weight).max()
    }

    pub fn max_x(&self) -> u32 {
        self.terms.keys().map(|m| m.x).max().unwrap_or(0)
    }

    pub fn max_h(&self) -> u32 {
        self.terms.keys().map(|m| m.h).max().unwrap_or(0)
    }

    /// Smallest `H` exponent over all monomials (0 for the zero polynomial).
    pub fn min_h(&self) -> u32 {
        self.terms.keys().map(|m| m.h).min().unwrap_or(0)
    }

    pub fn is_h_free(&self) -> bool {
        self.terms.keys().all(|m| m.h == 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: Mono) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    /// Divides by `H^k`; `None` unless every monomial carries `H^k`.
    pub fn div_h(&self, k: u32) -> Option<Self> {
        if self.terms.keys().any(|m| m.h < k) {
            return None;
        }
        Some(Self {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (Mono::new(m.x, m.y, m.h - k), a.clone()))
                .collect(),
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in `x` (H held fixed).
    pub fn dx_formal(&self) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            if m.x > 0 {
                r.add_term(Mono::new(m.x - 1, m.y, m.h), c * int(m.x as i64));
            }
        }
        r
    }

    pub fn dy_formal(&self) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            if m.y > 0 {
                r.add_term(Mono::new(m.x, m.y - 1, m.h), c * int(m.y as i64));
            }
        }
        r
    }

    pub fn dh_formal(&self) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            if m.h > 0 {
                r.add_term(Mono::new(m.x, m.y, m.h - 1), c * int(m.h as i64));
            }
        }
        r
    }

    /// Replaces the formal symbol `H` by `value` and expands.
    pub fn substitute_h(&self, value: &WeightedPoly) -> Self {
        let max_h = self.max_h();
        let mut powers = Vec::with_capacity(max_h as usize + 1);
        powers.push(Self::one());
        for k in 1..=max_h as usize {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            let base = powers[m.h as usize].mul_mono(Mono::new(m.x, m.y, 0));
            for (bm, bc) in base.terms {
                r.add_term(bm, bc * c);
            }
        }
        r
    }

    /// Reads a polynomial in `H` only; `None` if `x` or `y` occur.
    pub fn as_h_poly(&self) -> Option<UPoly> {
        if self.terms.keys().any(|m| m.x != 0 || m.y != 0) {
            return None;
        }
        let n = self.max_h() as usize + 1;
        let mut v = alloc::vec![Rational::zero(); n];
        for (m, c) in &self.terms {
            v[m.h as usize] = c.clone();
        }
        Some(UPoly::from_coeffs(v))
    }

    pub fn eval_f64(&self, x: f64, y: f64, h: f64) -> f64 {
        let p = crate::fmath::powi;
        self.terms
            .iter()
            .map(|(m, c)| to_f64(c) * p(x, m.x as i32) * p(y, m.y as i32) * p(h, m.h as i32))
            .sum()
    }

    pub fn eval(&self, x: &Rational, y: &Rational, h: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            acc += c * rpow(x, m.x) * rpow(y, m.y) * rpow(h, m.h);
        }
        acc
    }

    /// Canonical text form: monomials in descending `(H, x, y)` order.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let unit = *m == Mono::ONE;
            s.push_str(&fmt_coeff_sign(c, i == 0, unit));
            let mut factors: Vec<String> = Vec::new();
            for (name, e) in [("x", m.x), ("y", m.y), ("H", m.h)] {
                match e {
                    0 => {}
                    1 => factors.push(String::from(name)),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if !factors.is_empty() {
                let body = factors.join("*");
                let abs_one = c == &Rational::one() || c == &-Rational::one();
                if !abs_one {
                    s.push('*');
                }
                s.push_str(&body);
            }
        }
        s
    }
}

pub(crate) fn rpow(b: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

impl fmt::Debug for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a WeightedPoly> for &'a WeightedPoly {
    type Output = WeightedPoly;
    fn add(self, o: &WeightedPoly) -> WeightedPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a WeightedPoly> for &'a WeightedPoly {
    type Output = WeightedPoly;
    fn sub(self, o: &WeightedPoly) -> WeightedPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c.clone());
        }
        r
    }
}

impl<'a> Mul<&'a WeightedPoly> for &'a WeightedPoly {
    type Output = WeightedPoly;
    fn mul(self, o: &WeightedPoly) -> WeightedPoly {
        let mut r = WeightedPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(*m2), c1 * c2);
            }
        }
        r
    }
}

impl Neg for &WeightedPoly {
    type Output = WeightedPoly;
    fn neg(self) -> WeightedPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for WeightedPoly {
    type Output = WeightedPoly;
    fn add(self, o: WeightedPoly) -> WeightedPoly {
        &self + &o
    }
}

impl Sub for WeightedPoly {
    type Output = WeightedPoly;
    fn sub(self, o: WeightedPoly) -> WeightedPoly {
        &self - &o
    }
}

impl Mul for WeightedPoly {
    type Output = WeightedPoly;
    fn mul(self, o: WeightedPoly) -> WeightedPoly {
        &self * &o
    }
}

impl Neg for WeightedPoly {
    type Output = WeightedPoly;
    fn neg(self) -> WeightedPoly {
        -&self
    }
}
