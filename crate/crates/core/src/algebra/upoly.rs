use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_coeff_sign, int, to_f64, Rational};

/// Dense univariate polynomial over the rationals, coefficients low to high.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut v = vec![Rational::zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&v| int(v)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Multiplicity of the root at zero (0 for the zero polynomial).
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn shift_degree(&self, by: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); by];
        v.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(v)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Taylor shift: returns `p(t + a)`.
    pub fn shift(&self, a: &Rational) -> Self {
        let lin = Self::from_coeffs(vec![a.clone(), Rational::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1.make_primitive().0;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lc = a.leading();
        a.scale(&(Rational::one() / lc))
    }

    /// Scales to integer coefficients with gcd 1 and a positive leading
    /// coefficient. Returns the factor that was applied.
    pub fn make_primitive(&self) -> (Self, Rational) {
        if self.is_zero() {
            return (Self::zero(), Rational::one());
        }
        let f = primitive_factor(self.coeffs.iter());
        let f = if self.leading().is_negative() { -f } else { f };
        (self.scale(&f), f)
    }

    /// Rational roots with multiplicity, ascending; the second value is the
    /// cofactor without rational roots. Candidates come from the rational root
    /// theorem, so coefficients past `i64` are not searched.
    pub fn rational_roots(&self) -> (Vec<(Rational, usize)>, Self) {
        let mut rest = self.clone();
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        if rest.is_zero() {
            return (roots, rest);
        }
        let zeros = rest.low_order();
        if zeros > 0 {
            roots.push((Rational::zero(), zeros));
            rest = Self::from_coeffs(rest.coeffs[zeros..].to_vec());
        }
        let (prim, _) = rest.make_primitive();
        let to_i64 = |r: &Rational| i64::try_from(r.to_integer()).ok();
        let (Some(a0), Some(an)) = (to_i64(&prim.coeff(0)), to_i64(&prim.leading())) else {
            return (roots, rest);
        };
        let divisors = |n: i64| -> Vec<i64> {
            let n = n.unsigned_abs();
            let mut v = Vec::new();
            let mut d = 1u64;
            while d * d <= n {
                if n % d == 0 {
                    v.push(d as i64);
                    v.push((n / d) as i64);
                }
                d += 1;
            }
            v
        };
        let fc: Vec<f64> = prim.coeffs.iter().map(to_f64).collect();
        let near_root = |x: f64| {
            let (mut v, mut scale) = (0.0f64, 0.0f64);
            for c in fc.iter().rev() {
                v = v * x + c;
                scale = scale * x.abs() + c.abs();
            }
            v.abs() <= 1e-9 * scale
        };
        let mut tried = alloc::collections::BTreeSet::new();
        let (ps, qs) = (divisors(a0), divisors(an));
        for q in &qs {
            for p in &ps {
                for s in [1, -1] {
                    if !near_root((s * p) as f64 / *q as f64) {
                        continue;
                    }
                    let r = Rational::new((s * p).into(), (*q).into());
                    if !tried.insert(r.clone()) {
                        continue;
                    }
                    let lin = Self::from_coeffs(vec![-r.clone(), Rational::one()]);
                    let mut mult = 0;
                    while rest.degree().unwrap_or(0) > 0 && rest.eval(&r).is_zero() {
                        rest = rest.div_rem(&lin).0;
                        mult += 1;
                    }
                    if mult > 0 {
                        roots.push((r, mult));
                    }
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, rest)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            s.push_str(&fmt_coeff_sign(c, first, i == 0));
            match i {
                0 => {}
                1 => s.push_str(var),
                _ => {
                    s.push_str(var);
                    s.push('^');
                    s.push_str(&alloc::format!("{i}"));
                }
            }
            first = false;
        }
        s
    }
}

/// Positive factor that makes all coefficients of all polynomials coprime
/// integers.
pub fn upoly_content(ps: &[UPoly]) -> Rational {
    primitive_factor(ps.iter().flat_map(|p| p.coeffs.iter()))
}

/// The positive rational `f` such that `f * c` are coprime integers.
pub(crate) fn primitive_factor<'a>(cs: impl Iterator<Item = &'a Rational>) -> Rational {
    let mut den_lcm = num_bigint::BigInt::one();
    let mut num_gcd = num_bigint::BigInt::zero();
    for c in cs {
        if c.is_zero() {
            continue;
        }
        den_lcm = den_lcm.lcm(c.denom());
        num_gcd = num_gcd.gcd(c.numer());
    }
    if num_gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(den_lcm, num_gcd)
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(v)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
    )*};
}
forward_owned!(UPoly, Add add, Sub sub, Mul mul);

/// Laurent polynomial in one variable: finitely supported exponent -> coefficient.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Laurent {
    terms: BTreeMap<i32, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_poly(p: &UPoly) -> Self {
        Self::from_poly_shifted(p, 0)
    }

    /// `t^shift * p(t)`.
    pub fn from_poly_shifted(p: &UPoly, shift: i32) -> Self {
        let mut l = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            l.add_term(i as i32 + shift, c.clone());
        }
        l
    }

    pub fn add_term(&mut self, e: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_assign(&mut self, o: &Laurent) {
        for (e, c) in &o.terms {
            self.add_term(*e, c.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut l = Self::zero();
        for (e, a) in &self.terms {
            l.add_term(*e, a * c);
        }
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Pole order at zero (0 when there are no negative exponents).
    pub fn pole_order(&self) -> u32 {
        self.min_exp().map_or(0, |e| (-e).max(0) as u32)
    }

    /// Returns `t^p * self` as a polynomial for `p = pole_order()`.
    pub fn numerator(&self, p: u32) -> UPoly {
        let mut v = Vec::new();
        for (e, c) in &self.terms {
            let i = (*e + p as i32) as usize;
            if v.len() <= i {
                v.resize(i + 1, Rational::zero());
            }
            v[i] = c.clone();
        }
        UPoly::from_coeffs(v)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * crate::fmath::powi(t, *e))
            .sum()
    }

    pub fn constant(c: Rational) -> Self {
        let mut l = Self::zero();
        l.add_term(0, c);
        l
    }

    pub fn monomial(c: Rational, e: i32) -> Self {
        let mut l = Self::zero();
        l.add_term(e, c);
        l
    }

    pub fn coeff(&self, e: i32) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// `t^k * self`.
    pub fn shift(&self, k: i32) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, o: &Laurent) -> Self {
        let mut r = self.clone();
        r.add_assign(&o.neg());
        r
    }

    pub fn mul(&self, o: &Laurent) -> Self {
        let mut r = Self::zero();
        for (e, a) in &self.terms {
            for (f, b) in &o.terms {
                r.add_term(e + f, a * b);
            }
        }
        r
    }

    /// The polynomial itself when there are no negative exponents.
    pub fn as_poly(&self) -> Option<UPoly> {
        (self.pole_order() == 0).then(|| self.numerator(0))
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let p = self.pole_order();
        let num = self.numerator(p).fmt_var(var);
        match p {
            0 => num,
            1 => alloc::format!("({num})/{var}"),
            _ => alloc::format!("({num})/{var}^{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn division_and_gcd() {
        let a = UPoly::from_ints(&[-1, 0, 1]); // t^2 - 1
        let b = UPoly::from_ints(&[1, 1]); // t + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let c = UPoly::from_ints(&[2, 3, 1]); // (t+1)(t+2)
        assert_eq!(a.gcd(&c), b);
        // t^2 (t+1)^2 (2t - 3)(t^2 + 2)
        let p = &(&UPoly::from_ints(&[0, 0, 1]) * &c.pow(0)) * &(&b.pow(2) * &(&UPoly::from_ints(&[-3, 2]) * &UPoly::from_ints(&[2, 0, 1])));
        let (roots, rest) = p.rational_roots();
        assert_eq!(roots, vec![(int(-1), 2), (int(0), 2), (crate::algebra::rat(3, 2), 1)]);
        assert_eq!(rest.degree(), Some(2));
    }

    #[test]
    fn primitive_and_shift() {
        let p = UPoly::from_coeffs(alloc::vec![rat(-1, 2), rat(3, 4)]);
        let (q, f) = p.make_primitive();
        assert_eq!(q, UPoly::from_ints(&[-2, 3]));
        assert_eq!(f, int(4));
        let s = UPoly::from_ints(&[0, 0, 1]).shift(&int(1));
        assert_eq!(s, UPoly::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn laurent_numerator() {
        let mut l = Laurent::zero();
        l.add_term(-2, int(3));
        l.add_term(1, int(1));
        assert_eq!(l.pole_order(), 2);
        assert_eq!(l.numerator(2), UPoly::from_ints(&[3, 0, 0, 1]));
    }
}
