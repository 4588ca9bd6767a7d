use num_traits::{One, Zero};

use super::rational::Rational;
use super::upoly::{Laurent, UPoly};

/// Rational function `num / den` in one variable, kept in lowest terms with a
/// monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc = Rational::one() / den.leading();
        Self { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn zero() -> Self {
        Self { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn from_poly(p: UPoly) -> Self {
        Self::new(p, UPoly::one())
    }

    pub fn from_laurent(l: &Laurent) -> Self {
        let p = l.pole_order();
        Self::new(l.numerator(p), UPoly::monomial(Rational::one(), p as usize))
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    /// Panics when dividing by zero.
    pub fn div(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    /// Laurent form when the denominator is a power of the variable.
    pub fn to_laurent(&self) -> Option<Laurent> {
        let d = self.den.degree().unwrap_or(0);
        if self.den != UPoly::monomial(Rational::one(), d) {
            return None;
        }
        Some(Laurent::from_poly_shifted(&self.num, -(d as i32)))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl core::ops::Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        RatFunc::add(&self, &o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let a = RatFunc::new(UPoly::from_ints(&[-1, 0, 1]), UPoly::from_ints(&[2, 2]));
        assert_eq!(a.num(), &UPoly::from_ints(&[-1, 1]).scale(&crate::algebra::rat(1, 2)));
        assert_eq!(a.den(), &UPoly::one());
        let b = RatFunc::from_laurent(&Laurent::monomial(Rational::one(), -2));
        assert_eq!(a.mul(&b).div(&b), a);
        assert_eq!(b.to_laurent(), Some(Laurent::monomial(Rational::one(), -2)));
        assert!(a.sub(&a).is_zero());
    }
}
