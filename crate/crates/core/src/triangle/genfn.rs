use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{fmt_rational, int, to_f64, Laurent, Rational};

use super::moments::{d4_reduce_moments, moment_relation, Moment, MomentExpr};

/// `M3(t) = c_-1 I_-1 + (c0 + c1/t) I0 + (c_*/t) I_*`, equivalently
/// `t M3 = (alpha + beta t) I0 + gamma I2 + delta I_*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D4GenFn {
    pub c_m1: Rational,
    pub c0: Rational,
    pub c1: Rational,
    pub c_star: Rational,
}

/// `t I_-1` in the basis `I0, I2`, read off the recursion at `k = 1`.
fn t_i_minus_one() -> (Rational, Rational) {
    // (8 I2 - 30 I1 + 18 I0 - t I_-1) reduced, then solved for t I_-1
    let rel = d4_reduce_moments(&moment_relation(1)).expect("basis relation");
    let lead = rel.coeff(Moment::I(-1)).coeff(1);
    let i0 = -rel.coeff(Moment::I(0)).coeff(0) / &lead;
    let i2 = -rel.coeff(Moment::I(2)).coeff(0) / &lead;
    (i0, i2)
}

impl D4GenFn {
    pub fn new(c_m1: Rational, c0: Rational, c1: Rational, c_star: Rational) -> Self {
        Self { c_m1, c0, c1, c_star }
    }

    /// Inverse of [`D4GenFn::abgd`].
    pub fn from_abgd(alpha: Rational, beta: Rational, gamma: Rational, delta: Rational) -> Self {
        let (a0, a2) = t_i_minus_one();
        let c_m1 = gamma / &a2;
        let c1 = alpha - &c_m1 * &a0;
        Self { c_m1, c0: beta, c1, c_star: delta }
    }

    /// `(alpha, beta, gamma, delta)`; with `t I_-1 = 8 I2 - 12 I0` this is
    /// `(c1 - 12 c_-1, c0, 8 c_-1, c_*)`.
    pub fn abgd(&self) -> [Rational; 4] {
        let (a0, a2) = t_i_minus_one();
        [&self.c1 + &self.c_m1 * &a0, self.c0.clone(), &self.c_m1 * &a2, self.c_star.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.c_m1.is_zero() && self.c0.is_zero() && self.c1.is_zero() && self.c_star.is_zero()
    }

    /// `M3` as a moment combination.
    pub fn to_moments(&self) -> MomentExpr {
        let mut e = MomentExpr::zero();
        e.add(Moment::I(-1), &Laurent::constant(self.c_m1.clone()));
        e.add(Moment::I(0), &Laurent::constant(self.c0.clone()));
        e.add(Moment::I(0), &Laurent::monomial(self.c1.clone(), -1));
        e.add(Moment::Star, &Laurent::monomial(self.c_star.clone(), -1));
        e
    }

    /// `M3(t)` from values of `I_-1, I0, I_*`.
    pub fn eval(&self, t: f64, i_m1: f64, i0: f64, i_star: f64) -> f64 {
        to_f64(&self.c_m1) * i_m1 + (to_f64(&self.c0) + to_f64(&self.c1) / t) * i0 + to_f64(&self.c_star) / t * i_star
    }

    /// Nonzero terms only, e.g. `M3 = (1/1)/t*I* + (-3/32)*I-1`.
    pub fn to_text(&self) -> String {
        let terms = [
            (&self.c_star, "/t*I*"),
            (&self.c_m1, "*I-1"),
            (&self.c0, "*I0"),
            (&self.c1, "/t*I0"),
        ];
        let parts: Vec<String> =
            terms.iter().filter(|(c, _)| !c.is_zero()).map(|(c, b)| format!("({}){b}", fmt_rational(c))).collect();
        if parts.is_empty() {
            return String::from("M3 = 0");
        }
        format!("M3 = {}", parts.join(" + "))
    }
}

impl Default for D4GenFn {
    fn default() -> Self {
        Self::new(int(0), int(0), int(0), int(0))
    }
}
