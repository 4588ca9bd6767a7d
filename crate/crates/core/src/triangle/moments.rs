use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{int, Laurent, Rational};
use crate::error::{Error, Result};

/// Oval integrals over the triangle ovals: `I_k = oint x^k y dx` and
/// `I_* = oint y (x-1) ln x dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Moment {
    I(i32),
    Star,
}

impl Moment {
    pub fn name(self) -> String {
        match self {
            Moment::I(k) => format!("I{k}"),
            Moment::Star => String::from("I*"),
        }
    }
}

/// Finite combination `sum c_m(t) m` with Laurent coefficients in `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MomentExpr {
    terms: BTreeMap<Moment, Laurent>,
}

impl MomentExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(m: Moment) -> Self {
        let mut e = Self::zero();
        e.add(m, &Laurent::constant(int(1)));
        e
    }

    pub fn add(&mut self, m: Moment, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_expr(&mut self, o: &MomentExpr) {
        for (m, c) in &o.terms {
            self.add(*m, c);
        }
    }

    pub fn scale(&self, c: &Laurent) -> MomentExpr {
        let mut r = Self::zero();
        for (m, d) in &self.terms {
            r.add(*m, &d.mul(c));
        }
        r
    }

    pub fn coeff(&self, m: Moment) -> Laurent {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Moment, &Laurent)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval_f64(&self, t: f64, value: impl Fn(Moment) -> f64) -> f64 {
        self.terms.iter().map(|(m, c)| c.eval_f64(t) * value(*m)).sum()
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(m, c)| format!("({})*{}", c.fmt_var("t"), m.name())).collect();
        parts.join(" + ")
    }
}

/// `(2k+6) I_{k+1} - (12k+18) I_k + 18k I_{k-1} + (2k-3) t I_{k-2}`, which
/// vanishes on every oval.
pub fn moment_relation(k: i32) -> MomentExpr {
    let c = |v: i64| Laurent::constant(int(v));
    let k64 = k as i64;
    let mut e = MomentExpr::zero();
    e.add(Moment::I(k + 1), &c(2 * k64 + 6));
    e.add(Moment::I(k), &c(-(12 * k64 + 18)));
    e.add(Moment::I(k - 1), &c(18 * k64));
    e.add(Moment::I(k - 2), &Laurent::monomial(int(2 * k64 - 3), 1));
    e
}

/// Rewrites to the basis `{I_-1, I_0, I_2, I_*}` with `I_1 = I_0` and the
/// three-term recursion solved for its top index.
pub fn d4_reduce_moments(expr: &MomentExpr) -> Result<MomentExpr> {
    let mut cur = expr.clone();
    loop {
        let top = cur.terms.keys().rev().find_map(|m| match m {
            Moment::I(k) if *k >= 3 || *k == 1 || *k < -1 => Some(*k),
            _ => None,
        });
        let Some(k) = top else { return Ok(cur) };
        if k < -1 {
            return Err(Error::Unsupported(format!("moment I{k} below I-1")));
        }
        let c = cur.terms.remove(&Moment::I(k)).unwrap_or_default();
        if k == 1 {
            cur.add(Moment::I(0), &c);
            continue;
        }
        // I_k = [(12j+18) I_j - 18j I_{j-1} - (2j-3) t I_{j-2}] / (2j+6), j = k-1
        let j = (k - 1) as i64;
        let s = c.scale(&(Rational::from_integer(1.into()) / int(2 * j + 6)));
        cur.add(Moment::I(k - 1), &s.scale(&int(12 * j + 18)));
        cur.add(Moment::I(k - 2), &s.scale(&int(-18 * j)));
        cur.add(Moment::I(k - 3), &s.shift(1).scale(&int(-(2 * j - 3))));
    }
}
