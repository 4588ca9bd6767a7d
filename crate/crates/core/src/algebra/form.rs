use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use super::poly::{Mono, WeightedPoly};
use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

/// `a dx + b dy`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct OneForm {
    a: WeightedPoly,
    b: WeightedPoly,
}

impl OneForm {
    pub fn new(a: WeightedPoly, b: WeightedPoly) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn dx(a: WeightedPoly) -> Self {
        Self::new(a, WeightedPoly::zero())
    }

    pub fn dy(b: WeightedPoly) -> Self {
        Self::new(WeightedPoly::zero(), b)
    }

    /// `x^k y dx`.
    pub fn sigma(k: u32) -> Self {
        Self::dx(WeightedPoly::term(Rational::one(), k, 1, 0))
    }

    pub fn a(&self) -> &WeightedPoly {
        &self.a
    }

    pub fn b(&self) -> &WeightedPoly {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &OneForm) -> OneForm {
        OneForm::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &OneForm) -> OneForm {
        OneForm::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn scale(&self, c: &Rational) -> OneForm {
        OneForm::new(self.a.scale(c), self.b.scale(c))
    }

    pub fn mul_poly(&self, p: &WeightedPoly) -> OneForm {
        OneForm::new(p * &self.a, p * &self.b)
    }

    /// `max(deg a, deg b)`.
    pub fn weighted_degree(&self) -> Option<u32> {
        match (self.a.weighted_degree(), self.b.weighted_degree()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
        }
    }

    pub fn map(&self, f: impl Fn(&WeightedPoly) -> WeightedPoly) -> OneForm {
        OneForm::new(f(&self.a), f(&self.b))
    }

    /// Coefficients at a point, with `H` given explicitly.
    pub fn eval_f64(&self, x: f64, y: f64, h: f64) -> (f64, f64) {
        (self.a.eval_f64(x, y, h), self.b.eval_f64(x, y, h))
    }

    pub fn to_text(&self) -> String {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => String::from("0"),
            (false, true) => format!("({}) dx", self.a),
            (true, false) => format!("({}) dy", self.b),
            (false, false) => format!("({}) dx + ({}) dy", self.a, self.b),
        }
    }

    /// Parses sums of `c*x^i*y^j dx` / `dy` terms; `c` is `n` or `n/d`,
    /// factors may be separated by `*` or spaces and `H^k` is accepted.
    /// Groups `(p) dx` as printed by [`OneForm::to_text`] are distributed.
    pub fn parse(src: &str) -> Result<OneForm> {
        let mut out = OneForm::zero();
        let s: String = src.chars().map(|c| if c.is_whitespace() { ' ' } else { c }).collect();
        let s = expand_groups(&s)?;
        let terms = split_terms(&s);
        let mut any = false;
        for t in terms {
            let t = t.trim();
            if t.is_empty() {
                continue;
            }
            let (neg, body) = match t.as_bytes()[0] {
                b'-' => (true, t[1..].trim()),
                b'+' => (false, t[1..].trim()),
                _ => (false, t),
            };
            let (body, is_dx) = if let Some(b) = body.strip_suffix("dx") {
                (b, true)
            } else if let Some(b) = body.strip_suffix("dy") {
                (b, false)
            } else {
                return Err(Error::Parse(format!("term `{t}` must end in dx or dy")));
            };
            let mut coef = Rational::one();
            let mut mono = Mono::ONE;
            for f in body.split(|c| c == '*' || c == ' ').filter(|f| !f.is_empty()) {
                let (base, exp) = match f.split_once('^') {
                    Some((b, e)) => {
                        let e: u32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{f}`")))?;
                        (b, e)
                    }
                    None => (f, 1),
                };
                match base {
                    "x" => mono.x += exp,
                    "y" => mono.y += exp,
                    "H" => mono.h += exp,
                    _ => {
                        if f.contains('^') {
                            return Err(Error::Parse(format!("exponent on constant `{f}`")));
                        }
                        coef *= parse_rational(f)?;
                    }
                }
            }
            if neg {
                coef = -coef;
            }
            let p = WeightedPoly::term(coef, mono.x, mono.y, mono.h);
            out = if is_dx { out.add(&OneForm::dx(p)) } else { out.add(&OneForm::dy(p)) };
            any = true;
        }
        if !any {
            return Err(Error::Parse(String::from("empty one-form")));
        }
        Ok(out)
    }
}

impl core::fmt::Display for OneForm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Splits at top-level `+`/`-` signs that do not follow `^`.
fn split_terms(s: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() && !cur.trim_end().ends_with('^') {
            terms.push(core::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    terms
}

/// Rewrites `± (t1 ± t2 ...) dx` as `± t1 dx ± t2 dx ...`.
fn expand_groups(s: &str) -> Result<String> {
    let mut out = String::new();
    let mut rest = s;
    while let Some(open) = rest.find('(') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find(')').map(|i| open + i).ok_or_else(|| Error::Parse(String::from("unbalanced `(`")))?;
        let inner = &rest[open + 1..close];
        if inner.contains('(') {
            return Err(Error::Parse(String::from("nested parentheses")));
        }
        let after = rest[close + 1..].trim_start();
        let diff = if after.starts_with("dx") {
            "dx"
        } else if after.starts_with("dy") {
            "dy"
        } else {
            return Err(Error::Parse(format!("`({inner})` must be followed by dx or dy")));
        };
        let trimmed = out.trim_end();
        let flip = trimmed.ends_with('-');
        if flip || trimmed.ends_with('+') {
            out.truncate(trimmed.len() - 1);
        } else if !trimmed.is_empty() {
            return Err(Error::Parse(format!("missing sign before `({inner})`")));
        }
        for t in split_terms(inner) {
            let t = t.trim();
            if t.is_empty() {
                continue;
            }
            let (neg, body) = match t.as_bytes()[0] {
                b'-' => (true, t[1..].trim()),
                b'+' => (false, t[1..].trim()),
                _ => (false, t),
            };
            out.push_str(if neg != flip { " - " } else { " + " });
            out.push_str(body);
            out.push(' ');
            out.push_str(diff);
        }
        rest = &after[2..];
    }
    out.push_str(rest);
    Ok(out)
}
