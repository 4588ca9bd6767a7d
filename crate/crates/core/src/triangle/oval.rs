//! Formal integration over the triangle ovals `f = t`.
//!
//! On the oval `y^2 = Y(x) = t/x + (x-3)^2`, `y dy = Y'/2 dx` and
//! `dL = 3(x-1)/(x y) dx`. Every integrand `L^a ln^b(x) P(x, y) dx|dy|dL` is
//! brought to one of two shapes, `L^a ln^b(x) x^m dx` (even in `y`) or
//! `L^a ln^b(x) x^m dx/y` (odd in `y`). The reflection `y -> -y` reverses the
//! oval and flips the sign of `L`, so a term survives only when its total
//! parity is odd. Even terms with odd `a` are integrated by parts in `x`,
//! which lowers `a`. Odd terms are pushed into the window `m in {-2, -1, 0}`
//! using `d(L^a ln^b(x) x^k y) ~ 0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::{int, rat, ExtElem, Laurent, RatFunc, Rational, WeightedPoly};
use crate::error::{Error, Result};

/// Laurent polynomial in `x` with Laurent-in-`t` coefficients.
type Xl = BTreeMap<i32, Laurent>;

fn xl_add(p: &mut Xl, m: i32, c: &Laurent) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(m).or_default();
    slot.add_assign(c);
    if slot.is_zero() {
        p.remove(&m);
    }
}

fn xl_mul(a: &Xl, b: &Xl) -> Xl {
    let mut r = Xl::new();
    for (m, c) in a {
        for (n, d) in b {
            xl_add(&mut r, m + n, &c.mul(d));
        }
    }
    r
}

fn xl_scale(a: &Xl, c: &Laurent) -> Xl {
    let mut r = Xl::new();
    for (m, d) in a {
        xl_add(&mut r, *m, &d.mul(c));
    }
    r
}

fn xl_from(terms: &[(i32, Laurent)]) -> Xl {
    let mut r = Xl::new();
    for (m, c) in terms {
        xl_add(&mut r, *m, c);
    }
    r
}

fn lc(c: i64) -> Laurent {
    Laurent::constant(int(c))
}

fn tpow(c: Rational, e: i32) -> Laurent {
    Laurent::monomial(c, e)
}

/// `y^2` on the oval.
fn y2() -> Xl {
    xl_from(&[(-1, tpow(int(1), 1)), (2, lc(1)), (1, lc(-6)), (0, lc(9))])
}

/// `Y'/2`, so that `y dy = (Y'/2) dx`.
fn half_y2_prime() -> Xl {
    xl_from(&[(-2, tpow(rat(-1, 2), 1)), (1, lc(1)), (0, lc(-3))])
}

/// `y dL / dx = 3(x-1)/x`.
fn dl_factor() -> Xl {
    xl_from(&[(0, lc(3)), (-1, lc(-3))])
}

fn y2_pow(k: u32) -> Xl {
    let mut r = xl_from(&[(0, lc(1))]);
    let y = y2();
    for _ in 0..k {
        r = xl_mul(&r, &y);
    }
    r
}

/// Polynomial in `x` (Laurent) and `y` with Laurent-in-`t` coefficients: an
/// ext-ring numerator restricted to the level `f = t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OvalPoly {
    terms: BTreeMap<(i32, u32), Laurent>,
}

impl OvalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: i32, n: u32, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((m, n)).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.remove(&(m, n));
        }
    }

    /// `p(x, y, H = t) * t^shift`.
    pub fn from_weighted(p: &WeightedPoly, shift: i32) -> Self {
        let mut r = Self::zero();
        for (mono, c) in p.terms() {
            r.add_term(mono.x as i32, mono.y, &tpow(c.clone(), mono.h as i32 + shift));
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, o: &OvalPoly) -> OvalPoly {
        let mut r = Self::zero();
        for ((m, n), c) in &self.terms {
            for ((m2, n2), d) in &o.terms {
                r.add_term(m + m2, n + n2, &c.mul(d));
            }
        }
        r
    }

    fn dx(&self) -> OvalPoly {
        let mut r = Self::zero();
        for ((m, n), c) in &self.terms {
            if *m != 0 {
                r.add_term(m - 1, *n, &c.scale(&int(*m as i64)));
            }
        }
        r
    }

    fn dy(&self) -> OvalPoly {
        let mut r = Self::zero();
        for ((m, n), c) in &self.terms {
            if *n != 0 {
                r.add_term(*m, n - 1, &c.scale(&int(*n as i64)));
            }
        }
        r
    }

    /// Splits `P = pe(x) + y po(x)` after substituting `y^2 = Y(x)`.
    fn split_y(&self) -> (Xl, Xl) {
        let (mut pe, mut po) = (Xl::new(), Xl::new());
        for ((m, n), c) in &self.terms {
            let target = if n % 2 == 0 { &mut pe } else { &mut po };
            for (k, d) in y2_pow(n / 2) {
                xl_add(target, m + k, &d.mul(c));
            }
        }
        (pe, po)
    }
}

/// Which differential an [`OvalTerm`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diff {
    Dx,
    Dy,
    DL,
}

/// `L^a ln^b(x) P(x, y) d?` on the oval.
#[derive(Clone, Debug)]
pub struct OvalTerm {
    pub a: u32,
    pub b: u32,
    pub diff: Diff,
    pub p: OvalPoly,
}

/// Integrand `-Q dq` on the oval, with `L` kept formal and `f` replaced by `t`.
/// `q` must be free of logarithms of `x`.
pub fn minus_q_dq(big_q: &ExtElem, q: &ExtElem) -> Vec<OvalTerm> {
    let mut dq: Vec<(u32, Diff, OvalPoly)> = Vec::new();
    for (&(j, p), n) in q.terms() {
        let np = OvalPoly::from_weighted(n, -(p as i32));
        if j > 0 {
            let s = np.mul(&scalar(int(j as i64)));
            dq.push((j - 1, Diff::DL, s));
        }
        dq.push((j, Diff::Dx, np.dx()));
        dq.push((j, Diff::Dy, np.dy()));
    }
    let mut out = Vec::new();
    for (&(i, p), n) in big_q.terms() {
        let np = OvalPoly::from_weighted(n, -(p as i32)).mul(&scalar(int(-1)));
        for (j, diff, d) in &dq {
            let prod = np.mul(d);
            if !prod.is_zero() {
                out.push(OvalTerm { a: i + j, b: 0, diff: *diff, p: prod });
            }
        }
    }
    out
}

/// Integrand of a polynomial one-form `A dx + B dy`.
pub fn form_terms(w: &crate::algebra::OneForm) -> Vec<OvalTerm> {
    alloc::vec![
        OvalTerm { a: 0, b: 0, diff: Diff::Dx, p: OvalPoly::from_weighted(w.a(), 0) },
        OvalTerm { a: 0, b: 0, diff: Diff::Dy, p: OvalPoly::from_weighted(w.b(), 0) },
    ]
}

fn scalar(c: Rational) -> OvalPoly {
    let mut r = OvalPoly::zero();
    r.add_term(0, 0, &Laurent::constant(c));
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Even,
    Odd,
}

const WINDOW: [i32; 3] = [-2, -1, 0];

#[derive(Default)]
struct Store {
    terms: BTreeMap<(u32, u32, Kind, i32), Laurent>,
}

impl Store {
    fn push(&mut self, a: u32, b: u32, kind: Kind, p: &Xl, scale: &Laurent) {
        let odd_total = match kind {
            Kind::Even => a % 2 == 1,
            Kind::Odd => a % 2 == 0,
        };
        if !odd_total {
            return;
        }
        for (m, c) in p {
            let c = c.mul(scale);
            if c.is_zero() {
                continue;
            }
            let key = (a, b, kind, *m);
            let slot = self.terms.entry(key).or_default();
            slot.add_assign(&c);
            if slot.is_zero() {
                self.terms.remove(&key);
            }
        }
    }

    fn add(&mut self, t: &OvalTerm) {
        let one = lc(1);
        let (a, b) = (t.a, t.b);
        let (mut pe, po) = t.p.split_y();
        match t.diff {
            Diff::Dx => {
                self.push(a, b, Kind::Even, &pe, &one);
                self.push(a, b, Kind::Odd, &xl_mul(&po, &y2()), &one);
            }
            Diff::DL => {
                if b == 0 {
                    // c(t) L^a dL is exact
                    pe.remove(&0);
                }
                self.push(a, b, Kind::Odd, &xl_mul(&pe, &dl_factor()), &one);
                self.push(a, b, Kind::Even, &xl_mul(&po, &dl_factor()), &one);
            }
            Diff::Dy => {
                self.push(a, b, Kind::Even, &xl_mul(&po, &half_y2_prime()), &one);
                for (m, c) in &pe {
                    // x^m dy = d(x^m y) - m x^{m-1} y dx - (a L^{a-1} x^m y dL + b ln^{b-1} x^{m-1} y dx)
                    let ym1 = shift_xl(&y2(), m - 1);
                    self.push(a, b, Kind::Odd, &ym1, &c.scale(&int(-(*m as i64))));
                    if a > 0 {
                        self.push(a - 1, b, Kind::Even, &shift_xl(&dl_factor(), *m), &c.scale(&int(-(a as i64))));
                    }
                    if b > 0 {
                        self.push(a, b - 1, Kind::Odd, &ym1, &c.scale(&int(-(b as i64))));
                    }
                }
            }
        }
    }

    fn take_even(&mut self) -> Option<((u32, u32, i32), Laurent)> {
        let key = *self.terms.keys().rev().find(|k| k.2 == Kind::Even)?;
        let c = self.terms.remove(&key)?;
        Some(((key.0, key.1, key.3), c))
    }

    fn take_outside(&mut self) -> Option<((u32, u32, i32), Laurent)> {
        let key = *self.terms.keys().rev().find(|k| k.2 == Kind::Odd && !WINDOW.contains(&k.3))?;
        let c = self.terms.remove(&key)?;
        Some(((key.0, key.1, key.3), c))
    }

    fn run(&mut self) {
        loop {
            if let Some(((a, b, m), c)) = self.take_even() {
                // oint L^a dP = -a oint P L^{a-1} dL, dP = ln^b(x) x^m dx
                for (j, pj) in primitive(b, m) {
                    let s = c.scale(&int(-(a as i64)));
                    self.push(a - 1, j, Kind::Odd, &xl_mul(&pj, &dl_factor()), &s);
                }
                continue;
            }
            if let Some(((a, b, m), c)) = self.take_outside() {
                // image of x^k: (k+1)x^{k+1} - (6k+3)x^k + 9k x^{k-1} + (k-1/2) t x^{k-2}
                let (k, lead) = if m > 0 {
                    (m - 1, lc((m) as i64))
                } else {
                    let k = m + 2;
                    (k, tpow(Rational::from_integer((2 * k - 1).into()) / int(2), 1))
                };
                let img = xl_from(&[
                    (k + 1, lc((k + 1) as i64)),
                    (k, lc(-(6 * k + 3) as i64)),
                    (k - 1, lc(9 * k as i64)),
                    (k - 2, tpow(Rational::from_integer((2 * k - 1).into()) / int(2), 1)),
                ]);
                let s = laurent_div(&c, &lead);
                let mut rest = img.clone();
                rest.remove(&m);
                self.push(a, b, Kind::Odd, &rest, &s.neg());
                if b > 0 {
                    self.push(a, b - 1, Kind::Odd, &shift_xl(&y2(), k - 1), &s.scale(&int(-(b as i64))));
                }
                if a > 0 {
                    self.push(a - 1, b, Kind::Even, &shift_xl(&dl_factor(), k), &s.scale(&int(-(a as i64))));
                }
                continue;
            }
            break;
        }
    }
}

fn shift_xl(p: &Xl, by: i32) -> Xl {
    p.iter().map(|(m, c)| (m + by, c.clone())).collect()
}

/// Division by a Laurent monomial.
fn laurent_div(c: &Laurent, mono: &Laurent) -> Laurent {
    let (e, k) = mono.terms().next().map(|(e, k)| (e, k.clone())).expect("nonzero divisor");
    c.scale(&(Rational::one() / k)).shift(-e)
}

/// `int ln^b(x) x^m dx` as `sum_j ln^j(x) P_j(x)`.
fn primitive(b: u32, m: i32) -> BTreeMap<u32, Xl> {
    let mut r: BTreeMap<u32, Xl> = BTreeMap::new();
    if m == -1 {
        r.insert(b + 1, xl_from(&[(0, Laurent::constant(rat(1, (b + 1) as i64)))]));
        return r;
    }
    r.insert(b, xl_from(&[(m + 1, Laurent::constant(rat(1, (m + 1) as i64)))]));
    if b > 0 {
        let f = Laurent::constant(rat(-(b as i64), (m + 1) as i64));
        for (j, p) in primitive(b - 1, m) {
            let slot = r.entry(j).or_default();
            for (e, c) in xl_scale(&p, &f) {
                xl_add(slot, e, &c);
            }
        }
    }
    r
}

/// Result of the formal reduction: coordinates on `ln^b(x) x^m dx/y` with
/// `m` in the window `{-2, -1, 0}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OvalIntegral {
    coords: BTreeMap<(u32, i32), Laurent>,
}

impl OvalIntegral {
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn max_log(&self) -> Option<u32> {
        self.coords.keys().map(|k| k.0).max()
    }

    fn level(&self, b: u32) -> [RatFunc; 3] {
        WINDOW.map(|m| self.coords.get(&(b, m)).map_or_else(RatFunc::zero, RatFunc::from_laurent))
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|((b, m), c)| format!("[{}] ln^{b}(x) x^{m} dx/y", c.fmt_var("t")))
            .collect();
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.join(" + ")
        }
    }
}

/// Reduces `oint sum terms` to window coordinates.
pub fn integrate(terms: &[OvalTerm]) -> Result<OvalIntegral> {
    let mut st = Store::default();
    for t in terms {
        st.add(t);
    }
    st.run();
    let mut out = OvalIntegral::default();
    for ((a, b, kind, m), c) in st.terms {
        if a > 0 || kind != Kind::Odd {
            return Err(Error::Unsupported(format!(
                "oval integral with L^{a} beyond the integration-by-parts reduction"
            )));
        }
        out.coords.insert((b, m), c);
    }
    Ok(out)
}

/// Window coordinates of `oint ln^b(x) x^k y dx`.
pub fn moment_integral(k: i32, b: u32) -> OvalIntegral {
    let mut p = OvalPoly::zero();
    p.add_term(k, 1, &lc(1));
    integrate(&[OvalTerm { a: 0, b, diff: Diff::Dx, p }]).expect("moments reduce")
}

/// Window coordinates of `I_* = oint y (x-1) ln x dx`.
pub fn star_integral() -> OvalIntegral {
    let mut p = OvalPoly::zero();
    p.add_term(1, 1, &lc(1));
    p.add_term(0, 1, &lc(-1));
    integrate(&[OvalTerm { a: 0, b: 1, diff: Diff::Dx, p }]).expect("I_* reduces")
}

/// `a0 I0 + a2 I2 + s I_*` with rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentCombo {
    pub i0: RatFunc,
    pub i2: RatFunc,
    pub star: RatFunc,
}

impl MomentCombo {
    pub fn is_zero(&self) -> bool {
        self.i0.is_zero() && self.i2.is_zero() && self.star.is_zero()
    }

    pub fn to_text(&self) -> String {
        let f = |r: &RatFunc| {
            if r.den() == &crate::algebra::UPoly::one() {
                format!("({})", r.num().fmt_var("t"))
            } else {
                format!("({})/({})", r.num().fmt_var("t"), r.den().fmt_var("t"))
            }
        };
        format!("{}*I0 + {}*I2 + {}*I_*", f(&self.i0), f(&self.i2), f(&self.star))
    }
}

fn det3(m: &[[RatFunc; 3]; 3]) -> RatFunc {
    let minor = |a: &RatFunc, b: &RatFunc, c: &RatFunc, d: &RatFunc| a.mul(d).sub(&b.mul(c));
    m[0][0]
        .mul(&minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
        .sub(&m[0][1].mul(&minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
        .add(&m[0][2].mul(&minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1])))
}

/// Solves `sum_j x_j col_j = rhs` by Cramer's rule over `Q(t)`.
pub(crate) fn cramer3(cols: &[[RatFunc; 3]; 3], rhs: &[RatFunc; 3]) -> Option<[RatFunc; 3]> {
    let mat = |cs: &[[RatFunc; 3]; 3]| -> [[RatFunc; 3]; 3] {
        core::array::from_fn(|r| core::array::from_fn(|c| cs[c][r].clone()))
    };
    let d = det3(&mat(cols));
    if d.is_zero() {
        return None;
    }
    Some(core::array::from_fn(|j| {
        let mut cs = cols.clone();
        cs[j] = rhs.clone();
        det3(&mat(&cs)).div(&d)
    }))
}

/// Expresses a reduced integral in the basis `I0, I2, I_*`, using `I1 = I0`.
/// Only first powers of `ln x` are representable (through `I_*`).
pub fn to_moments(v: &OvalIntegral) -> Result<MomentCombo> {
    if v.max_log().unwrap_or(0) > 1 {
        return Err(Error::Unsupported(String::from("powers of ln x above one in the oval integral")));
    }
    let star = star_integral();
    let v1 = v.level(1);
    let s1 = star.level(1);
    let pivot = (0..3).find(|&i| !s1[i].is_zero()).expect("I_* has a log part");
    let s = v1[pivot].div(&s1[pivot]);
    if (0..3).any(|i| v1[i] != s.mul(&s1[i])) {
        return Err(Error::Unsupported(String::from("ln x part not proportional to I_*")));
    }
    let v0 = v.level(0);
    let s0 = star.level(0);
    let rhs: [RatFunc; 3] = core::array::from_fn(|i| v0[i].sub(&s.mul(&s0[i])));
    let cols = [moment_integral(0, 0).level(0), moment_integral(1, 0).level(0), moment_integral(2, 0).level(0)];
    let x = cramer3(&cols, &rhs).expect("I0, I1, I2 are formally independent");
    Ok(MomentCombo { i0: x[0].add(&x[1]), i2: x[2].clone(), star: s })
}

/// `oint terms` in the basis `I0, I2, I_*`.
pub fn oval_moments(terms: &[OvalTerm]) -> Result<MomentCombo> {
    to_moments(&integrate(terms)?)
}
