//! JSON views of the core objects. Rationals are strings `num/den`,
//! polynomials in `t` are coefficient lists low-to-high.

use melnikov_core::algebra::{fmt_rational, ExtElem, Rational, UPoly};
use melnikov_core::monodromy::{Diagnosis, LoopWord};
use melnikov_core::reduction::{ChainStep, Decomposition, ExtDecomposition, GeneratingFn};
use melnikov_core::triangle::{D4Chain, D4GenFn, FuchsOde, LocalExponents};
use num_complex::Complex64;
use serde::Serialize;

pub fn rationals(p: &UPoly) -> Vec<String> {
    p.coeffs().iter().map(fmt_rational).collect()
}

fn r(x: &Rational) -> String {
    fmt_rational(x)
}

#[derive(Serialize)]
pub struct GenFnJson {
    pub k: u32,
    pub hamiltonian: &'static str,
    pub annulus: &'static str,
    pub pole_order: u32,
    pub alpha: Vec<String>,
    pub gamma: Vec<String>,
    pub beta: Vec<String>,
    pub text: String,
}

impl From<&GeneratingFn> for GenFnJson {
    fn from(g: &GeneratingFn) -> Self {
        let pole = match g.pole_order {
            0 => String::new(),
            1 => "t^-1 ".into(),
            p => format!("t^-{p} "),
        };
        Self {
            k: g.k,
            hamiltonian: g.hamiltonian.slug(),
            annulus: g.annulus.slug(),
            pole_order: g.pole_order,
            alpha: rationals(&g.alpha),
            gamma: rationals(&g.gamma),
            beta: rationals(&g.beta),
            text: {
                let parts: Vec<String> = [(&g.alpha, "I0"), (&g.beta, "I1"), (&g.gamma, "I2")]
                    .iter()
                    .filter(|(p, _)| !p.is_zero())
                    .map(|(p, i)| format!("({p}) {i}"))
                    .collect();
                if parts.is_empty() {
                    format!("M{} = 0", g.k)
                } else {
                    format!("M{} = {pole}[{}]", g.k, parts.join(" + "))
                }
            },
        }
    }
}

#[derive(Serialize)]
pub struct StepJson {
    pub k: u32,
    pub omega: String,
    pub exact: String,
    pub q: String,
}

impl From<&ChainStep> for StepJson {
    fn from(s: &ChainStep) -> Self {
        Self {
            k: s.k,
            omega: s.omega.to_text_with("phi", "H"),
            exact: s.exact.to_text(),
            q: s.q.to_text(),
        }
    }
}

#[derive(Serialize)]
pub struct DecompositionJson {
    pub kind: &'static str,
    pub exact: String,
    pub g: String,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub gamma: Vec<String>,
    pub relatively_exact: bool,
}

impl From<&Decomposition> for DecompositionJson {
    fn from(d: &Decomposition) -> Self {
        Self {
            kind: "polynomial",
            exact: d.exact.to_text(),
            g: d.g.to_text(),
            alpha: rationals(&d.alpha),
            beta: rationals(&d.beta),
            gamma: rationals(&d.gamma),
            relatively_exact: d.is_relatively_exact(),
        }
    }
}

impl From<&ExtDecomposition> for DecompositionJson {
    fn from(d: &ExtDecomposition) -> Self {
        Self {
            kind: "phi",
            exact: d.exact.to_text(),
            g: d.g.to_text(),
            alpha: rationals(&d.alpha),
            beta: Vec::new(),
            gamma: rationals(&d.gamma),
            relatively_exact: d.alpha.is_zero() && d.gamma.is_zero(),
        }
    }
}

#[derive(Serialize)]
pub struct D4GenFnJson {
    pub c_m1: String,
    pub c0: String,
    pub c1: String,
    pub c_star: String,
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
    pub text: String,
}

impl From<&D4GenFn> for D4GenFnJson {
    fn from(g: &D4GenFn) -> Self {
        let [a, b, c, d] = g.abgd();
        Self {
            c_m1: r(&g.c_m1),
            c0: r(&g.c0),
            c1: r(&g.c1),
            c_star: r(&g.c_star),
            alpha: r(&a),
            beta: r(&b),
            gamma: r(&c),
            delta: r(&d),
            text: g.to_text(),
        }
    }
}

#[derive(Serialize)]
pub struct OdeJson {
    pub order: usize,
    pub coeffs: Vec<Vec<String>>,
    pub singular_points: Vec<String>,
    pub displayed: String,
}

impl From<&FuchsOde> for OdeJson {
    fn from(o: &FuchsOde) -> Self {
        Self {
            order: o.order,
            coeffs: o.coeffs.iter().map(rationals).collect(),
            singular_points: o.singular_points.iter().map(r).collect(),
            displayed: o.to_text(),
        }
    }
}

#[derive(Serialize)]
pub struct ExponentsJson {
    pub at: String,
    pub indicial: Vec<String>,
    pub rational: Vec<String>,
    /// Cofactor of the indicial polynomial without rational roots.
    pub residual: Vec<String>,
    pub text: String,
}

impl ExponentsJson {
    pub fn new(at: String, e: &LocalExponents) -> Self {
        Self {
            at,
            indicial: rationals(&e.indicial),
            rational: e.rational.iter().map(r).collect(),
            residual: rationals(&e.residual),
            text: e.to_text(),
        }
    }
}

fn ext(e: &ExtElem) -> String {
    e.to_text_with("L", "f")
}

#[derive(Serialize)]
pub struct D4ChainJson {
    pub c: String,
    #[serde(rename = "Q1")]
    pub big_q1: String,
    pub q1: String,
    #[serde(rename = "Q2")]
    pub big_q2: String,
    pub q2_ln_x: String,
    pub q2: String,
    pub m3: D4GenFnJson,
}

impl From<&D4Chain> for D4ChainJson {
    fn from(c: &D4Chain) -> Self {
        Self {
            c: r(&c.c),
            big_q1: ext(&c.big_q1),
            q1: ext(&c.q1),
            big_q2: ext(&c.big_q2),
            q2_ln_x: r(&c.q2_ln_x),
            q2: ext(&c.q2),
            m3: (&c.m3).into(),
        }
    }
}

#[derive(Serialize, Clone, Copy)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
pub struct DiagnosisJson {
    pub eta_period: ComplexJson,
    pub log_jump: ComplexJson,
    pub eta_vanishes: bool,
    pub log_single_valued: bool,
    pub well_defined: bool,
}

impl From<&Diagnosis> for DiagnosisJson {
    fn from(d: &Diagnosis) -> Self {
        Self {
            eta_period: d.eta_period.into(),
            log_jump: d.log_jump.into(),
            eta_vanishes: d.eta_vanishes(),
            log_single_valued: d.log_single_valued(),
            well_defined: d.well_defined(),
        }
    }
}

pub fn words(ws: &[LoopWord]) -> Vec<String> {
    ws.iter().map(LoopWord::to_text).collect()
}
