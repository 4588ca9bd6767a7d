use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::word::{Alphabet, Gen, LoopWord};
use crate::error::{Error, Result};
use crate::fmath::{abs, atan2, cos, ln, sin};
use crate::numerics::gk15;

/// Largest change of `arg((z - z1)/(z - z3))` allowed on one piece.
pub const MAX_TURN: f64 = PI / 8.0;
/// Tolerance for the two well-definedness conditions.
pub const WELL_DEFINED_TOL: f64 = 1e-8;
const PIECE_TOL: f64 = 1e-14;

/// Four punctures `z0..z3`, a base point and, for each generator, a loop made
/// of a segment out to the circle `|z - zj| = radius`, one positive turn
/// around that circle, and the segment back.
#[derive(Clone, Debug, PartialEq)]
pub struct PuncturedModel {
    pub punctures: [Complex64; 4],
    pub base: Complex64,
    pub radii: [f64; 4],
    /// Angle at which each leg meets its circle.
    pub approach: [f64; 4],
}

impl Default for PuncturedModel {
    fn default() -> Self {
        Self {
            punctures: [-3.0, -1.0, 1.0, 3.0].map(|x| Complex64::new(x, 0.0)),
            base: Complex64::new(0.0, -5.0),
            radii: [0.5; 4],
            approach: [-PI / 2.0; 4],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Leg {
    Segment(Complex64, Complex64),
    Arc { c: Complex64, r: f64, from: f64, to: f64 },
}

impl Leg {
    fn at(&self, s: f64) -> (Complex64, Complex64) {
        match *self {
            Leg::Segment(a, b) => (a + (b - a) * s, b - a),
            Leg::Arc { c, r, from, to } => {
                let th = from + (to - from) * s;
                let e = Complex64::new(cos(th), sin(th));
                (c + e * r, Complex64::i() * e * (r * (to - from)))
            }
        }
    }

    fn reversed(self) -> Leg {
        match self {
            Leg::Segment(a, b) => Leg::Segment(b, a),
            Leg::Arc { c, r, from, to } => Leg::Arc { c, r, from: to, to: from },
        }
    }
}

impl PuncturedModel {
    fn approach_point(&self, j: usize) -> Complex64 {
        let a = self.approach[j];
        self.punctures[j] + Complex64::new(cos(a), sin(a)) * self.radii[j]
    }

    fn generator_legs(&self, j: usize) -> [Leg; 3] {
        let p = self.approach_point(j);
        [
            Leg::Segment(self.base, p),
            Leg::Arc {
                c: self.punctures[j],
                r: self.radii[j],
                from: self.approach[j],
                to: self.approach[j] + TAU,
            },
            Leg::Segment(p, self.base),
        ]
    }

    fn path(&self, l: &LoopWord) -> Vec<Leg> {
        let mut out = Vec::new();
        for letter in l.letters() {
            let j = Gen::TRIANGLE.iter().position(|g| *g == letter.gen).expect("triangle generator");
            let legs = self.generator_legs(j);
            if letter.inv {
                out.extend(legs.iter().rev().map(|g| g.reversed()));
            } else {
                out.extend(legs);
            }
        }
        out
    }

    /// Circles disjoint from each other and from the base, every leg staying
    /// outside the other discs, and legs leaving the base in distinct directions.
    pub fn validate(&self) -> Result<()> {
        let z = &self.punctures;
        for i in 0..4 {
            if !(self.radii[i] > 0.0) || (self.base - z[i]).norm() <= self.radii[i] {
                return Err(Error::Degenerate("base point inside a puncture disc"));
            }
            for j in 0..4 {
                if i != j && (z[i] - z[j]).norm() <= self.radii[i] + self.radii[j] {
                    return Err(Error::Degenerate("puncture discs overlap"));
                }
                if i != j && seg_dist(self.base, self.approach_point(i), z[j]) <= self.radii[j] {
                    return Err(Error::Degenerate("a leg crosses another puncture disc"));
                }
            }
        }
        let mut dirs: Vec<f64> = (0..4).map(|i| (self.approach_point(i) - self.base).arg()).collect();
        dirs.sort_by(f64::total_cmp);
        if dirs.windows(2).any(|w| w[1] - w[0] < 1e-9) {
            return Err(Error::Degenerate("two legs overlap"));
        }
        Ok(())
    }
}

fn seg_dist(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let s = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (a + d * s - p).norm()
}

/// Everything the pairing integrand needs at one point.
struct Form {
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
}

impl Form {
    fn ratio(&self, z: Complex64) -> Complex64 {
        (z - self.z1) / (z - self.z3)
    }

    fn eta(&self, z: Complex64) -> Complex64 {
        (z - self.z2).inv() - (z - self.z1).inv()
    }

    /// Branch of `ln ratio` nearest to `reference`.
    fn log_near(&self, z: Complex64, reference: Complex64) -> Complex64 {
        let w = self.ratio(z);
        let re = ln(w.norm());
        let mut im = atan2(w.im, w.re);
        im += TAU * libm::round((reference.im - im) / TAU);
        Complex64::new(re, im)
    }
}

/// Integrals accumulated along a path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathIntegrals {
    /// `∫ ln((z-z1)/(z-z3)) (1/(z-z2) - 1/(z-z1)) dz`.
    pub omega: Complex64,
    /// `∮ (1/(z-z2) - 1/(z-z1)) dz`.
    pub eta: Complex64,
    /// Change of the log branch along the path.
    pub log_jump: Complex64,
}

/// Outcome of the two well-definedness checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnosis {
    pub eta_period: Complex64,
    pub log_jump: Complex64,
}

impl Diagnosis {
    pub fn eta_vanishes(&self) -> bool {
        self.eta_period.norm() < WELL_DEFINED_TOL
    }

    pub fn log_single_valued(&self) -> bool {
        self.log_jump.norm() < WELL_DEFINED_TOL
    }

    pub fn well_defined(&self) -> bool {
        self.eta_vanishes() && self.log_single_valued()
    }
}

/// Integrates along the representative of `l`, starting on the branch
/// `Log + 2πi·branch` of the logarithm at the base point.
pub fn integrate_word(l: &LoopWord, model: &PuncturedModel, branch: i64) -> Result<PathIntegrals> {
    if l.alphabet() == Some(Alphabet::EightLoop) {
        return Err(Error::Unsupported(alloc::string::String::from(
            "the punctured model carries the triangle generators only",
        )));
    }
    model.validate()?;
    let form = Form {
        z1: model.punctures[1],
        z2: model.punctures[2],
        z3: model.punctures[3],
    };
    let start = form.log_near(model.base, Complex64::new(0.0, 0.0)) + Complex64::new(0.0, TAU * branch as f64);
    let mut log = start;
    let (mut omega, mut eta) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for leg in model.path(l) {
        let mut stack = alloc::vec![(0.0f64, 1.0f64, 0usize)];
        while let Some((a, b, depth)) = stack.pop() {
            let (za, _) = leg.at(a);
            let (zb, _) = leg.at(b);
            let (zm, _) = leg.at(0.5 * (a + b));
            let la = form.log_near(za, log);
            let lm = form.log_near(zm, la);
            let lb = form.log_near(zb, lm);
            let turn = abs(lm.im - la.im) + abs(lb.im - lm.im);
            let piece = |f: &dyn Fn(Complex64, Complex64) -> Complex64| {
                let mut re = |s: f64| {
                    let (z, dz) = leg.at(s);
                    f(z, dz).re
                };
                let mut im = |s: f64| {
                    let (z, dz) = leg.at(s);
                    f(z, dz).im
                };
                let (r, er) = gk15(&mut re, a, b);
                let (i, ei) = gk15(&mut im, a, b);
                (Complex64::new(r, i), er + ei)
            };
            let (w, ew) = piece(&|z, dz| form.log_near(z, la) * form.eta(z) * dz);
            let (e, ee) = piece(&|z, dz| form.eta(z) * dz);
            let split = turn >= MAX_TURN || ew > PIECE_TOL * (1.0 + w.norm()) || ee > PIECE_TOL;
            if split && depth < 40 {
                // right half pushed first so the left half is done first
                let m = 0.5 * (a + b);
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
                continue;
            }
            if split {
                return Err(Error::NoConvergence("contour piece"));
            }
            omega += w;
            eta += e;
            log = lb;
        }
    }
    Ok(PathIntegrals {
        omega,
        eta,
        log_jump: log - start,
    })
}

pub fn diagnose(l: &LoopWord, model: &PuncturedModel) -> Result<Diagnosis> {
    let p = integrate_word(l, model, 0)?;
    Ok(Diagnosis {
        eta_period: p.eta,
        log_jump: p.log_jump,
    })
}

/// `∫_l ω` for a word on which the pairing is well defined.
pub fn pair_with_form(l: &LoopWord, model: &PuncturedModel) -> Result<Complex64> {
    pair_on_branch(l, model, 0)
}

pub fn pair_on_branch(l: &LoopWord, model: &PuncturedModel, branch: i64) -> Result<Complex64> {
    let p = integrate_word(l, model, branch)?;
    if p.eta.norm() >= WELL_DEFINED_TOL {
        return Err(Error::IllDefinedPairing("the period of 1/(z-z2) - 1/(z-z1) along the word is not zero"));
    }
    if p.log_jump.norm() >= WELL_DEFINED_TOL {
        return Err(Error::IllDefinedPairing("ln((z-z1)/(z-z3)) is not single-valued along the word"));
    }
    Ok(p.omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> LoopWord {
        LoopWord::parse(s).unwrap()
    }

    #[test]
    fn generator_periods() {
        // residues of eta are -1 at z1 and +1 at z2; the log turns at z1 and z3
        let m = PuncturedModel::default();
        let i2pi = Complex64::new(0.0, TAU);
        for (g, eta, jump) in [("d", 0.0, 0.0), ("g1", -1.0, 1.0), ("g2", 1.0, 0.0), ("g3", 0.0, -1.0)] {
            let p = integrate_word(&w(g), &m, 0).unwrap();
            assert!((p.eta - i2pi * eta).norm() < 1e-12, "{g}: {}", p.eta);
            assert!((p.log_jump - i2pi * jump).norm() < 1e-12, "{g}: {}", p.log_jump);
        }
    }

    #[test]
    fn commutator_and_delta() {
        let m = PuncturedModel::default();
        let c = pair_with_form(&w("[g1,g2]"), &m).unwrap();
        assert!((c - Complex64::new(-4.0 * PI * PI, 0.0)).norm() < 1e-6, "{c}");
        assert!(pair_with_form(&w("d"), &m).unwrap().norm() < 1e-8);
    }

    #[test]
    fn branch_independence_and_errors() {
        let m = PuncturedModel::default();
        let a = pair_on_branch(&w("g1 g2 g3"), &m, 0).unwrap();
        let b = pair_on_branch(&w("g1 g2 g3"), &m, 3).unwrap();
        assert!((a - b).norm() < 1e-8, "{a} {b}");
        assert!(matches!(pair_with_form(&w("g1"), &m), Err(Error::IllDefinedPairing(_))));
        assert!(matches!(pair_with_form(&w("g1 g2"), &m), Err(Error::IllDefinedPairing(_))));
    }

    #[test]
    fn model_validation() {
        let mut m = PuncturedModel::default();
        m.radii[1] = 1.6;
        assert!(m.validate().is_err());
    }
}
