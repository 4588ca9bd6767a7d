use alloc::vec::Vec;
use core::f64::consts::PI;

use super::quad::{integrate, Tol};
use crate::algebra::{Annulus, Hamiltonian, OneForm};
use crate::error::{Error, Result};
use crate::fmath::{abs, cos, ln, sin, sqrt};

const TABLE: usize = 256;
const TAU: f64 = 2.0 * PI;

/// Relative distance from the ends of the level interval below which
/// [`trace_oval`] refuses a level.
pub const SIGMA_MARGIN: f64 = 1e-6;

/// A periodic orbit `H = t`, stored as a radius function `r(theta)` around a
/// point `c` inside the oval: every oval of the four families is star-shaped
/// about its centre and each ray meets it once, transversally.
#[derive(Clone, Debug)]
pub struct Oval {
    pub hamiltonian: Hamiltonian,
    pub annulus: Annulus,
    pub t: f64,
    pub center: (f64, f64),
    /// `+1` when the reference orientation is counter-clockwise.
    pub sign: f64,
    table: Vec<f64>,
    pub arclength: f64,
}

/// Point and derivatives at angle `theta`.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
    /// `dx / H_y` per unit `theta`: the Gelfand–Leray density.
    pub leray: f64,
}

/// Integrands understood by [`integrate_form`].
#[derive(Clone, Copy, Debug)]
pub enum Integrand<'a> {
    /// `x^k y dx`; negative `k` is allowed away from `x = 0`.
    Sigma(i32),
    /// `y dx / x`.
    YOverX,
    /// `y (x - 1) ln x dx`.
    Star,
    Form(&'a OneForm),
}

/// Centre of the annulus: the elliptic point, or the saddle enclosed by the
/// exterior ovals of the eight-loop.
pub fn annulus_center(ham: Hamiltonian, annulus: Annulus) -> (f64, f64) {
    match (ham, annulus) {
        (Hamiltonian::EightLoop, Annulus::InteriorRight) => (1.0, 0.0),
        (Hamiltonian::EightLoop, Annulus::InteriorLeft) => (-1.0, 0.0),
        (Hamiltonian::D4Triangle, _) => (1.0, 0.0),
        _ => (0.0, 0.0),
    }
}

/// Checks `t` lies in the level interval, `rel` times its width away from
/// either end (the width of an unbounded interval is measured up to `10`).
pub fn check_level(ham: Hamiltonian, annulus: Annulus, t: f64, rel: f64) -> Result<()> {
    let (low, high) = ham.sigma(annulus)?;
    let width = if high.is_finite() { high - low } else { 10.0 - low };
    let m = rel * width.max(1e-300);
    if t.is_finite() && t > low + m && t < high - m {
        Ok(())
    } else {
        Err(Error::OutsideSigma { t, low, high })
    }
}

pub fn trace_oval(ham: Hamiltonian, t: f64, annulus: Annulus) -> Result<Oval> {
    check_level(ham, annulus, t, SIGMA_MARGIN)?;
    let center = annulus_center(ham, annulus);
    let mut oval = Oval {
        hamiltonian: ham,
        annulus,
        t,
        center,
        sign: -ham.orientation(),
        table: Vec::new(),
        arclength: 0.0,
    };
    let r0 = oval.scan_root(0.0, 1e-3)?;
    let step = r0 / 4000.0;
    let mut table = Vec::with_capacity(TABLE);
    table.push(r0);
    for i in 1..TABLE {
        let theta = TAU * i as f64 / TABLE as f64;
        // start just inside the neighbouring radius when that point is
        // still below the level; the ray meets the oval only once
        let start = 0.97 * table[i - 1];
        let r = if oval.level_along(theta, start).0 < 0.0 {
            oval.scan_from(theta, start, step)?
        } else {
            oval.scan_root(theta, step)?
        };
        table.push(r);
    }
    oval.table = table;
    let pts: Vec<(f64, f64)> = (0..TABLE).map(|i| oval.point(TAU * i as f64 / TABLE as f64)).collect();
    oval.arclength = (0..TABLE)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % TABLE]);
            sqrt((a.0 - b.0) * (a.0 - b.0) + (a.1 - b.1) * (a.1 - b.1))
        })
        .sum();
    Ok(oval)
}

impl Oval {
    fn level_along(&self, theta: f64, r: f64) -> (f64, f64) {
        let (u, v) = (cos(theta), sin(theta));
        let (x, y) = (self.center.0 + r * u, self.center.1 + r * v);
        let (hx, hy) = self.hamiltonian.grad_f64(x, y);
        (self.hamiltonian.eval(x, y) - self.t, hx * u + hy * v)
    }

    /// First crossing of the level along the ray, by a linear scan from the
    /// centre followed by safeguarded Newton.
    fn scan_root(&self, theta: f64, step: f64) -> Result<f64> {
        if self.level_along(theta, 0.0).0 >= 0.0 {
            return Err(Error::Degenerate("the centre is not inside the oval"));
        }
        self.scan_from(theta, 0.0, step)
    }

    fn scan_from(&self, theta: f64, mut lo: f64, step: f64) -> Result<f64> {
        for _ in 0..200_000 {
            let hi = lo + step;
            if self.level_along(theta, hi).0 >= 0.0 {
                return self.polish(theta, lo, hi);
            }
            lo = hi;
        }
        Err(Error::Degenerate("ray does not meet the level set"))
    }

    fn polish(&self, theta: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
        let mut r = 0.5 * (lo + hi);
        let scale = 1.0f64.max(abs(self.t));
        for _ in 0..200 {
            let (h, dh) = self.level_along(theta, r);
            if abs(h) <= 1e-14 * scale {
                return Ok(r);
            }
            if h < 0.0 {
                lo = r;
            } else {
                hi = r;
            }
            let newton = r - h / dh;
            let next = if dh > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if abs(next - r) <= 4.0 * f64::EPSILON * r || hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(next);
            }
            r = next;
        }
        Err(Error::NoConvergence("level-set projection"))
    }

    pub fn radius(&self, theta: f64) -> f64 {
        let s = (theta - TAU * crate::fmath::floor(theta / TAU)) / TAU * TABLE as f64;
        let i = (s as usize).min(TABLE - 1);
        let w = s - i as f64;
        let (a, b) = (self.table[i], self.table[(i + 1) % TABLE]);
        let guess = a + w * (b - a);
        // expand geometrically from the guess, towards the side where the
        // level is crossed upwards, so a thin window near a vertex of the
        // triangle is not stepped over; fall back to a fine scan
        if let Some(r) = self.newton(theta, guess) {
            return r;
        }
        let (h0, dh0) = self.level_along(theta, guess);
        let mut d = 1e-9 * guess;
        let (mut lo, mut hi) = (guess, guess);
        let mut ok = false;
        if h0 < 0.0 && dh0 > 0.0 {
            while hi < 1.5 * guess {
                lo = hi;
                hi = guess + d;
                d *= 2.0;
                if self.level_along(theta, hi).0 >= 0.0 {
                    ok = true;
                    break;
                }
            }
        } else {
            while lo > 0.5 * guess {
                hi = lo;
                lo = guess - d;
                d *= 2.0;
                let (h, dh) = self.level_along(theta, lo);
                if h < 0.0 && (h0 >= 0.0 || dh > 0.0) {
                    ok = h0 >= 0.0;
                    break;
                }
            }
        }
        if !ok {
            return self.scan_root(theta, guess / 20_000.0).unwrap_or(guess);
        }
        self.polish(theta, lo, hi).unwrap_or(guess)
    }

    /// Plain Newton from a nearby guess, accepted only if it stays close and
    /// lands on an upward crossing of the level.
    fn newton(&self, theta: f64, guess: f64) -> Option<f64> {
        let scale = 1.0f64.max(abs(self.t));
        let mut r = guess;
        for _ in 0..8 {
            let (h, dh) = self.level_along(theta, r);
            if !(dh > 0.0) {
                return None;
            }
            let next = r - h / dh;
            if abs(next - guess) > 1e-3 * guess {
                return None;
            }
            if abs(next - r) <= 4.0 * f64::EPSILON * r || abs(h) <= 1e-15 * scale {
                return Some(next);
            }
            r = next;
        }
        None
    }

    pub fn point(&self, theta: f64) -> (f64, f64) {
        let r = self.radius(theta);
        (self.center.0 + r * cos(theta), self.center.1 + r * sin(theta))
    }

    pub fn frame(&self, theta: f64) -> Frame {
        let r = self.radius(theta);
        let (u, v) = (cos(theta), sin(theta));
        let (x, y) = (self.center.0 + r * u, self.center.1 + r * v);
        let (hx, hy) = self.hamiltonian.grad_f64(x, y);
        let radial = hx * u + hy * v;
        // H(c + r(theta) u(theta)) = t gives r' = -r (grad H . u_perp) / (grad H . u)
        let q = r / radial;
        Frame {
            x,
            y,
            dx: -q * hy,
            dy: q * hx,
            leray: -q,
        }
    }

    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|i| self.point(TAU * i as f64 / n as f64)).collect()
    }

    pub fn min_x(&self) -> f64 {
        self.samples(4 * TABLE).iter().map(|p| p.0).fold(f64::INFINITY, f64::min)
    }

    /// `sign * int_0^{2 pi} density(frame) dtheta`: the integral over the
    /// oval in its reference orientation.
    pub fn integrate<F: FnMut(&Frame) -> f64>(&self, mut density: F, tol: Tol) -> Result<f64> {
        let v = integrate(|th| density(&self.frame(th)), 0.0, TAU, tol)?;
        Ok(self.sign * v)
    }

    /// `d/dt` of `int A dx + B dy` is `int (A_y - B_x) dx / H_y`; this is the
    /// integral of `g dx / H_y`.
    pub fn leray(&self, mut g: impl FnMut(f64, f64) -> f64, tol: Tol) -> Result<f64> {
        self.integrate(|f| g(f.x, f.y) * f.leray, tol)
    }

    fn require_positive_x(&self) -> Result<()> {
        if self.min_x() > 0.0 {
            Ok(())
        } else {
            Err(Error::SingularIntegrand("the oval meets x <= 0"))
        }
    }
}

pub fn integrate_form(oval: &Oval, integrand: Integrand, tol: Tol) -> Result<f64> {
    match integrand {
        Integrand::Sigma(k) => {
            if k < 0 {
                oval.require_positive_x()?;
            }
            oval.integrate(|f| crate::fmath::powi(f.x, k) * f.y * f.dx, tol)
        }
        Integrand::YOverX => {
            oval.require_positive_x()?;
            oval.integrate(|f| f.y / f.x * f.dx, tol)
        }
        Integrand::Star => {
            oval.require_positive_x()?;
            oval.integrate(|f| f.y * (f.x - 1.0) * ln(f.x) * f.dx, tol)
        }
        Integrand::Form(w) => {
            let ham = oval.hamiltonian;
            let a = ham.expand(w.a());
            let b = ham.expand(w.b());
            oval.integrate(|f| a.eval_f64(f.x, f.y, 0.0) * f.dx + b.eval_f64(f.x, f.y, 0.0) * f.dy, tol)
        }
    }
}

/// `(I0, I1, I2)` over an A3 oval.
pub fn a3_basis(oval: &Oval, tol: Tol) -> Result<[f64; 3]> {
    Ok([
        integrate_form(oval, Integrand::Sigma(0), tol)?,
        integrate_form(oval, Integrand::Sigma(1), tol)?,
        integrate_form(oval, Integrand::Sigma(2), tol)?,
    ])
}

/// `(I_-1, I0, I_*)` over a triangle oval.
pub fn d4_basis(oval: &Oval, tol: Tol) -> Result<[f64; 3]> {
    Ok([
        integrate_form(oval, Integrand::YOverX, tol)?,
        integrate_form(oval, Integrand::Sigma(0), tol)?,
        integrate_form(oval, Integrand::Star, tol)?,
    ])
}


#[cfg(test)]
mod triangle_tests {
    use super::*;
    use crate::algebra::to_f64;
    use crate::triangle::d4_system_matrix;

    fn oval(t: f64) -> Oval {
        trace_oval(Hamiltonian::D4Triangle, t, Annulus::Center).unwrap()
    }

    fn moment(o: &Oval, k: i32) -> f64 {
        integrate_form(o, Integrand::Sigma(k), Tol::DEFAULT).unwrap()
    }

    #[test]
    fn moment_recursion_and_hidden_symmetry() {
        for t in [-3.0, -2.0, -1.0] {
            let o = oval(t);
            let i: Vec<f64> = (-1..=3).map(|k| moment(&o, k)).collect();
            let at = |k: i32| i[(k + 1) as usize];
            assert!((at(1) - at(0)).abs() < 1e-10 * at(0).abs());
            for k in 1..=2 {
                let kf = k as f64;
                let lhs = (2.0 * kf + 6.0) * at(k + 1);
                let rhs = (12.0 * kf + 18.0) * at(k) - 18.0 * kf * at(k - 1) - (2.0 * kf - 3.0) * t * at(k - 2);
                assert!((lhs - rhs).abs() < 1e-9 * lhs.abs(), "t={t} k={k}");
            }
        }
    }

    #[test]
    fn picard_fuchs_system_rows() {
        let a = d4_system_matrix();
        for t in [-3.5, -2.0, -0.5] {
            let o = oval(t);
            let tol = Tol::DEFAULT;
            let v = [
                integrate_form(&o, Integrand::Star, tol).unwrap(),
                moment(&o, 2),
                moment(&o, 0),
            ];
            let d = [
                o.leray(|x, _| (x - 1.0) * ln(x), tol).unwrap(),
                o.leray(|x, _| x * x, tol).unwrap(),
                o.leray(|_, _| 1.0, tol).unwrap(),
            ];
            for r in 0..3 {
                let s: f64 = (0..3).map(|c| a[r][c].eval_f64(t) * d[c]).sum();
                assert!((s - v[r]).abs() < 1e-9 * v[r].abs().max(1.0), "row {r} at {t}");
            }
            // finite differences confirm the Leray densities
            let h = 1e-4;
            let (p, m) = (oval(t + h), oval(t - h));
            let fd = (moment(&p, 0) - moment(&m, 0)) / (2.0 * h);
            assert!((fd - d[2]).abs() < 1e-6 * d[2].abs());
        }
        let _ = to_f64;
    }

    #[test]
    fn star_integral_tends_to_minus_six() {
        let mut last = 1.0;
        for t in [-1e-2, -1e-3, -1e-4] {
            let o = oval(t);
            assert!(o.min_x() > 0.0);
            // the first crossing is continuous in the angle
            let n = 20_000;
            let r: Vec<f64> = (0..=n).map(|i| o.radius(TAU * i as f64 / n as f64)).collect();
            assert!(r.windows(2).all(|w| (w[0] - w[1]).abs() < 0.01));
            let gap = (integrate_form(&o, Integrand::Star, Tol::rel(1e-10)).unwrap() + 6.0).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 5e-3, "{last}");
    }
}
