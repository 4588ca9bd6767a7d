use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::oval::{annulus_center, check_level, trace_oval};
use crate::algebra::{Annulus, Hamiltonian, OneForm, WeightedPoly};
use crate::error::{Error, Result};
use crate::fmath::{abs, ln, round, sqrt};

pub const DEFAULT_EPS: [f64; 4] = [1e-3, 2e-3, 4e-3, 8e-3];
/// The oracle keeps this relative distance from the ends of the level interval.
pub const ORACLE_MARGIN: f64 = 0.02;
pub const STEP_TOL: f64 = 1e-12;
pub const MAX_STEPS: usize = 200_000;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Leaves of `dH - eps w = 0` written as a flow in the polar angle around the
/// annulus centre, so one turn is one return to the section `theta = 0`.
struct Leaf {
    ham: Hamiltonian,
    a: WeightedPoly,
    b: WeightedPoly,
    center: (f64, f64),
}

impl Leaf {
    fn rhs(&self, eps: f64, s: [f64; 2]) -> Result<[f64; 2]> {
        let (x, y) = (s[0], s[1]);
        let (hx, hy) = self.ham.grad_f64(x, y);
        let (pa, pb) = if eps == 0.0 {
            (0.0, 0.0)
        } else {
            (self.a.eval_f64(x, y, 0.0), self.b.eval_f64(x, y, 0.0))
        };
        // kernel of (H_x - eps A) dx + (H_y - eps B) dy
        let (vx, vy) = (hy - eps * pb, -(hx - eps * pa));
        let (dx, dy) = (x - self.center.0, y - self.center.1);
        let omega = (dx * vy - dy * vx) / (dx * dx + dy * dy);
        if !(abs(omega) > 1e-300) || !omega.is_finite() {
            return Err(Error::NoReturn(0));
        }
        Ok([vx / omega, vy / omega])
    }

    fn step(&self, eps: f64, s: [f64; 2], h: f64) -> Result<([f64; 2], [f64; 2])> {
        let mut k = [[0.0; 2]; 7];
        for i in 0..7 {
            let mut p = s;
            for j in 0..i {
                p[0] += h * A[i][j] * k[j][0];
                p[1] += h * A[i][j] * k[j][1];
            }
            k[i] = self.rhs(eps, p)?;
        }
        let mut y5 = s;
        let mut y4 = s;
        for i in 0..7 {
            y5[0] += h * B5[i] * k[i][0];
            y5[1] += h * B5[i] * k[i][1];
            y4[0] += h * B4[i] * k[i][0];
            y4[1] += h * B4[i] * k[i][1];
        }
        Ok((y5, [y5[0] - y4[0], y5[1] - y4[1]]))
    }

    /// Adaptive Dormand–Prince over one turn of the unperturbed orbit; the
    /// accepted steps are reused for every `eps` so integrator error is a
    /// smooth function of `eps`.
    fn steps(&self, s0: [f64; 2], span: f64) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        let mut s = s0;
        let mut done = 0.0;
        let dir = if span < 0.0 { -1.0 } else { 1.0 };
        let mut h = dir * 1e-3;
        while abs(done) < abs(span) {
            if out.len() >= MAX_STEPS {
                return Err(Error::NoReturn(MAX_STEPS));
            }
            if abs(done + h) > abs(span) {
                h = span - done;
            }
            let (next, err) = self.step(0.0, s, h)?;
            let sc0 = STEP_TOL * (1.0 + abs(s[0]).max(abs(next[0])));
            let sc1 = STEP_TOL * (1.0 + abs(s[1]).max(abs(next[1])));
            let e = sqrt(0.5 * ((err[0] / sc0) * (err[0] / sc0) + (err[1] / sc1) * (err[1] / sc1)));
            if e <= 1.0 {
                out.push(h);
                done += h;
                s = next;
            }
            let f = if e == 0.0 { 5.0 } else { (0.9 * libm::pow(e, -0.2)).clamp(0.2, 5.0) };
            h *= f;
        }
        Ok(out)
    }

    fn run(&self, eps: f64, s0: [f64; 2], steps: &[f64]) -> Result<[f64; 2]> {
        let mut s = s0;
        for &h in steps {
            s = self.step(eps, s, h)?.0;
        }
        Ok(s)
    }
}

/// Return-map displacement and the fitted leading order at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct ShootingPoint {
    pub t: f64,
    pub eps: Vec<f64>,
    /// `P_eps(t) - t`, with the unperturbed drift of the integrator removed.
    pub displacement: Vec<f64>,
    /// Integrator drift at `eps = 0`.
    pub drift: f64,
    pub slope: f64,
    pub k: u32,
    /// RMS residual of the log-log line.
    pub residual: f64,
    /// `M_k(t)` extrapolated to `eps = 0`.
    pub value: f64,
}

pub fn check_eps_grid(eps: &[f64]) -> Result<()> {
    if eps.len() < 4 {
        return Err(Error::InvalidGrid("at least four eps values are needed"));
    }
    if eps.iter().any(|e| !(*e > 0.0 && *e <= 1e-2)) {
        return Err(Error::InvalidGrid("eps values must lie in (0, 1e-2]"));
    }
    let q = eps[1] / eps[0];
    if !(q > 1.0) || eps.windows(2).any(|w| abs(w[1] / w[0] - q) > 1e-9 * q) {
        return Err(Error::InvalidGrid("eps values must be increasing and geometric"));
    }
    Ok(())
}

/// `M(t)` displacement samples along the section through the annulus centre
/// at angle zero, travelling the oval in its reference orientation.
pub fn shooting_oracle(
    ham: Hamiltonian,
    w: &OneForm,
    annulus: Annulus,
    t_grid: &[f64],
    eps_grid: &[f64],
) -> Result<Vec<ShootingPoint>> {
    check_eps_grid(eps_grid)?;
    let leaf = Leaf {
        ham,
        a: ham.expand(w.a()),
        b: ham.expand(w.b()),
        center: annulus_center(ham, annulus),
    };
    let span = 2.0 * PI * -ham.orientation();
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        check_level(ham, annulus, t, ORACLE_MARGIN)?;
        let oval = trace_oval(ham, t, annulus)?;
        let s0 = [leaf.center.0 + oval.radius(0.0), leaf.center.1];
        let t0 = ham.eval(s0[0], s0[1]);
        let steps = leaf.steps(s0, span)?;
        let end0 = leaf.run(0.0, s0, &steps)?;
        let drift = ham.eval(end0[0], end0[1]) - t0;
        let mut displacement = Vec::with_capacity(eps_grid.len());
        for &e in eps_grid {
            let end = leaf.run(e, s0, &steps)?;
            displacement.push(ham.eval(end[0], end[1]) - t0 - drift);
        }
        out.push(fit(t, eps_grid, displacement, drift));
    }
    Ok(out)
}

fn fit(t: f64, eps: &[f64], d: Vec<f64>, drift: f64) -> ShootingPoint {
    let xs: Vec<f64> = eps.iter().map(|e| ln(*e)).collect();
    let ys: Vec<f64> = d.iter().map(|v| ln(abs(*v).max(1e-300))).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let residual = sqrt(xs.iter().zip(&ys).map(|(x, y)| crate::fmath::powi(y - icpt - slope * x, 2)).sum::<f64>() / n);
    let k = round(slope).max(1.0) as u32;
    // d / eps^k = M_k + c1 eps + c2 eps^2, least squares in eps / eps_0
    let e0 = eps[0];
    let rows: Vec<([f64; 3], f64)> = eps
        .iter()
        .zip(&d)
        .map(|(e, v)| {
            let s = e / e0;
            ([1.0, s, s * s], v / crate::fmath::powi(*e, k as i32))
        })
        .collect();
    let value = least_squares3(&rows).map(|c| c[0]).unwrap_or(f64::NAN);
    ShootingPoint {
        t,
        eps: eps.to_vec(),
        displacement: d,
        drift,
        slope,
        k,
        residual,
        value,
    }
}

fn least_squares3(rows: &[([f64; 3], f64)]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for (r, v) in rows {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += r[i] * r[j];
            }
            m[i][3] += r[i] * v;
        }
    }
    for c in 0..3 {
        let p = (c..3).max_by(|&a, &b| abs(m[a][c]).total_cmp(&abs(m[b][c])))?;
        m.swap(c, p);
        if abs(m[c][c]) < 1e-300 {
            return None;
        }
        for r in 0..3 {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..4 {
                    m[r][j] -= f * m[c][j];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Default grid of `n` levels spread over the sampled part of the interval.
pub fn default_t_grid(ham: Hamiltonian, annulus: Annulus, n: usize) -> Result<Vec<f64>> {
    let (low, high) = ham.sigma(annulus)?;
    let high = if high.is_finite() { high } else { 10.0 };
    let w = high - low;
    let (a, b) = (low + 0.1 * w, high - 0.1 * w);
    Ok(if n == 1 {
        vec![0.5 * (a + b)]
    } else {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_form, Integrand, Tol};

    #[test]
    fn first_order_is_the_area_integral() {
        let w = OneForm::parse("y dx").unwrap();
        let ts = [0.05, 0.12, 0.2];
        let pts = shooting_oracle(Hamiltonian::EightLoop, &w, Annulus::InteriorRight, &ts, &DEFAULT_EPS).unwrap();
        for p in pts {
            assert_eq!(p.k, 1);
            let o = trace_oval(Hamiltonian::EightLoop, p.t, Annulus::InteriorRight).unwrap();
            let i0 = integrate_form(&o, Integrand::Sigma(0), Tol::DEFAULT).unwrap();
            assert!((p.value - i0).abs() < 1e-3 * i0.abs(), "{} vs {i0}", p.value);
        }
    }

    #[test]
    fn exact_perturbation_does_not_move() {
        // w = d(x^2 y)
        let w = OneForm::parse("2 x y dx + x^2 dy").unwrap();
        let p = &shooting_oracle(Hamiltonian::EightLoop, &w, Annulus::InteriorRight, &[0.1], &DEFAULT_EPS).unwrap()[0];
        // the leaves are the level sets of H - eps x^2 y, so every order vanishes
        assert!(p.displacement.iter().all(|d| d.abs() < 1e-11), "{:?}", p.displacement);
    }

    #[test]
    fn eps_grid_rules() {
        assert!(check_eps_grid(&[1e-3, 2e-3, 4e-3]).is_err());
        assert!(check_eps_grid(&[1e-3, 2e-3, 4e-3, 9e-3]).is_err());
        assert!(check_eps_grid(&[1e-3, 2e-3, 4e-3, 2e-2]).is_err());
        assert!(check_eps_grid(&DEFAULT_EPS).is_ok());
    }
}
