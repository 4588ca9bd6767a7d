use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use super::oval::{trace_oval, Oval};
use super::quad::{integrate, Tol};
use crate::algebra::{Annulus, Hamiltonian};
use crate::error::{Error, Result};
use crate::fmath::{abs, atan, atan2, ln, signum};

/// Numerical audit of the multivalued primitive on one oval.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiReport {
    pub hamiltonian: Hamiltonian,
    pub t: f64,
    /// Half-width `a` of the oval on the `x`-axis.
    pub a: f64,
    /// `oint x dx / y` around the whole oval.
    pub increment: f64,
    /// `int x dx / y` from `(-a, 0)` clockwise to `(a, 0)`.
    pub phi_at_a: f64,
    /// The closed form at `(-a, 0)` and `(a, 0)`.
    pub closed_form_at_ends: [f64; 2],
    /// Largest gap between the path integral and the closed form at the
    /// probe points.
    pub path_gap: f64,
    /// Largest pointwise residual of `H dphi = (x y / 2) dx - ((x^2 + e) / 4) dy`.
    pub identity_residual: f64,
}

impl PhiReport {
    pub fn passes(&self, tol: f64) -> bool {
        abs(self.increment) < tol
            && abs(self.phi_at_a) < tol
            && self.closed_form_at_ends.iter().all(|v| abs(*v) < tol)
            && self.path_gap < tol
            && self.identity_residual < tol
    }
}

/// The closed forms of the primitive for the three A3 variants.
pub fn phi_closed_form(ham: Hamiltonian, x: f64, y: f64) -> Result<f64> {
    let u = x * x;
    Ok(match ham {
        Hamiltonian::EightLoop => {
            if y == 0.0 {
                0.0
            } else {
                (atan((u - 1.0) / (y * SQRT_2)) - FRAC_PI_2 * signum(y)) / SQRT_2
            }
        }
        Hamiltonian::DoubleHeteroclinic => ln((1.0 - u - SQRT_2 * y) / (1.0 - u + SQRT_2 * y)) / (2.0 * SQRT_2),
        Hamiltonian::GlobalCenter => -atan2(SQRT_2 * y, u + 1.0) / SQRT_2,
        Hamiltonian::D4Triangle => return Err(Error::NotA3(ham.slug())),
    })
}

/// Gradient of [`phi_closed_form`], differentiated formula by formula.
pub fn phi_closed_form_grad(ham: Hamiltonian, x: f64, y: f64) -> Result<(f64, f64)> {
    let u = x * x;
    Ok(match ham {
        Hamiltonian::EightLoop => {
            let s = (u - 1.0) / (y * SQRT_2);
            let k = 1.0 / (SQRT_2 * (1.0 + s * s));
            (k * 2.0 * x / (y * SQRT_2), -k * (u - 1.0) / (y * y * SQRT_2))
        }
        Hamiltonian::DoubleHeteroclinic => {
            let (p, q) = (1.0 - u - SQRT_2 * y, 1.0 - u + SQRT_2 * y);
            let k = 1.0 / (2.0 * SQRT_2);
            (k * (-2.0 * x / p + 2.0 * x / q), k * (-SQRT_2 / p - SQRT_2 / q))
        }
        Hamiltonian::GlobalCenter => {
            let (v, w) = (SQRT_2 * y, u + 1.0);
            let k = -1.0 / (SQRT_2 * (v * v + w * w));
            (k * (-v * 2.0 * x), k * (w * SQRT_2))
        }
        Hamiltonian::D4Triangle => return Err(Error::NotA3(ham.slug())),
    })
}

/// Angle of the oval point on the negative `x`-axis, around the centre.
const START: f64 = PI;

/// `int x dx / y` along the oval from `(-a, 0)` clockwise to angle `theta`.
fn path_phi(oval: &Oval, theta: f64, tol: Tol) -> Result<f64> {
    integrate(
        |th| {
            let f = oval.frame(th);
            f.x * f.leray
        },
        START,
        theta,
        tol,
    )
}

pub fn phi_check(ham: Hamiltonian, t: f64) -> Result<PhiReport> {
    let (_, e) = ham.require_a3()?;
    let annulus = if ham == Hamiltonian::EightLoop { Annulus::Exterior } else { Annulus::Center };
    if !ham.uses_phi(annulus) {
        return Err(Error::BadAnnulus {
            hamiltonian: ham.slug(),
            annulus: annulus.slug(),
        });
    }
    let oval = trace_oval(ham, t, annulus)?;
    let tol = Tol { abs: 1e-15, rel: 1e-13 };
    let increment = path_phi(&oval, START - 2.0 * PI, tol)?;
    let phi_at_a = path_phi(&oval, 0.0, tol)?;
    let a = oval.radius(0.0);
    let closed_form_at_ends = [phi_closed_form(ham, -a, 0.0)?, phi_closed_form(ham, a, 0.0)?];
    let mut path_gap: f64 = 0.0;
    let mut identity_residual: f64 = 0.0;
    let probes: Vec<f64> = (0..10).map(|j| START - 2.0 * PI * (j as f64 + 0.37) / 10.0).collect();
    for th in probes {
        let (x, y) = oval.point(th);
        if y == 0.0 {
            continue;
        }
        path_gap = path_gap.max(abs(path_phi(&oval, th, tol)? - phi_closed_form(ham, x, y)?));
        let (px, py) = phi_closed_form_grad(ham, x, y)?;
        let h = ham.eval(x, y);
        let rx = h * px - x * y / 2.0;
        let ry = h * py + (x * x + e as f64) / 4.0;
        identity_residual = identity_residual.max(abs(rx) + abs(ry));
    }
    Ok(PhiReport {
        hamiltonian: ham,
        t,
        a,
        increment,
        phi_at_a,
        closed_form_at_ends,
        path_gap,
        identity_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_valued_on_all_variants() {
        for (h, t) in [
            (Hamiltonian::EightLoop, 1.0),
            (Hamiltonian::EightLoop, 0.3),
            (Hamiltonian::GlobalCenter, 1.0),
            (Hamiltonian::DoubleHeteroclinic, -0.1),
        ] {
            let r = phi_check(h, t).unwrap();
            assert!(r.passes(1e-10), "{r:?}");
        }
        assert!(phi_check(Hamiltonian::D4Triangle, -1.0).is_err());
    }
}
