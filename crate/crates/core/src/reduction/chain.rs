use alloc::format;
use alloc::vec::Vec;

use super::decompose::{decompose, decompose_ext};
use super::ext::{reduce_ext, ExtReduction};
use crate::algebra::{to_f64, Annulus, ExtElem, ExtForm, Hamiltonian, Laurent, OneForm, UPoly};
use crate::error::{Error, Result};

pub const DEFAULT_K_MAX: u32 = 6;

/// `M_k(t) = t^{-p} [alpha(t) I_0 + beta(t) I_1 + gamma(t) I_2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFn {
    pub k: u32,
    pub hamiltonian: Hamiltonian,
    pub annulus: Annulus,
    pub pole_order: u32,
    pub alpha: UPoly,
    pub beta: UPoly,
    pub gamma: UPoly,
}

impl GeneratingFn {
    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    /// Value from the basis integrals `(I_0, I_1, I_2)` at `t`.
    pub fn eval(&self, t: f64, i: [f64; 3]) -> f64 {
        let c = [&self.alpha, &self.beta, &self.gamma];
        let s: f64 = c.iter().zip(i).map(|(p, v)| p.eval_f64(t) * v).sum();
        s / crate::fmath::powi(t, self.pole_order as i32)
    }

    fn from_laurent(k: u32, ham: Hamiltonian, annulus: Annulus, a: &Laurent, b: &Laurent, g: &Laurent) -> Self {
        let p = a.pole_order().max(b.pole_order()).max(g.pole_order());
        GeneratingFn {
            k,
            hamiltonian: ham,
            annulus,
            pole_order: p,
            alpha: a.numerator(p),
            beta: b.numerator(p),
            gamma: g.numerator(p),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChainStep {
    pub k: u32,
    pub omega: ExtForm,
    pub exact: ExtElem,
    pub q: ExtElem,
}

#[derive(Clone, Debug)]
pub struct ChainResult {
    /// Degree of the perturbation.
    pub n: u32,
    /// `None` when `M_1 = ... = M_{k_max} = 0`.
    pub m: Option<GeneratingFn>,
    /// One entry per vanishing step: `Omega_k = dQ_k + q_k dH`.
    pub trace: Vec<ChainStep>,
}

impl ChainResult {
    pub fn k(&self) -> Option<u32> {
        self.m.as_ref().map(|m| m.k)
    }
}

/// Runs the recursion `Omega_1 = w`, `Omega_k = q_{k-1} w` until the first
/// nonvanishing `M_k` or `k_max`.
pub fn francoise_chain(w: &OneForm, ham: Hamiltonian, annulus: Annulus, k_max: u32) -> Result<ChainResult> {
    ham.require_a3()?;
    ham.check_annulus(annulus)?;
    if k_max == 0 || k_max > DEFAULT_K_MAX {
        return Err(Error::Unsupported(format!("k_max must be in 1..={DEFAULT_K_MAX}, got {k_max}")));
    }
    if w.a().max_h() > 0 || w.b().max_h() > 0 {
        return Err(Error::Unsupported(format!("perturbation `{w}` must not contain H")));
    }
    let n = w.weighted_degree().unwrap_or(0);
    if ham.uses_phi(annulus) {
        exterior(w, ham, annulus, n, k_max)
    } else {
        interior(w, ham, annulus, n, k_max)
    }
}

fn interior(w: &OneForm, ham: Hamiltonian, annulus: Annulus, n: u32, k_max: u32) -> Result<ChainResult> {
    let mut trace = Vec::new();
    let mut q = ExtElem::from_poly(crate::algebra::WeightedPoly::one());
    for k in 1..=k_max {
        let qp = q.as_poly().expect("interior chain stays polynomial");
        let omega = w.mul_poly(&qp);
        let deg = omega.weighted_degree().unwrap_or(0);
        if !omega.is_zero() && deg > k * (n.max(1) - 1) + 1 {
            return Err(Error::ShapeViolation(format!("Omega_{k} has weighted degree {deg}")));
        }
        let d = decompose(&omega, ham)?;
        if !d.is_relatively_exact() {
            let gf = GeneratingFn {
                k,
                hamiltonian: ham,
                annulus,
                pole_order: 0,
                alpha: d.alpha,
                beta: d.beta,
                gamma: d.gamma,
            };
            return Ok(ChainResult { n, m: Some(gf), trace });
        }
        let qk = ham.canonical(&d.g);
        if let Some(dq) = qk.weighted_degree() {
            if dq > k * (n.max(1) - 1) {
                return Err(Error::ShapeViolation(format!("q_{k} has weighted degree {dq}")));
            }
        }
        trace.push(ChainStep {
            k,
            omega: ExtForm::from_form(omega),
            exact: ExtElem::from_poly(drop_constant(d.exact)),
            q: ExtElem::from_poly(qk.clone()),
        });
        q = ExtElem::from_poly(qk);
    }
    Ok(ChainResult { n, m: None, trace })
}

fn drop_constant(mut p: crate::algebra::WeightedPoly) -> crate::algebra::WeightedPoly {
    let c = p.coeff(crate::algebra::Mono::ONE);
    p.add_term(crate::algebra::Mono::ONE, -c);
    p
}

fn drop_constant_ext(e: &ExtElem) -> ExtElem {
    let mut r = ExtElem::zero();
    for (&(j, p), n) in e.terms() {
        if j == 0 && p == 0 {
            r.add_term(0, 0, drop_constant(n.clone()));
        } else {
            r.add_term(j, p, n.clone());
        }
    }
    r
}

/// The one reduction step of the exterior chain, shared with the
/// constant-shift check.
pub fn exterior_step(q_prev: Option<&ExtElem>, w: &OneForm, ham: Hamiltonian) -> Result<(ExtForm, ExtReduction)> {
    let omega = match q_prev {
        None => ExtForm::from_form(w.clone()),
        Some(q) => ExtForm::product(q, w),
    };
    let red = reduce_ext(&omega, ham)?;
    Ok((omega, red))
}

fn exterior(w: &OneForm, ham: Hamiltonian, annulus: Annulus, n: u32, k_max: u32) -> Result<ChainResult> {
    let mut trace: Vec<ChainStep> = Vec::new();
    let d1 = decompose_ext(w, ham)?;
    for k in 1..=k_max {
        let (omega, red) = exterior_step(trace.last().map(|s| &s.q), w, ham)?;
        if k == 1 {
            debug_assert_eq!(red.residual_at(0).0, Laurent::from_poly(&d1.alpha));
        }
        for (&j, (a, b)) in &red.residual {
            if j > 0 && !(a.is_zero() && b.is_zero()) {
                return Err(Error::ShapeViolation(format!(
                    "residual at phi^{j} in step {k} survives the constant elimination"
                )));
            }
        }
        let (a, b) = red.residual_at(0);
        if !(a.is_zero() && b.is_zero()) {
            let gf = GeneratingFn::from_laurent(k, ham, annulus, &a, &Laurent::zero(), &b);
            check_pole_cap(&gf, k)?;
            return Ok(ChainResult { n, m: Some(gf), trace });
        }
        if red.q.pole_order() > k {
            return Err(Error::PoleCap { order: red.q.pole_order(), cap: k });
        }
        check_q_shape(&red.q, k, n)?;
        trace.push(ChainStep {
            k,
            omega,
            exact: drop_constant_ext(&red.exact),
            q: red.q,
        });
    }
    Ok(ChainResult { n, m: None, trace })
}

fn check_pole_cap(gf: &GeneratingFn, k: u32) -> Result<()> {
    if gf.pole_order > k {
        return Err(Error::PoleCap { order: gf.pole_order, cap: k });
    }
    Ok(())
}

/// `q_k = sum_{j<k} phi^j H^{-(k-j-1)} g_{kn+k-3j-2} + phi^k g_{k(n-2)}`.
pub fn check_q_shape(q: &ExtElem, k: u32, n: u32) -> Result<()> {
    let (k, n) = (k as i64, n as i64);
    for (&(j, p), num) in q.terms() {
        let (j, p) = (j as i64, p as i64);
        let deg = num.weighted_degree().unwrap_or(0) as i64;
        let (cap_p, cap_d) = if j < k {
            (k - j - 1, k * n + k - 3 * j - 2)
        } else if j == k {
            (0, k * (n - 2))
        } else {
            return Err(Error::ShapeViolation(format!("q_{k} has phi^{j} beyond phi^{k}")));
        };
        if p > cap_p || deg + 2 * (cap_p - p) > cap_d {
            return Err(Error::ShapeViolation(format!(
                "q_{k}: term phi^{j} H^-{p} of weighted degree {deg} exceeds H^-{cap_p} and degree {cap_d}"
            )));
        }
    }
    Ok(())
}

/// Pole order and degree caps `(p, deg alpha, deg gamma)` for the first
/// nonvanishing `M_k`; `None` marks a coefficient that must vanish.
pub fn theorem_shape(k: u32, n: u32, sharp: bool) -> (u32, Option<u32>, Option<u32>) {
    let n = n as i64;
    let k_ = k as i64;
    let cap = |v: i64| if v < 0 { None } else { Some(v as u32) };
    let fl = |num: i64| num.div_euclid(2);
    let odd = sharp && n % 2 == 1;
    match k {
        1 => (0, cap(fl(n - 1)), cap(fl(n - 3))),
        2 => (1, cap(if odd { n - 1 } else { n }), cap(n - 1)),
        _ => {
            let top = fl(k_ * (n + 1));
            let (da, dg) = if odd { (top - 3, top - 4) } else { (top - 2, top - 3) };
            (k - 2, cap(da), cap(dg))
        }
    }
}

/// Checks an exterior/center generating function against the Theorem 3
/// shape, and the sharpened odd-degree shape when `sharp` is set.
pub fn check_theorem_shape(gf: &GeneratingFn, n: u32, sharp: bool) -> Result<()> {
    let (p, da, dg) = theorem_shape(gf.k, n, sharp);
    if gf.pole_order > p {
        return Err(Error::ShapeViolation(format!("M_{} has pole order {} > {p}", gf.k, gf.pole_order)));
    }
    let lift = (p - gf.pole_order) as usize;
    for (name, poly, cap) in [("alpha", &gf.alpha, da), ("gamma", &gf.gamma, dg)] {
        let Some(d) = poly.degree() else { continue };
        let ok = cap.is_some_and(|c| d + lift <= c as usize);
        if !ok {
            return Err(Error::ShapeViolation(format!(
                "M_{}: {name} has degree {} at pole {p}, cap {cap:?}",
                gf.k,
                d + lift
            )));
        }
    }
    if !gf.beta.is_zero() {
        return Err(Error::ShapeViolation(format!("M_{} has a nonzero I_1 coefficient", gf.k)));
    }
    Ok(())
}

/// Upper bound `N(n, k)` on isolated zeros of the first nonvanishing `M_k`.
pub fn zero_bound(ham: Hamiltonian, annulus: Annulus, n: u32, k: u32) -> Result<u32> {
    ham.check_annulus(annulus)?;
    let (n, k) = (n as i64, k as i64);
    let fl = |v: i64| v.div_euclid(2);
    let v = match (ham, annulus) {
        (Hamiltonian::D4Triangle, _) => return Err(Error::NotA3(ham.slug())),
        (Hamiltonian::EightLoop, Annulus::InteriorRight | Annulus::InteriorLeft) => fl(3 * k * (n - 1)),
        (Hamiltonian::EightLoop, _) => match k {
            1 => 2 * fl(n - 1) + 1,
            2 => 2 * n + 1,
            _ => 2 * fl(k * (n + 1)) - 3,
        },
        _ => match k {
            1 => 2 * fl(n - 1),
            2 => 2 * n,
            _ => 2 * fl(k * (n + 1)) - 4,
        },
    };
    Ok(v.max(0) as u32)
}

/// Substitutes `phi -> phi + c` in `q_{k-1}` and checks that every positive
/// power of `c` contributes nothing to `M_k`; returns the `c^0` part.
pub fn c_independence(q_prev: &ExtElem, w: &OneForm, ham: Hamiltonian) -> Result<(Laurent, Laurent)> {
    let top = q_prev.var_degree().unwrap_or(0);
    let mut base = None;
    for m in 0..=top {
        let qm = q_prev.shift_coeff(m);
        let (_, red) = exterior_step(Some(&qm), w, ham)?;
        let (a, b) = red.residual_at(0);
        if m == 0 {
            base = Some((a, b));
        } else if !(a.is_zero() && b.is_zero()) {
            return Err(Error::ShapeViolation(format!("coefficient of c^{m} in M_k does not vanish")));
        }
        for (&j, (a, b)) in &red.residual {
            if j > 0 && !(a.is_zero() && b.is_zero()) {
                return Err(Error::ShapeViolation(format!("c^{m}: residual at phi^{j}")));
            }
        }
    }
    Ok(base.unwrap_or_default())
}

/// Coefficients in `f64` for plotting and sampling.
pub fn coeffs_f64(p: &UPoly) -> Vec<f64> {
    p.coeffs().iter().map(to_f64).collect()
}
