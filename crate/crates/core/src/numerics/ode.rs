use alloc::vec::Vec;

use super::oval::{integrate_form, trace_oval, Integrand};
use super::quad::Tol;
use crate::algebra::{Annulus, Hamiltonian};
use crate::error::{Error, Result};
use crate::fmath::{abs, ln};
use crate::triangle::{D4GenFn, FuchsOde};

/// Relative residual of `sum a_k M^(k)` at each `t`, with the derivatives of
/// the quadrature-sampled `M` taken from five-point stencils of step `h`.
pub fn d4_ode_residual(ode: &FuchsOde, gf: &D4GenFn, ts: &[f64], h: f64) -> Result<Vec<f64>> {
    let sym = super::sample::Symbolic::D4(gf.clone());
    let tol = Tol { abs: 1e-16, rel: 1e-14 };
    ts.iter()
        .map(|&t| {
            let f = [-2.0, -1.0, 0.0, 1.0, 2.0]
                .iter()
                .map(|j| sym.eval(t + j * h, tol))
                .collect::<Result<Vec<_>>>()?;
            let d1 = (-f[4] + 8.0 * f[3] - 8.0 * f[1] + f[0]) / (12.0 * h);
            let d2 = (-f[4] + 16.0 * f[3] - 30.0 * f[2] + 16.0 * f[1] - f[0]) / (12.0 * h * h);
            let d3 = (f[4] - 2.0 * f[3] + 2.0 * f[1] - f[0]) / (2.0 * h * h * h);
            let derivs = [f[2], d1, d2, d3];
            if ode.order > 3 {
                return Err(Error::Unsupported(alloc::string::String::from(
                    "finite differences stop at the third derivative",
                )));
            }
            let (r, scale) = ode.residual_f64(t, &derivs[..=ode.order]);
            Ok(abs(r) / scale.max(1e-300))
        })
        .collect()
}

/// `I_*(t) ~ c0 + c_ln2 t ln^2|t| + c_ln t ln|t| + c1 t` near `t = 0-`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarAsymptotics {
    pub c0: f64,
    pub c_ln2: f64,
    pub c_ln: f64,
    pub c1: f64,
    pub rms: f64,
}

/// Least-squares fit of [`StarAsymptotics`] on `n` log-spaced levels in
/// `[lo, hi]` (both negative).
pub fn fit_star_asymptotics(lo: f64, hi: f64, n: usize) -> Result<StarAsymptotics> {
    if !(lo < hi && hi < 0.0) || n < 5 {
        return Err(Error::InvalidGrid("need lo < hi < 0 and at least five levels"));
    }
    let tol = Tol { abs: 1e-15, rel: 1e-13 };
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let s = i as f64 / (n - 1) as f64;
        let t = -libm::exp(ln(-lo) + s * (ln(-hi) - ln(-lo)));
        let oval = trace_oval(Hamiltonian::D4Triangle, t, Annulus::Center)?;
        let v = integrate_form(&oval, Integrand::Star, tol)?;
        let l = ln(-t);
        rows.push(([1.0, t * l * l, t * l, t], v));
    }
    let c = least_squares(&rows).ok_or(Error::Degenerate("singular asymptotic fit"))?;
    let rms = libm::sqrt(
        rows.iter()
            .map(|(r, v)| {
                let e = v - (0..4).map(|j| c[j] * r[j]).sum::<f64>();
                e * e
            })
            .sum::<f64>()
            / n as f64,
    );
    Ok(StarAsymptotics {
        c0: c[0],
        c_ln2: c[1],
        c_ln: c[2],
        c1: c[3],
        rms,
    })
}

fn least_squares<const N: usize>(rows: &[([f64; N], f64)]) -> Option<[f64; N]> {
    // column scaling keeps the normal equations well conditioned
    let mut scale = [0.0f64; N];
    for (r, _) in rows {
        for j in 0..N {
            scale[j] = scale[j].max(abs(r[j]));
        }
    }
    let mut m = [[0.0f64; N]; N];
    let mut rhs = [0.0f64; N];
    for (r, v) in rows {
        for i in 0..N {
            let ri = r[i] / scale[i];
            for j in 0..N {
                m[i][j] += ri * r[j] / scale[j];
            }
            rhs[i] += ri * v;
        }
    }
    for c in 0..N {
        let p = (c..N).max_by(|&a, &b| abs(m[a][c]).total_cmp(&abs(m[b][c])))?;
        m.swap(c, p);
        rhs.swap(c, p);
        if abs(m[c][c]) < 1e-300 {
            return None;
        }
        for r in 0..N {
            if r != c {
                let f = m[r][c] / m[c][c];
                for j in c..N {
                    m[r][j] -= f * m[c][j];
                }
                rhs[r] -= f * rhs[c];
            }
        }
    }
    let mut out = [0.0; N];
    for j in 0..N {
        out[j] = rhs[j] / m[j][j] / scale[j];
    }
    Some(out)
}
