use alloc::format;
use alloc::vec::Vec;

use super::oval::check_level;
use super::quad::Tol;
use super::sample::Symbolic;
use super::shoot::ORACLE_MARGIN;
use crate::error::{Error, Result};
use crate::reduction::zero_bound;

/// Certified lower bound on the number of zeros (sign changes) with the
/// brackets that witness them.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCount {
    pub count: usize,
    pub brackets: Vec<(f64, f64)>,
    pub bound: Option<u32>,
}

impl ZeroCount {
    /// `true` when the bound is met exactly (flagged, not proved).
    pub fn saturates(&self) -> bool {
        self.bound.is_some_and(|b| self.count as u32 == b)
    }
}

/// Sign changes of `f` on a uniform grid, each refined by bisection.
pub fn sign_changes<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    if samples < 2 || !(b > a) {
        return Err(Error::InvalidGrid("need a < b and at least two samples"));
    }
    let ts: Vec<f64> = (0..samples).map(|i| a + (b - a) * i as f64 / (samples - 1) as f64).collect();
    let vs = ts.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < samples {
        let (mut lo, mut hi) = (ts[i], ts[i + 1]);
        let (mut flo, fhi) = (vs[i], vs[i + 1]);
        if flo == 0.0 {
            out.push((lo, lo));
            i += 1;
            continue;
        }
        if flo * fhi < 0.0 {
            for _ in 0..40 {
                if hi - lo <= 1e-10 * (b - a) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push((lo, hi));
        }
        i += 1;
    }
    if vs[samples - 1] == 0.0 {
        out.push((b, b));
    }
    Ok(out)
}

/// Counts zeros of a generating function on `[a, b]`; for the A3 family the
/// count is checked against the bound for perturbations of degree `n`.
pub fn count_zeros(sym: &Symbolic, interval: (f64, f64), samples: usize, n: Option<u32>) -> Result<ZeroCount> {
    if sym.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let (ham, annulus) = (sym.hamiltonian(), sym.annulus());
    check_level(ham, annulus, interval.0, ORACLE_MARGIN)?;
    check_level(ham, annulus, interval.1, ORACLE_MARGIN)?;
    let tol = Tol::rel(1e-11);
    let brackets = sign_changes(|t| sym.eval(t, tol), interval.0, interval.1, samples)?;
    let bound = match (n, ham.is_a3()) {
        (Some(n), true) => Some(zero_bound(ham, annulus, n, sym.k())?),
        _ => None,
    };
    let count = brackets.len();
    if let Some(b) = bound {
        if count as u32 > b {
            return Err(Error::ShapeViolation(format!(
                "{count} zeros observed but the bound for n = {} is {b}",
                n.unwrap_or(0)
            )));
        }
    }
    Ok(ZeroCount { count, brackets, bound })
}
