use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{fmt_rational, int, rat, to_f64, Rational, UPoly};
use crate::error::{Error, Result};

use super::genfn::D4GenFn;

/// `a_n(t) M^(n) + ... + a_0(t) M = 0`, coefficients stored low order first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuchsOde {
    pub order: usize,
    pub coeffs: Vec<UPoly>,
    /// Distinct rational roots of `a_n`.
    pub singular_points: Vec<Rational>,
    /// `D = t (t + 4)`, the discriminant of the triangle fibration.
    pub d: UPoly,
}

impl FuchsOde {
    /// Removes the common polynomial factor, scales to primitive integer
    /// content and makes the leading coefficient positive.
    pub fn new(mut coeffs: Vec<UPoly>) -> Result<Self> {
        while coeffs.last().is_some_and(UPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::Degenerate("equation has no derivative terms"));
        }
        let g = coeffs.iter().fold(UPoly::zero(), |g, c| g.gcd(c));
        let coeffs: Vec<UPoly> = coeffs.iter().map(|c| c.div_rem(&g).0).collect();
        let mut f = crate::algebra::upoly_content(&coeffs);
        if coeffs.last().expect("nonempty").leading() * &f < Rational::zero() {
            f = -f;
        }
        let coeffs: Vec<UPoly> = coeffs.iter().map(|c| c.scale(&f)).collect();
        let order = coeffs.len() - 1;
        let singular_points = coeffs[order].rational_roots().0.into_iter().map(|(r, _)| r).collect();
        Ok(Self { order, coeffs, singular_points, d: UPoly::from_ints(&[0, 4, 1]) })
    }

    pub fn leading(&self) -> &UPoly {
        &self.coeffs[self.order]
    }

    pub fn same_up_to_scaling(&self, o: &FuchsOde) -> bool {
        self.coeffs == o.coeffs
    }

    /// Residual `sum a_k(t) m_k` and the largest term magnitude, given
    /// `derivs[k] = M^(k)(t)`.
    pub fn residual_f64(&self, t: f64, derivs: &[f64]) -> (f64, f64) {
        let mut sum = 0.0;
        let mut big: f64 = 0.0;
        for (a, d) in self.coeffs.iter().zip(derivs) {
            let term = a.eval_f64(t) * d;
            sum += term;
            big = big.max(term.abs());
        }
        (sum, big)
    }

    /// Displayed form with the factors `t` and `t + 4` pulled out.
    pub fn to_text(&self) -> String {
        let t4 = UPoly::from_ints(&[4, 1]);
        let mut parts = Vec::new();
        for k in (0..=self.order).rev() {
            let a = &self.coeffs[k];
            if a.is_zero() {
                continue;
            }
            let tz = a.low_order();
            let mut rest = UPoly::from_coeffs(a.coeffs()[tz..].to_vec());
            let mut p4 = 0;
            loop {
                let (q, r) = rest.div_rem(&t4);
                if !r.is_zero() || rest.degree() == Some(0) {
                    break;
                }
                rest = q;
                p4 += 1;
            }
            let mut s = String::new();
            let lone = rest.degree() == Some(0);
            if !lone || (tz == 0 && p4 == 0) {
                s.push_str(&format!("({})", rest.fmt_var("t")));
            } else if rest.leading() != Rational::one() {
                s.push_str(&fmt_rational(&rest.leading()));
            }
            match tz {
                0 => {}
                1 => s.push('t'),
                _ => s.push_str(&format!("t^{tz}")),
            }
            match p4 {
                0 => {}
                1 => s.push_str("(t+4)"),
                _ => s.push_str(&format!("(t+4)^{p4}")),
            }
            let primes = match k {
                0 => String::new(),
                1..=3 => "'".repeat(k),
                _ => format!("^({k})"),
            };
            parts.push(format!("{s}M{primes}"));
        }
        format!("{} = 0", parts.join(" + "))
    }
}

fn lin(c: &[Rational]) -> UPoly {
    UPoly::from_coeffs(c.to_vec())
}

/// The polynomials `P`, `Q` of the second-order equation for `u = t^2 M3'`.
pub fn d4_pq(gf: &D4GenFn) -> (UPoly, UPoly) {
    let [a, b, g, d] = gf.abgd();
    let i = |v: i64| int(v);
    let p3 = i(8) * &b * &b - &b * &g;
    let p2 = -(i(56) * &a * &b + &a * &g + i(96) * &b * &g + i(2) * &g * &g + i(48) * &b * &d + i(2) * &g * &d);
    let p1 = i(8) * &a * &a - i(288) * &a * &b + i(12) * &a * &g - i(432) * &b * &g + i(24) * &a * &d
        - i(192) * &b * &d
        + i(28) * &g * &d
        + i(16) * &d * &d;
    let p0 = i(96) * &a * &d + i(144) * &g * &d + i(64) * &d * &d;
    let q3 = i(40) * &b * &b - i(5) * &b * &g;
    let q2 = -(i(64) * &a * &b + i(2) * &a * &g - i(288) * &b * &b + i(144) * &b * &g + i(4) * &g * &g
        + i(48) * &b * &d
        + i(4) * &g * &d);
    let q1 = i(4) * &a * &a - i(144) * &a * &b + i(12) * &a * &g - i(432) * &b * &g + i(12) * &a * &d
        - i(240) * &b * &d
        - i(4) * &g * &d
        + i(8) * &d * &d;
    let q0 = i(32) * &d * &d;
    let q = lin(&[q0, q1, q2, q3]).scale(&rat(4, 9));
    (lin(&[p0, p1, p2, p3]), q)
}

/// Third-order equation for `M3`, from `D P u'' + (t P - D P') u' + Q u = 0`
/// with `u = t^2 M3'`.
pub fn d4_fuchs_ode(gf: &D4GenFn) -> Result<FuchsOde> {
    if gf.is_zero() {
        return Err(Error::Degenerate("all four parameters are zero"));
    }
    let (p, q) = d4_pq(gf);
    let t = UPoly::var();
    let d = UPoly::from_ints(&[0, 4, 1]);
    let dp = &d * &p;
    let mid = &(&t * &p) - &(&d * &p.derivative());
    let t2 = &t * &t;
    // u = t^2 M', u' = 2t M' + t^2 M'', u'' = 2M' + 4t M'' + t^2 M'''
    let a3 = &dp * &t2;
    let a2 = &(&dp * &t.scale(&int(4))) + &(&mid * &t2);
    let a1 = &(&dp.scale(&int(2)) + &(&mid * &t.scale(&int(2)))) + &(&q * &t2);
    FuchsOde::new(vec![UPoly::zero(), a1, a2, a3])
}

/// `A` in `I = A I'` for `I = (I_*, I2, I0)`.
pub fn d4_system_matrix() -> [[UPoly; 3]; 3] {
    let p = |c: &[Rational]| UPoly::from_coeffs(c.to_vec());
    [
        [p(&[int(0), int(1)]), p(&[int(-2)]), p(&[int(6), int(1)])],
        [p(&[]), p(&[rat(-9, 2), rat(3, 4)]), p(&[rat(27, 2), rat(3, 2)])],
        [p(&[]), p(&[int(-3)]), p(&[int(9), rat(3, 2)])],
    ]
}

/// The same equation derived from the first-order system instead: the
/// derivatives of `M3`, written in terms of `I`, are linearly dependent.
/// Rows are kept as polynomial vectors over their own denominators.
pub fn d4_fuchs_ode_from_system(gf: &D4GenFn) -> Result<FuchsOde> {
    if gf.is_zero() {
        return Err(Error::Degenerate("all four parameters are zero"));
    }
    let a = d4_system_matrix();
    let det = det3(&a);
    let adj: [[UPoly; 3]; 3] = core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            // adj[i][j] is the cofactor of a[j][i]
            let m: Vec<Vec<&UPoly>> = (0..3)
                .filter(|&r| r != j)
                .map(|r| (0..3).filter(|&c| c != i).map(|c| &a[r][c]).collect())
                .collect();
            let minor = &(m[0][0] * m[1][1]) - &(m[0][1] * m[1][0]);
            if (i + j) % 2 == 0 {
                minor
            } else {
                -&minor
            }
        })
    });
    let [al, be, ga, de] = gf.abgd();
    // row_i = p_i / g_i with g_i = t^(i+1) det^i, and I' = (adj / det) I
    let t = UPoly::var();
    let det_p = det.derivative();
    let mut rows: Vec<([UPoly; 3], UPoly)> =
        vec![([UPoly::constant(de), UPoly::constant(ga), UPoly::from_coeffs(vec![al, be])], t.clone())];
    for i in 0..3 {
        let (p, g) = rows.last().expect("nonempty").clone();
        let td = &t * &det;
        let shift = &det.scale(&int(i as i64 + 1)) + &(&t * &det_p).scale(&int(i as i64));
        let next: [UPoly; 3] = core::array::from_fn(|j| {
            let mixed = (0..3).fold(UPoly::zero(), |acc, k| &acc + &(&p[k] * &adj[k][j]));
            &(&(&td * &p[j].derivative()) - &(&shift * &p[j])) + &(&t * &mixed)
        });
        rows.push((next, &g * &td));
    }
    let coeffs = minimal_relation(&rows).ok_or(Error::Degenerate("no relation among the derivatives"))?;
    let coeffs = if coeffs.len() == 3 && !coeffs[0].is_zero() {
        // adjoin the constants: (b2 M'' + b1 M' + b0 M) / b0 is constant
        let (b0, b1, b2) = (&coeffs[0], &coeffs[1], &coeffs[2]);
        let d = |r: &UPoly| r.derivative();
        vec![
            UPoly::zero(),
            &(b0 * &(&d(b1) + b0)) - &(&d(b0) * b1),
            &(b0 * &(&d(b2) + b1)) - &(&d(b0) * b2),
            b0 * b2,
        ]
    } else {
        coeffs
    };
    FuchsOde::new(coeffs)
}

fn det3(m: &[[UPoly; 3]; 3]) -> UPoly {
    let minor = |a: &UPoly, b: &UPoly, c: &UPoly, d: &UPoly| &(a * d) - &(b * c);
    let t0 = &m[0][0] * &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let t1 = &m[0][1] * &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let t2 = &m[0][2] * &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    &(&t0 - &t1) + &t2
}

/// Shortest relation among the rows; returns the polynomial coefficients of
/// `M, M', ...` with the row denominators folded back in.
fn minimal_relation(rows: &[([UPoly; 3], UPoly)]) -> Option<Vec<UPoly>> {
    for m in 1..rows.len() {
        let sub = &rows[..=m];
        // left kernel of the numerator matrix from its m x m minors
        for cols in column_sets(m) {
            let c: Vec<UPoly> = (0..=m)
                .map(|i| {
                    let keep: Vec<usize> = (0..=m).filter(|&r| r != i).collect();
                    let d = minor_det(sub, &keep, &cols);
                    if i % 2 == 0 {
                        d
                    } else {
                        -&d
                    }
                })
                .collect();
            if c.iter().all(UPoly::is_zero) {
                continue;
            }
            let ok = (0..3).all(|j| {
                c.iter().zip(sub).fold(UPoly::zero(), |acc, (ci, (p, _))| &acc + &(ci * &p[j])).is_zero()
            });
            if ok {
                // sum c_i p_i = 0 with row_i = p_i / g_i, so M^(i) carries c_i g_i
                return Some(c.iter().zip(sub).map(|(ci, (_, g))| ci * g).collect());
            }
        }
    }
    None
}

fn column_sets(m: usize) -> Vec<Vec<usize>> {
    match m {
        1 => vec![vec![0], vec![1], vec![2]],
        2 => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        _ => vec![vec![0, 1, 2]],
    }
}

fn minor_det(rows: &[([UPoly; 3], UPoly)], keep: &[usize], cols: &[usize]) -> UPoly {
    let e = |r: usize, c: usize| &rows[keep[r]].0[cols[c]];
    match cols.len() {
        1 => e(0, 0).clone(),
        2 => &(e(0, 0) * e(1, 1)) - &(e(0, 1) * e(1, 0)),
        _ => det3(&core::array::from_fn(|r| core::array::from_fn(|c| e(r, c).clone()))),
    }
}

/// Where to expand: a finite point or infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(Rational),
    Infinity,
}

/// Roots of the indicial polynomial: rational ones with multiplicity, plus
/// the cofactor that has no rational roots. At infinity an exponent `r`
/// means solutions behave like `t^(-r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExponents {
    pub indicial: UPoly,
    pub rational: Vec<Rational>,
    pub residual: UPoly,
}

impl LocalExponents {
    pub fn to_text(&self) -> String {
        let mut s: Vec<String> = self.rational.iter().map(fmt_rational).collect();
        if self.residual.degree().unwrap_or(0) > 0 {
            s.push(format!("roots of {}", self.residual.fmt_var("r")));
        }
        s.join(", ")
    }

    pub fn approx(&self) -> Vec<f64> {
        self.rational.iter().map(to_f64).collect()
    }
}

fn falling(k: usize) -> UPoly {
    (0..k).fold(UPoly::one(), |acc, i| &acc * &UPoly::from_coeffs(vec![int(-(i as i64)), int(1)]))
}

/// Characteristic exponents at a regular singular point.
pub fn d4_local_exponents(ode: &FuchsOde, at: &Point) -> Result<LocalExponents> {
    let n = ode.order;
    let mut indicial = UPoly::zero();
    match at {
        Point::Finite(t0) => {
            if !ode.leading().eval(t0).is_zero() {
                return Err(Error::NotSingular(fmt_rational(t0)));
            }
            let shifted: Vec<UPoly> = ode.coeffs.iter().map(|a| a.shift(t0)).collect();
            let v = |k: usize| shifted[k].low_order() as i64 - k as i64;
            let vmin = (0..=n).filter(|&k| !shifted[k].is_zero()).map(v).min().unwrap_or(0);
            if v(n) != vmin {
                return Err(Error::Unsupported(format!("t = {} is an irregular singular point", fmt_rational(t0))));
            }
            for k in (0..=n).filter(|&k| !shifted[k].is_zero() && v(k) == vmin) {
                let c = shifted[k].coeff(shifted[k].low_order());
                indicial = &indicial + &falling(k).scale(&c);
            }
        }
        Point::Infinity => {
            let w = |k: usize| ode.coeffs[k].degree().unwrap_or(0) as i64 - k as i64;
            let wmax = (0..=n).filter(|&k| !ode.coeffs[k].is_zero()).map(w).max().unwrap_or(0);
            if w(n) != wmax {
                return Err(Error::Unsupported(String::from("infinity is an irregular singular point")));
            }
            // solutions ~ t^r with r = -rho
            let neg = |p: &UPoly| {
                let cs = p.coeffs().iter().enumerate().map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c.clone() });
                UPoly::from_coeffs(cs.collect())
            };
            for k in (0..=n).filter(|&k| !ode.coeffs[k].is_zero() && w(k) == wmax) {
                indicial = &indicial + &neg(&falling(k)).scale(&ode.coeffs[k].leading());
            }
        }
    }
    let (indicial, _) = indicial.make_primitive();
    let (roots, residual) = indicial.rational_roots();
    let rational = roots.iter().flat_map(|(r, m)| core::iter::repeat_n(r.clone(), *m)).collect();
    Ok(LocalExponents { indicial, rational, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_ode() -> FuchsOde {
        // t^2 (t+4)(39t^2+704t+2048) M''' + t(117t^3+3128t^2+18688t+32768) M''
        //   + (8/9)(39t^3+1544t^2+9728t+18432) M'
        let quad = UPoly::from_ints(&[2048, 704, 39]);
        let a3 = &UPoly::from_ints(&[0, 0, 4, 1]) * &quad;
        let a2 = UPoly::from_ints(&[0, 32768, 18688, 3128, 117]);
        let a1 = UPoly::from_ints(&[18432, 9728, 1544, 39]).scale(&rat(8, 9));
        FuchsOde::new(vec![UPoly::zero(), a1, a2, a3]).unwrap()
    }

    #[test]
    fn displayed_equation() {
        let gf = D4GenFn::new(rat(-3, 32), int(0), int(0), int(1));
        assert!(d4_fuchs_ode(&gf).unwrap().same_up_to_scaling(&paper_ode()));
    }

    #[test]
    fn both_derivations_agree() {
        for gf in [
            D4GenFn::new(rat(-3, 32), int(0), int(0), int(1)),
            D4GenFn::from_abgd(int(1), int(2), int(-1), int(0)),
            D4GenFn::from_abgd(int(0), int(0), int(0), int(1)),
            D4GenFn::from_abgd(rat(1, 3), rat(-2, 7), rat(5, 2), rat(3, 4)),
        ] {
            let a = d4_fuchs_ode(&gf).unwrap();
            let b = d4_fuchs_ode_from_system(&gf).unwrap();
            assert!(a.same_up_to_scaling(&b), "{}\n{}", a.to_text(), b.to_text());
        }
    }

    #[test]
    fn exponents_at_zero() {
        let e = d4_local_exponents(&paper_ode(), &Point::Finite(int(0))).unwrap();
        assert_eq!(e.rational, vec![int(-1), int(0), int(0)]);
        assert!(matches!(d4_local_exponents(&paper_ode(), &Point::Finite(int(1))), Err(Error::NotSingular(_))));
    }
}
