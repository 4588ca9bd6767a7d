use num_traits::One;

use crate::algebra::{int, rat, ExtElem, Hamiltonian, Mono, OneForm, Rational, UPoly, WeightedPoly};
use crate::error::Result;

/// `w = dG + g dH + alpha(H) y dx + beta(H) x y dx + gamma(H) x^2 y dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub exact: WeightedPoly,
    pub g: WeightedPoly,
    pub alpha: UPoly,
    pub beta: UPoly,
    pub gamma: UPoly,
}

impl Decomposition {
    /// Whether the form is relatively exact (`alpha = beta = gamma = 0`).
    pub fn is_relatively_exact(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn reconstruct(&self, ham: Hamiltonian) -> OneForm {
        let mut w = ham.d(&self.exact).add(&ham.dh().mul_poly(&self.g));
        for (k, c) in [&self.alpha, &self.beta, &self.gamma].into_iter().enumerate() {
            w = w.add(&OneForm::sigma(k as u32).mul_poly(&WeightedPoly::from_h_poly(c)));
        }
        w
    }
}

/// Exterior-annulus decomposition with the `x y dx` part folded into the
/// generator: `w = dQ + q dH + alpha sigma_0 + gamma sigma_2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtDecomposition {
    pub exact: ExtElem,
    pub g: ExtElem,
    pub alpha: UPoly,
    pub gamma: UPoly,
}

struct Acc {
    ham: Hamiltonian,
    s: Rational,
    e: Rational,
    exact: WeightedPoly,
    g: WeightedPoly,
    work: WeightedPoly,
    basis: [UPoly; 3],
}

impl Acc {
    /// Adds `c H^k dF` to the exact/dH accumulators.
    fn exact_times(&mut self, c: &Rational, k: u32, f: &WeightedPoly) {
        let hk = Mono::new(0, 0, k);
        self.exact = &self.exact + &f.mul_mono(hk).scale(c);
        if k > 0 {
            self.g = &self.g - &f.mul_mono(Mono::new(0, 0, k - 1)).scale(&(c * int(k as i64)));
        }
    }

    fn dh_times(&mut self, c: &Rational, k: u32, p: &WeightedPoly) {
        self.g = &self.g + &p.mul_mono(Mono::new(0, 0, k)).scale(c);
    }

    fn dx_times(&mut self, c: &Rational, k: u32, p: &WeightedPoly) {
        self.work = &self.work + &p.mul_mono(Mono::new(0, 0, k)).scale(c);
    }

    /// One rewrite of the monomial `c H^k x^i y^j dx`.
    fn step(&mut self, m: Mono, c: Rational) {
        let (i, j, k) = (m.x, m.y, m.h);
        let mono = |x: u32, y: u32| WeightedPoly::term(Rational::one(), x, y, 0);
        let (s, e) = (self.s.clone(), self.e.clone());
        if j == 0 {
            let f = mono(i + 1, 0).scale(&rat(1, i as i64 + 1));
            self.exact_times(&c, k, &f);
            return;
        }
        if i >= 3 {
            // x^3 y^j dx = s y^j dH - s/(j+2) d(y^{j+2}) - e x y^j dx
            self.dh_times(&(&c * &s), k, &mono(i - 3, j));
            self.exact_times(&(&c * &s * rat(-1, j as i64 + 2)), k, &mono(i - 3, j + 2));
            if i > 3 {
                let num = &c * &s * rat(i as i64 - 3, j as i64 + 2);
                self.dx_times(&num, k, &mono(i - 4, j + 2));
            }
            self.dx_times(&(-&c * &e), k, &mono(i - 2, j));
            return;
        }
        if j == 1 {
            self.basis[i as usize] = &self.basis[i as usize] + &UPoly::monomial(c, k as usize);
            return;
        }
        let jr = int(j as i64);
        match i {
            0 => {
                // (2j+1) y^j dx = 4jH y^{j-2} dx - j s e (x^2+e) y^{j-2} dx - j x y^{j-2} dH + d(x y^j)
                let c = &c / int(2 * j as i64 + 1);
                self.dx_times(&(&c * int(4) * &jr), k + 1, &mono(0, j - 2));
                let se = &s * &e * &jr;
                self.dx_times(&(-&c * &se), k, &mono(2, j - 2));
                self.dx_times(&(-&c * &se * &e), k, &mono(0, j - 2));
                self.dh_times(&(-&c * &jr), k, &mono(1, j - 2));
                self.exact_times(&c, k, &mono(1, j));
            }
            1 => {
                // x y^j dx = 2j/(j+1) H x y^{j-2} dx - j/(2j+2) (x^2+e) y^{j-2} dH + d((x^2+e) y^j/(2j+2))
                let jj = j as i64;
                self.dx_times(&(&c * rat(2 * jj, jj + 1)), k + 1, &mono(1, j - 2));
                let x2e = &mono(2, j - 2) + &mono(0, j - 2).scale(&e);
                self.dh_times(&(&c * rat(-jj, 2 * jj + 2)), k, &x2e);
                let f = &mono(2, j) + &mono(0, j).scale(&e);
                self.exact_times(&(&c * rat(1, 2 * jj + 2)), k, &f);
            }
            _ => {
                // (2j+3) x^2 y^j dx = -e y^j dx + 4jH x^2 y^{j-2} dx - j (x^3+ex) y^{j-2} dH + d((x^3+ex) y^j)
                let c = &c / int(2 * j as i64 + 3);
                self.dx_times(&(-&c * &e), k, &mono(0, j));
                self.dx_times(&(&c * int(4) * &jr), k + 1, &mono(2, j - 2));
                let x3 = &mono(3, j - 2) + &mono(1, j - 2).scale(&e);
                self.dh_times(&(-&c * &jr), k, &x3);
                let f = &mono(3, j) + &mono(1, j).scale(&e);
                self.exact_times(&c, k, &f);
            }
        }
    }

    /// Rewrites until no `dx` monomial has `y`-degree above `floor`; with
    /// `full` also clears the exact level and `x^3 y dx`.
    fn run(&mut self, floor: u32, full: bool) {
        loop {
            let pick = self
                .work
                .terms()
                .filter(|(m, _)| m.y > floor || (full && (m.y == 0 || m.x >= 3)))
                .max_by_key(|(m, _)| (m.y, m.x, m.h))
                .map(|(m, c)| (*m, c.clone()));
            let Some((m, c)) = pick else { break };
            self.work.add_term(m, -c.clone());
            self.step(m, c);
        }
    }
}

fn start(ham: Hamiltonian, w: &OneForm) -> Result<Acc> {
    let (s, e) = ham.require_a3()?;
    let mut acc = Acc {
        ham,
        s: int(s),
        e: int(e),
        exact: WeightedPoly::zero(),
        g: WeightedPoly::zero(),
        work: w.a().clone(),
        basis: [UPoly::zero(), UPoly::zero(), UPoly::zero()],
    };
    // x^i y^j H^k dy = d(x^i y^{j+1} H^k/(j+1)) - [i x^{i-1} y^{j+1} H^k dx + k x^i y^{j+1} H^{k-1} dH]/(j+1)
    for (m, c) in w.b().terms() {
        let c = c / int(m.y as i64 + 1);
        acc.exact.add_term(Mono::new(m.x, m.y + 1, m.h), c.clone());
        if m.x > 0 {
            acc.work.add_term(Mono::new(m.x - 1, m.y + 1, m.h), -&c * int(m.x as i64));
        }
        if m.h > 0 {
            acc.g.add_term(Mono::new(m.x, m.y + 1, m.h - 1), -&c * int(m.h as i64));
        }
    }
    acc.work = acc.ham.canonical(&acc.work);
    Ok(acc)
}

/// Decomposes a polynomial one-form over an A3 Hamiltonian.
pub fn decompose(w: &OneForm, ham: Hamiltonian) -> Result<Decomposition> {
    let mut acc = start(ham, w)?;
    acc.run(0, true);
    debug_assert!(acc.work.is_zero());
    let [alpha, beta, gamma] = acc.basis;
    Ok(Decomposition {
        exact: acc.exact,
        g: acc.g,
        alpha,
        beta,
        gamma,
    })
}

/// `beta(H) x y dx = d(beta G0 + phi H beta) - (beta' G0 + phi (H beta)') dH`.
pub fn fold_beta(ham: Hamiltonian, beta: &UPoly) -> Result<(ExtElem, ExtElem)> {
    let g0 = ham.g0()?;
    let b = WeightedPoly::from_h_poly(beta);
    let big_b = beta.shift_degree(1);
    let exact = ExtElem::from_poly(&b * &g0).add(&ExtElem::term(1, 0, WeightedPoly::from_h_poly(&big_b)));
    let g = ExtElem::from_poly(&WeightedPoly::from_h_poly(&beta.derivative()) * &g0)
        .add(&ExtElem::term(1, 0, WeightedPoly::from_h_poly(&big_b.derivative())))
        .neg();
    Ok((exact, g))
}

pub fn decompose_ext(w: &OneForm, ham: Hamiltonian) -> Result<ExtDecomposition> {
    let d = decompose(w, ham)?;
    let (ex, gx) = fold_beta(ham, &d.beta)?;
    Ok(ExtDecomposition {
        exact: ExtElem::from_poly(d.exact).add(&ex),
        g: ExtElem::from_poly(d.g).add(&gx),
        alpha: d.alpha,
        gamma: d.gamma,
    })
}

/// `Lambda_j(H)` with `(y^j dx, x^2 y^j dx) = Lambda_j (y^{j-2} dx, x^2 y^{j-2} dx)`
/// modulo relatively exact forms, obtained by running the rewrite rules one
/// level down.
pub fn lambda_matrix(ham: Hamiltonian, j: u32) -> Result<[[UPoly; 2]; 2]> {
    assert!(j >= 2, "Lambda_j needs j >= 2");
    let mut out: [[UPoly; 2]; 2] = Default::default();
    for (row, x) in [0u32, 2].into_iter().enumerate() {
        let w = OneForm::dx(WeightedPoly::term(Rational::one(), x, j, 0));
        let mut acc = start(ham, &w)?;
        acc.run(j - 2, false);
        for (m, c) in acc.work.terms() {
            debug_assert_eq!(m.y, j - 2);
            let col = match m.x {
                0 => 0,
                2 => 1,
                _ => unreachable!("odd x-power at level j-2"),
            };
            out[row][col] = &out[row][col] + &UPoly::monomial(c.clone(), m.h as usize);
        }
    }
    Ok(out)
}
