mod common;

use melnikov_core::algebra::{rat, Annulus, ExtElem, ExtForm, Hamiltonian, Laurent, OneForm, UPoly, WeightedPoly};
use melnikov_core::numerics::{a3_basis, default_t_grid, integrate_form, trace_oval, Integrand, Tol};
use melnikov_core::reduction::{
    c_independence, decompose, decompose_ext, francoise_chain, reduce_ext, theorem_shape, DEFAULT_K_MAX,
};
use proptest::prelude::*;

use common::{phi_annulus, random_kernel_form, rng};

const EL: Hamiltonian = Hamiltonian::EightLoop;

fn form(s: &str) -> OneForm {
    OneForm::parse(s).unwrap()
}

fn same_form(ham: Hamiltonian, a: &OneForm, b: &OneForm) -> bool {
    ham.same_function(a.a(), b.a()) && ham.same_function(a.b(), b.b())
}

/// `oint w` by quadrature against `alpha I0 + beta I1 + gamma I2`.
fn check_on_ovals(ham: Hamiltonian, annulus: Annulus, w: &OneForm, coeffs: [&UPoly; 3]) {
    for t in default_t_grid(ham, annulus, 5).unwrap() {
        let o = trace_oval(ham, t, annulus).unwrap();
        let direct = integrate_form(&o, Integrand::Form(w), Tol::DEFAULT).unwrap();
        let i = a3_basis(&o, Tol::DEFAULT).unwrap();
        let model: f64 = (0..3).map(|k| coeffs[k].eval_f64(t) * i[k]).sum();
        assert!((direct - model).abs() < 1e-9 * direct.abs().max(1.0), "{w} at {t}: {direct} vs {model}");
    }
}

fn arb_form(max: u32) -> impl Strategy<Value = OneForm> {
    prop::collection::vec((0..=max, 0..=max, any::<bool>(), -4i64..=4, 1i64..=3), 1..10).prop_map(move |ts| {
        let mut w = OneForm::zero();
        for (x, y, dy, n, d) in ts {
            if x + y <= max {
                let p = WeightedPoly::term(rat(n, d), x, y, 0);
                w = w.add(&if dy { OneForm::dy(p) } else { OneForm::dx(p) });
            }
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn decomposition_reconstructs(ham in prop::sample::select(Hamiltonian::A3.to_vec()), w in arb_form(9)) {
        let d = decompose(&w, ham).unwrap();
        prop_assert!(same_form(ham, &d.reconstruct(ham), &w));
        let m = w.weighted_degree().unwrap_or(0) as i64;
        let cap = |p: &UPoly, off: i64| p.degree().is_none_or(|d| 2 * d as i64 <= m - off);
        prop_assert!(cap(&d.alpha, 1) && cap(&d.beta, 2) && cap(&d.gamma, 3));
    }

    /// `phi^l w` reduces to exact + dH parts plus `phi^j H^-(l-j) (a sigma0 + b sigma2)`.
    #[test]
    fn log_powers_reduce_with_bounded_poles(w in arb_form(5), l in 0u32..=3, v in 0usize..3) {
        let ham = Hamiltonian::A3[v];
        let mut f = ExtForm::zero();
        f.add_term(l, 0, w.clone());
        let red = reduce_ext(&f, ham).unwrap();
        prop_assert!(red.reconstruct(ham).same_as(&f, ham));
        for (&j, (a, b)) in &red.residual {
            prop_assert!(j <= l);
            prop_assert!(a.pole_order() <= l - j && b.pole_order() <= l - j, "phi^{} poles {} {}", j, a.pole_order(), b.pole_order());
        }
    }
}

#[test]
fn decompose_examples() {
    let d = decompose(&form("x y dx"), EL).unwrap();
    assert!(d.exact.is_zero() && d.g.is_zero() && d.alpha.is_zero() && d.gamma.is_zero());
    assert_eq!(d.beta, UPoly::one());

    let d = decompose(&form("y^2 dx"), EL).unwrap();
    assert!(d.is_relatively_exact());

    let w = form("y^3 dx");
    let d = decompose(&w, EL).unwrap();
    assert!(!d.alpha.is_zero() && !d.gamma.is_zero() && d.beta.is_zero());
    assert!(d.alpha.degree().unwrap() <= 1 && d.gamma.degree() == Some(0));
    assert!(same_form(EL, &d.reconstruct(EL), &w));
    for annulus in [Annulus::InteriorRight, Annulus::Exterior] {
        check_on_ovals(EL, annulus, &w, [&d.alpha, &d.beta, &d.gamma]);
    }
}

#[test]
fn decompose_ext_examples() {
    // x y dx = d((x^2-1) y/4 + phi H) - phi dH
    let d = decompose_ext(&form("x y dx"), EL).unwrap();
    let mut want = ExtElem::from_poly(WeightedPoly::from_terms(&[(1, 2, 1, 0), (-1, 0, 1, 0)]).scale(&rat(1, 4)));
    want.add_term(1, 0, WeightedPoly::term(rat(1, 1), 0, 0, 1));
    assert!(d.exact.same_as(&want, EL));
    assert!(d.g.same_as(&ExtElem::var().neg(), EL));
    assert!(d.alpha.is_zero() && d.gamma.is_zero());

    let d = decompose_ext(&EL.dh(), EL).unwrap();
    assert!(d.alpha.is_zero() && d.gamma.is_zero());

    for ham in Hamiltonian::A3 {
        let w = form("x^3 y^2 dx");
        let d = decompose_ext(&w, ham).unwrap();
        check_on_ovals(ham, phi_annulus(ham), &w, [&d.alpha, &UPoly::zero(), &d.gamma]);
    }
}

#[test]
fn chain_examples() {
    let r = francoise_chain(&form("y dx"), EL, Annulus::InteriorRight, DEFAULT_K_MAX).unwrap();
    let m = r.m.unwrap();
    assert_eq!(m.k, 1);
    assert!(m.alpha == UPoly::one() && m.beta.is_zero() && m.gamma.is_zero());

    let r = francoise_chain(&form("x y dx"), EL, Annulus::Exterior, DEFAULT_K_MAX).unwrap();
    assert!(r.k().is_none_or(|k| k >= 2));
    assert!(r.trace[0].q.var_degree().unwrap() >= 1, "q1 = {:?}", r.trace[0].q);

    // random cubic with M1 = 0 on the exterior annulus
    let mut g = rng(11);
    let w = loop {
        let w = random_kernel_form(&mut g, EL, Annulus::Exterior, 3);
        if francoise_chain(&w, EL, Annulus::Exterior, 2).unwrap().k() == Some(2) {
            break w;
        }
    };
    let m = francoise_chain(&w, EL, Annulus::Exterior, DEFAULT_K_MAX).unwrap().m.unwrap();
    let (p, da, dg) = theorem_shape(2, 3, true);
    assert_eq!((m.k, p), (2, 1));
    assert!(m.pole_order <= 1 && m.beta.is_zero());
    assert!(m.alpha.degree().is_none_or(|d| d <= da.unwrap() as usize));
    assert!(m.gamma.degree().is_none_or(|d| d <= dg.unwrap() as usize));
}

#[test]
fn interior_chain_degrees() {
    let mut g = rng(12);
    for n in [3u32, 4] {
        let w = random_kernel_form(&mut g, EL, Annulus::InteriorRight, n);
        let r = francoise_chain(&w, EL, Annulus::InteriorRight, 3).unwrap();
        for s in &r.trace {
            let q = s.q.as_poly().unwrap();
            assert!(q.weighted_degree().is_none_or(|d| d <= s.k * (n - 1)));
        }
    }
}

/// Shifting `phi` by a formal constant leaves `M_k` unchanged.
#[test]
fn generating_function_ignores_the_phi_constant() {
    let mut g = rng(13);
    for ham in Hamiltonian::A3 {
        let annulus = phi_annulus(ham);
        let w = loop {
            let w = random_kernel_form(&mut g, ham, annulus, 3);
            let r = francoise_chain(&w, ham, annulus, 3).unwrap();
            if r.k().is_some_and(|k| k >= 2) {
                break w;
            }
        };
        let r = francoise_chain(&w, ham, annulus, 3).unwrap();
        let m = r.m.unwrap();
        let q_prev = &r.trace[(m.k - 2) as usize].q;
        let (a, b) = c_independence(q_prev, &w, ham).unwrap();
        let lift = |p: &UPoly| Laurent::from_poly_shifted(p, -(m.pole_order as i32));
        assert_eq!(a, lift(&m.alpha), "{}", ham.slug());
        assert_eq!(b, lift(&m.gamma), "{}", ham.slug());
    }
}

#[test]
fn generating_function_matches_quadrature() {
    // M_1 of an interior form is oint w itself
    let w = form("y^3 dx + x^2 y dx - 2 x y^2 dy");
    let m = francoise_chain(&w, EL, Annulus::InteriorRight, 1).unwrap().m.unwrap();
    check_on_ovals(EL, Annulus::InteriorRight, &w, [&m.alpha, &m.beta, &m.gamma]);
}
