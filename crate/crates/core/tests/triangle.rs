use melnikov_core::algebra::{int, rat, Annulus, ExtForm, Hamiltonian, UPoly};
use melnikov_core::numerics::{d4_basis, d4_ode_residual, integrate_form, trace_oval, Integrand, Tol};
use melnikov_core::triangle::{
    d4_chain, d4_fuchs_ode, d4_local_exponents, d4_pq, d4_reduce_moments, moment_relation, paper_perturbation,
    D4GenFn, FuchsOde, Moment, MomentExpr, Point,
};
use melnikov_core::Error;

const TRI: Hamiltonian = Hamiltonian::D4Triangle;

fn displayed_ode() -> FuchsOde {
    let a3 = &UPoly::from_ints(&[0, 0, 4, 1]) * &UPoly::from_ints(&[2048, 704, 39]);
    let a2 = UPoly::from_ints(&[0, 32768, 18688, 3128, 117]);
    let a1 = UPoly::from_ints(&[18432, 9728, 1544, 39]).scale(&rat(8, 9));
    FuchsOde::new(vec![UPoly::zero(), a1, a2, a3]).unwrap()
}

fn falling(r: f64, k: usize) -> f64 {
    (0..k).map(|i| r - i as f64).product()
}

/// `s^{n - v} L[(t - t0)^r] / (t - t0)^r` at small `s`: the indicial function
/// up to an `O(s)` error, straight from the floating-point coefficients.
fn numeric_indicial(ode: &FuchsOde, t0: f64, r: f64, shift: i32) -> f64 {
    let s = 1e-7;
    let t = t0 + s;
    (0..=ode.order).map(|k| ode.coeffs[k].eval_f64(t) * falling(r, k) * s.powi(shift - k as i32)).sum()
}

#[test]
fn exponents_at_minus_four_match_frobenius() {
    let ode = displayed_ode();
    let e = d4_local_exponents(&ode, &Point::Finite(int(-4))).unwrap();
    assert_eq!(e.rational.len(), 3, "{}", e.to_text());
    // a3 has a simple zero at -4, so v_min = 1 - 3 and the shift is 2
    let scale = numeric_indicial(&ode, -4.0, 3.0, 2).abs();
    for r in e.approx() {
        assert!(numeric_indicial(&ode, -4.0, r, 2).abs() < 1e-5 * scale, "exponent {r}");
    }
    // the exact indicial polynomial is proportional to the numeric one
    let ratio = numeric_indicial(&ode, -4.0, 3.0, 2) / e.indicial.eval_f64(3.0);
    for r in [-2.0, -0.5, 0.5, 2.5, 4.0] {
        let num = numeric_indicial(&ode, -4.0, r, 2);
        assert!((num - ratio * e.indicial.eval_f64(r)).abs() < 1e-5 * scale, "r = {r}");
    }
    assert_eq!(e.rational, vec![int(0), int(1), int(1)]);
}

#[test]
fn ordinary_point_is_rejected() {
    let ode = displayed_ode();
    assert!(matches!(d4_local_exponents(&ode, &Point::Finite(int(1))), Err(Error::NotSingular(_))));
    assert!(d4_local_exponents(&ode, &Point::Infinity).is_ok());
}

#[test]
fn moment_reduction_examples() {
    let i1 = d4_reduce_moments(&MomentExpr::single(Moment::I(1))).unwrap();
    assert_eq!(i1, MomentExpr::single(Moment::I(0)));
    let i0 = d4_reduce_moments(&MomentExpr::single(Moment::I(0))).unwrap();
    assert_eq!(i0, MomentExpr::single(Moment::I(0)));
    let i3 = d4_reduce_moments(&MomentExpr::single(Moment::I(3))).unwrap();
    assert_eq!(d4_reduce_moments(&i3).unwrap(), i3);
    for t in [-3.0, -2.0, -1.0] {
        let o = trace_oval(TRI, t, Annulus::Center).unwrap();
        let value = |m: Moment| match m {
            Moment::I(k) => integrate_form(&o, Integrand::Sigma(k), Tol::DEFAULT).unwrap(),
            Moment::Star => integrate_form(&o, Integrand::Star, Tol::DEFAULT).unwrap(),
        };
        let direct = value(Moment::I(3));
        // I3 = (21/5) I2 - (18/5) I0 - (t/10) I0
        let by_hand = 4.2 * value(Moment::I(2)) - 3.6 * value(Moment::I(0)) - t / 10.0 * value(Moment::I(0));
        assert!((direct - by_hand).abs() < 1e-8 * direct.abs());
        assert!((i3.eval_f64(t, value) - direct).abs() < 1e-8 * direct.abs());
        // every instance of the recursion is a relation between oval integrals
        for k in 1..=3 {
            let rel = moment_relation(k);
            let v = rel.eval_f64(t, value);
            assert!(v.abs() < 1e-8 * direct.abs(), "k = {k}: {v}");
        }
    }
}

#[test]
fn abelian_part_is_annihilated() {
    let ts: Vec<f64> = (0..7).map(|i| -3.5 + 0.5 * i as f64).collect();
    for gf in [
        D4GenFn::from_abgd(int(1), int(2), int(-1), int(0)),
        D4GenFn::from_abgd(int(0), int(1), int(0), int(0)),
        D4GenFn::from_abgd(int(0), int(0), int(0), int(1)),
    ] {
        let ode = d4_fuchs_ode(&gf).unwrap();
        let r = d4_ode_residual(&ode, &gf, &ts, 1e-3).unwrap();
        let worst = r.iter().cloned().fold(0.0, f64::max);
        assert!(worst < 1e-4, "{}: {worst:e}", gf.to_text());
    }
    assert!(d4_fuchs_ode(&D4GenFn::from_abgd(int(0), int(0), int(0), int(0))).is_err());
}

#[test]
fn specialised_pq_give_the_displayed_equation() {
    let gf = D4GenFn::new(rat(-3, 32), int(0), int(0), int(1));
    let (p, q) = d4_pq(&gf);
    assert!(!p.is_zero() && !q.is_zero());
    assert!(d4_fuchs_ode(&gf).unwrap().same_up_to_scaling(&displayed_ode()));
}

#[test]
fn chain_identities() {
    let w = paper_perturbation();
    let ch = d4_chain(&w).unwrap();
    // dQ1 + q1 df = w exactly
    let lhs = ch.big_q1.d(TRI).add(&ExtForm::product(&ch.q1, &TRI.dh()));
    assert!(lhs.same_as(&ExtForm::from_form(w.clone()), TRI));

    let l = |x: f64, y: f64| ((3.0 - x - y) / (3.0 - x + y)).ln();
    let o = trace_oval(TRI, -2.0, Annulus::Center).unwrap();
    let h = 1e-5;
    for (x, y) in o.samples(10) {
        let f = TRI.eval(x, y);
        // f dL = 2xy dx + (6x - 2x^2) dy, dL by central differences
        let lx = (l(x + h, y) - l(x - h, y)) / (2.0 * h);
        let ly = (l(x, y + h) - l(x, y - h)) / (2.0 * h);
        assert!((f * lx - 2.0 * x * y).abs() < 1e-8);
        assert!((f * ly - (6.0 * x - 2.0 * x * x)).abs() < 1e-8);

        // q1 w - q2 df is closed
        let field = |x: f64, y: f64| {
            let (a, b) = w.eval_f64(x, y, TRI.eval(x, y));
            let q1 = ch.q1.eval_f64(x, y, TRI.eval(x, y), l(x, y));
            let q2 = ch.q2.eval_f64(x, y, TRI.eval(x, y), l(x, y));
            let (fx, fy) = TRI.grad_f64(x, y);
            (q1 * a - q2 * fx, q1 * b - q2 * fy)
        };
        let dqdx = (field(x + h, y).1 - field(x - h, y).1) / (2.0 * h);
        let dpdy = (field(x, y + h).0 - field(x, y - h).0) / (2.0 * h);
        assert!((dqdx - dpdy).abs() < 1e-6, "curl {} at ({x}, {y})", dqdx - dpdy);
    }
}

#[test]
fn m3_formula_against_direct_quadrature() {
    // M3 = (1/t) oint y (x-1) ln x dx - (3/32) oint y dx / x
    let gf = D4GenFn::new(rat(-3, 32), int(0), int(0), int(1));
    for t in [-3.0, -1.5, -0.5] {
        let o = trace_oval(TRI, t, Annulus::Center).unwrap();
        let [m1, i0, star] = d4_basis(&o, Tol::DEFAULT).unwrap();
        let by_hand = star / t - 3.0 / 32.0 * m1;
        assert!((gf.eval(t, m1, i0, star) - by_hand).abs() < 1e-12 * by_hand.abs());
    }
}
