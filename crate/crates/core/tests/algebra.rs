use melnikov_core::algebra::{rat, ExtElem, Hamiltonian, Mono, OneForm, WeightedPoly};
use proptest::prelude::*;

const EL: Hamiltonian = Hamiltonian::EightLoop;

fn poly_of(terms: &[(u32, u32, u32, i64, i64)], max_weight: u32) -> WeightedPoly {
    let mut p = WeightedPoly::zero();
    for &(x, y, h, n, d) in terms {
        if x + y + 2 * h <= max_weight {
            p.add_term(Mono::new(x, y, h), rat(n, d));
        }
    }
    p
}

fn arb_poly(max_weight: u32) -> impl Strategy<Value = WeightedPoly> {
    prop::collection::vec((0..=max_weight, 0..=max_weight, 0..=max_weight / 2, -5i64..=5, 1i64..=4), 0..8)
        .prop_map(move |ts| poly_of(&ts, max_weight))
}

fn arb_a3() -> impl Strategy<Value = Hamiltonian> {
    prop::sample::select(Hamiltonian::A3.to_vec())
}

fn same_form(ham: Hamiltonian, a: &OneForm, b: &OneForm) -> bool {
    ham.same_function(a.a(), b.a()) && ham.same_function(a.b(), b.b())
}

fn eval(ham: Hamiltonian, p: &WeightedPoly, x: f64, y: f64) -> f64 {
    p.eval_f64(x, y, ham.eval(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normal_form_is_idempotent(ham in arb_a3(), p in arb_poly(12)) {
        let n = ham.normal_form(&p).unwrap();
        prop_assert!(n.max_x() <= 3);
        prop_assert_eq!(ham.normal_form(&n).unwrap(), n);
    }

    #[test]
    fn normal_form_is_the_same_function(ham in arb_a3(), p in arb_poly(12)) {
        let n = ham.normal_form(&p).unwrap();
        for i in 0..20 {
            let x = -1.3 + 0.137 * i as f64;
            let y = 0.9 - 0.091 * i as f64;
            let (a, b) = (eval(ham, &p, x, y), eval(ham, &n, x, y));
            let scale: f64 = p.terms().map(|(m, c)| {
                melnikov_core::algebra::to_f64(c).abs() * 4f64.powi(m.weight() as i32)
            }).sum();
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(1.0), "{} vs {} at ({}, {})", a, b, x, y);
        }
    }

    #[test]
    fn d_is_a_derivation(ham in arb_a3(), p in arb_poly(5), q in arb_poly(5)) {
        let lhs = ham.d(&(&p * &q));
        let rhs = ham.d(&q).mul_poly(&p).add(&ham.d(&p).mul_poly(&q));
        prop_assert!(same_form(ham, &lhs, &rhs));
    }

    #[test]
    fn ext_ring_laws(
        a in arb_poly(4), b in arb_poly(4), c in arb_poly(4),
        ja in 0u32..3, jb in 0u32..3, jc in 0u32..3, pa in 0u32..2, pb in 0u32..2,
    ) {
        let ham = Hamiltonian::D4Triangle;
        let x = ExtElem::term(ja, pa, a);
        let y = ExtElem::term(jb, pb, b);
        let z = ExtElem::term(jc, 0, c).add(&ExtElem::var());
        prop_assert!(x.mul(&y).same_as(&y.mul(&x), ham));
        prop_assert!(x.mul(&y).mul(&z).same_as(&x.mul(&y.mul(&z)), ham));
        prop_assert!(x.mul(&y.add(&z)).same_as(&x.mul(&y).add(&x.mul(&z)), ham));
    }
}

#[test]
fn normal_form_examples() {
    let x4 = WeightedPoly::term(rat(1, 1), 4, 0, 0);
    // 4H - 2y^2 + 2x^2 - 1
    let want = WeightedPoly::from_terms(&[(4, 0, 0, 1), (-2, 0, 2, 0), (2, 2, 0, 0), (-1, 0, 0, 0)]);
    assert_eq!(EL.normal_form(&x4).unwrap(), want);
    let x3 = WeightedPoly::term(rat(1, 1), 3, 0, 0);
    assert_eq!(EL.normal_form(&x3).unwrap(), x3);
    // x^5 y^2 -> x (4H - 2y^2 + 2x^2 - 1) y^2, checked against the product
    let x5y2 = WeightedPoly::term(rat(1, 1), 5, 2, 0);
    let by_hand = &(&want * &WeightedPoly::x()) * &WeightedPoly::y().pow(2);
    let nf = EL.normal_form(&x5y2).unwrap();
    assert_eq!(nf, EL.normal_form(&by_hand).unwrap());
    for i in 0..10 {
        let (x, y) = (0.3 * i as f64 - 1.4, 0.7 - 0.17 * i as f64);
        assert!((eval(EL, &nf, x, y) - x.powi(5) * y * y).abs() < 1e-12);
    }
    assert!(Hamiltonian::D4Triangle.normal_form(&x4).is_err());
}

#[test]
fn exterior_derivative_examples() {
    // G = (x^2 - 1) y / 4
    let g = WeightedPoly::from_terms(&[(1, 2, 1, 0), (-1, 0, 1, 0)]).scale(&rat(1, 4));
    let want = OneForm::new(
        WeightedPoly::term(rat(1, 2), 1, 1, 0),
        WeightedPoly::from_terms(&[(1, 2, 0, 0), (-1, 0, 0, 0)]).scale(&rat(1, 4)),
    );
    assert!(same_form(EL, &EL.d(&g), &want));
    assert!(EL.d(&WeightedPoly::constant(rat(7, 1))).is_zero());
    let x2y2 = WeightedPoly::term(rat(1, 1), 2, 2, 0);
    let want = OneForm::new(WeightedPoly::term(rat(2, 1), 1, 2, 0), WeightedPoly::term(rat(2, 1), 2, 1, 0));
    assert!(same_form(EL, &EL.d(&x2y2), &want));
}

#[test]
fn wedge_examples() {
    assert!(EL.expand(&EL.wedge_with_dh(&EL.dh())).is_zero());
    let w = OneForm::parse("y dx").unwrap();
    assert!(EL.same_function(&EL.wedge_with_dh(&w), &WeightedPoly::term(rat(-1, 1), 0, 2, 0)));
    // dH ^ x dy = H_x x dx^dy = (x^3 - x) x
    let w = OneForm::parse("x dy").unwrap();
    let by_hand = WeightedPoly::from_terms(&[(1, 4, 0, 0), (-1, 2, 0, 0)]);
    let c = EL.wedge_with_dh(&w);
    assert!(EL.same_function(&c, &by_hand));
    for i in 0..5 {
        let (x, y) = (0.4 * i as f64 - 0.9, 0.3);
        let (hx, _) = EL.grad_f64(x, y);
        assert!((eval(EL, &c, x, y) - hx * x).abs() < 1e-12);
    }
}

#[test]
fn rationals_are_reduced() {
    let r = rat(6, -4);
    assert_eq!(r, rat(-3, 2));
    assert_eq!(melnikov_core::algebra::fmt_rational(&r), "-3/2");
}
