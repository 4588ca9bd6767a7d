use melnikov_core::monodromy::{
    homology_class, integrate_word, pair_with_form, var, var_iter, Gen, Letter, LoopWord, PuncturedModel, Twist,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn arb_word(gens: &'static [Gen], max_len: usize) -> impl Strategy<Value = LoopWord> {
    prop::collection::vec((prop::sample::select(gens), any::<bool>()), 0..=max_len)
        .prop_map(|ls| LoopWord::from_letters(ls.into_iter().map(|(g, inv)| Letter::new(g, inv))))
}

const TRIANGLE: &[Gen] = &[Gen::Delta, Gen::G1, Gen::G2, Gen::G3];

fn jittered(f: [f64; 10]) -> PuncturedModel {
    let mut m = PuncturedModel::default();
    for j in 0..4 {
        m.punctures[j] += Complex64::new(0.2 * f[j], 0.1 * f[j + 4]);
    }
    m.base *= 1.0 + 0.1 * f[8];
    m.radii = m.radii.map(|r| r * (1.0 + 0.1 * f[9]));
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn path_integrals_compose(a in arb_word(TRIANGLE, 4), b in arb_word(TRIANGLE, 4)) {
        let m = PuncturedModel::default();
        let (pa, pb) = (integrate_word(&a, &m, 0).unwrap(), integrate_word(&b, &m, 0).unwrap());
        let pab = integrate_word(&a.mul(&b), &m, 0).unwrap();
        prop_assert!((pab.eta - pa.eta - pb.eta).norm() < 1e-9);
        prop_assert!((pab.log_jump - pa.log_jump - pb.log_jump).norm() < 1e-9);
        let want = pa.omega + pb.omega + pa.log_jump * pb.eta;
        prop_assert!((pab.omega - want).norm() < 1e-8 * (1.0 + want.norm()), "{} vs {}", pab.omega, want);
    }

    /// The periods only see homology: 2πi times the exponent sums.
    #[test]
    fn periods_follow_homology(a in arb_word(TRIANGLE, 6)) {
        let p = integrate_word(&a, &PuncturedModel::default(), 0).unwrap();
        let h = homology_class(&a);
        let tau = Complex64::new(0.0, 2.0 * PI);
        prop_assert!((p.eta - tau * (h[2] - h[1]) as f64).norm() < 1e-9);
        prop_assert!((p.log_jump - tau * (h[1] - h[3]) as f64).norm() < 1e-9);
    }

    #[test]
    fn commutator_pairing_is_topological(a in arb_word(TRIANGLE, 3), b in arb_word(TRIANGLE, 3), f in prop::array::uniform10(-1.0f64..1.0)) {
        let m = jittered(f);
        prop_assume!(m.validate().is_ok());
        let c = LoopWord::commutator(&a, &b);
        let v = pair_with_form(&c, &m).unwrap();
        let (pa, pb) = (integrate_word(&a, &m, 0).unwrap(), integrate_word(&b, &m, 0).unwrap());
        let want = pa.log_jump * pb.eta - pb.log_jump * pa.eta;
        prop_assert!((v - want).norm() < 1e-7 * (1.0 + want.norm()), "{} vs {}", v, want);
        let v0 = pair_with_form(&c, &PuncturedModel::default()).unwrap();
        prop_assert!((v - v0).norm() < 1e-7 * (1.0 + v0.norm()));
    }

    /// Away from the branch points the form is closed and single-valued.
    #[test]
    fn null_homologous_words_pair_to_zero(a in arb_word(&[Gen::Delta, Gen::G2], 8)) {
        prop_assume!(a.exponent_sums().values().all(|&e| e == 0));
        let v = pair_with_form(&a, &PuncturedModel::default()).unwrap();
        prop_assert!(v.norm() < 1e-8);
    }

    #[test]
    fn variation_respects_conjugacy(twist in prop::sample::select(Twist::ALL.to_vec()), i in 0usize..4, g in 0usize..3) {
        let table = twist.table();
        let (key, value) = &table[i % table.len()];
        let gens: &[Gen] = if twist == Twist::D4L0 { TRIANGLE } else { &[Gen::Dl, Gen::Dr, Gen::Ds] };
        let c = LoopWord::gen(gens[g % gens.len()]);
        let conj = c.mul(key).mul(&c.inverse());
        let out = var(&conj, twist).unwrap();
        prop_assert!(out.is_conjugate(value));
        prop_assert!(out.is_empty() || out.alphabet() == Some(twist.alphabet()));
    }
}

#[test]
fn variation_chains_terminate() {
    // the quarter twist sends dr dl to ds^2, which has no entry
    for twist in [Twist::D4L0, Twist::A3L0] {
        for (key, _) in twist.table() {
            let chain = var_iter(&key, twist, 4).unwrap();
            assert!(chain.iter().any(|w| w.is_empty()), "{twist}: {}", key.to_text());
        }
    }
    let w = LoopWord::parse("d").unwrap();
    let chain: Vec<String> = var_iter(&w, Twist::D4L0, 3).unwrap().iter().map(|w| w.to_text()).collect();
    assert_eq!(chain, ["g1 g2 g3", "g1 g2 g1^-1 g2^-1", "1"]);
    assert_eq!(var_iter(&LoopWord::parse("ds").unwrap(), Twist::A3Quarter, 5).unwrap().len(), 1);
    assert!(var_iter(&LoopWord::parse("dr dl").unwrap(), Twist::A3Quarter, 2).is_err());
}
