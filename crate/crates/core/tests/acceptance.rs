//! End-to-end acceptance criteria; prints one PASS/FAIL line per criterion
//! and fails if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use melnikov_core::algebra::{int, rat, Annulus, ExtElem, Hamiltonian, Mono, OneForm, UPoly, WeightedPoly};
use melnikov_core::monodromy::{homology_class, pair_on_branch, pair_with_form, LoopWord, PuncturedModel};
use melnikov_core::numerics::{
    compare, count_zeros, d4_ode_residual, default_t_grid, fit_star_asymptotics, integrate_form,
    phi_check, trace_oval, Integrand, Symbolic, Tol, DEFAULT_EPS,
};
use melnikov_core::reduction::{check_q_shape, check_theorem_shape, francoise_chain, zero_bound, GeneratingFn, DEFAULT_K_MAX};
use melnikov_core::triangle::{
    d4_chain, d4_fuchs_ode, d4_local_exponents, paper_perturbation, D4GenFn, FuchsOde, Point,
};

use common::{phi_annulus, random_form, random_kernel_form, rng};

const TRI: Hamiltonian = Hamiltonian::D4Triangle;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ext(pairs: &[(u32, u32, &[(i64, i64, u32, u32, u32)])]) -> ExtElem {
    let mut e = ExtElem::zero();
    for &(j, p, ts) in pairs {
        let mut n = WeightedPoly::zero();
        for &(a, b, x, y, h) in ts {
            n.add_term(Mono::new(x, y, h), rat(a, b));
        }
        e.add_term(j, p, n);
    }
    e.normalize(TRI)
}

fn displayed_ode() -> FuchsOde {
    let a3 = &UPoly::from_ints(&[0, 0, 4, 1]) * &UPoly::from_ints(&[2048, 704, 39]);
    let a2 = UPoly::from_ints(&[0, 32768, 18688, 3128, 117]);
    let a1 = UPoly::from_ints(&[18432, 9728, 1544, 39]).scale(&rat(8, 9));
    FuchsOde::new(vec![UPoly::zero(), a1, a2, a3]).unwrap()
}

fn paper_genfn() -> D4GenFn {
    D4GenFn::new(rat(-3, 32), int(0), int(0), int(1))
}

fn c1_golden_chain() -> Outcome {
    let start = Instant::now();
    let ch = d4_chain(&paper_perturbation()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    // Q1 = (1/6)[f L - x^2 y - 12 y], q1 = -L/6
    let big_q1 = ext(&[(1, 0, &[(1, 6, 0, 0, 1)]), (0, 0, &[(-1, 6, 2, 1, 0), (-2, 1, 0, 1, 0)])]);
    let q1 = ext(&[(1, 0, &[(-1, 6, 0, 0, 0)])]);
    // q2 = L^2/72 + (x^3 - 3x^2 + 12x - 36)/(36 f)
    let q2 = ext(&[(2, 0, &[(1, 72, 0, 0, 0)]), (0, 1, &[(1, 36, 3, 0, 0), (-1, 12, 2, 0, 0), (1, 3, 1, 0, 0), (-1, 1, 0, 0, 0)])]);
    ensure(ch.big_q1.same_as(&big_q1, TRI), || format!("Q1 = {}", ch.big_q1.to_text_with("L", "f")))?;
    ensure(ch.q1.same_as(&q1, TRI), || format!("q1 = {}", ch.q1.to_text_with("L", "f")))?;
    ensure(ch.q2.same_as(&q2, TRI), || format!("q2 = {}", ch.q2.to_text_with("L", "f")))?;
    ensure(ch.m3 == paper_genfn(), || format!("M3 = {}", ch.m3.to_text()))?;
    ensure(elapsed < 5.0, || format!("took {elapsed:.2} s"))?;
    Ok(format!("Q1, q1, q2, M3 = {} exact; {elapsed:.3} s", ch.m3.to_text()))
}

fn c2_fuchs() -> Outcome {
    let ode = d4_fuchs_ode(&paper_genfn()).map_err(|e| e.to_string())?;
    ensure(ode.same_up_to_scaling(&displayed_ode()), || ode.to_text())?;
    let e = d4_local_exponents(&ode, &Point::Finite(int(0))).map_err(|e| e.to_string())?;
    ensure(e.rational == vec![int(-1), int(0), int(0)], || format!("exponents at 0: {}", e.to_text()))?;
    Ok(format!("coefficients match up to scaling; exponents at 0: {}", e.to_text()))
}

fn c3_ode_residual() -> Outcome {
    let ode = displayed_ode();
    let ts: Vec<f64> = (0..15).map(|i| -3.5 + 3.0 * i as f64 / 14.0).collect();
    let r = d4_ode_residual(&ode, &paper_genfn(), &ts, 1e-3).map_err(|e| e.to_string())?;
    let worst = r.iter().cloned().fold(0.0, f64::max);
    ensure(worst < 1e-4, || format!("max relative residual {worst:.3e}"))?;
    Ok(format!("max relative residual {worst:.2e} on 15 levels"))
}

fn c4_moments() -> Outcome {
    let mut worst: f64 = 0.0;
    for t in [-3.0, -2.0, -1.0] {
        let o = trace_oval(TRI, t, Annulus::Center).map_err(|e| e.to_string())?;
        let i: Vec<f64> = (-1..=3)
            .map(|k| integrate_form(&o, Integrand::Sigma(k), Tol::DEFAULT))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let at = |k: i32| i[(k + 1) as usize];
        worst = worst.max((at(1) - at(0)).abs() / at(0).abs());
        for k in 1..=2 {
            let kf = k as f64;
            let lhs = (2.0 * kf + 6.0) * at(k + 1);
            let rhs = (12.0 * kf + 18.0) * at(k) - 18.0 * kf * at(k - 1) - (2.0 * kf - 3.0) * t * at(k - 2);
            worst = worst.max((lhs - rhs).abs() / lhs.abs());
        }
    }
    ensure(worst < 1e-8, || format!("max relative defect {worst:.3e}"))?;
    Ok(format!("max relative defect {worst:.2e}"))
}

fn c5_pairing() -> Outcome {
    let m = PuncturedModel::default();
    let w = |s: &str| LoopWord::parse(s).unwrap();
    let comm = w("[g1,g2]");
    let c = pair_with_form(&comm, &m).map_err(|e| e.to_string())?;
    let d = pair_with_form(&w("d"), &m).map_err(|e| e.to_string())?;
    let a = pair_on_branch(&w("g1 g2 g3"), &m, 0).map_err(|e| e.to_string())?;
    let b = pair_on_branch(&w("g1 g2 g3"), &m, 1).map_err(|e| e.to_string())?;
    let err = (c.re + 4.0 * PI * PI).abs().max(c.im.abs());
    ensure(err < 1e-6, || format!("[g1,g2] -> {c}"))?;
    ensure(d.norm() < 1e-8, || format!("d -> {d}"))?;
    ensure((a - b).norm() < 1e-8, || format!("g1 g2 g3 branch shift changes {a} to {b}"))?;
    ensure(homology_class(&comm) == vec![0, 0, 0, 0], || "commutator not null-homologous".into())?;
    ensure(c.norm() > 1.0, || "pairing vanishes on the commutator".into())?;
    Ok(format!("[g1,g2] -> {:.10} (class 0), d -> {:.1e}, branch shift {:.1e}", c.re, d.norm(), (a - b).norm()))
}

struct Example {
    ham: Hamiltonian,
    annulus: Annulus,
    n: u32,
    gf: GeneratingFn,
}

/// Twenty random exterior/center chains; returns the generated examples for
/// the zero-count criterion.
fn c6_structure(examples: &mut Vec<Example>) -> Outcome {
    let start = Instant::now();
    let mut r = rng(6);
    let mut ks = std::collections::BTreeMap::new();
    for n in [3u32, 5] {
        for i in 0..10 {
            let ham = Hamiltonian::A3[i % 3];
            let annulus = phi_annulus(ham);
            let w = if i % 2 == 0 { random_form(&mut r, n) } else { random_kernel_form(&mut r, ham, annulus, n) };
            let res = francoise_chain(&w, ham, annulus, DEFAULT_K_MAX).map_err(|e| format!("{w}: {e}"))?;
            for step in &res.trace {
                check_q_shape(&step.q, step.k, res.n).map_err(|e| format!("{w}: {e}"))?;
            }
            if let Some(gf) = res.m {
                check_theorem_shape(&gf, res.n, false).map_err(|e| format!("{w}: {e}"))?;
                if res.n % 2 == 1 {
                    check_theorem_shape(&gf, res.n, true).map_err(|e| format!("{w} (odd n): {e}"))?;
                }
                *ks.entry(gf.k).or_insert(0) += 1;
                examples.push(Example { ham, annulus, n: res.n, gf });
            } else {
                *ks.entry(0).or_insert(0) += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 60.0, || format!("took {elapsed:.1} s"))?;
    Ok(format!("20 chains, k histogram {ks:?} (0 = all vanish), {elapsed:.2} s"))
}

fn first_k2(ham: Hamiltonian, annulus: Annulus, n: u32, seed: u64) -> OneForm {
    let mut r = rng(seed);
    loop {
        let w = random_kernel_form(&mut r, ham, annulus, n);
        if francoise_chain(&w, ham, annulus, 2).unwrap().k() == Some(2) {
            return w;
        }
    }
}

fn c7_oracle() -> Outcome {
    let start = Instant::now();
    let el = Hamiltonian::EightLoop;
    let cases: Vec<(&str, Hamiltonian, Annulus, OneForm)> = vec![
        ("eight-loop interior k=1", el, Annulus::InteriorRight, OneForm::parse("2 y dx + x y dx").unwrap()),
        ("eight-loop exterior k=1", el, Annulus::Exterior, OneForm::parse("y dx + x^2 y dx").unwrap()),
        ("eight-loop interior k=2", el, Annulus::InteriorRight, first_k2(el, Annulus::InteriorRight, 3, 71)),
        ("eight-loop exterior k=2", el, Annulus::Exterior, first_k2(el, Annulus::Exterior, 3, 72)),
        (
            "double-heteroclinic k=2",
            Hamiltonian::DoubleHeteroclinic,
            Annulus::Center,
            first_k2(Hamiltonian::DoubleHeteroclinic, Annulus::Center, 3, 73),
        ),
    ];
    let mut lines = Vec::new();
    let mut run = |name: &str, sym: Symbolic, w: &OneForm| -> Result<(), String> {
        let grid = default_t_grid(sym.hamiltonian(), sym.annulus(), 4).unwrap();
        let s = compare(&sym, w, &grid, &DEFAULT_EPS).map_err(|e| format!("{name}: {e}"))?;
        // a level counts when both the fitted order and the value agree; levels
        // where the perturbed orbit leaves the annulus are reported, not hidden
        let agree: Vec<bool> = (0..grid.len())
            .map(|i| s.fitted_k[i] == s.k && (s.symbolic[i] - s.shooting[i]).abs() <= 1e-3 * s.symbolic[i].abs())
            .collect();
        let good = agree.iter().filter(|a| **a).count();
        ensure(good >= 3, || format!("{name}: only {good} levels agree; {}", s.summary()))?;
        let worst = (0..grid.len())
            .filter(|&i| agree[i])
            .map(|i| (s.symbolic[i] - s.shooting[i]).abs() / s.symbolic[i].abs())
            .fold(0.0, f64::max);
        let missed: Vec<String> = (0..grid.len()).filter(|&i| !agree[i]).map(|i| format!("{:.3}", grid[i])).collect();
        let note = if missed.is_empty() { String::new() } else { format!(", disagrees at t={}", missed.join(",")) };
        lines.push(format!("{name}: k={} on {good}/{} levels, max rel {worst:.1e}{note}", s.k, grid.len()));
        Ok(())
    };
    for (name, ham, annulus, w) in &cases {
        let gf = francoise_chain(w, *ham, *annulus, DEFAULT_K_MAX).map_err(|e| e.to_string())?.m.ok_or("M_k vanishes")?;
        run(name, Symbolic::A3(gf), w)?;
    }
    run("d4 paper k=3", Symbolic::D4(paper_genfn()), &paper_perturbation())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure(elapsed < 600.0, || format!("took {elapsed:.0} s"))?;
    Ok(format!("{}; {elapsed:.1} s", lines.join("; ")))
}

fn c8_symmetry() -> Outcome {
    let mut worst_i1: f64 = 0.0;
    let mut worst_phi: f64 = 0.0;
    for ham in Hamiltonian::A3 {
        let annulus = phi_annulus(ham);
        for t in default_t_grid(ham, annulus, 10).unwrap() {
            let o = trace_oval(ham, t, annulus).map_err(|e| e.to_string())?;
            let i1 = integrate_form(&o, Integrand::Sigma(1), Tol::DEFAULT).map_err(|e| e.to_string())?;
            worst_i1 = worst_i1.max(i1.abs());
        }
        for t in default_t_grid(ham, annulus, 3).unwrap() {
            let rep = phi_check(ham, t).map_err(|e| e.to_string())?;
            ensure(rep.passes(1e-10), || format!("{} at {t}: {rep:?}", ham.slug()))?;
            worst_phi = worst_phi
                .max(rep.increment.abs())
                .max(rep.phi_at_a.abs())
                .max(rep.closed_form_at_ends[0].abs())
                .max(rep.closed_form_at_ends[1].abs());
        }
    }
    ensure(worst_i1 < 1e-10, || format!("|I1| up to {worst_i1:.3e}"))?;
    Ok(format!("|I1| <= {worst_i1:.1e}; phi increment and end values <= {worst_phi:.1e}"))
}

fn c9_bounds(examples: &[Example]) -> Outcome {
    let el = Hamiltonian::EightLoop;
    let ext = Annulus::Exterior;
    let pinned = [
        (el, ext, 5, 1, 5),
        (el, ext, 3, 2, 7),
        (Hamiltonian::DoubleHeteroclinic, Annulus::Center, 3, 2, 6),
        (el, ext, 3, 3, 9),
    ];
    for (ham, annulus, n, k, want) in pinned {
        let got = zero_bound(ham, annulus, n, k).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("N({n},{k}) for {} is {got}, expected {want}", ham.slug()))?;
    }
    let mut max_ratio = String::new();
    let mut saturated = 0;
    for ex in examples {
        let grid = default_t_grid(ex.ham, ex.annulus, 2).unwrap();
        let z = count_zeros(&Symbolic::A3(ex.gf.clone()), (grid[0], grid[1]), 160, Some(ex.n))
            .map_err(|e| format!("{} n={} k={}: {e}", ex.ham.slug(), ex.n, ex.gf.k))?;
        if z.saturates() {
            saturated += 1;
        }
        if max_ratio.is_empty() || z.count > 0 {
            max_ratio = format!("{} zeros vs N={}", z.count, z.bound.unwrap_or(0));
        }
    }
    Ok(format!(
        "pinned N values hold; {} examples within bounds (last nonzero count {max_ratio}, {saturated} saturate)",
        examples.len()
    ))
}

fn c10_asymptotics() -> Outcome {
    let fit = fit_star_asymptotics(-1e-2, -1e-4, 12).map_err(|e| e.to_string())?;
    let c0 = (fit.c0 + 6.0).abs() / 6.0;
    let c2 = (fit.c_ln2 + 1.0 / 6.0).abs() * 6.0;
    ensure(c0 < 0.02 && c2 < 0.05, || format!("{fit:?}"))?;
    Ok(format!("constant {:.6} ({:.1e} rel), t ln^2 coefficient {:.6} ({:.1e} rel)", fit.c0, c0, fit.c_ln2, c2))
}

#[test]
fn acceptance() {
    let mut examples = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("D4 golden chain", c1_golden_chain()),
        ("Fuchs equation and exponents", c2_fuchs()),
        ("ODE residual of sampled M3", c3_ode_residual()),
        ("moment recursion", c4_moments()),
        ("commutator pairing", c5_pairing()),
        ("exterior chain structure", c6_structure(&mut examples)),
        ("shooting oracle agreement", c7_oracle()),
        ("exterior symmetry and phi", c8_symmetry()),
        ("zero-count bounds", c9_bounds(&examples)),
        ("I_* asymptotics", c10_asymptotics()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
