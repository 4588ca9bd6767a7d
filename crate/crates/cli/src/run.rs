use std::path::PathBuf;

use melnikov_core::algebra::{Annulus, Hamiltonian, OneForm};
use melnikov_core::monodromy::{
    diagnose, homology_class, pair_on_branch, var_iter, Alphabet, LoopWord, PuncturedModel, Twist,
};
use melnikov_core::numerics::{
    compare, count_zeros, default_t_grid, integrate_form, sample_basis, trace_oval, Integrand, MelnikovSample,
    Symbolic, Tol,
};
use melnikov_core::reduction::{
    check_q_shape, check_theorem_shape, decompose, decompose_ext, francoise_chain, theorem_shape, zero_bound,
};
use melnikov_core::triangle::{d4_chain, d4_fuchs_ode, d4_local_exponents, paper_perturbation, Point};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, JobConfig};
use crate::emit::*;
use crate::error::{CliError, CliResult};

/// A file written into the job directory.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Printed to stdout.
    pub report: Value,
    pub artifacts: Vec<Artifact>,
}

fn json_artifact(name: &str, v: &impl Serialize) -> CliResult<Artifact> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Format(e.to_string()))?;
    s.push('\n');
    Ok(Artifact {
        name: name.into(),
        bytes: s.into_bytes(),
    })
}

fn csv_artifact<R: Serialize>(name: &str, rows: &[R]) -> CliResult<Artifact> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Format(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Format(e.to_string()))?;
    Ok(Artifact { name: name.into(), bytes })
}

/// Runs `f` over the items on scoped worker threads, keeping the order.
fn par_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> melnikov_core::Result<R> + Sync,
) -> melnikov_core::Result<Vec<R>> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).clamp(1, items.len().max(1));
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<melnikov_core::Result<Vec<R>>>()))
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("worker thread panicked")?);
        }
        Ok(out)
    })
}

/// Executes the job and writes `job.json` plus the artifacts into its
/// directory.
pub fn run(cfg: &JobConfig) -> CliResult<(PathBuf, Outcome)> {
    let out = execute(cfg)?;
    let dir = cfg.job_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let write = |name: &str, bytes: &[u8]| {
        let p = dir.join(name);
        std::fs::write(&p, bytes).map_err(|e| CliError::io(format!("writing {}", p.display()), e))
    };
    write("job.json", cfg.to_json().as_bytes())?;
    for a in &out.artifacts {
        write(&a.name, &a.bytes)?;
    }
    Ok((dir, out))
}

pub fn execute(cfg: &JobConfig) -> CliResult<Outcome> {
    match &cfg.command {
        Command::Decompose { ext } => run_decompose(cfg, *ext),
        Command::Melnikov => run_melnikov(cfg),
        Command::D4 { paper_example } => run_d4(cfg, *paper_example),
        Command::Sample => run_sample(cfg),
        Command::Compare => run_compare(cfg),
        Command::Zeros { interval } => run_zeros(cfg, *interval),
        Command::Pair {
            word,
            twist,
            var_steps,
            branch,
        } => run_pair(word, twist.as_deref(), *var_steps, *branch),
    }
}

fn symbolic_outcome(name: &str, v: &impl Serialize) -> CliResult<Outcome> {
    let a = json_artifact(name, v)?;
    let report = serde_json::to_value(v).map_err(|e| CliError::Format(e.to_string()))?;
    Ok(Outcome {
        report,
        artifacts: vec![a],
    })
}

fn run_decompose(cfg: &JobConfig, ext: bool) -> CliResult<Outcome> {
    let ham = cfg.hamiltonian()?;
    let w = cfg.form()?;
    let d: DecompositionJson = if ext {
        (&decompose_ext(&w, ham)?).into()
    } else {
        (&decompose(&w, ham)?).into()
    };
    let v = json!({
        "hamiltonian": ham.slug(),
        "form": w.to_text(),
        "decomposition": d,
    });
    symbolic_outcome("decompose.json", &v)
}

#[derive(Serialize)]
struct ShapeJson {
    checked: bool,
    sharp: bool,
    pole_cap: Option<u32>,
    alpha_degree_cap: Option<u32>,
    gamma_degree_cap: Option<u32>,
}

#[derive(Serialize)]
struct ChainJson {
    hamiltonian: &'static str,
    annulus: &'static str,
    form: String,
    degree: u32,
    k_max: u32,
    k: Option<u32>,
    generating_function: Option<GenFnJson>,
    zero_bound: Option<u32>,
    shape: ShapeJson,
    trace: Vec<StepJson>,
}

fn run_melnikov(cfg: &JobConfig) -> CliResult<Outcome> {
    let ham = cfg.hamiltonian()?;
    let annulus = cfg.annulus(ham)?;
    let w = cfg.form()?;
    let n = cfg.degree(&w);
    let chain = francoise_chain(&w, ham, annulus, cfg.tolerances.k_max)?;
    // the exterior shapes are theorems: a violation is a bug, reported as such
    let mut shape = ShapeJson {
        checked: false,
        sharp: n % 2 == 1,
        pole_cap: None,
        alpha_degree_cap: None,
        gamma_degree_cap: None,
    };
    if ham.uses_phi(annulus) {
        for s in &chain.trace {
            check_q_shape(&s.q, s.k, n)?;
        }
        if let Some(m) = &chain.m {
            check_theorem_shape(m, n, false)?;
            check_theorem_shape(m, n, true)?;
            let (p, da, dg) = theorem_shape(m.k, n, true);
            shape.pole_cap = Some(p);
            shape.alpha_degree_cap = da;
            shape.gamma_degree_cap = dg;
        }
        shape.checked = true;
    }
    let v = ChainJson {
        hamiltonian: ham.slug(),
        annulus: annulus.slug(),
        form: w.to_text(),
        degree: n,
        k_max: cfg.tolerances.k_max,
        k: chain.k(),
        generating_function: chain.m.as_ref().map(Into::into),
        zero_bound: chain.m.as_ref().and_then(|m| zero_bound(ham, annulus, n, m.k).ok()),
        shape,
        trace: chain.trace.iter().map(Into::into).collect(),
    };
    symbolic_outcome("chain.json", &v)
}

fn run_d4(cfg: &JobConfig, paper_example: bool) -> CliResult<Outcome> {
    let w = match (paper_example, &cfg.form) {
        (true, None) => paper_perturbation(),
        (false, Some(_)) => cfg.form()?,
        (true, Some(_)) => return Err(CliError::Validation("--paper-example and --form are exclusive".into())),
        (false, None) => return Err(CliError::Validation("d4 needs --form or --paper-example".into())),
    };
    let chain = d4_chain(&w)?;
    let (ode, exponents) = if chain.m3.is_zero() {
        (None, Vec::new())
    } else {
        let ode = d4_fuchs_ode(&chain.m3)?;
        let mut ex = Vec::new();
        for t0 in &ode.singular_points {
            let e = d4_local_exponents(&ode, &Point::Finite(t0.clone()))?;
            ex.push(ExponentsJson::new(melnikov_core::algebra::fmt_rational(t0), &e));
        }
        ex.push(ExponentsJson::new("infinity".into(), &d4_local_exponents(&ode, &Point::Infinity)?));
        (Some(OdeJson::from(&ode)), ex)
    };
    let v = json!({
        "hamiltonian": Hamiltonian::D4Triangle.slug(),
        "form": w.to_text(),
        "integrable": chain.integrable(),
        "chain": D4ChainJson::from(&chain),
        "ode": ode,
        "exponents": exponents,
    });
    symbolic_outcome("d4.json", &v)
}

#[derive(Serialize)]
struct SampleRow {
    t: f64,
    quantity: &'static str,
    value: f64,
    source: &'static str,
}

fn run_sample(cfg: &JobConfig) -> CliResult<Outcome> {
    let ham = cfg.hamiltonian()?;
    let annulus = cfg.annulus(ham)?;
    let w = cfg.form.as_ref().map(|_| cfg.form()).transpose()?;
    let ts = cfg.levels(ham, annulus)?;
    let tol = Tol::rel(cfg.tolerances.quad_rel);
    let rows: Vec<Vec<SampleRow>> = par_map(&ts, |&t| {
        let b = sample_basis(ham, annulus, &[t], tol)?.remove(0);
        let mut rows: Vec<SampleRow> = (0..3)
            .map(|i| SampleRow {
                t,
                quantity: b.names[i],
                value: b.values[i],
                source: "quadrature",
            })
            .collect();
        if let Some(w) = &w {
            let o = trace_oval(ham, t, annulus)?;
            rows.push(SampleRow {
                t,
                quantity: "form",
                value: integrate_form(&o, Integrand::Form(w), tol)?,
                source: "quadrature",
            });
        }
        Ok(rows)
    })?;
    let rows: Vec<SampleRow> = rows.into_iter().flatten().collect();
    let csv = csv_artifact("sample.csv", &rows)?;
    Ok(Outcome {
        report: json!({
            "hamiltonian": ham.slug(),
            "annulus": annulus.slug(),
            "levels": ts.len(),
            "rows": rows.len(),
            "files": ["sample.csv"],
        }),
        artifacts: vec![csv],
    })
}

/// The first nonvanishing generating function of the configured perturbation.
fn symbolic(cfg: &JobConfig) -> CliResult<(Hamiltonian, Annulus, OneForm, Symbolic)> {
    let ham = cfg.hamiltonian()?;
    let annulus = cfg.annulus(ham)?;
    let w = cfg.form()?;
    let sym = if ham == Hamiltonian::D4Triangle {
        Symbolic::D4(d4_chain(&w)?.m3)
    } else {
        let chain = francoise_chain(&w, ham, annulus, cfg.tolerances.k_max)?;
        Symbolic::A3(chain.m.ok_or(melnikov_core::Error::ZeroFunction)?)
    };
    if sym.is_zero() {
        return Err(melnikov_core::Error::ZeroFunction.into());
    }
    Ok((ham, annulus, w, sym))
}

#[derive(Serialize)]
struct CompareRow {
    t: f64,
    value: f64,
    source: &'static str,
}

#[derive(Serialize)]
struct LevelJson {
    t: f64,
    symbolic: f64,
    shooting: f64,
    rel_err: f64,
    fitted_k: u32,
    slope: f64,
    fit_residual: f64,
    drift: f64,
}

fn run_compare(cfg: &JobConfig) -> CliResult<Outcome> {
    let (ham, annulus, w, sym) = symbolic(cfg)?;
    let ts = cfg.levels(ham, annulus)?;
    let eps = cfg.eps()?;
    let parts: Vec<MelnikovSample> = par_map(&ts, |&t| compare(&sym, &w, &[t], &eps))?;
    let levels: Vec<LevelJson> = parts
        .iter()
        .map(|s| {
            let p = &s.points[0];
            LevelJson {
                t: s.t[0],
                symbolic: s.symbolic[0],
                shooting: s.shooting[0],
                rel_err: (s.symbolic[0] - s.shooting[0]).abs() / s.symbolic[0].abs().max(1e-300),
                fitted_k: p.k,
                slope: p.slope,
                fit_residual: p.residual,
                drift: p.drift,
            }
        })
        .collect();
    let rows: Vec<CompareRow> = parts
        .iter()
        .flat_map(|s| s.rows())
        .map(|(t, value, source)| CompareRow { t, value, source })
        .collect();
    let k_agrees = levels.iter().all(|l| l.fitted_k == sym.k());
    let max_rel = levels.iter().map(|l| l.rel_err).fold(0.0, f64::max);
    let summary = json!({
        "hamiltonian": ham.slug(),
        "annulus": annulus.slug(),
        "form": w.to_text(),
        "k": sym.k(),
        "eps": eps,
        "k_agrees": k_agrees,
        "max_rel_err": max_rel,
        "levels": levels,
        "files": ["compare.csv", "compare.json"],
    });
    Ok(Outcome {
        artifacts: vec![csv_artifact("compare.csv", &rows)?, json_artifact("compare.json", &summary)?],
        report: summary,
    })
}

fn run_zeros(cfg: &JobConfig, interval: Option<(f64, f64)>) -> CliResult<Outcome> {
    let (ham, annulus, w, sym) = symbolic(cfg)?;
    let interval = match interval {
        Some(i) => i,
        None => {
            let g = default_t_grid(ham, annulus, 2)?;
            (g[0], g[1])
        }
    };
    let n = cfg.degree(&w);
    let z = count_zeros(&sym, interval, cfg.tolerances.zero_samples, Some(n).filter(|_| ham.is_a3()))?;
    let v = json!({
        "hamiltonian": ham.slug(),
        "annulus": annulus.slug(),
        "form": w.to_text(),
        "k": sym.k(),
        "degree": n,
        "interval": [interval.0, interval.1],
        "samples": cfg.tolerances.zero_samples,
        "count": z.count,
        "bound": z.bound,
        "saturates": z.saturates(),
        "brackets": z.brackets.iter().map(|(a, b)| [*a, *b]).collect::<Vec<_>>(),
    });
    symbolic_outcome("zeros.json", &v)
}

fn run_pair(word: &str, twist: Option<&str>, steps: usize, branch: i64) -> CliResult<Outcome> {
    let l = LoopWord::parse(word)?;
    let alphabet = l.alphabet();
    let mut v = json!({
        "word": l.to_text(),
        "alphabet": match alphabet {
            Some(Alphabet::Triangle) => "triangle",
            Some(Alphabet::EightLoop) => "eight-loop",
            None => "empty",
        },
        "homology_class": homology_class(&l),
    });
    if alphabet != Some(Alphabet::EightLoop) {
        let model = PuncturedModel::default();
        let d = diagnose(&l, &model)?;
        let value = if d.well_defined() {
            Some(pair_on_branch(&l, &model, branch)?)
        } else {
            None
        };
        v["branch"] = json!(branch);
        v["model"] = json!({
            "punctures": model.punctures.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "base": [model.base.re, model.base.im],
            "radii": model.radii,
        });
        v["diagnosis"] = serde_json::to_value(DiagnosisJson::from(&d)).expect("plain data");
        v["pairing"] = json!(value.map(ComplexJson::from));
        v["pairing_text"] = json!(value.map(|z| format!("{:.10} {:+.10}i", z.re, z.im)));
    }
    if let Some(name) = twist {
        let t: Twist = name.parse()?;
        let chain = if l.is_empty() { Vec::new() } else { var_iter(&l, t, steps.max(1))? };
        v["variation"] = json!({
            "twist": t.name(),
            "provenance": t.provenance(),
            "steps": words(&chain),
        });
    }
    symbolic_outcome("pair.json", &v)
}
