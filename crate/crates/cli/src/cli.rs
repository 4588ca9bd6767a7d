use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use melnikov_core::algebra::OneForm;
use serde_json::json;

use crate::config::{parse_interval, parse_list, parse_range, Command, JobConfig, TGrid};
use crate::error::{CliError, CliResult};
use crate::run::run;

#[derive(Debug, Parser)]
#[command(name = "melnikov", version, about = "Exact higher-order Melnikov functions with numerical cross-checks")]
pub struct Cli {
    /// Root directory for job outputs; each job writes into <out>/<subcommand>-<hash>.
    #[arg(long, global = true, default_value = "melnikov-out")]
    pub out: PathBuf,
    /// Print the job config as JSON and exit without running it.
    #[arg(long, global = true)]
    pub print_job: bool,
    #[command(subcommand)]
    pub cmd: Sub,
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// eight-loop | double-heteroclinic | global-center | d4-triangle
    #[arg(long = "ham")]
    pub ham: Option<String>,
    /// interior | interior-left | exterior | center (the only choice off the eight-loop)
    #[arg(long)]
    pub annulus: Option<String>,
    #[command(flatten)]
    pub form: FormArgs,
    /// Comma-separated levels.
    #[arg(long = "t", conflicts_with_all = ["t_range", "levels"], allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Uniform levels from:to:n.
    #[arg(long, conflicts_with = "levels", allow_hyphen_values = true)]
    pub t_range: Option<String>,
    /// Number of default levels over the inner 80% of the level interval.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Comma-separated geometric eps grid (at least four values in (0, 1e-2]).
    #[arg(long)]
    pub eps: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    pub quad_rel: Option<f64>,
    /// Highest order tried by the chain.
    #[arg(long)]
    pub k_max: Option<u32>,
    /// Sample count for sign-change detection.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Perturbation degree used for the zero bound (default: the form's degree).
    #[arg(long)]
    pub degree: Option<u32>,
}

#[derive(Debug, Args, Default)]
pub struct FormArgs {
    /// Perturbation, e.g. "y^3 dx + 1/2 x y dy".
    #[arg(long, conflicts_with = "form_file")]
    pub form: Option<String>,
    /// File holding the perturbation.
    #[arg(long)]
    pub form_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Split a form into exact, relatively exact and basis parts.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Use the multivalued primitive phi (no I1 term).
        #[arg(long)]
        ext: bool,
    },
    /// Run the chain to the first nonvanishing generating function.
    Melnikov {
        #[command(flatten)]
        common: Common,
    },
    /// Triangle chain, third-order generating function and its Fuchs equation.
    D4 {
        #[command(flatten)]
        form: FormArgs,
        /// Use the worked perturbation 2xy dx + (6x - 2x^2) dy.
        #[arg(long)]
        paper_example: bool,
    },
    /// Quadrature values of the basis integrals (and the form) as CSV.
    Sample {
        #[command(flatten)]
        common: Common,
    },
    /// Symbolic generating function against the return-map oracle.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Sign changes of the generating function and the zero bound.
    Zeros {
        #[command(flatten)]
        common: Common,
        /// Level interval a:b (default: the inner 80% of the level interval).
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
    },
    /// Pair a loop word with the logarithmic form and report its class.
    Pair {
        /// Word in d, g1, g2, g3 (or dl, dr, ds), e.g. "[g1,g2]" or "g1 g2^-1".
        #[arg(long)]
        word: String,
        /// Also iterate a variation operator: d4-l0 | a3-l0 | a3-l1/4.
        #[arg(long)]
        twist: Option<String>,
        /// Number of variation steps.
        #[arg(long, default_value_t = 1)]
        var_steps: usize,
        /// Starting branch of the logarithm at the base point.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        branch: i64,
    },
    /// Re-run a saved job.json.
    Run {
        job: PathBuf,
    },
}

fn read_form(f: &FormArgs) -> CliResult<Option<String>> {
    let src = match (&f.form, &f.form_file) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => std::fs::read_to_string(p).map_err(|e| CliError::io(format!("reading {}", p.display()), e))?,
        (None, None) => return Ok(None),
    };
    // stored canonically so equivalent spellings share a job directory
    Ok(Some(OneForm::parse(src.trim())?.to_text()))
}

fn apply_common(cfg: &mut JobConfig, c: &Common) -> CliResult<()> {
    cfg.hamiltonian = c.ham.clone();
    cfg.annulus = c.annulus.clone();
    cfg.form = read_form(&c.form)?;
    cfg.t_grid = match (&c.t, &c.t_range, c.levels) {
        (Some(t), _, _) => Some(TGrid::List(parse_list(t)?)),
        (_, Some(r), _) => Some(parse_range(r)?),
        (_, _, Some(levels)) => Some(TGrid::Default { levels }),
        _ => None,
    };
    cfg.eps_grid = c.eps.as_deref().map(parse_list).transpose()?;
    let tol = &mut cfg.tolerances;
    tol.quad_rel = c.quad_rel.unwrap_or(tol.quad_rel);
    tol.k_max = c.k_max.unwrap_or(tol.k_max);
    tol.zero_samples = c.samples.unwrap_or(tol.zero_samples);
    tol.degree = c.degree;
    if !(tol.quad_rel > 0.0 && tol.quad_rel < 1.0) {
        return Err(CliError::Validation("--quad-rel must lie in (0, 1)".into()));
    }
    Ok(())
}

pub fn to_config(cli: &Cli) -> CliResult<JobConfig> {
    let mut cfg = match &cli.cmd {
        Sub::Decompose { common, ext } => {
            let mut cfg = JobConfig::new(Command::Decompose { ext: *ext });
            apply_common(&mut cfg, common)?;
            cfg
        }
        Sub::Melnikov { common } | Sub::Sample { common } | Sub::Compare { common } => {
            let cmd = match &cli.cmd {
                Sub::Melnikov { .. } => Command::Melnikov,
                Sub::Sample { .. } => Command::Sample,
                _ => Command::Compare,
            };
            let mut cfg = JobConfig::new(cmd);
            apply_common(&mut cfg, common)?;
            cfg
        }
        Sub::D4 { form, paper_example } => {
            let mut cfg = JobConfig::new(Command::D4 {
                paper_example: *paper_example,
            });
            cfg.hamiltonian = Some("d4-triangle".into());
            cfg.form = read_form(form)?;
            cfg
        }
        Sub::Zeros { common, interval } => {
            let mut cfg = JobConfig::new(Command::Zeros {
                interval: interval.as_deref().map(parse_interval).transpose()?,
            });
            apply_common(&mut cfg, common)?;
            cfg
        }
        Sub::Pair {
            word,
            twist,
            var_steps,
            branch,
        } => JobConfig::new(Command::Pair {
            word: word.clone(),
            twist: twist.clone(),
            var_steps: if twist.is_some() { *var_steps } else { 0 },
            branch: *branch,
        }),
        Sub::Run { job } => JobConfig::load(job)?,
    };
    cfg.output = cli.out.clone();
    Ok(cfg)
}

fn fail(e: &CliError) -> i32 {
    let _ = writeln!(std::io::stderr(), "{}", serde_json::to_string_pretty(&e.to_json()).unwrap_or_default());
    e.exit_code()
}

/// Parses arguments, runs the job and returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let msg = e.kind().to_string();
            let detail = e.render().to_string();
            let v = json!({"error": {"kind": "validation", "exit_code": 2, "variant": "Usage", "message": msg, "detail": detail}});
            let _ = writeln!(std::io::stderr(), "{}", serde_json::to_string_pretty(&v).unwrap_or_default());
            return 2;
        }
    };
    let cfg = match to_config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if cli.print_job {
        print!("{}", cfg.to_json());
        return 0;
    }
    match run(&cfg) {
        Ok((dir, out)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&out.report).unwrap_or_default());
            let _ = writeln!(std::io::stderr(), "job directory: {}", dir.display());
            0
        }
        Err(e) => fail(&e),
    }
}
