use std::path::{Path, PathBuf};

use melnikov_core::algebra::{Annulus, Hamiltonian, OneForm};
use melnikov_core::numerics::{check_eps_grid, check_level, default_t_grid, DEFAULT_EPS, SIGMA_MARGIN};
use melnikov_core::reduction::DEFAULT_K_MAX;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Everything needed to reproduce a run; the job directory is named by a hash
/// of this document with `output` cleared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus: Option<String>,
    /// Canonical text of the perturbation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<TGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    Decompose {
        #[serde(default)]
        ext: bool,
    },
    Melnikov,
    D4 {
        #[serde(default)]
        paper_example: bool,
    },
    Sample,
    Compare,
    Zeros {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        interval: Option<(f64, f64)>,
    },
    Pair {
        word: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<String>,
        #[serde(default)]
        var_steps: usize,
        #[serde(default)]
        branch: i64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Melnikov => "melnikov",
            Command::D4 { .. } => "d4",
            Command::Sample => "sample",
            Command::Compare => "compare",
            Command::Zeros { .. } => "zeros",
            Command::Pair { .. } => "pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TGrid {
    /// `n` levels spread over the inner 80% of the level interval.
    Default { levels: usize },
    Range { from: f64, to: f64, n: usize },
    List(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub quad_rel: f64,
    pub k_max: u32,
    pub zero_samples: usize,
    /// Perturbation degree for the zero bound; the form's degree by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quad_rel: 1e-12,
            k_max: DEFAULT_K_MAX,
            zero_samples: 160,
            degree: None,
        }
    }
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            hamiltonian: None,
            annulus: None,
            form: None,
            t_grid: None,
            eps_grid: None,
            tolerances: Tolerances::default(),
            output: PathBuf::new(),
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("job file {}: {e}", path.display())))
    }

    /// Pretty JSON with a trailing newline; the `output` root is omitted so
    /// the document is independent of where results are written.
    pub fn to_json(&self) -> String {
        let mut c = self.clone();
        c.output = PathBuf::new();
        let mut v = serde_json::to_value(&c).expect("config serialises");
        v.as_object_mut().expect("config is an object").remove("output");
        let mut s = serde_json::to_string_pretty(&v).expect("value serialises");
        s.push('\n');
        s
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn job_dir(&self) -> PathBuf {
        self.output.join(format!("{}-{}", self.command.name(), &self.hash()[..16]))
    }

    pub fn hamiltonian(&self) -> CliResult<Hamiltonian> {
        if let Command::D4 { .. } = self.command {
            return match self.hamiltonian.as_deref() {
                None | Some("d4-triangle") => Ok(Hamiltonian::D4Triangle),
                Some(h) => Err(CliError::Validation(format!("d4 works on d4-triangle only, not {h}"))),
            };
        }
        let slug = self.hamiltonian.as_deref().ok_or_else(|| CliError::Validation("--ham is required".into()))?;
        Hamiltonian::from_slug(slug).ok_or_else(|| {
            let known: Vec<&str> = Hamiltonian::ALL.iter().map(|h| h.slug()).collect();
            CliError::Validation(format!("unknown Hamiltonian `{slug}` (known: {})", known.join(", ")))
        })
    }

    pub fn annulus(&self, ham: Hamiltonian) -> CliResult<Annulus> {
        let a = match self.annulus.as_deref() {
            Some(s) => Annulus::from_slug(s).ok_or_else(|| CliError::Validation(format!("unknown annulus `{s}`")))?,
            None if ham.annuli().len() == 1 => ham.annuli()[0],
            None => return Err(CliError::Validation(format!("--annulus is required for {}", ham.slug()))),
        };
        ham.check_annulus(a)?;
        Ok(a)
    }

    pub fn form(&self) -> CliResult<OneForm> {
        let src = self.form.as_deref().ok_or_else(|| CliError::Validation("--form or --form-file is required".into()))?;
        Ok(OneForm::parse(src)?)
    }

    pub fn degree(&self, w: &OneForm) -> u32 {
        self.tolerances.degree.unwrap_or_else(|| w.weighted_degree().unwrap_or(0))
    }

    /// The level grid, each point checked to lie inside the level interval.
    pub fn levels(&self, ham: Hamiltonian, annulus: Annulus) -> CliResult<Vec<f64>> {
        let ts = match self.t_grid.as_ref().unwrap_or(&TGrid::Default { levels: 8 }) {
            TGrid::Default { levels } => default_t_grid(ham, annulus, *levels)?,
            TGrid::Range { from, to, n } => {
                if *n < 2 {
                    return Err(CliError::Validation("a t range needs at least two points".into()));
                }
                (0..*n).map(|i| from + (to - from) * i as f64 / (*n - 1) as f64).collect()
            }
            TGrid::List(ts) => ts.clone(),
        };
        if ts.is_empty() {
            return Err(CliError::Validation("the t grid is empty".into()));
        }
        for &t in &ts {
            check_level(ham, annulus, t, SIGMA_MARGIN)?;
        }
        Ok(ts)
    }

    pub fn eps(&self) -> CliResult<Vec<f64>> {
        let eps = self.eps_grid.clone().unwrap_or_else(|| DEFAULT_EPS.to_vec());
        check_eps_grid(&eps)?;
        Ok(eps)
    }
}

/// `a,b,c` as floats.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Validation(format!("bad number `{p}` in `{s}`"))))
        .collect()
}

/// `from:to:n`.
pub fn parse_range(s: &str) -> CliResult<TGrid> {
    let bad = || CliError::Validation(format!("bad range `{s}`, expected from:to:n"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else { return Err(bad()) };
    Ok(TGrid::Range {
        from: a.trim().parse().map_err(|_| bad())?,
        to: b.trim().parse().map_err(|_| bad())?,
        n: n.trim().parse().map_err(|_| bad())?,
    })
}

/// `a:b`.
pub fn parse_interval(s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Validation(format!("bad interval `{s}`, expected a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_hash() {
        let mut c = JobConfig::new(Command::Zeros { interval: Some((0.03, 0.22)) });
        c.hamiltonian = Some("eight-loop".into());
        c.annulus = Some("interior".into());
        c.form = Some("y dx".into());
        c.t_grid = Some(TGrid::List(vec![0.1, 0.2]));
        let back: JobConfig = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let mut moved = c.clone();
        moved.output = PathBuf::from("elsewhere");
        assert_eq!(moved.hash(), c.hash());
        c.tolerances.zero_samples = 161;
        assert_ne!(moved.hash(), c.hash());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_list("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_list("0.1,x").is_err());
        assert_eq!(parse_range("0:1:3").unwrap(), TGrid::Range { from: 0.0, to: 1.0, n: 3 });
        assert!(parse_range("0:1").is_err());
        assert_eq!(parse_interval("-1:2.5").unwrap(), (-1.0, 2.5));
    }

    #[test]
    fn levels_are_validated() {
        let mut c = JobConfig::new(Command::Sample);
        c.hamiltonian = Some("eight-loop".into());
        c.annulus = Some("interior".into());
        let (h, a) = (Hamiltonian::EightLoop, Annulus::InteriorRight);
        assert_eq!(c.levels(h, a).unwrap().len(), 8);
        c.t_grid = Some(TGrid::List(vec![0.1, 0.3]));
        assert!(matches!(c.levels(h, a), Err(CliError::Core(_))));
        c.annulus = None;
        assert!(c.annulus(h).is_err());
        c.hamiltonian = Some("pendulum".into());
        assert!(c.hamiltonian().is_err());
    }
}
