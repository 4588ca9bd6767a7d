//! Reproducible command-line jobs over `melnikov-core`: each job is a
//! serialisable [`JobConfig`] whose outputs land in a directory named by a
//! hash of the config.

pub mod cli;
pub mod config;
pub mod emit;
pub mod error;
pub mod run;

pub use config::{Command, JobConfig, TGrid, Tolerances};
pub use error::{CliError, CliResult};
pub use run::{execute, run, Artifact, Outcome};
