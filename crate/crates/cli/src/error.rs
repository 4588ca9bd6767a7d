use melnikov_core::{Error, ErrorKind};
use serde_json::{json, Value};

/// A failed job: the exit code and the JSON document written to stderr.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Validation(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => "validation",
                ErrorKind::MathShape => "math-shape",
                ErrorKind::Numeric => "numeric",
            },
            CliError::Validation(_) => "validation",
            CliError::Io { .. } | CliError::Format(_) => "io",
        }
    }

    /// 2 validation, 3 math-shape violation, 4 numeric failure, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "validation" => 2,
            "math-shape" => 3,
            "numeric" => 4,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let variant = match self {
            CliError::Core(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
            }
            CliError::Validation(_) => "InvalidConfig".into(),
            CliError::Io { .. } => "Io".into(),
            CliError::Format(_) => "Format".into(),
        };
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "variant": variant,
                "message": self.to_string(),
            }
        })
    }
}
