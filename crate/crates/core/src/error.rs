use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Coarse error classes; the CLI maps them onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    MathShape,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("normal form is only defined for the A3 family, not {0}")]
    UnsupportedNormalForm(&'static str),
    #[error("operation requires an A3-family Hamiltonian, got {0}")]
    NotA3(&'static str),
    #[error("annulus {annulus} is not valid for {hamiltonian}")]
    BadAnnulus {
        hamiltonian: &'static str,
        annulus: &'static str,
    },
    #[error("H-pole of order {order} exceeds the cap {cap}")]
    PoleCap { order: u32, cap: u32 },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("M1 or M2 nonzero: {0}")]
    LowerOrderNonzero(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("t0 = {0} is not a singular point of the equation")]
    NotSingular(String),
    #[error("level {t} is outside the interval ({low}, {high}) with the required margin")]
    OutsideSigma { t: f64, low: f64, high: f64 },
    #[error("singular integrand on the oval: {0}")]
    SingularIntegrand(&'static str),
    #[error("no return to the section within {0} steps")]
    NoReturn(usize),
    #[error("quadrature did not converge ({0})")]
    NoConvergence(&'static str),
    #[error("unknown twist or word not in the variation table: {0}")]
    UnknownTwist(String),
    #[error("pairing not well defined: {0}")]
    IllDefinedPairing(&'static str),
    #[error("generating function is identically zero")]
    ZeroFunction,
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::UnsupportedNormalForm(_)
            | Error::NotA3(_)
            | Error::BadAnnulus { .. }
            | Error::Unsupported(_)
            | Error::Degenerate(_)
            | Error::NotSingular(_)
            | Error::OutsideSigma { .. }
            | Error::UnknownTwist(_)
            | Error::IllDefinedPairing(_)
            | Error::ZeroFunction
            | Error::InvalidGrid(_)
            | Error::Parse(_) => ErrorKind::Validation,
            Error::PoleCap { .. } | Error::ShapeViolation(_) | Error::LowerOrderNonzero(_) => {
                ErrorKind::MathShape
            }
            Error::SingularIntegrand(_) | Error::NoReturn(_) | Error::NoConvergence(_) => {
                ErrorKind::Numeric
            }
        }
    }
}
