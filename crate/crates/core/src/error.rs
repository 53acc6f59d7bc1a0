use thiserror::Error;

/// Errors raised by the numerical routines and the CLI layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at z = {0}")]
    GammaPole(f64),

    #[error("|Im z| = {0} exceeds the supported range (|Im z| <= 1e4)")]
    Overflow(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("tolerance not achievable: {0}")]
    Tolerance(String),

    #[error("superposition constant alpha is degenerate (|alpha| = {alpha:e} < 1e-12) at eps = {eps}")]
    DegenerateAlpha { eps: f64, alpha: f64 },

    #[error("Milne amplitude collapsed (rho = {rho:e}) at y = {y}")]
    AmplitudeCollapse { y: f64, rho: f64 },

    #[error("abscissa mismatch: {0} != {1}")]
    AbscissaMismatch(f64, f64),

    #[error("line {line}: cannot parse {text:?} as a zero ordinate")]
    Parse { line: usize, text: String },

    #[error("line {line}: ordinate {value} is not greater than the previous one ({previous})")]
    NotIncreasing { line: usize, value: f64, previous: f64 },

    #[error("ordinate {0} must be greater than 1")]
    OrdinateRange(f64),

    #[error("zero table is empty")]
    EmptyTable,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
