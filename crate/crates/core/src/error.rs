use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("horizon T = {horizon} is shorter than the longest job (p = {p_max})")]
    InfeasibleHorizon { horizon: u64, p_max: u64 },

    #[error("empty time window for job {job}: a = {a} > b = {b}")]
    InfeasibleWindow { job: usize, a: u64, b: u64 },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("cannot map schedule onto model: {0}")]
    Mapping(String),

    #[error("instance too large for exhaustive search: m^n = {m}^{n} exceeds the bound {bound}")]
    SizeGuard { n: usize, m: usize, bound: u64 },

    #[error("external solver: {0}")]
    ExternalSolver(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
