use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("index {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("gate is not Clifford: {0}")]
    NonClifford(String),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} exceeds configured cap ({value} > {cap})")]
    CapExceeded { what: &'static str, value: usize, cap: usize },

    #[error("term budget exceeded: {live} live terms > cap {cap}")]
    BudgetExceeded { live: usize, cap: usize },

    #[error("noise mixture target is unreachable: {0}")]
    Unreachable(String),

    #[error("unusable target precision: delta {delta} <= delta0 {delta0}")]
    UnusablePrecision { delta: f64, delta0: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            Error::CapExceeded { .. } => 3,
            Error::BudgetExceeded { .. } => 4,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Error::Io(e.into())
        } else {
            Error::Parse(e.to_string())
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                other => Error::Parse(format!("{other:?}")),
            }
        } else {
            Error::Parse(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
