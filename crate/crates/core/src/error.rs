use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime in 3..=97")]
    InvalidPrime(u64),

    #[error("grids over different primes ({0} vs {1})")]
    PrimeMismatch(u32, u32),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("p = {p} exceeds the cap of {cap} for {what}")]
    CapExceeded {
        what: &'static str,
        p: u32,
        cap: u32,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("residual after peeling {peeled} direction(s) is nonzero at ({x},{y})")]
    NonzeroResidual { peeled: usize, x: u32, y: u32 },

    #[error("row {row}, column {column}: entry {value} is not a nonnegative integer")]
    InadmissibleRow {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("row {row}: {message}")]
    InvalidPairing { row: usize, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
