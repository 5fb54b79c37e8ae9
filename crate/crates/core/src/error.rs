use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("window value at position {index} is not finite ({value})")]
    NonFiniteValue { index: usize, value: f64 },
    #[error("window has {len} values, at least 2 are required")]
    WindowTooShort { len: usize },
    #[error("rank {rank} is out of range for order {order} (must be below {limit})")]
    RankOutOfRange { rank: u64, order: usize, limit: u64 },
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("series has {len} points, order {order} needs at least {}", order + 1)]
    SeriesTooShort { len: usize, order: usize },
    #[error("pattern sequence is empty")]
    EmptySequence,
    #[error("pattern sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("pattern orders differ ({left} vs {right})")]
    OrderMismatch { left: usize, right: usize },
    #[error("series are not aligned: {0}")]
    NotAligned(String),
    #[error("delay {delay} leaves {overlap} common points, order {order} needs at least {}", order + 1)]
    DelayTooLarge {
        delay: i64,
        overlap: usize,
        order: usize,
    },
    #[error("increments of {0} have zero variance")]
    ZeroVariance(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("noise correlation {0} is outside [-1, 1]")]
    InvalidRho(f64),
    #[error("cannot inject {k} outliers into a series of length {len}")]
    TooManyOutliers { k: usize, len: usize },
    #[error("order {0} is not supported (maximum is 8)")]
    UnsupportedOrder(usize),
    #[error("duplicate key {0:?}")]
    DuplicateKey(String),
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error("row {row}, column {column:?}: cannot parse {value:?} as a finite decimal")]
    ParseError {
        row: usize,
        column: String,
        value: String,
    },
    #[error("{0}: no data rows")]
    EmptyFile(String),
    #[error("series {a:?} and {b:?} share no keys")]
    NoCommonKeys { a: String, b: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier used in machine-readable CLI error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFiniteValue { .. } => "non-finite-value",
            Error::WindowTooShort { .. } => "window-too-short",
            Error::RankOutOfRange { .. } => "rank-out-of-range",
            Error::InvalidPattern(_) => "invalid-pattern",
            Error::SeriesTooShort { .. } => "series-too-short",
            Error::EmptySequence => "empty-sequence",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::OrderMismatch { .. } => "order-mismatch",
            Error::NotAligned(_) => "not-aligned",
            Error::DelayTooLarge { .. } => "delay-too-large",
            Error::ZeroVariance(_) => "zero-variance",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidRho(_) => "invalid-rho",
            Error::TooManyOutliers { .. } => "too-many-outliers",
            Error::UnsupportedOrder(_) => "unsupported-order",
            Error::DuplicateKey(_) => "duplicate-key",
            Error::MissingColumn(_) => "missing-column",
            Error::ParseError { .. } => "parse-error",
            Error::EmptyFile(_) => "empty-file",
            Error::NoCommonKeys { .. } => "no-common-keys",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
