use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate table row `{0}`")]
    DuplicateRow(String),
    #[error("incomplete table: {missing} of {total} rows missing (first missing: `{first}`)")]
    IncompleteTable {
        missing: usize,
        total: usize,
        first: String,
    },
    #[error("anticipation {anticipation} is smaller than memory {memory}")]
    InvalidExtents { memory: i64, anticipation: i64 },
    #[error("table too large: {entries} entries exceeds cap {cap}")]
    TableTooLarge { entries: u128, cap: usize },
    #[error("dependency cone of width {width} exceeds cap {cap} before horizon {horizon}")]
    ConeTooWide {
        width: usize,
        cap: usize,
        horizon: u64,
    },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid horizon: {0}")]
    InvalidHorizon(String),
    #[error("malformed interval: lower bound lies above upper bound")]
    MalformedInterval,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("uncertified input: {0}")]
    Uncertified(String),
    #[error("unknown zoo entry `{0}`")]
    UnknownName(String),
    #[error("wrong alphabet: {0}")]
    WrongAlphabet(String),
}

pub type Result<T> = std::result::Result<T, Error>;
