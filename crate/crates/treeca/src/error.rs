use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tree degree k={0}: every vertex must have at least 2 neighbors")]
    InvalidDegree(u32),

    #[error("invalid vertex address {addr:?} for k={k}")]
    InvalidAddress { addr: String, k: u32 },

    #[error("invalid alphabet size {0}: need at least one symbol")]
    InvalidAlphabet(u32),

    #[error("symbol {symbol} outside alphabet of size {size}")]
    SymbolOutOfRange { symbol: u8, size: u8 },

    #[error("labeling is not total: missing vertex {0}")]
    PartialLabeling(String),

    #[error("capacity exceeded: {what} needs {required} > cap {cap}")]
    Capacity {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("rule is not quiescent: the all-zero neighborhood maps to a nonzero symbol")]
    NonQuiescent,

    #[error("supports overlap at vertex {0}")]
    SupportOverlap(String),

    #[error("vertex {0} lies outside the automorphism description (depth {1})")]
    OutsideDescription(String, u32),

    #[error("truncation radius {0} too small: need at least {1}")]
    TruncationTooSmall(u32, u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("mismatched parameters: {0}")]
    Mismatch(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed rule file: {0}")]
    RuleFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
