use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    InvalidModulus,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("alpha is only defined for k >= 2 (got {k})")]
    AlphaDomain { k: u64 },
    #[error("penalty mode error: {0}")]
    PenaltyMode(String),
    #[error("penalty table is not scalable: {0}")]
    NotScalable(String),
    #[error("penalty classification mismatch: expected {expected}, got {actual}")]
    WrongPenaltyClass { expected: String, actual: String },
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("arrival times must be nondecreasing")]
    NonMonotoneArrivals,
    #[error("instance is not finalized")]
    UnfinalizedInstance,
    #[error("brute-force optimum limited to m <= {limit} requests (got {m})")]
    BruteForceTooLarge { m: u64, limit: u64 },
    #[error("time regression: cannot advance from {from} to {to}")]
    TimeRegression { from: String, to: String },
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("run stalled with {unmatched} unmatched requests and no pending event")]
    Stalled { unmatched: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("costs must be nonnegative")]
    NegativeCost,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
