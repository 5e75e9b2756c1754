use thiserror::Error;

/// Errors raised by the symbolic, pressure and spectrum computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transition matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("transition matrix is empty")]
    EmptyMatrix,

    #[error("transition matrix entry ({row}, {col}) is {value}, expected 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: u8 },

    #[error("symbol {symbol} has an empty {kind}")]
    EmptyRowOrColumn { symbol: usize, kind: &'static str },

    #[error("transition matrix is not primitive (no power up to {max_power} is entrywise positive)")]
    NonPrimitive { max_power: usize },

    #[error("word is not admissible: {0}")]
    InvalidWord(String),

    #[error("word of length {len} is shorter than potential depth {depth}")]
    WordTooShort { len: usize, depth: usize },

    #[error("cyclic window {window:?} of the word is not admissible")]
    NotCyclic { window: Vec<usize> },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("resource limit: {requested} words requested, cap is {cap}")]
    ResourceLimit { requested: u128, cap: u64 },

    #[error("eigen-solver did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("alpha = {alpha} lies outside the spectrum domain [{min}, {max}]")]
    AlphaOutOfDomain { alpha: f64, min: f64, max: f64 },

    #[error("root bracket failure: {0}")]
    BracketFailure(String),

    #[error("no sign change: {0}")]
    NoSignChange(String),

    #[error("invalid interval map ({invariant}): {message}")]
    InvalidModel { invariant: &'static str, message: String },

    #[error("brute-force oracle needs at most {max} symbols, got {got}")]
    OracleScaleExceeded { got: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
