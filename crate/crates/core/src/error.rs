use thiserror::Error;

/// Errors raised across the library.
///
/// The variants are grouped by how a batch front end should react to them:
/// invalid input, an exhausted enumeration budget, or a numerical certificate
/// that could not be produced.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("symbol {symbol} is outside the alphabet of size {size}")]
    SymbolOutOfRange { symbol: u8, size: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("word `{0}` is not in the language")]
    NotInLanguage(String),

    #[error("enumeration cap of {cap} words exceeded at length {n}")]
    CapExceeded { cap: usize, n: usize },

    #[error("beta expansion depth {depth} is shorter than the word length {len}; increase the depth")]
    InsufficientDepth { depth: usize, len: usize },

    #[error("operation not supported for this model: {0}")]
    Unsupported(String),

    #[error("could not certify the series tail: {reason} (bracket so far [{lo}, {hi}])")]
    Uncertifiable { reason: String, lo: f64, hi: f64 },

    #[error("no word at distance > beta*m from every target at m = {m}; try a larger m")]
    FarWordNotFound { m: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
