use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("window width b={b} out of range for length n={n} (need 1 <= b <= n)")]
    WidthOutOfRange { b: usize, n: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid word length {0} (need 1 <= n <= 64)")]
    InvalidLength(usize),

    #[error("malformed bitstring {0:?}")]
    MalformedBitstring(String),

    #[error("enumeration cap exceeded: length {len} > cap {cap}")]
    CapExceeded { len: usize, cap: usize },

    #[error("duplicate message {0}")]
    DuplicateMessage(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("permutation search refused for M={0} (cap 10)")]
    PermutationCap(usize),

    #[error("invalid requirement matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid function table: {0}")]
    InvalidTable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("coloring needs {used} colors, construction allows {allowed}")]
    TooManyColors { used: usize, allowed: usize },

    #[error("code has {have} words, coloring needs {need}")]
    CodeTooSmall { have: usize, need: usize },

    #[error("code minimum b-distance {have} < required {need}")]
    CodeDistanceInsufficient { have: usize, need: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors raised by a violated precondition of a construction or
    /// bound (as opposed to malformed input or a resource cap).
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::Hypothesis(_)
                | Error::TooManyColors { .. }
                | Error::CodeTooSmall { .. }
                | Error::CodeDistanceInsufficient { .. }
        )
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::PermutationCap(_))
    }
}
