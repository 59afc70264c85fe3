use thiserror::Error;

/// Reasons a decryption attempt can fail even with a well-formed key pair.
///
/// These are runtime outcomes, not programming errors: a ciphertext of the
/// wrong length, or noise heavy enough that no decoded candidate passes the
/// integrity check.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecryptFailure {
    #[error("ciphertext length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("no decoded candidate passed the integrity check (candidate metrics: {metrics:?})")]
    CrcExhausted { metrics: Vec<usize> },
}

/// Errors reported by key generation, codec operations, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("matrix is singular")]
    Singular,

    #[error("trellis budget exceeded: memory {memory} needs 2^{memory} states (limit 2^{limit})")]
    StateBudget { memory: usize, limit: usize },

    #[error("could not restore full rank after {0} masking attempts")]
    RankRestoration(usize),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Decrypt(#[from] DecryptFailure),
}

pub type Result<T> = std::result::Result<T, Error>;
