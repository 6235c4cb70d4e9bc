use thiserror::Error;

/// Errors surfaced by the recovery pipeline and its supporting arithmetic.
#[derive(Debug, Error)]
pub enum Error {
    /// Weights were zero or not pairwise coprime.
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// A quantity left the supported integer range (desk scale is 64-bit).
    #[error("integer overflow: {0}")]
    Overflow(String),

    /// No continued-fraction convergent met the denominator bound and tolerance.
    #[error("no rational approximant: {0}")]
    NoApproximant(String),

    /// Spectral or topological input data is mutually inconsistent.
    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// Several distinct weight triples fit the data. This contradicts the
    /// uniqueness theorem and must abort loudly rather than pick one.
    #[error("ambiguous recovery: {0}")]
    Ambiguous(String),

    /// An argument hit a pole or otherwise left an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two internal computation routes disagreed; this is a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
