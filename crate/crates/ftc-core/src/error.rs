use std::io;

/// Errors produced by label construction, queries, and serialization.
///
/// The variants are grouped by *who got it wrong*:
///
/// * [`Parse`](Error::Parse), [`Validation`](Error::Validation),
///   [`Store`](Error::Store), [`Query`](Error::Query), [`Io`](Error::Io) —
///   problems with externally supplied data (graph files, label stores,
///   query arguments).
/// * [`Config`](Error::Config), [`Argument`](Error::Argument) — the caller
///   asked for something unsupported or inconsistent.
/// * [`Internal`](Error::Internal) — an invariant the scheme guarantees was
///   observed to fail; this always indicates a bug or corrupted labels.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A text input could not be parsed. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse {
        /// 1-based line number of the offending input line.
        line: usize,
        /// Description of what was expected.
        message: String,
    },

    /// An input was well-formed but semantically invalid
    /// (self-loop, duplicate edge, disconnected graph, endpoint out of range).
    #[error("invalid input: {0}")]
    Validation(String),

    /// Unsupported or inconsistent build configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An API was called with arguments outside its contract.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A query referenced labels or parameters that do not fit together.
    #[error("invalid query: {0}")]
    Query(String),

    /// A label store was malformed or inconsistent.
    #[error("invalid label store: {0}")]
    Store(String),

    /// An internal invariant failed. Queries within the scheme's guarantee
    /// never return this; seeing it means the labels are corrupt or there is
    /// a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// An underlying I/O operation failed.
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}
